use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::model::rule::Rule;
use crate::model::schema::{ClassId, Schema};

/// A classification system: a schema plus an ordered list of assignment
/// rules. Grouping the rules by class label yields the per-class overall
/// rules; a class may have no rules at all, which is legal but reported
/// as a warning.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleSystem {
    schema: Schema,
    rules: Vec<Rule>,
}

impl RuleSystem {
    pub fn new(schema: Schema, rules: Vec<Rule>) -> Result<RuleSystem> {
        let mut seen = HashSet::new();
        for rule in &rules {
            if !seen.insert(rule.id().to_string()) {
                return Err(Error::Invariant(format!(
                    "duplicate rule id: {}",
                    rule.id()
                )));
            }
            if rule.class().0 >= schema.classes().len() {
                return Err(Error::UnknownClass(format!("{}", rule.class().0)));
            }
            for (&attr, set) in rule.conditions() {
                if attr.0 >= schema.attribute_count()
                    || set.universe() != schema.attribute(attr).domain_size()
                {
                    return Err(Error::SchemaMismatch(format!(
                        "rule {} does not fit the schema",
                        rule.id()
                    )));
                }
            }
        }
        Ok(RuleSystem { schema, rules })
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    pub fn rule_by_id(&self, id: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.id() == id)
    }

    /// Assignment-rule count per class, in class declaration order.
    pub fn rules_per_class(&self) -> Vec<(ClassId, usize)> {
        let mut counts = vec![0usize; self.schema.classes().len()];
        for rule in &self.rules {
            counts[rule.class().0] += 1;
        }
        counts
            .into_iter()
            .enumerate()
            .map(|(idx, count)| (ClassId(idx), count))
            .collect()
    }

    /// Human-readable warnings about legal-but-suspicious structure.
    pub fn warnings(&self) -> Vec<String> {
        self.rules_per_class()
            .into_iter()
            .filter(|(_, count)| *count == 0)
            .map(|(class, _)| {
                format!(
                    "class {} has no assignment rules",
                    self.schema.class_name(class)
                )
            })
            .collect()
    }

}
