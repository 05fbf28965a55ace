use std::borrow::Cow;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::dataset::DataObject;
use crate::model::schema::{AttrId, ClassId, Schema};
use crate::model::value::{Value, ValueSet};

/// One assignment rule: a conjunction of elementary conditions concluding
/// a single class.
///
/// Each elementary condition restricts one attribute to a non-empty subset
/// of its domain. Attributes absent from the map are unconstrained, which
/// is equivalent to allowing the full domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    id: String,
    class: ClassId,
    conditions: BTreeMap<AttrId, ValueSet>,
}

impl Rule {
    /// Builds a validated rule. `conditions` maps attributes to value sets;
    /// every set must be a non-empty subset of the attribute's domain and
    /// the map must constrain at least one attribute.
    pub fn new(
        schema: &Schema,
        id: impl Into<String>,
        class: ClassId,
        conditions: BTreeMap<AttrId, ValueSet>,
    ) -> Result<Rule> {
        let id = id.into();
        if !crate::model::schema::is_identifier(&id) {
            return Err(Error::Invariant(format!(
                "rule id '{id}' is not an identifier"
            )));
        }
        if class.0 >= schema.classes().len() {
            return Err(Error::UnknownClass(format!("{}", class.0)));
        }
        if conditions.is_empty() {
            return Err(Error::Invariant(format!(
                "rule {id} has no conditions; an always-firing rule is not allowed"
            )));
        }
        for (&attr, set) in &conditions {
            if attr.0 >= schema.attribute_count() {
                return Err(Error::UnknownAttribute(format!("{attr}")));
            }
            let domain_size = schema.attribute(attr).domain_size();
            if set.universe() != domain_size {
                return Err(Error::SchemaMismatch(format!(
                    "rule {id}: value set for {} sized for {} values, domain has {}",
                    schema.attribute(attr).name(),
                    set.universe(),
                    domain_size
                )));
            }
            if set.is_empty() {
                return Err(Error::Invariant(format!(
                    "rule {id}: empty value set for attribute {}",
                    schema.attribute(attr).name()
                )));
            }
        }
        Ok(Rule {
            id,
            class,
            conditions,
        })
    }

    /// Convenience constructor from names and value tokens, mainly for
    /// tests and programmatic callers.
    pub fn from_named(
        schema: &Schema,
        id: impl Into<String>,
        class_name: &str,
        conditions: &[(&str, &[&str])],
    ) -> Result<Rule> {
        let class = schema.class_id(class_name)?;
        let mut map = BTreeMap::new();
        for (attr_name, tokens) in conditions {
            let attr = schema.attr_id(attr_name)?;
            let universe = schema.attribute(attr).domain_size();
            let mut set = ValueSet::empty(universe);
            for token in *tokens {
                set.insert(schema.value_index(attr, &Value::parse_token(token))?);
            }
            if map.insert(attr, set).is_some() {
                return Err(Error::Invariant(format!(
                    "attribute {attr_name} constrained twice in one rule"
                )));
            }
        }
        Rule::new(schema, id, class, map)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn class(&self) -> ClassId {
        self.class
    }

    /// Conditions in schema attribute order.
    pub fn conditions(&self) -> &BTreeMap<AttrId, ValueSet> {
        &self.conditions
    }

    pub fn condition_count(&self) -> usize {
        self.conditions.len()
    }

    pub fn constrains(&self, attr: AttrId) -> bool {
        self.conditions.contains_key(&attr)
    }

    /// The set of values the rule admits for `attr`: the declared condition
    /// if one exists, otherwise the attribute's full domain.
    pub fn effective_constraint<'a>(
        &'a self,
        attr: AttrId,
        schema: &Schema,
    ) -> Result<Cow<'a, ValueSet>> {
        if attr.0 >= schema.attribute_count() {
            return Err(Error::UnknownAttribute(format!("{attr}")));
        }
        Ok(match self.conditions.get(&attr) {
            Some(set) => Cow::Borrowed(set),
            None => Cow::Owned(ValueSet::full(schema.attribute(attr).domain_size())),
        })
    }

    /// True iff the object satisfies every elementary condition.
    ///
    /// The rule and object must be validated against the same schema;
    /// system-level entry points enforce that once per call.
    pub fn matches(&self, object: &DataObject) -> bool {
        self.conditions
            .iter()
            .all(|(attr, set)| set.contains(object.value_index(*attr)))
    }

    /// True iff the object's value indices satisfy every condition.
    pub fn matches_values(&self, values: &[usize]) -> bool {
        self.conditions
            .iter()
            .all(|(attr, set)| set.contains(values[attr.0]))
    }

    /// True iff some description satisfies both rules: for every attribute
    /// the effective constraints intersect. Two rules are mutually
    /// exclusive exactly when this is false.
    ///
    /// Unconstrained attributes admit the full domain and value sets are
    /// never empty, so only attributes constrained in both rules can
    /// produce an empty intersection.
    pub fn overlaps(&self, other: &Rule, _schema: &Schema) -> bool {
        for (attr, set) in &self.conditions {
            if let Some(other_set) = other.conditions.get(attr) {
                if !set.intersects(other_set) {
                    return false;
                }
            }
        }
        true
    }

    /// True iff `self` admits every description `other` admits, attribute
    /// by attribute. Requires the two rules to share a class label.
    pub fn subsumes(&self, other: &Rule, schema: &Schema) -> Result<bool> {
        if self.class != other.class {
            return Err(Error::ClassMismatch {
                a: self.id.clone(),
                b: other.id.clone(),
            });
        }
        for (attr, set) in &self.conditions {
            let other_set = other.effective_constraint(*attr, schema)?;
            if !other_set.is_subset_of(set) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// A copy with the condition on `attr` dropped. Returns `None` when the
    /// attribute is unconstrained or when dropping it would leave the rule
    /// without conditions.
    pub fn without_condition(&self, attr: AttrId) -> Option<Rule> {
        if !self.conditions.contains_key(&attr) || self.conditions.len() == 1 {
            return None;
        }
        let mut conditions = self.conditions.clone();
        conditions.remove(&attr);
        Some(Rule {
            id: self.id.clone(),
            class: self.class,
            conditions,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::schema::Attribute;

    fn toy_schema() -> Schema {
        Schema::new(
            vec![
                Attribute::new("P", (1..=20).map(Value::Int).collect(), true),
                Attribute::new("W", vec!["LE3".into(), "GE4".into()], false),
            ],
            vec!["NotCar".to_string(), "Car".to_string()],
        )
        .unwrap()
    }

    // P values 1..=20 live at indices 0..=19, so "P in {lo..hi}" is indices lo-1..hi-1.
    fn p_range(lo: usize, hi: usize) -> ValueSet {
        ValueSet::from_indices(20, (lo - 1)..hi)
    }

    fn rule_with(
        schema: &Schema,
        id: &str,
        class: &str,
        conds: Vec<(AttrId, ValueSet)>,
    ) -> Rule {
        Rule::new(
            schema,
            id,
            schema.class_id(class).unwrap(),
            conds.into_iter().collect(),
        )
        .unwrap()
    }

    fn toy_rules(schema: &Schema) -> (Rule, Rule, Rule) {
        let p = schema.attr_id("P").unwrap();
        let w = schema.attr_id("W").unwrap();
        let r11 = rule_with(
            schema,
            "R1_1",
            "NotCar",
            vec![(p, p_range(2, 20)), (w, ValueSet::from_indices(2, [0]))],
        );
        let r12 = rule_with(
            schema,
            "R1_2",
            "NotCar",
            vec![(p, p_range(11, 20)), (w, ValueSet::from_indices(2, [1]))],
        );
        let r21 = Rule::from_named(schema, "R2_1", "Car", &[("P", &["2"]), ("W", &["GE4"])]).unwrap();
        (r11, r12, r21)
    }

    #[test]
    fn effective_constraint_defaults_to_full_domain() {
        let schema = toy_schema();
        let rule = Rule::from_named(&schema, "R", "NotCar", &[("W", &["LE3"])]).unwrap();
        let p = schema.attr_id("P").unwrap();
        let w = schema.attr_id("W").unwrap();
        assert!(rule.effective_constraint(p, &schema).unwrap().is_full());
        assert_eq!(rule.effective_constraint(w, &schema).unwrap().len(), 1);
        assert!(rule.effective_constraint(AttrId(9), &schema).is_err());
    }

    #[test]
    fn matches_follows_conditions() {
        let schema = toy_schema();
        let (r11, _, _) = toy_rules(&schema);
        let obj1 = schema.object(&["2", "LE3"], "NotCar").unwrap();
        let obj5 = schema.object(&["1", "LE3"], "NotCar").unwrap();
        assert!(r11.matches(&obj1));
        assert!(!r11.matches(&obj5));

        let single = Rule::from_named(&schema, "S", "NotCar", &[("W", &["LE3"])]).unwrap();
        let obj = schema.object(&["7", "LE3"], "NotCar").unwrap();
        assert!(single.matches(&obj));
    }

    #[test]
    fn overlap_examples() {
        let schema = toy_schema();
        let (r11, _, r21) = toy_rules(&schema);
        let w_only = Rule::from_named(&schema, "W1", "NotCar", &[("W", &["LE3"])]).unwrap();
        assert!(!w_only.overlaps(&r21, &schema));

        let p = schema.attr_id("P").unwrap();
        let p_wide = rule_with(&schema, "P1", "NotCar", vec![(p, p_range(2, 20))]);
        assert!(p_wide.overlaps(&r21, &schema));

        assert!(r11.overlaps(&r11, &schema));
    }

    #[test]
    fn subsumption_examples() {
        let schema = Schema::new(
            vec![
                Attribute::new("FF", vec!["N".into(), "A".into(), "P".into()], false),
                Attribute::new("CO", vec!["N".into(), "A".into(), "P".into()], false),
            ],
            vec!["B".to_string(), "NB".to_string()],
        )
        .unwrap();
        let broad = Rule::from_named(&schema, "a", "NB", &[("CO", &["P"])]).unwrap();
        let narrow =
            Rule::from_named(&schema, "b", "NB", &[("FF", &["P"]), ("CO", &["P"])]).unwrap();
        assert!(broad.subsumes(&narrow, &schema).unwrap());
        assert!(!narrow.subsumes(&broad, &schema).unwrap());
        assert!(broad.subsumes(&broad, &schema).unwrap());

        let wider_co = Rule::from_named(&schema, "c", "NB", &[("CO", &["A", "P"])]).unwrap();
        assert!(!broad.subsumes(&wider_co, &schema).unwrap());

        let other_class = Rule::from_named(&schema, "d", "B", &[("CO", &["P"])]).unwrap();
        assert!(broad.subsumes(&other_class, &schema).is_err());
    }

    #[test]
    fn rejects_invalid_rules() {
        let schema = toy_schema();
        assert!(Rule::from_named(&schema, "R", "NotCar", &[]).is_err());
        assert!(Rule::from_named(&schema, "R", "Nope", &[("W", &["LE3"])]).is_err());
        assert!(Rule::from_named(&schema, "R", "NotCar", &[("Z", &["LE3"])]).is_err());
        assert!(Rule::from_named(&schema, "R", "NotCar", &[("W", &["XX"])]).is_err());
    }

    #[test]
    fn without_condition_respects_last_condition() {
        let schema = toy_schema();
        let (r11, _, _) = toy_rules(&schema);
        let p = schema.attr_id("P").unwrap();
        let w = schema.attr_id("W").unwrap();
        let dropped = r11.without_condition(p).unwrap();
        assert_eq!(dropped.condition_count(), 1);
        assert!(dropped.without_condition(w).is_none());
        assert!(dropped.without_condition(p).is_none());
    }
}
