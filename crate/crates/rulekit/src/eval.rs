//! Quality indicators for classification systems: predictive accuracy and
//! coverage against a labeled dataset, exact description-space coverage by
//! enumeration, cross-class conflict detection, and compactness counts.
//!
//! All counters are exact integers; fractions keep their numerator and
//! denominator so acceptance checks can assert rational equality.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ClassId, Dataset, Rule, RuleSystem};

/// An exact non-negative rational with a decimal rendering.
///
/// Equality is cross-multiplied, so `4/5 == 8/10`; values are kept
/// unreduced to preserve the original counters.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Fraction {
    pub num: u64,
    pub den: u64,
}

impl Fraction {
    pub fn new(num: u64, den: u64) -> Fraction {
        Fraction { num, den }
    }

    /// 0/1, the canonical zero used when a denominator would be 0.
    pub fn zero() -> Fraction {
        Fraction { num: 0, den: 1 }
    }

    pub fn value(&self) -> f64 {
        if self.den == 0 {
            0.0
        } else {
            self.num as f64 / self.den as f64
        }
    }

    pub fn mul(&self, other: &Fraction) -> Fraction {
        let num = self.num as u128 * other.num as u128;
        let den = self.den as u128 * other.den as u128;
        // Counters fit in u64 in practice; saturate rather than wrap.
        Fraction {
            num: u64::try_from(num).unwrap_or(u64::MAX),
            den: u64::try_from(den).unwrap_or(u64::MAX),
        }
    }
}

impl PartialEq for Fraction {
    fn eq(&self, other: &Fraction) -> bool {
        self.num as u128 * other.den as u128 == other.num as u128 * self.den as u128
    }
}

impl Eq for Fraction {}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Fraction) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Fraction) -> std::cmp::Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{} ({:.4})", self.num, self.den, self.value())
    }
}

/// How a covered row's correctness is decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    /// Correct iff covered and every firing rule assigns the row's label.
    Strict,
    /// Correct iff some firing rule assigns the row's label.
    AnyCorrect,
}

/// Outcome category for one dataset row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowVerdict {
    Correct,
    Misclassified,
    Conflict,
    Uncovered,
}

/// Per-row evaluation record: which rules fired and the verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowOutcome {
    pub row: usize,
    pub fired: Vec<String>,
    pub verdict: RowVerdict,
}

/// Aggregated quality indicators over one dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub total_rows: u64,
    pub covered_rows: u64,
    pub correct_rows: u64,
    pub conflict_rows: u64,
    pub rule_count: usize,
    pub condition_count: usize,
    /// Fire count per rule, in rule declaration order.
    pub per_rule_fire_counts: Vec<(String, u64)>,
}

impl Metrics {
    /// Correct rows over all rows; uncovered rows count against accuracy.
    pub fn accuracy(&self) -> Fraction {
        Fraction::new(self.correct_rows, self.total_rows)
    }

    /// Rows matched by at least one rule, over all rows.
    pub fn coverage(&self) -> Fraction {
        Fraction::new(self.covered_rows, self.total_rows)
    }

    /// Correct rows over covered rows (0/1 when nothing is covered).
    pub fn accuracy_on_covered(&self) -> Fraction {
        if self.covered_rows == 0 {
            Fraction::zero()
        } else {
            Fraction::new(self.correct_rows, self.covered_rows)
        }
    }
}

/// Full result of evaluating a system against a dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub policy: Policy,
    pub metrics: Metrics,
    pub rows: Vec<RowOutcome>,
}

/// Evaluates every dataset row against the system.
///
/// Coverage counts rows matched by at least one rule. Under the default
/// `strict` policy a row is correct iff it is covered and every firing
/// rule's class equals the row's label, so a cross-class conflict makes
/// the row incorrect. The result does not depend on rule order.
pub fn evaluate(system: &RuleSystem, dataset: &Dataset, policy: Policy) -> Result<Evaluation> {
    if system.schema() != dataset.schema() {
        return Err(Error::SchemaMismatch(
            "system and dataset use different schemas".to_string(),
        ));
    }
    if dataset.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Ok(evaluate_rules(system.rules(), dataset, policy))
}

/// Core evaluation over a rule slice; callers guarantee schema agreement.
pub(crate) fn evaluate_rules(rules: &[Rule], dataset: &Dataset, policy: Policy) -> Evaluation {
    let mut covered = 0u64;
    let mut correct = 0u64;
    let mut conflicts = 0u64;
    let mut fire_counts = vec![0u64; rules.len()];
    let mut rows = Vec::with_capacity(dataset.len());

    for (row_idx, row) in dataset.rows().iter().enumerate() {
        let mut fired_ids = Vec::new();
        let mut fired_classes: Vec<ClassId> = Vec::new();
        for (ridx, rule) in rules.iter().enumerate() {
            if rule.matches(row) {
                fire_counts[ridx] += 1;
                fired_ids.push(rule.id().to_string());
                if !fired_classes.contains(&rule.class()) {
                    fired_classes.push(rule.class());
                }
            }
        }

        let verdict = if fired_classes.is_empty() {
            RowVerdict::Uncovered
        } else {
            covered += 1;
            let label_fired = fired_classes.contains(&row.label());
            let conflicting = fired_classes.len() > 1;
            if conflicting {
                conflicts += 1;
            }
            match policy {
                Policy::Strict => {
                    if !conflicting && label_fired {
                        RowVerdict::Correct
                    } else if conflicting {
                        RowVerdict::Conflict
                    } else {
                        RowVerdict::Misclassified
                    }
                }
                Policy::AnyCorrect => {
                    if label_fired {
                        RowVerdict::Correct
                    } else if conflicting {
                        RowVerdict::Conflict
                    } else {
                        RowVerdict::Misclassified
                    }
                }
            }
        };
        if verdict == RowVerdict::Correct {
            correct += 1;
        }
        rows.push(RowOutcome {
            row: row_idx,
            fired: fired_ids,
            verdict,
        });
    }

    Evaluation {
        policy,
        metrics: Metrics {
            total_rows: dataset.len() as u64,
            covered_rows: covered,
            correct_rows: correct,
            conflict_rows: conflicts,
            rule_count: rules.len(),
            condition_count: rules.iter().map(Rule::condition_count).sum(),
            per_rule_fire_counts: rules
                .iter()
                .zip(fire_counts)
                .map(|(rule, count)| (rule.id().to_string(), count))
                .collect(),
        },
        rows,
    }
}

/// Fraction of the full description space matched by at least one rule,
/// computed exactly by enumeration.
///
/// Fails when the space holds more than `limit` descriptions.
pub fn space_coverage(system: &RuleSystem, limit: u64) -> Result<Fraction> {
    let size = checked_space_size(system.schema(), limit)?;
    let mut matched = 0u64;
    system.schema().for_each_description(|values| {
        if system.rules().iter().any(|rule| rule.matches_values(values)) {
            matched += 1;
        }
    });
    Ok(Fraction::new(matched, size))
}

pub(crate) fn checked_space_size(schema: &crate::model::Schema, limit: u64) -> Result<u64> {
    let size = schema
        .description_space_size()
        .ok_or(Error::SpaceOverflow)?;
    if size > limit as u128 {
        return Err(Error::SpaceTooLarge {
            size,
            limit,
        });
    }
    Ok(size as u64)
}

/// All unordered pairs of different-class rules that some description
/// satisfies simultaneously, in declaration order. An empty result means
/// the system is conflict-free over the whole description space.
pub fn conflict_pairs(system: &RuleSystem) -> Vec<(String, String)> {
    let rules = system.rules();
    let mut pairs = Vec::new();
    for i in 0..rules.len() {
        for j in (i + 1)..rules.len() {
            if rules[i].class() != rules[j].class()
                && rules[i].overlaps(&rules[j], system.schema())
            {
                pairs.push((rules[i].id().to_string(), rules[j].id().to_string()));
            }
        }
    }
    pairs
}

/// Rule and condition counts, the compactness indicators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Compactness {
    pub rule_count: usize,
    pub condition_count: usize,
    pub mean_conditions_per_rule: f64,
}

pub fn compactness(system: &RuleSystem) -> Compactness {
    let rule_count = system.rule_count();
    let condition_count: usize = system.rules().iter().map(Rule::condition_count).sum();
    Compactness {
        rule_count,
        condition_count,
        mean_conditions_per_rule: if rule_count == 0 {
            0.0
        } else {
            condition_count as f64 / rule_count as f64
        },
    }
}

/// One description on which two systems disagree, with the class sets
/// each system fires on it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffExample {
    pub description: Vec<String>,
    pub classes_a: Vec<String>,
    pub classes_b: Vec<String>,
}

/// Result of comparing the fired-class sets of two systems over the full
/// description space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemanticDiff {
    pub space_size: u64,
    pub changed: u64,
    pub examples: Vec<DiffExample>,
}

impl SemanticDiff {
    pub fn is_equivalent(&self) -> bool {
        self.changed == 0
    }
}

/// Compares the set of classes fired by `a` and by `b` on every
/// description, recording up to `max_examples` disagreements.
pub fn semantic_diff(
    a: &RuleSystem,
    b: &RuleSystem,
    limit: u64,
    max_examples: usize,
) -> Result<SemanticDiff> {
    if a.schema() != b.schema() {
        return Err(Error::SchemaMismatch(
            "systems use different schemas".to_string(),
        ));
    }
    let size = checked_space_size(a.schema(), limit)?;
    let schema = a.schema();
    let mut changed = 0u64;
    let mut examples = Vec::new();
    schema.for_each_description(|values| {
        let classes_a = fired_classes(a, values);
        let classes_b = fired_classes(b, values);
        if classes_a != classes_b {
            changed += 1;
            if examples.len() < max_examples {
                examples.push(DiffExample {
                    description: values
                        .iter()
                        .enumerate()
                        .map(|(idx, &v)| {
                            let attr = schema.attribute(crate::model::AttrId(idx));
                            format!("{}={}", attr.name(), attr.domain()[v])
                        })
                        .collect(),
                    classes_a: classes_a
                        .iter()
                        .map(|&c| schema.class_name(c).to_string())
                        .collect(),
                    classes_b: classes_b
                        .iter()
                        .map(|&c| schema.class_name(c).to_string())
                        .collect(),
                });
            }
        }
    });
    Ok(SemanticDiff {
        space_size: size,
        changed,
        examples,
    })
}

pub(crate) fn fired_classes(system: &RuleSystem, values: &[usize]) -> Vec<ClassId> {
    let mut classes: Vec<ClassId> = Vec::new();
    for rule in system.rules() {
        if rule.matches_values(values) && !classes.contains(&rule.class()) {
            classes.push(rule.class());
        }
    }
    classes.sort();
    classes
}
