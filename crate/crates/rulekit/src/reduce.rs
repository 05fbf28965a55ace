//! Reducibility testing and reduction of classification systems.
//!
//! A rule is reducible when a strict subset of its elementary conditions is
//! already mutually exclusive with every rule assigning a different class;
//! dropping the other conditions then widens coverage without creating a
//! conflicting assignment. The greedy pass scans rules in declared order and
//! conditions in schema attribute order, re-checking every candidate against
//! the live, partially reduced system, and records an auditable log. A
//! brute-force oracle enumerates all minimal kept-condition sets for
//! cross-checking, and a verification pass proves a claimed reduction sound.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::eval::{
    evaluate_rules, semantic_diff, space_coverage, Fraction, Policy, SemanticDiff,
};
use crate::model::{AttrId, Dataset, Rule, RuleSystem};
use crate::textio::serialize_system_dsl;

/// Which safety net gates a candidate removal beyond mutual exclusivity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Guard {
    /// Exclusivity against the live different-class rules only.
    Rules,
    /// Additionally require that strict accuracy on a dataset not drop.
    Data,
}

/// Accuracy before and after one accepted or rejected removal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GuardCheck {
    pub accuracy_before: Fraction,
    pub accuracy_after: Fraction,
}

/// Why a candidate removal was rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum BlockReason {
    /// Removing the only remaining condition would leave an always-firing rule.
    LastCondition,
    /// The shrunken rule would overlap a different-class rule.
    Overlap { blocking_rule: String },
    /// The data guard saw strict accuracy drop.
    AccuracyDrop { guard: GuardCheck },
}

/// Outcome of considering one (rule, attribute) removal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "decision", rename_all = "snake_case")]
pub enum EventAction {
    Removed {
        #[serde(skip_serializing_if = "Option::is_none")]
        guard: Option<GuardCheck>,
    },
    Blocked {
        #[serde(flatten)]
        reason: BlockReason,
    },
}

/// One entry of the reduction audit trail.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionEvent {
    pub rule_id: String,
    pub attribute: String,
    #[serde(flatten)]
    pub action: EventAction,
}

/// The full audit trail of a reduction run. Replaying the removed events
/// against the original system reproduces the reduced system exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionLog {
    pub events: Vec<ReductionEvent>,
    pub removals: usize,
    pub final_system_hash: String,
}

/// Hex SHA-256 of the canonical DSL serialization, used to pin reduced
/// systems in logs and reports.
pub fn system_hash(system: &RuleSystem) -> String {
    let mut hasher = Sha256::new();
    hasher.update(serialize_system_dsl(system).as_bytes());
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// The Corollary-1 pre-filter: for a cross-class pair, only attributes
/// constrained in both rules can witness exclusivity. An empty result
/// means the pair overlaps no matter which conditions are kept.
pub fn corollary_filter(candidate: &Rule, other: &Rule) -> Result<BTreeSet<AttrId>> {
    if candidate.class() == other.class() {
        return Err(Error::SameClass {
            a: candidate.id().to_string(),
            b: other.id().to_string(),
        });
    }
    Ok(candidate
        .conditions()
        .keys()
        .filter(|attr| other.constrains(**attr))
        .copied()
        .collect())
}

/// Attributes whose single removal keeps the rule mutually exclusive with
/// every different-class rule of the system. Rules with one condition have
/// no removable attributes.
pub fn reducible_conditions(rule: &Rule, system: &RuleSystem) -> BTreeSet<AttrId> {
    let mut out = BTreeSet::new();
    if rule.condition_count() < 2 {
        return out;
    }
    for &attr in rule.conditions().keys() {
        let candidate = match rule.without_condition(attr) {
            Some(candidate) => candidate,
            None => continue,
        };
        let exclusive = system
            .rules()
            .iter()
            .filter(|other| other.class() != rule.class())
            .all(|other| !candidate.overlaps(other, system.schema()));
        if exclusive {
            out.insert(attr);
        }
    }
    out
}

/// Runs the greedy single-condition reduction pass.
///
/// Rules are scanned in declared order and conditions in schema attribute
/// order. A candidate removal is accepted when the shrunken rule is
/// mutually exclusive with every live different-class rule; with
/// `Guard::Data` it must additionally not decrease strict accuracy on the
/// dataset. The last remaining condition of a rule is never removed.
/// Identical inputs always produce identical output and log.
pub fn greedy_reduce(
    system: &RuleSystem,
    guard: Guard,
    dataset: Option<&Dataset>,
) -> Result<(RuleSystem, ReductionLog)> {
    let dataset = match (guard, dataset) {
        (Guard::Data, None) => return Err(Error::GuardRequiresDataset),
        (Guard::Data, Some(ds)) => {
            if system.schema() != ds.schema() {
                return Err(Error::SchemaMismatch(
                    "system and guard dataset use different schemas".to_string(),
                ));
            }
            if ds.is_empty() {
                return Err(Error::EmptyDataset);
            }
            Some(ds)
        }
        (Guard::Rules, _) => None,
    };

    let schema = system.schema();
    let mut rules: Vec<Rule> = system.rules().to_vec();
    let mut events = Vec::new();
    let mut removals = 0usize;
    let mut current_accuracy =
        dataset.map(|ds| evaluate_rules(&rules, ds, Policy::Strict).metrics.accuracy());

    for i in 0..rules.len() {
        let scan: Vec<AttrId> = rules[i].conditions().keys().copied().collect();
        for attr in scan {
            let rule_id = rules[i].id().to_string();
            let attribute = schema.attribute(attr).name().to_string();

            if rules[i].condition_count() == 1 {
                events.push(ReductionEvent {
                    rule_id,
                    attribute,
                    action: EventAction::Blocked {
                        reason: BlockReason::LastCondition,
                    },
                });
                continue;
            }
            let candidate = rules[i]
                .without_condition(attr)
                .expect("constrained attribute of a multi-condition rule");

            let blocking = rules
                .iter()
                .enumerate()
                .find(|(j, other)| {
                    *j != i
                        && other.class() != candidate.class()
                        && candidate.overlaps(other, schema)
                })
                .map(|(_, other)| other.id().to_string());
            if let Some(blocking_rule) = blocking {
                events.push(ReductionEvent {
                    rule_id,
                    attribute,
                    action: EventAction::Blocked {
                        reason: BlockReason::Overlap { blocking_rule },
                    },
                });
                continue;
            }

            let mut guard_check = None;
            if let Some(ds) = dataset {
                let accuracy_before = current_accuracy.expect("guard accuracy initialized");
                let mut trial = rules.clone();
                trial[i] = candidate.clone();
                let accuracy_after = evaluate_rules(&trial, ds, Policy::Strict)
                    .metrics
                    .accuracy();
                let check = GuardCheck {
                    accuracy_before,
                    accuracy_after,
                };
                if accuracy_after < accuracy_before {
                    events.push(ReductionEvent {
                        rule_id,
                        attribute,
                        action: EventAction::Blocked {
                            reason: BlockReason::AccuracyDrop { guard: check },
                        },
                    });
                    continue;
                }
                current_accuracy = Some(accuracy_after);
                guard_check = Some(check);
            }

            rules[i] = candidate;
            removals += 1;
            events.push(ReductionEvent {
                rule_id,
                attribute,
                action: EventAction::Removed { guard: guard_check },
            });
        }
    }

    let reduced = RuleSystem::new(schema.clone(), rules)?;
    let log = ReductionLog {
        events,
        removals,
        final_system_hash: system_hash(&reduced),
    };
    Ok((reduced, log))
}

/// Applies the removed events of a log to a system and checks the result
/// against the log's final hash.
pub fn replay_log(original: &RuleSystem, log: &ReductionLog) -> Result<RuleSystem> {
    let schema = original.schema();
    let mut rules: Vec<Rule> = original.rules().to_vec();
    for event in &log.events {
        if !matches!(event.action, EventAction::Removed { .. }) {
            continue;
        }
        let index = rules
            .iter()
            .position(|r| r.id() == event.rule_id)
            .ok_or_else(|| Error::InvalidLog(format!("no rule with id {}", event.rule_id)))?;
        let attr = schema.attr_id(&event.attribute)?;
        let shrunk = rules[index].without_condition(attr).ok_or_else(|| {
            Error::InvalidLog(format!(
                "cannot remove {} from rule {}",
                event.attribute, event.rule_id
            ))
        })?;
        rules[index] = shrunk;
    }
    let replayed = RuleSystem::new(schema.clone(), rules)?;
    let hash = system_hash(&replayed);
    if hash != log.final_system_hash {
        return Err(Error::InvalidLog(format!(
            "replayed hash {hash} does not match logged hash {}",
            log.final_system_hash
        )));
    }
    Ok(replayed)
}

/// Bounds for the exhaustive minimal-reduction oracle.
#[derive(Debug, Clone, Copy)]
pub struct OracleLimits {
    pub max_conditions: usize,
    pub max_opposing_rules: usize,
}

impl Default for OracleLimits {
    fn default() -> OracleLimits {
        OracleLimits {
            max_conditions: 20,
            max_opposing_rules: 4096,
        }
    }
}

/// Enumerates all subset-minimal non-empty condition sets that keep the
/// rule mutually exclusive with every different-class rule of the system.
///
/// Per attribute, a kept condition defeats an opposing rule iff their
/// value sets are disjoint, so the minimal kept sets are exactly the
/// minimal hitting sets of the per-opponent witness sets. The subset
/// lattice is walked by increasing size, pruned by monotonicity: supersets
/// of an exclusive set are exclusive and therefore not minimal.
///
/// An empty result means no condition subset (not even the full set) is
/// exclusive; the full set itself may be returned when nothing smaller
/// works.
pub fn minimal_reductions_oracle(
    rule: &Rule,
    system: &RuleSystem,
    limits: &OracleLimits,
) -> Result<Vec<BTreeSet<AttrId>>> {
    let attrs: Vec<AttrId> = rule.conditions().keys().copied().collect();
    let n = attrs.len();
    if n > limits.max_conditions {
        return Err(Error::OracleLimit(format!(
            "rule {} has {n} conditions, above the bound of {}",
            rule.id(),
            limits.max_conditions
        )));
    }
    let opposing: Vec<&Rule> = system
        .rules()
        .iter()
        .filter(|other| other.class() != rule.class())
        .collect();
    if opposing.len() > limits.max_opposing_rules {
        return Err(Error::OracleLimit(format!(
            "{} opposing rules, above the bound of {}",
            opposing.len(),
            limits.max_opposing_rules
        )));
    }

    // Witness mask per opponent: bit p set iff keeping conditions[p] alone
    // rules that opponent out.
    let mut witness_masks = Vec::with_capacity(opposing.len());
    for opp in &opposing {
        let mut mask = 0u32;
        for (p, &attr) in attrs.iter().enumerate() {
            if let Some(opp_set) = opp.conditions().get(&attr) {
                if !rule.conditions()[&attr].intersects(opp_set) {
                    mask |= 1 << p;
                }
            }
        }
        if mask == 0 {
            // This opponent overlaps every subset; nothing is exclusive.
            return Ok(Vec::new());
        }
        witness_masks.push(mask);
    }

    let mut subsets: Vec<u32> = (1..(1u32 << n)).collect();
    subsets.sort_by_key(|m| (m.count_ones(), *m));

    let mut minimal: Vec<u32> = Vec::new();
    for mask in subsets {
        if minimal.iter().any(|m| m & mask == *m) {
            continue;
        }
        if witness_masks.iter().all(|w| w & mask != 0) {
            minimal.push(mask);
        }
    }

    Ok(minimal
        .into_iter()
        .map(|mask| {
            attrs
                .iter()
                .enumerate()
                .filter(|(p, _)| mask & (1 << p) != 0)
                .map(|(_, &attr)| attr)
                .collect()
        })
        .collect())
}

/// Drops every rule subsumed by another same-class rule (the earlier rule
/// survives a mutual tie) and exact duplicates. Match behavior on every
/// description is unchanged.
pub fn subsumption_prune(system: &RuleSystem) -> RuleSystem {
    let rules = system.rules();
    let schema = system.schema();
    let mut keep = vec![true; rules.len()];
    for j in 0..rules.len() {
        for i in 0..rules.len() {
            if i == j || rules[i].class() != rules[j].class() {
                continue;
            }
            let forward = rules[i]
                .subsumes(&rules[j], schema)
                .expect("same-class pair");
            if !forward {
                continue;
            }
            let backward = rules[j]
                .subsumes(&rules[i], schema)
                .expect("same-class pair");
            if !backward || i < j {
                keep[j] = false;
                break;
            }
        }
    }
    let kept: Vec<Rule> = rules
        .iter()
        .zip(&keep)
        .filter(|(_, &k)| k)
        .map(|(r, _)| r.clone())
        .collect();
    RuleSystem::new(schema.clone(), kept).expect("pruning preserves validity")
}

/// The first clause a claimed reduction violates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "clause", rename_all = "snake_case")]
pub enum Violation {
    /// (a) A reduced rule's condition map is not a subset of the original's.
    ConditionsNotSubset { rule_id: String, detail: String },
    /// (b) A modified rule overlaps a different-class rule of the reduced system.
    OverlapIntroduced {
        rule_id: String,
        blocking_rule: String,
    },
    /// (c) Coverage decreased on the dataset or the description space.
    CoverageDecreased {
        scope: String,
        before: Fraction,
        after: Fraction,
    },
}

/// Coverage before and after reduction in one scope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverageChange {
    pub before: Fraction,
    pub after: Fraction,
}

/// Outcome of checking a claimed reduction against its original.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub valid: bool,
    pub first_violation: Option<Violation>,
    pub modified_rules: Vec<String>,
    pub removed_rules: Vec<String>,
    pub dataset_coverage: Option<CoverageChange>,
    pub space_coverage: Option<CoverageChange>,
    /// Descriptions whose fired-class set changed; absent when the space
    /// is too large to enumerate.
    pub semantic_diff: Option<SemanticDiff>,
}

/// Bounds for verification's enumeration steps.
#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub space_limit: u64,
    pub max_diff_examples: usize,
}

impl Default for VerifyOptions {
    fn default() -> VerifyOptions {
        VerifyOptions {
            space_limit: 1_000_000,
            max_diff_examples: 10,
        }
    }
}

/// Checks that `reduced` is a sound reduction of `original`:
/// (a) every reduced rule keeps a subset of its original conditions,
/// (b) every modified rule is mutually exclusive with all different-class
///     rules of the reduced system, and
/// (c) coverage did not decrease on the dataset (when given) nor on the
///     description space (when enumerable).
/// The report also carries the semantic diff of fired-class sets.
///
/// Rules are matched by id; an id present only in `reduced` is an error.
pub fn verify_reduction(
    original: &RuleSystem,
    reduced: &RuleSystem,
    dataset: Option<&Dataset>,
    options: &VerifyOptions,
) -> Result<VerificationReport> {
    if original.schema() != reduced.schema() {
        return Err(Error::SchemaMismatch(
            "original and reduced systems use different schemas".to_string(),
        ));
    }
    let originals: HashMap<&str, &Rule> =
        original.rules().iter().map(|r| (r.id(), r)).collect();
    for rule in reduced.rules() {
        if !originals.contains_key(rule.id()) {
            return Err(Error::IdMismatch(format!(
                "rule {} exists only in the reduced system",
                rule.id()
            )));
        }
    }
    let reduced_ids: BTreeSet<&str> = reduced.rules().iter().map(|r| r.id()).collect();
    let removed_rules: Vec<String> = original
        .rules()
        .iter()
        .filter(|r| !reduced_ids.contains(r.id()))
        .map(|r| r.id().to_string())
        .collect();

    let mut first_violation: Option<Violation> = None;
    let mut modified_rules = Vec::new();

    // Clause (a): condition maps shrink, value sets stay identical.
    for rule in reduced.rules() {
        let orig = originals[rule.id()];
        if rule.class() != orig.class() {
            first_violation.get_or_insert(Violation::ConditionsNotSubset {
                rule_id: rule.id().to_string(),
                detail: "class label changed".to_string(),
            });
            continue;
        }
        let mut subset = true;
        for (attr, set) in rule.conditions() {
            match orig.conditions().get(attr) {
                Some(orig_set) if orig_set == set => {}
                Some(_) => {
                    subset = false;
                    first_violation.get_or_insert(Violation::ConditionsNotSubset {
                        rule_id: rule.id().to_string(),
                        detail: format!(
                            "condition on {} differs from the original",
                            original.schema().attribute(*attr).name()
                        ),
                    });
                }
                None => {
                    subset = false;
                    first_violation.get_or_insert(Violation::ConditionsNotSubset {
                        rule_id: rule.id().to_string(),
                        detail: format!(
                            "condition on {} is not present in the original",
                            original.schema().attribute(*attr).name()
                        ),
                    });
                }
            }
        }
        if subset && rule.conditions() != orig.conditions() {
            modified_rules.push(rule.id().to_string());
        }
    }

    // Clause (b): modified rules stay exclusive within the reduced system.
    if first_violation.is_none() {
        'outer: for id in &modified_rules {
            let rule = reduced.rule_by_id(id).expect("modified rule present");
            for other in reduced.rules() {
                if other.class() != rule.class() && rule.overlaps(other, reduced.schema()) {
                    first_violation = Some(Violation::OverlapIntroduced {
                        rule_id: id.clone(),
                        blocking_rule: other.id().to_string(),
                    });
                    break 'outer;
                }
            }
        }
    }

    // Clause (c): coverage monotonicity.
    let dataset_coverage = match dataset {
        Some(ds) => {
            if original.schema() != ds.schema() {
                return Err(Error::SchemaMismatch(
                    "dataset uses a different schema".to_string(),
                ));
            }
            if ds.is_empty() {
                return Err(Error::EmptyDataset);
            }
            let before = evaluate_rules(original.rules(), ds, Policy::Strict)
                .metrics
                .coverage();
            let after = evaluate_rules(reduced.rules(), ds, Policy::Strict)
                .metrics
                .coverage();
            if after < before && first_violation.is_none() {
                first_violation = Some(Violation::CoverageDecreased {
                    scope: "dataset".to_string(),
                    before,
                    after,
                });
            }
            Some(CoverageChange { before, after })
        }
        None => None,
    };

    let enumerable = crate::eval::checked_space_size(original.schema(), options.space_limit);
    let space_cov = match enumerable {
        Ok(_) => {
            let before = space_coverage(original, options.space_limit)?;
            let after = space_coverage(reduced, options.space_limit)?;
            if after < before && first_violation.is_none() {
                first_violation = Some(Violation::CoverageDecreased {
                    scope: "description space".to_string(),
                    before,
                    after,
                });
            }
            Some(CoverageChange { before, after })
        }
        Err(_) => None,
    };

    let diff = match enumerable {
        Ok(_) => Some(semantic_diff(
            original,
            reduced,
            options.space_limit,
            options.max_diff_examples,
        )?),
        Err(_) => None,
    };

    Ok(VerificationReport {
        valid: first_violation.is_none(),
        first_violation,
        modified_rules,
        removed_rules,
        dataset_coverage,
        space_coverage: space_cov,
        semantic_diff: diff,
    })
}

/// Condition sets kept by each rule of `reduced`, keyed by rule id, for
/// oracle-consistency checks.
pub fn kept_conditions(reduced: &RuleSystem) -> BTreeMap<String, BTreeSet<AttrId>> {
    reduced
        .rules()
        .iter()
        .map(|r| {
            (
                r.id().to_string(),
                r.conditions().keys().copied().collect(),
            )
        })
        .collect()
}
