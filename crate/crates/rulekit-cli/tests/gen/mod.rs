//! Seeded random-instance generator and the six property checks of the
//! acceptance suite's property criterion. Everything is deterministic:
//! one fixed seed stream, no time or platform dependence.

use std::collections::BTreeSet;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rulekit::eval::{evaluate, Policy};
use rulekit::model::{
    AttrId, Attribute, ClassId, DataObject, Dataset, Rule, RuleSystem, Schema, Value, ValueSet,
};
use rulekit::reduce::{
    greedy_reduce, minimal_reductions_oracle, EventAction, Guard, OracleLimits,
};
use rulekit::textio::{parse_schema, parse_system, serialize_system, Format};

pub struct SuiteStats {
    pub instances: usize,
    pub overlap_pairs: usize,
    pub reductions: usize,
    pub kept_sets: usize,
    pub guard_checks: usize,
    pub round_trips: usize,
}

fn random_schema(rng: &mut ChaCha8Rng) -> Schema {
    let n_attrs = rng.gen_range(1..=4);
    let attributes = (0..n_attrs)
        .map(|idx| {
            let size = rng.gen_range(2..=4);
            let ordered = rng.gen_bool(0.5);
            let domain: Vec<Value> = if rng.gen_bool(0.5) {
                (0..size as i64).map(Value::Int).collect()
            } else {
                (0..size).map(|v| Value::Sym(format!("v{v}"))).collect()
            };
            Attribute::new(format!("a{idx}"), domain, ordered)
        })
        .collect();
    let n_classes = rng.gen_range(2..=4);
    let classes = (0..n_classes).map(|c| format!("c{c}")).collect();
    Schema::new(attributes, classes).expect("generated schema is valid")
}

fn random_rule(rng: &mut ChaCha8Rng, schema: &Schema, id: String) -> Rule {
    let n_attrs = schema.attribute_count();
    let n_conds = rng.gen_range(1..=n_attrs.min(4));
    let mut attrs: Vec<usize> = (0..n_attrs).collect();
    for i in (1..attrs.len()).rev() {
        attrs.swap(i, rng.gen_range(0..=i));
    }
    let mut conditions = std::collections::BTreeMap::new();
    for &attr_idx in attrs.iter().take(n_conds) {
        let attr = AttrId(attr_idx);
        let size = schema.attribute(attr).domain_size();
        let full = (1u32 << size) - 1;
        let mask = rng.gen_range(1..=full);
        conditions.insert(
            attr,
            ValueSet::from_indices(size, (0..size).filter(|v| mask & (1 << v) != 0)),
        );
    }
    let class = ClassId(rng.gen_range(0..schema.classes().len()));
    Rule::new(schema, id, class, conditions).expect("generated rule is valid")
}

fn random_instance(rng: &mut ChaCha8Rng) -> (RuleSystem, Dataset) {
    let schema = random_schema(rng);
    let n_rules = rng.gen_range(1..=8);
    let rules = (0..n_rules)
        .map(|idx| random_rule(rng, &schema, format!("R{}", idx + 1)))
        .collect();
    let system = RuleSystem::new(schema.clone(), rules).expect("generated system is valid");

    let rows = (0..50)
        .map(|_| {
            let values = (0..schema.attribute_count())
                .map(|idx| rng.gen_range(0..schema.attribute(AttrId(idx)).domain_size()))
                .collect();
            let label = ClassId(rng.gen_range(0..schema.classes().len()));
            DataObject::new(&schema, values, label).expect("generated row is valid")
        })
        .collect();
    let dataset = Dataset::new(schema, rows).expect("generated dataset is valid");
    (system, dataset)
}

/// Per-rule condition lists for the test-side matcher.
struct FlatRule {
    class: ClassId,
    conds: Vec<(usize, Vec<usize>)>,
}

impl FlatRule {
    fn of(rule: &Rule) -> FlatRule {
        FlatRule {
            class: rule.class(),
            conds: rule
                .conditions()
                .iter()
                .map(|(attr, set)| (attr.0, set.iter().collect()))
                .collect(),
        }
    }

    fn fires(&self, values: &[usize]) -> bool {
        self.conds
            .iter()
            .all(|(attr, members)| members.contains(&values[*attr]))
    }
}

fn descriptions(schema: &Schema) -> Vec<Vec<usize>> {
    schema
        .attributes()
        .iter()
        .map(|attr| 0..attr.domain_size())
        .multi_cartesian_product()
        .collect()
}

/// Runs the six checks on `instances` seeded random instances; panics on
/// the first violation.
pub fn run_property_suite(instances: usize) -> SuiteStats {
    let mut rng = ChaCha8Rng::seed_from_u64(0x52554C45);
    let mut stats = SuiteStats {
        instances,
        overlap_pairs: 0,
        reductions: 0,
        kept_sets: 0,
        guard_checks: 0,
        round_trips: 0,
    };

    for instance in 0..instances {
        let (system, dataset) = random_instance(&mut rng);
        let schema = system.schema();
        let space = descriptions(schema);
        let flat: Vec<FlatRule> = system.rules().iter().map(FlatRule::of).collect();

        // (a) overlaps() agrees with full-space enumeration on every pair.
        for (i, a) in system.rules().iter().enumerate() {
            for (j, b) in system.rules().iter().enumerate() {
                let brute = space
                    .iter()
                    .any(|values| flat[i].fires(values) && flat[j].fires(values));
                assert_eq!(
                    a.overlaps(b, schema),
                    brute,
                    "instance {instance}: overlap mismatch on pair ({i}, {j})"
                );
                stats.overlap_pairs += 1;
            }
        }

        // (b) after reduction, modified rules are exclusive with every
        // different-class rule and conflicting pairs only shrink.
        let (reduced, _) = greedy_reduce(&system, Guard::Rules, None)
            .unwrap_or_else(|e| panic!("instance {instance}: reduce failed: {e}"));
        let flat_reduced: Vec<FlatRule> = reduced.rules().iter().map(FlatRule::of).collect();
        for (idx, rule) in reduced.rules().iter().enumerate() {
            if rule.conditions() == system.rules()[idx].conditions() {
                continue;
            }
            for (jdx, other) in reduced.rules().iter().enumerate() {
                if other.class() == rule.class() {
                    continue;
                }
                assert!(
                    !space
                        .iter()
                        .any(|values| flat_reduced[idx].fires(values)
                            && flat_reduced[jdx].fires(values)),
                    "instance {instance}: modified rule {} overlaps {}",
                    rule.id(),
                    other.id()
                );
            }
        }
        let conflicting = |rules: &[FlatRule]| -> BTreeSet<(usize, usize)> {
            let mut pairs = BTreeSet::new();
            for i in 0..rules.len() {
                for j in (i + 1)..rules.len() {
                    if rules[i].class != rules[j].class
                        && space
                            .iter()
                            .any(|values| rules[i].fires(values) && rules[j].fires(values))
                    {
                        pairs.insert((i, j));
                    }
                }
            }
            pairs
        };
        assert!(
            conflicting(&flat_reduced).is_subset(&conflicting(&flat)),
            "instance {instance}: reduction introduced a conflicting pair"
        );
        stats.reductions += 1;

        // (c) coverage is monotone on the dataset and on the full space.
        let cov_before = evaluate(&system, &dataset, Policy::Strict)
            .unwrap()
            .metrics
            .coverage();
        let cov_after = evaluate(&reduced, &dataset, Policy::Strict)
            .unwrap()
            .metrics
            .coverage();
        assert!(
            cov_after >= cov_before,
            "instance {instance}: dataset coverage dropped"
        );
        let space_covered = |rules: &[FlatRule]| {
            space
                .iter()
                .filter(|values| rules.iter().any(|r| r.fires(values)))
                .count()
        };
        assert!(
            space_covered(&flat_reduced) >= space_covered(&flat),
            "instance {instance}: space coverage dropped"
        );

        // (d) every kept set of a modified rule refines an oracle set.
        for (idx, rule) in reduced.rules().iter().enumerate() {
            let original = &system.rules()[idx];
            if rule.conditions() == original.conditions() {
                continue;
            }
            let oracle =
                minimal_reductions_oracle(original, &system, &OracleLimits::default()).unwrap();
            let kept: BTreeSet<AttrId> = rule.conditions().keys().copied().collect();
            assert!(
                oracle.iter().any(|minimal| minimal.is_subset(&kept)),
                "instance {instance}: kept set of {} refines no oracle set",
                rule.id()
            );
            stats.kept_sets += 1;
        }

        // (e) the data guard never lets strict accuracy decrease.
        let acc_before = evaluate(&system, &dataset, Policy::Strict)
            .unwrap()
            .metrics
            .accuracy();
        let (guarded, log) = greedy_reduce(&system, Guard::Data, Some(&dataset)).unwrap();
        let acc_after = evaluate(&guarded, &dataset, Policy::Strict)
            .unwrap()
            .metrics
            .accuracy();
        assert!(
            acc_after >= acc_before,
            "instance {instance}: guarded run decreased accuracy"
        );
        for event in &log.events {
            if let EventAction::Removed { guard: Some(check) } = &event.action {
                assert!(
                    check.accuracy_after >= check.accuracy_before,
                    "instance {instance}: guard accepted an accuracy drop"
                );
                stats.guard_checks += 1;
            }
        }

        // (f) parse(serialize(x)) == x.
        let text = serialize_system(&system, Format::Dsl);
        let schema_back = parse_schema(&text).unwrap().value;
        let back = parse_system(&text, &schema_back).unwrap().value;
        assert_eq!(back, system, "instance {instance}: round trip changed the system");
        stats.round_trips += 1;
    }

    stats
}
