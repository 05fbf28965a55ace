//! Shared generators and an independent enumeration oracle for the
//! property suites.

// Each suite uses a different subset of these helpers.
#![allow(dead_code)]

use itertools::Itertools;
use proptest::prelude::*;
use rulekit::model::{
    AttrId, Attribute, ClassId, DataObject, Dataset, Rule, RuleSystem, Schema, Value, ValueSet,
};

/// All value-index tuples of the description space, via itertools rather
/// than the crate's own odometer.
pub fn enumerate_descriptions(schema: &Schema) -> Vec<Vec<usize>> {
    schema
        .attributes()
        .iter()
        .map(|attr| 0..attr.domain_size())
        .multi_cartesian_product()
        .collect()
}

/// Membership test independent of the bitset fast path: walks the
/// condition's value indices as a plain list.
pub fn fires(rule: &Rule, values: &[usize]) -> bool {
    rule.conditions().iter().all(|(attr, set)| {
        let members: Vec<usize> = set.iter().collect();
        members.contains(&values[attr.0])
    })
}

/// Classes fired on a description, computed with the independent matcher.
pub fn fired_classes(system: &RuleSystem, values: &[usize]) -> Vec<ClassId> {
    let mut classes: Vec<ClassId> = system
        .rules()
        .iter()
        .filter(|rule| fires(rule, values))
        .map(|rule| rule.class())
        .collect();
    classes.sort();
    classes.dedup();
    classes
}

pub fn arb_schema() -> BoxedStrategy<Schema> {
    let attr = (2..=4usize, any::<bool>(), any::<bool>());
    (
        prop::collection::vec(attr, 1..=4),
        2..=4usize,
    )
        .prop_map(|(attr_specs, n_classes)| {
            let attributes = attr_specs
                .into_iter()
                .enumerate()
                .map(|(idx, (size, int_domain, ordered))| {
                    let domain: Vec<Value> = if int_domain {
                        (0..size as i64).map(Value::Int).collect()
                    } else {
                        (0..size).map(|v| Value::Sym(format!("v{v}"))).collect()
                    };
                    Attribute::new(format!("a{idx}"), domain, ordered)
                })
                .collect();
            let classes = (0..n_classes).map(|c| format!("c{c}")).collect();
            Schema::new(attributes, classes).expect("generated schema is valid")
        })
        .boxed()
}

/// A rule spec: class index plus one optional non-empty value mask per
/// attribute (remapped onto the domain at build time).
type RuleSpec = (usize, Vec<Option<u32>>);

fn build_rule(schema: &Schema, id: String, spec: &RuleSpec) -> Rule {
    let (class_raw, masks) = spec;
    let class = ClassId(class_raw % schema.classes().len());
    let mut conditions = std::collections::BTreeMap::new();
    for (idx, mask) in masks.iter().enumerate() {
        if let Some(raw) = mask {
            let attr = AttrId(idx);
            let size = schema.attribute(attr).domain_size();
            let full = (1u32 << size) - 1;
            let bits = raw % full + 1; // 1..=full, never empty
            let set = ValueSet::from_indices(
                size,
                (0..size).filter(|v| bits & (1 << v) != 0),
            );
            conditions.insert(attr, set);
        }
    }
    if conditions.is_empty() {
        let attr = AttrId(0);
        let size = schema.attribute(attr).domain_size();
        conditions.insert(attr, ValueSet::from_indices(size, [0]));
    }
    Rule::new(schema, id, class, conditions).expect("generated rule is valid")
}

/// A random schema with up to 8 rules over it.
pub fn arb_system() -> BoxedStrategy<RuleSystem> {
    arb_schema()
        .prop_flat_map(|schema| {
            let n_attrs = schema.attribute_count();
            let rule = (0..4usize, prop::collection::vec(prop::option::of(1u32..256), n_attrs));
            (Just(schema), prop::collection::vec(rule, 1..=8))
        })
        .prop_map(|(schema, specs)| {
            let rules = specs
                .iter()
                .enumerate()
                .map(|(idx, spec)| build_rule(&schema, format!("R{}", idx + 1), spec))
                .collect();
            RuleSystem::new(schema, rules).expect("generated system is valid")
        })
        .boxed()
}

/// A system plus a labeled dataset of `rows` random rows over its schema.
pub fn arb_system_with_dataset(rows: usize) -> BoxedStrategy<(RuleSystem, Dataset)> {
    arb_system()
        .prop_flat_map(move |system| {
            let sizes: Vec<usize> = system
                .schema()
                .attributes()
                .iter()
                .map(Attribute::domain_size)
                .collect();
            let n_classes = system.schema().classes().len();
            let row = (
                prop::collection::vec(0..64usize, sizes.len()),
                0..n_classes,
            );
            (Just(system), prop::collection::vec(row, 1..=rows))
        })
        .prop_map(|(system, raw_rows)| {
            let schema = system.schema().clone();
            let rows = raw_rows
                .into_iter()
                .map(|(raw_values, label)| {
                    let values = raw_values
                        .iter()
                        .enumerate()
                        .map(|(idx, raw)| raw % schema.attribute(AttrId(idx)).domain_size())
                        .collect();
                    DataObject::new(&schema, values, ClassId(label)).expect("valid row")
                })
                .collect();
            let dataset = Dataset::new(schema, rows).expect("valid dataset");
            (system, dataset)
        })
        .boxed()
}
