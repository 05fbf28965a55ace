//! Bundled example systems and datasets: the toy camera problem and the
//! qualitative bankruptcy case study (three induced rule systems plus the
//! reduced form of the genetic-algorithm system).
//!
//! The text constants are the canonical fixture files; the accessors
//! return parsed values and panic only if the bundled files are broken,
//! which the test suite rules out.

use crate::model::{Dataset, RuleSystem, Schema};
use crate::textio::{parse_dataset, parse_schema, parse_system, ColumnLayout};

pub const TOY_SCHEMA: &str = include_str!("../fixtures/toy.schema");
pub const TOY_SYSTEM: &str = include_str!("../fixtures/toy.rules");
pub const TOY_SYSTEM_REDUCED: &str = include_str!("../fixtures/toy_reduced.rules");
pub const TOY_DATASET: &str = include_str!("../fixtures/toy.csv");

pub const BANKRUPTCY_SCHEMA: &str = include_str!("../fixtures/bankruptcy.schema");
pub const GA_SYSTEM: &str = include_str!("../fixtures/ga.rules");
pub const IL_SYSTEM: &str = include_str!("../fixtures/il.rules");
pub const NN_SYSTEM: &str = include_str!("../fixtures/nn.rules");
pub const GA_SYSTEM_REDUCED: &str = include_str!("../fixtures/ga_reduced.rules");
pub const BANKRUPTCY_DATASET: &str = include_str!("../fixtures/bankruptcy.csv");

/// (name, schema text, system text) for every bundled rule system.
pub const ALL_SYSTEMS: &[(&str, &str, &str)] = &[
    ("toy", TOY_SCHEMA, TOY_SYSTEM),
    ("toy_reduced", TOY_SCHEMA, TOY_SYSTEM_REDUCED),
    ("ga", BANKRUPTCY_SCHEMA, GA_SYSTEM),
    ("il", BANKRUPTCY_SCHEMA, IL_SYSTEM),
    ("nn", BANKRUPTCY_SCHEMA, NN_SYSTEM),
    ("ga_reduced", BANKRUPTCY_SCHEMA, GA_SYSTEM_REDUCED),
];

pub fn toy_schema() -> Schema {
    parse_schema(TOY_SCHEMA).expect("bundled toy schema").value
}

pub fn toy_system() -> RuleSystem {
    parse_system(TOY_SYSTEM, &toy_schema())
        .expect("bundled toy system")
        .value
}

pub fn toy_system_reduced() -> RuleSystem {
    parse_system(TOY_SYSTEM_REDUCED, &toy_schema())
        .expect("bundled reduced toy system")
        .value
}

pub fn toy_dataset() -> Dataset {
    parse_dataset(TOY_DATASET, &toy_schema(), &ColumnLayout::header())
        .expect("bundled toy dataset")
        .value
}

pub fn bankruptcy_schema() -> Schema {
    parse_schema(BANKRUPTCY_SCHEMA)
        .expect("bundled bankruptcy schema")
        .value
}

pub fn ga_system() -> RuleSystem {
    parse_system(GA_SYSTEM, &bankruptcy_schema())
        .expect("bundled ga system")
        .value
}

pub fn il_system() -> RuleSystem {
    parse_system(IL_SYSTEM, &bankruptcy_schema())
        .expect("bundled il system")
        .value
}

pub fn nn_system() -> RuleSystem {
    parse_system(NN_SYSTEM, &bankruptcy_schema())
        .expect("bundled nn system")
        .value
}

pub fn ga_system_reduced() -> RuleSystem {
    parse_system(GA_SYSTEM_REDUCED, &bankruptcy_schema())
        .expect("bundled reduced ga system")
        .value
}

pub fn bankruptcy_dataset() -> Dataset {
    parse_dataset(
        BANKRUPTCY_DATASET,
        &bankruptcy_schema(),
        &ColumnLayout::header(),
    )
    .expect("bundled bankruptcy dataset")
    .value
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_parses_cleanly() {
        for (name, schema_text, system_text) in ALL_SYSTEMS {
            let schema = parse_schema(schema_text)
                .unwrap_or_else(|e| panic!("schema for {name}: {e}"))
                .value;
            let parsed = parse_system(system_text, &schema)
                .unwrap_or_else(|e| panic!("system {name}: {e}"));
            assert!(
                parsed.warnings.iter().all(|w| !w.is_error()),
                "{name} has error diagnostics"
            );
        }
        assert_eq!(toy_dataset().len(), 5);
        assert_eq!(bankruptcy_dataset().len(), 729);
    }

    #[test]
    fn fixture_rule_counts_match_their_sources() {
        assert_eq!(toy_system().rule_count(), 3);
        assert_eq!(ga_system().rule_count(), 11);
        assert_eq!(il_system().rule_count(), 16);
        assert_eq!(nn_system().rule_count(), 12);
        assert_eq!(ga_system_reduced().rule_count(), 5);
    }
}
