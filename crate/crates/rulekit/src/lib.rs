//! Rule-based classification systems over finite attribute domains:
//! parsing, quality measurement, reducibility testing and reduction.
//!
//! A classification system is a set of conjunctive assignment rules, each
//! concluding one class from elementary conditions of the form "attribute
//! takes a value in V". Because every domain is an explicit finite set,
//! mutual exclusivity of two rules is decided exactly by per-attribute
//! intersection, and coverage of the full description space is decided by
//! enumeration. On top of that algebra this crate provides:
//!
//! - [`model`]: schemas, rules, systems and datasets, with the
//!   overlap/exclusivity/subsumption operations;
//! - [`textio`]: a rule DSL, strict CSV datasets and a versioned JSON
//!   interchange format, all with deterministic serializers;
//! - [`eval`]: predictive accuracy, coverage, conflict pairs, compactness
//!   and exact description-space coverage;
//! - [`reduce`]: single-condition reducibility, the greedy reduction pass
//!   with its audit log, an exhaustive minimal-reduction oracle,
//!   subsumption pruning and reduction verification;
//! - [`fixtures`]: the bundled example systems and datasets.

pub mod error;
pub mod eval;
pub mod fixtures;
pub mod model;
pub mod reduce;
pub mod textio;

pub use error::{Error, Result};
