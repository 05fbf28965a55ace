//! Core value types: schemas over finite attribute domains, conjunctive
//! assignment rules, rule systems and labeled datasets, plus the
//! overlap/exclusivity algebra the evaluation and reduction passes build on.
//!
//! Everything here is an immutable value after construction and every
//! operation is a pure function of its inputs.

mod dataset;
mod rule;
mod schema;
mod system;
mod value;

pub use dataset::{DataObject, Dataset};
pub use rule::Rule;
pub use schema::{AttrId, Attribute, ClassId, Schema, DEFAULT_MAX_DOMAIN_SIZE};
pub use system::RuleSystem;
pub use value::{Value, ValueSet};
