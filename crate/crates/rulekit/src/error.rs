use thiserror::Error;

use crate::textio::ParseDiagnostic;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by model construction, evaluation and reduction.
///
/// Syntax errors carry the full diagnostic list so callers can report
/// line/column positions; everything else is a semantic failure of an
/// otherwise well-formed input.
#[derive(Debug, Error)]
pub enum Error {
    /// The input text could not be parsed at all.
    #[error("{}", format_diagnostics(.0))]
    Syntax(Vec<ParseDiagnostic>),

    /// A structural invariant of a schema, rule, system or dataset is violated.
    #[error("invariant violation: {0}")]
    Invariant(String),

    /// Two values that must share a schema do not.
    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),

    /// An attribute name or id that the schema does not define.
    #[error("unknown attribute: {0}")]
    UnknownAttribute(String),

    /// A class label that the schema does not define.
    #[error("unknown class: {0}")]
    UnknownClass(String),

    /// A value outside the attribute's declared domain.
    #[error("unknown value {value} for attribute {attribute}")]
    UnknownValue { attribute: String, value: String },

    /// Operation requires two rules with the same class label.
    #[error("rules {a} and {b} assign different classes")]
    ClassMismatch { a: String, b: String },

    /// Operation requires two rules with different class labels.
    #[error("rules {a} and {b} assign the same class")]
    SameClass { a: String, b: String },

    /// The description space is too large to enumerate under the given limit.
    #[error("description space holds {size} descriptions, above the limit of {limit}")]
    SpaceTooLarge { size: u128, limit: u64 },

    /// The description space size overflows a 128-bit count.
    #[error("description space size overflows the supported range")]
    SpaceOverflow,

    /// Evaluation over an empty dataset is undefined.
    #[error("dataset has no rows")]
    EmptyDataset,

    /// Oracle input exceeds its configured limits.
    #[error("oracle limit exceeded: {0}")]
    OracleLimit(String),

    /// The data guard was requested without a dataset.
    #[error("guard=data requires a dataset")]
    GuardRequiresDataset,

    /// Two systems that should share rule ids do not.
    #[error("rule id mismatch: {0}")]
    IdMismatch(String),

    /// A reduction log does not apply to the given system.
    #[error("reduction log does not apply: {0}")]
    InvalidLog(String),
}

fn format_diagnostics(diags: &[ParseDiagnostic]) -> String {
    let errors: Vec<String> = diags
        .iter()
        .filter(|d| d.is_error())
        .map(|d| d.to_string())
        .collect();
    if errors.is_empty() {
        "parse failed".to_string()
    } else {
        errors.join("\n")
    }
}
