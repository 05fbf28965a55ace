//! Text formats: the rule DSL and CSV datasets on the human side, a
//! versioned JSON interchange document on the machine side.
//!
//! Parsing reports positioned diagnostics. Errors prevent construction of
//! a value; warnings ride along with it. All serializers are
//! deterministic: the same value always yields the same bytes, and
//! parsing a serialized value reproduces it structurally.

mod csv;
mod dsl;
mod interchange;
mod lexer;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use csv::{parse_dataset, ColumnLayout};
pub use dsl::{parse_schema, parse_system, serialize_schema_dsl, serialize_system_dsl};
pub use interchange::{
    compactness_to_interchange, evaluation_to_interchange, log_to_interchange,
    report_to_interchange, system_from_interchange, system_to_interchange,
    system_to_interchange_with, FORMAT_VERSION,
};

use crate::model::RuleSystem;

/// Diagnostic severity: errors block construction, warnings do not.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Error,
    Warning,
}

/// A positioned parse message. Line and column are 1-based; 0 marks a
/// diagnostic about the document as a whole.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseDiagnostic {
    pub severity: Severity,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseDiagnostic {
    pub fn error(line: usize, column: usize, message: impl Into<String>) -> ParseDiagnostic {
        ParseDiagnostic {
            severity: Severity::Error,
            line,
            column,
            message: message.into(),
        }
    }

    pub fn warning(line: usize, column: usize, message: impl Into<String>) -> ParseDiagnostic {
        ParseDiagnostic {
            severity: Severity::Warning,
            line,
            column,
            message: message.into(),
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        if self.line == 0 {
            write!(f, "{kind}: {}", self.message)
        } else {
            write!(f, "{kind} at {}:{}: {}", self.line, self.column, self.message)
        }
    }
}

/// A successfully parsed value plus any non-fatal diagnostics.
#[derive(Debug, Clone)]
pub struct Parsed<T> {
    pub value: T,
    pub warnings: Vec<ParseDiagnostic>,
}

impl<T> Parsed<T> {
    pub fn clean(value: T) -> Parsed<T> {
        Parsed {
            value,
            warnings: Vec::new(),
        }
    }
}

/// Serialization target for rule systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Dsl,
    Interchange,
}

/// Serializes a system in the requested format. Output is deterministic
/// and parses back to a structurally equal system.
pub fn serialize_system(system: &RuleSystem, format: Format) -> String {
    match format {
        Format::Dsl => serialize_system_dsl(system),
        Format::Interchange => system_to_interchange(system),
    }
}
