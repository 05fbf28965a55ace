//! The versioned JSON interchange format.
//!
//! Every document is an object with `format_version` and `kind` fields
//! followed by the payload. Serialization is deterministic: field order is
//! fixed and collections keep declaration order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::{Compactness, Evaluation, Fraction};
use crate::model::{Attribute, Rule, RuleSystem, Schema, Value, ValueSet};
use crate::reduce::{ReductionLog, VerificationReport};
use crate::textio::{Parsed, ParseDiagnostic};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize)]
struct Envelope<T: Serialize> {
    format_version: u32,
    kind: &'static str,
    #[serde(flatten)]
    payload: T,
}

fn envelope<T: Serialize>(kind: &'static str, payload: T) -> String {
    let doc = Envelope {
        format_version: FORMAT_VERSION,
        kind,
        payload,
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("serializable document");
    text.push('\n');
    text
}

#[derive(Serialize, Deserialize)]
struct SystemDoc {
    schema: SchemaDoc,
    rules: Vec<RuleDoc>,
    /// Free-form notes about where the system came from; ignored on read.
    #[serde(default)]
    provenance: Vec<String>,
    warnings: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct SchemaDoc {
    attributes: Vec<AttrDoc>,
    classes: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct AttrDoc {
    name: String,
    ordered: bool,
    values: Vec<Value>,
}

#[derive(Serialize, Deserialize)]
struct RuleDoc {
    id: String,
    class: String,
    conditions: Vec<ConditionDoc>,
}

#[derive(Serialize, Deserialize)]
struct ConditionDoc {
    attribute: String,
    values: Vec<Value>,
}

/// Serializes a system (schema, rules, structural warnings) as an
/// interchange document.
pub fn system_to_interchange(system: &RuleSystem) -> String {
    system_to_interchange_with(system, &[])
}

/// Like [`system_to_interchange`], with provenance notes carried in the
/// document.
pub fn system_to_interchange_with(system: &RuleSystem, provenance: &[String]) -> String {
    let schema = system.schema();
    let doc = SystemDoc {
        schema: SchemaDoc {
            attributes: schema
                .attributes()
                .iter()
                .map(|attr| AttrDoc {
                    name: attr.name().to_string(),
                    ordered: attr.ordered(),
                    values: attr.domain().to_vec(),
                })
                .collect(),
            classes: schema.classes().to_vec(),
        },
        rules: system
            .rules()
            .iter()
            .map(|rule| RuleDoc {
                id: rule.id().to_string(),
                class: schema.class_name(rule.class()).to_string(),
                conditions: rule
                    .conditions()
                    .iter()
                    .map(|(&attr, set)| ConditionDoc {
                        attribute: schema.attribute(attr).name().to_string(),
                        values: set
                            .iter()
                            .map(|idx| schema.attribute(attr).domain()[idx].clone())
                            .collect(),
                    })
                    .collect(),
            })
            .collect(),
        provenance: provenance.to_vec(),
        warnings: system.warnings(),
    };
    envelope("rule_system", doc)
}

/// Reads a rule-system interchange document back into a validated system.
pub fn system_from_interchange(text: &str) -> Result<Parsed<RuleSystem>> {
    #[derive(Deserialize)]
    struct Incoming {
        format_version: u32,
        kind: String,
        #[serde(flatten)]
        doc: SystemDoc,
    }
    let incoming: Incoming = serde_json::from_str(text).map_err(|err| {
        Error::Syntax(vec![ParseDiagnostic::error(
            err.line(),
            err.column(),
            format!("invalid interchange document: {err}"),
        )])
    })?;
    if incoming.format_version != FORMAT_VERSION {
        return Err(Error::Invariant(format!(
            "unsupported format_version {}",
            incoming.format_version
        )));
    }
    if incoming.kind != "rule_system" {
        return Err(Error::Invariant(format!(
            "expected a rule_system document, found kind '{}'",
            incoming.kind
        )));
    }

    let attributes: Vec<Attribute> = incoming
        .doc
        .schema
        .attributes
        .into_iter()
        .map(|attr| Attribute::new(attr.name, attr.values, attr.ordered))
        .collect();
    let schema = Schema::new(attributes, incoming.doc.schema.classes)?;

    let mut rules = Vec::with_capacity(incoming.doc.rules.len());
    for rule_doc in incoming.doc.rules {
        let class = schema.class_id(&rule_doc.class)?;
        let mut conditions = std::collections::BTreeMap::new();
        for cond in rule_doc.conditions {
            let attr = schema.attr_id(&cond.attribute)?;
            let universe = schema.attribute(attr).domain_size();
            let mut set = ValueSet::empty(universe);
            for value in &cond.values {
                set.insert(schema.value_index(attr, value)?);
            }
            if conditions.insert(attr, set).is_some() {
                return Err(Error::Invariant(format!(
                    "rule {}: attribute {} constrained twice",
                    rule_doc.id, cond.attribute
                )));
            }
        }
        rules.push(Rule::new(&schema, rule_doc.id, class, conditions)?);
    }
    let system = RuleSystem::new(schema, rules)?;
    let warnings = system
        .warnings()
        .into_iter()
        .map(|w| ParseDiagnostic::warning(0, 0, w))
        .collect();
    Ok(Parsed {
        value: system,
        warnings,
    })
}

#[derive(Serialize)]
struct FractionDoc {
    num: u64,
    den: u64,
    value: f64,
}

impl From<Fraction> for FractionDoc {
    fn from(f: Fraction) -> FractionDoc {
        FractionDoc {
            num: f.num,
            den: f.den,
            value: f.value(),
        }
    }
}

#[derive(Serialize)]
struct FireCountDoc {
    rule: String,
    fires: u64,
}

#[derive(Serialize)]
struct MetricsDoc {
    total_rows: u64,
    covered_rows: u64,
    correct_rows: u64,
    conflict_rows: u64,
    rule_count: usize,
    condition_count: usize,
    accuracy: FractionDoc,
    coverage: FractionDoc,
    accuracy_on_covered: FractionDoc,
    per_rule_fire_counts: Vec<FireCountDoc>,
}

#[derive(Serialize)]
struct EvaluationDoc {
    policy: crate::eval::Policy,
    metrics: MetricsDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    space_coverage: Option<FractionDoc>,
    rows: Vec<crate::eval::RowOutcome>,
}

/// Serializes an evaluation (with optional space coverage) as an
/// interchange document.
pub fn evaluation_to_interchange(evaluation: &Evaluation, space: Option<Fraction>) -> String {
    let m = &evaluation.metrics;
    let doc = EvaluationDoc {
        policy: evaluation.policy,
        metrics: MetricsDoc {
            total_rows: m.total_rows,
            covered_rows: m.covered_rows,
            correct_rows: m.correct_rows,
            conflict_rows: m.conflict_rows,
            rule_count: m.rule_count,
            condition_count: m.condition_count,
            accuracy: m.accuracy().into(),
            coverage: m.coverage().into(),
            accuracy_on_covered: m.accuracy_on_covered().into(),
            per_rule_fire_counts: m
                .per_rule_fire_counts
                .iter()
                .map(|(rule, fires)| FireCountDoc {
                    rule: rule.clone(),
                    fires: *fires,
                })
                .collect(),
        },
        space_coverage: space.map(FractionDoc::from),
        rows: evaluation.rows.clone(),
    };
    envelope("metrics", doc)
}

/// Serializes a reduction log as an interchange document.
pub fn log_to_interchange(log: &ReductionLog) -> String {
    envelope("reduction_log", log)
}

/// Serializes a verification report as an interchange document.
pub fn report_to_interchange(report: &VerificationReport) -> String {
    envelope("verification_report", report)
}

/// Serializes compactness counts as an interchange document.
pub fn compactness_to_interchange(compactness: &Compactness) -> String {
    envelope("compactness", compactness)
}
