use crate::error::{Error, Result};
use crate::model::{AttrId, DataObject, Dataset, Schema, Value};
use crate::textio::{Parsed, ParseDiagnostic};

/// How dataset columns map onto schema attributes and the label.
///
/// Either the first data line is a header naming every attribute plus one
/// label column, or the caller supplies the column names up front. The
/// label column is called `class` unless renamed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnLayout {
    Header { label_column: String },
    Explicit {
        columns: Vec<String>,
        label_column: String,
    },
}

impl ColumnLayout {
    pub fn header() -> ColumnLayout {
        ColumnLayout::Header {
            label_column: "class".to_string(),
        }
    }
}

enum ColumnRole {
    Attribute(AttrId),
    Label,
}

/// Parses a strict CSV dataset: comma-separated fields, `#` comment lines,
/// surrounding whitespace trimmed, no quoting and no value coercion. Every
/// attribute must appear in exactly one column and the label in exactly
/// one more; rows keep file order.
pub fn parse_dataset(
    text: &str,
    schema: &Schema,
    layout: &ColumnLayout,
) -> Result<Parsed<Dataset>> {
    let mut diags: Vec<ParseDiagnostic> = Vec::new();
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(idx, line)| (idx + 1, line))
        .filter(|(_, line)| {
            let trimmed = line.trim();
            !trimmed.is_empty() && !trimmed.starts_with('#')
        });

    let (roles, label_column) = match layout {
        ColumnLayout::Header { label_column } => match lines.next() {
            Some((line_no, header)) => {
                let names: Vec<String> =
                    header.split(',').map(|f| f.trim().to_string()).collect();
                (
                    resolve_columns(schema, &names, label_column, line_no, &mut diags),
                    label_column.clone(),
                )
            }
            None => {
                return Err(Error::Syntax(vec![ParseDiagnostic::error(
                    0,
                    0,
                    "dataset has no header line",
                )]))
            }
        },
        ColumnLayout::Explicit {
            columns,
            label_column,
        } => (
            resolve_columns(schema, columns, label_column, 0, &mut diags),
            label_column.clone(),
        ),
    };
    let Some(roles) = roles else {
        return Err(Error::Syntax(diags));
    };

    let mut rows = Vec::new();
    for (line_no, line) in lines {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != roles.len() {
            diags.push(ParseDiagnostic::error(
                line_no,
                1,
                format!("expected {} fields, found {}", roles.len(), fields.len()),
            ));
            continue;
        }
        let mut values = vec![0usize; schema.attribute_count()];
        let mut label = None;
        let mut row_ok = true;
        for (pos, (field, role)) in fields.iter().zip(&roles).enumerate() {
            if field.is_empty() {
                diags.push(ParseDiagnostic::error(
                    line_no,
                    pos + 1,
                    "empty field".to_string(),
                ));
                row_ok = false;
                continue;
            }
            match role {
                ColumnRole::Attribute(attr) => {
                    match schema.value_index(*attr, &Value::parse_token(field)) {
                        Ok(idx) => values[attr.0] = idx,
                        Err(_) => {
                            diags.push(ParseDiagnostic::error(
                                line_no,
                                pos + 1,
                                format!(
                                    "value {field} is not in the domain of attribute {}",
                                    schema.attribute(*attr).name()
                                ),
                            ));
                            row_ok = false;
                        }
                    }
                }
                ColumnRole::Label => match schema.class_id(field) {
                    Ok(class) => label = Some(class),
                    Err(_) => {
                        diags.push(ParseDiagnostic::error(
                            line_no,
                            pos + 1,
                            format!("unknown class label: {field}"),
                        ));
                        row_ok = false;
                    }
                },
            }
        }
        if row_ok {
            let label = label.expect("label column resolved");
            match DataObject::new(schema, values, label) {
                Ok(row) => rows.push(row),
                Err(err) => {
                    diags.push(ParseDiagnostic::error(line_no, 1, err.to_string()));
                }
            }
        }
    }

    if diags.iter().any(ParseDiagnostic::is_error) {
        return Err(Error::Syntax(diags));
    }
    let dataset = Dataset::new(schema.clone(), rows)?;
    diags.push(ParseDiagnostic::warning(
        0,
        0,
        format!(
            "read {} rows ({} columns, label column '{label_column}')",
            dataset.len(),
            roles.len()
        ),
    ));
    Ok(Parsed {
        value: dataset,
        warnings: diags,
    })
}

fn resolve_columns(
    schema: &Schema,
    names: &[String],
    label_column: &str,
    line_no: usize,
    diags: &mut Vec<ParseDiagnostic>,
) -> Option<Vec<ColumnRole>> {
    let mut roles = Vec::with_capacity(names.len());
    let mut seen_attrs = vec![false; schema.attribute_count()];
    let mut seen_label = false;
    for (pos, name) in names.iter().enumerate() {
        if name == label_column {
            if seen_label {
                diags.push(ParseDiagnostic::error(
                    line_no,
                    pos + 1,
                    format!("label column {label_column} appears twice"),
                ));
                return None;
            }
            seen_label = true;
            roles.push(ColumnRole::Label);
        } else {
            match schema.attr_id(name) {
                Ok(attr) => {
                    if seen_attrs[attr.0] {
                        diags.push(ParseDiagnostic::error(
                            line_no,
                            pos + 1,
                            format!("attribute column {name} appears twice"),
                        ));
                        return None;
                    }
                    seen_attrs[attr.0] = true;
                    roles.push(ColumnRole::Attribute(attr));
                }
                Err(_) => {
                    diags.push(ParseDiagnostic::error(
                        line_no,
                        pos + 1,
                        format!("unknown column: {name}"),
                    ));
                    return None;
                }
            }
        }
    }
    if !seen_label {
        diags.push(ParseDiagnostic::error(
            line_no,
            1,
            format!("no label column named {label_column}"),
        ));
        return None;
    }
    if let Some(missing) = seen_attrs.iter().position(|seen| !seen) {
        diags.push(ParseDiagnostic::error(
            line_no,
            1,
            format!(
                "attribute {} has no column",
                schema.attribute(AttrId(missing)).name()
            ),
        ));
        return None;
    }
    Some(roles)
}
