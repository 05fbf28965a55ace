use crate::error::{Error, Result};
use crate::model::schema::{AttrId, ClassId, Schema};
use crate::model::value::Value;

/// One labeled row: a total assignment of value indices (one per schema
/// attribute, in declaration order) plus the true class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataObject {
    values: Vec<usize>,
    label: ClassId,
}

impl DataObject {
    pub fn new(schema: &Schema, values: Vec<usize>, label: ClassId) -> Result<DataObject> {
        if values.len() != schema.attribute_count() {
            return Err(Error::Invariant(format!(
                "row has {} values, schema declares {} attributes",
                values.len(),
                schema.attribute_count()
            )));
        }
        for (idx, &value) in values.iter().enumerate() {
            if value >= schema.attribute(AttrId(idx)).domain_size() {
                return Err(Error::UnknownValue {
                    attribute: schema.attribute(AttrId(idx)).name().to_string(),
                    value: format!("#{value}"),
                });
            }
        }
        if label.0 >= schema.classes().len() {
            return Err(Error::UnknownClass(format!("{}", label.0)));
        }
        Ok(DataObject { values, label })
    }

    pub fn value_index(&self, attr: AttrId) -> usize {
        self.values[attr.0]
    }

    pub fn value_indices(&self) -> &[usize] {
        &self.values
    }

    pub fn label(&self) -> ClassId {
        self.label
    }
}

impl Schema {
    /// Builds a row from value tokens in attribute declaration order.
    pub fn object(&self, tokens: &[&str], label: &str) -> Result<DataObject> {
        if tokens.len() != self.attribute_count() {
            return Err(Error::Invariant(format!(
                "expected {} values, got {}",
                self.attribute_count(),
                tokens.len()
            )));
        }
        let mut values = Vec::with_capacity(tokens.len());
        for (idx, token) in tokens.iter().enumerate() {
            values.push(self.value_index(AttrId(idx), &Value::parse_token(token))?);
        }
        DataObject::new(self, values, self.class_id(label)?)
    }
}

/// An ordered list of labeled rows over one schema. Duplicate rows are
/// permitted and counted individually.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    schema: Schema,
    rows: Vec<DataObject>,
}

impl Dataset {
    pub fn new(schema: Schema, rows: Vec<DataObject>) -> Result<Dataset> {
        for row in &rows {
            if row.values.len() != schema.attribute_count() {
                return Err(Error::SchemaMismatch(
                    "row arity differs from schema".to_string(),
                ));
            }
        }
        Ok(Dataset { schema, rows })
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn rows(&self) -> &[DataObject] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::schema::Attribute;

    fn schema() -> Schema {
        Schema::new(
            vec![
                Attribute::new("P", (1..=20).map(Value::Int).collect(), true),
                Attribute::new("W", vec!["LE3".into(), "GE4".into()], false),
            ],
            vec!["NotCar".to_string(), "Car".to_string()],
        )
        .unwrap()
    }

    #[test]
    fn object_resolves_tokens() {
        let schema = schema();
        let obj = schema.object(&["2", "LE3"], "NotCar").unwrap();
        assert_eq!(obj.value_indices(), &[1, 0]);
        assert_eq!(obj.label(), ClassId(0));
    }

    #[test]
    fn object_rejects_bad_input() {
        let schema = schema();
        assert!(schema.object(&["2"], "NotCar").is_err());
        assert!(schema.object(&["0", "LE3"], "NotCar").is_err());
        assert!(schema.object(&["2", "LE3"], "Bus").is_err());
    }

    #[test]
    fn duplicate_rows_are_kept() {
        let schema = schema();
        let row = schema.object(&["2", "LE3"], "NotCar").unwrap();
        let ds = Dataset::new(schema, vec![row.clone(), row]).unwrap();
        assert_eq!(ds.len(), 2);
    }
}
