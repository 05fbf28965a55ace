use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::model::value::Value;

/// Default upper bound on the number of values a single attribute may declare.
pub const DEFAULT_MAX_DOMAIN_SIZE: usize = 10_000;

/// Attribute names, class names, symbolic values and rule ids must all be
/// identifiers so that every value serializes back into the rule language.
pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Index of an attribute within its schema's declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AttrId(pub usize);

/// Index of a class within its schema's declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassId(pub usize);

impl fmt::Display for AttrId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// One attribute: a name, a finite domain in declaration order, and a flag
/// recording whether the declaration order is a meaningful total order.
///
/// The order flag is metadata: it gates comparison sugar in the rule
/// language but plays no role in matching or exclusivity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attribute {
    name: String,
    domain: Vec<Value>,
    ordered: bool,
}

impl Attribute {
    pub fn new(name: impl Into<String>, domain: Vec<Value>, ordered: bool) -> Attribute {
        Attribute {
            name: name.into(),
            domain,
            ordered,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &[Value] {
        &self.domain
    }

    pub fn ordered(&self) -> bool {
        self.ordered
    }

    pub fn domain_size(&self) -> usize {
        self.domain.len()
    }
}

/// Attribute declarations plus the class labels of a classification problem.
///
/// A schema fixes the full description space: the cartesian product of all
/// attribute domains. Rules, systems and datasets are validated against one
/// schema and carry indices into it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema {
    attributes: Vec<Attribute>,
    classes: Vec<String>,
    attr_lookup: HashMap<String, usize>,
    class_lookup: HashMap<String, usize>,
    value_lookup: Vec<HashMap<Value, usize>>,
}

impl Schema {
    /// Builds and validates a schema with the default domain-size bound.
    pub fn new(attributes: Vec<Attribute>, classes: Vec<String>) -> Result<Schema> {
        Schema::with_max_domain_size(attributes, classes, DEFAULT_MAX_DOMAIN_SIZE)
    }

    /// Builds and validates a schema with an explicit domain-size bound.
    pub fn with_max_domain_size(
        attributes: Vec<Attribute>,
        classes: Vec<String>,
        max_domain_size: usize,
    ) -> Result<Schema> {
        if attributes.is_empty() {
            return Err(Error::Invariant(
                "schema declares no attributes".to_string(),
            ));
        }
        if classes.len() < 2 {
            return Err(Error::Invariant(format!(
                "schema declares {} class(es); at least 2 required",
                classes.len()
            )));
        }

        let mut attr_lookup = HashMap::new();
        let mut value_lookup = Vec::with_capacity(attributes.len());
        for (idx, attr) in attributes.iter().enumerate() {
            if !is_identifier(&attr.name) {
                return Err(Error::Invariant(format!(
                    "attribute name '{}' is not an identifier",
                    attr.name
                )));
            }
            if attr_lookup.insert(attr.name.clone(), idx).is_some() {
                return Err(Error::Invariant(format!(
                    "duplicate attribute name: {}",
                    attr.name
                )));
            }
            if attr.domain.is_empty() {
                return Err(Error::Invariant(format!(
                    "attribute {} has an empty domain",
                    attr.name
                )));
            }
            if attr.domain.len() > max_domain_size {
                return Err(Error::Invariant(format!(
                    "attribute {} declares {} values, above the bound of {}",
                    attr.name,
                    attr.domain.len(),
                    max_domain_size
                )));
            }
            let mut lookup = HashMap::new();
            for (vidx, value) in attr.domain.iter().enumerate() {
                if let Value::Sym(sym) = value {
                    if !is_identifier(sym) {
                        return Err(Error::Invariant(format!(
                            "value '{sym}' of attribute {} is not an identifier",
                            attr.name
                        )));
                    }
                }
                if lookup.insert(value.clone(), vidx).is_some() {
                    return Err(Error::Invariant(format!(
                        "attribute {} lists value {} twice",
                        attr.name, value
                    )));
                }
            }
            value_lookup.push(lookup);
        }

        let mut class_lookup = HashMap::new();
        for (idx, class) in classes.iter().enumerate() {
            if !is_identifier(class) {
                return Err(Error::Invariant(format!(
                    "class name '{class}' is not an identifier"
                )));
            }
            if class_lookup.insert(class.clone(), idx).is_some() {
                return Err(Error::Invariant(format!("duplicate class name: {class}")));
            }
        }

        Ok(Schema {
            attributes,
            classes,
            attr_lookup,
            class_lookup,
            value_lookup,
        })
    }

    pub fn attributes(&self) -> &[Attribute] {
        &self.attributes
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn attribute_count(&self) -> usize {
        self.attributes.len()
    }

    pub fn attribute(&self, id: AttrId) -> &Attribute {
        &self.attributes[id.0]
    }

    pub fn class_name(&self, id: ClassId) -> &str {
        &self.classes[id.0]
    }

    pub fn attr_id(&self, name: &str) -> Result<AttrId> {
        self.attr_lookup
            .get(name)
            .map(|&idx| AttrId(idx))
            .ok_or_else(|| Error::UnknownAttribute(name.to_string()))
    }

    pub fn class_id(&self, name: &str) -> Result<ClassId> {
        self.class_lookup
            .get(name)
            .map(|&idx| ClassId(idx))
            .ok_or_else(|| Error::UnknownClass(name.to_string()))
    }

    /// Resolves a value within an attribute's domain to its index.
    pub fn value_index(&self, attr: AttrId, value: &Value) -> Result<usize> {
        self.value_lookup[attr.0]
            .get(value)
            .copied()
            .ok_or_else(|| Error::UnknownValue {
                attribute: self.attributes[attr.0].name.clone(),
                value: value.to_string(),
            })
    }

    /// Resolves a raw token (int or symbol) within an attribute's domain.
    pub fn value_index_of_token(&self, attr: AttrId, token: &str) -> Result<usize> {
        self.value_index(attr, &Value::parse_token(token))
    }

    /// Number of descriptions in the full space, if it fits in 128 bits.
    pub fn description_space_size(&self) -> Option<u128> {
        self.attributes
            .iter()
            .try_fold(1u128, |acc, attr| acc.checked_mul(attr.domain.len() as u128))
    }

    /// Calls `visit` once per description in the full space, in odometer
    /// order (last attribute varies fastest). The slice holds one value
    /// index per attribute.
    pub fn for_each_description(&self, mut visit: impl FnMut(&[usize])) {
        let sizes: Vec<usize> = self.attributes.iter().map(|a| a.domain.len()).collect();
        let mut current = vec![0usize; sizes.len()];
        loop {
            visit(&current);
            let mut pos = sizes.len();
            loop {
                if pos == 0 {
                    return;
                }
                pos -= 1;
                current[pos] += 1;
                if current[pos] < sizes[pos] {
                    break;
                }
                current[pos] = 0;
            }
        }
    }
}
