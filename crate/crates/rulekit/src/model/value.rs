use std::fmt;

use serde::{Deserialize, Serialize};

/// A single attribute value: either an integer or a symbolic token.
///
/// Integer and symbolic values never compare equal, so a domain can hold
/// both without ambiguity (symbolic tokens are identifiers and cannot lex
/// as integers). In interchange documents integers serialize as JSON
/// numbers and symbols as strings.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Int(i64),
    Sym(String),
}

impl Value {
    /// Parses a value token: digits (with optional sign) become `Int`,
    /// anything else is kept as a symbol.
    pub fn parse_token(token: &str) -> Value {
        match token.parse::<i64>() {
            Ok(n) => Value::Int(n),
            Err(_) => Value::Sym(token.to_string()),
        }
    }

    pub fn as_sym(&self) -> Option<&str> {
        match self {
            Value::Sym(s) => Some(s),
            Value::Int(_) => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Sym(s) => write!(f, "{s}"),
        }
    }
}

impl From<i64> for Value {
    fn from(n: i64) -> Self {
        Value::Int(n)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Sym(s.to_string())
    }
}

/// A subset of one attribute's domain, stored as a bitset over the
/// domain's value indices.
///
/// All sets for a given attribute share the same universe size; binary
/// operations require it. The universe is the declared domain size, so
/// membership, intersection and inclusion are exact set operations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ValueSet {
    universe: usize,
    words: Vec<u64>,
}

impl ValueSet {
    pub fn empty(universe: usize) -> ValueSet {
        ValueSet {
            universe,
            words: vec![0; universe.div_ceil(64)],
        }
    }

    pub fn full(universe: usize) -> ValueSet {
        let mut set = ValueSet::empty(universe);
        for idx in 0..universe {
            set.insert(idx);
        }
        set
    }

    pub fn from_indices(universe: usize, indices: impl IntoIterator<Item = usize>) -> ValueSet {
        let mut set = ValueSet::empty(universe);
        for idx in indices {
            set.insert(idx);
        }
        set
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, index: usize) {
        assert!(index < self.universe, "value index out of range");
        self.words[index / 64] |= 1u64 << (index % 64);
    }

    pub fn remove(&mut self, index: usize) {
        assert!(index < self.universe, "value index out of range");
        self.words[index / 64] &= !(1u64 << (index % 64));
    }

    pub fn contains(&self, index: usize) -> bool {
        index < self.universe && self.words[index / 64] & (1u64 << (index % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.universe
    }

    /// True when some value lies in both sets.
    pub fn intersects(&self, other: &ValueSet) -> bool {
        debug_assert_eq!(self.universe, other.universe, "universe mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .any(|(a, b)| a & b != 0)
    }

    /// True when every value of `self` also lies in `other`.
    pub fn is_subset_of(&self, other: &ValueSet) -> bool {
        debug_assert_eq!(self.universe, other.universe, "universe mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn intersection(&self, other: &ValueSet) -> ValueSet {
        debug_assert_eq!(self.universe, other.universe, "universe mismatch");
        ValueSet {
            universe: self.universe,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn complement(&self) -> ValueSet {
        let mut out = ValueSet::full(self.universe);
        for idx in self.iter() {
            out.remove(idx);
        }
        out
    }

    /// Ascending value indices of the members.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.universe).filter(move |&idx| self.contains(idx))
    }

    /// Members form one contiguous index run ending at the last domain value.
    pub fn is_suffix_run(&self) -> bool {
        !self.is_empty() && self.iter().last() == Some(self.universe - 1) && self.is_contiguous()
    }

    /// Members form one contiguous index run starting at the first domain value.
    pub fn is_prefix_run(&self) -> bool {
        !self.is_empty() && self.contains(0) && self.is_contiguous()
    }

    fn is_contiguous(&self) -> bool {
        let indices: Vec<usize> = self.iter().collect();
        indices.windows(2).all(|w| w[1] == w[0] + 1)
    }
}
