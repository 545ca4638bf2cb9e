use super::formula::{BitId, RelId};
use crate::alphabet::Alphabet;
use std::collections::HashMap;

const RESERVED: &[&str] = &[
    "W", "Wo", "and", "or", "not", "exists", "forall", "true", "false", "<=", "=", "eps",
];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SchemaError {
    #[error("duplicate name '{0}' in schema")]
    Duplicate(String),
    #[error("name '{0}' is reserved")]
    Reserved(String),
    #[error("unknown relation '{0}'")]
    UnknownRelation(String),
    #[error("unknown bit '{0}'")]
    UnknownBit(String),
}

/// Names of the auxiliary store: unary relations and nullary bits, together
/// with the input alphabet (which provides `W_σ` and `Wo_σ`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema {
    pub alphabet: Alphabet,
    unary: Vec<String>,
    bits: Vec<String>,
    unary_idx: HashMap<String, RelId>,
    bit_idx: HashMap<String, BitId>,
}

impl Schema {
    pub fn new(alphabet: Alphabet) -> Self {
        Self {
            alphabet,
            unary: Vec::new(),
            bits: Vec::new(),
            unary_idx: HashMap::new(),
            bit_idx: HashMap::new(),
        }
    }

    fn check_name(&self, name: &str) -> Result<(), SchemaError> {
        if RESERVED.contains(&name) || name.is_empty() {
            return Err(SchemaError::Reserved(name.to_string()));
        }
        if self.unary_idx.contains_key(name) || self.bit_idx.contains_key(name) {
            return Err(SchemaError::Duplicate(name.to_string()));
        }
        Ok(())
    }

    pub fn add_unary(&mut self, name: impl Into<String>) -> Result<RelId, SchemaError> {
        let name = name.into();
        self.check_name(&name)?;
        let id = self.unary.len() as RelId;
        self.unary_idx.insert(name.clone(), id);
        self.unary.push(name);
        Ok(id)
    }

    pub fn add_bit(&mut self, name: impl Into<String>) -> Result<BitId, SchemaError> {
        let name = name.into();
        self.check_name(&name)?;
        let id = self.bits.len() as BitId;
        self.bit_idx.insert(name.clone(), id);
        self.bits.push(name);
        Ok(id)
    }

    pub fn unary_count(&self) -> usize {
        self.unary.len()
    }

    pub fn bit_count(&self) -> usize {
        self.bits.len()
    }

    pub fn unary_name(&self, id: RelId) -> &str {
        &self.unary[id as usize]
    }

    pub fn bit_name(&self, id: BitId) -> &str {
        &self.bits[id as usize]
    }

    pub fn unary_names(&self) -> impl Iterator<Item = &str> {
        self.unary.iter().map(|s| s.as_str())
    }

    pub fn bit_names(&self) -> impl Iterator<Item = &str> {
        self.bits.iter().map(|s| s.as_str())
    }

    pub fn lookup_unary(&self, name: &str) -> Result<RelId, SchemaError> {
        self.unary_idx
            .get(name)
            .copied()
            .ok_or_else(|| SchemaError::UnknownRelation(name.to_string()))
    }

    pub fn lookup_bit(&self, name: &str) -> Result<BitId, SchemaError> {
        self.bit_idx
            .get(name)
            .copied()
            .ok_or_else(|| SchemaError::UnknownBit(name.to_string()))
    }

    pub fn has_bit(&self, name: &str) -> bool {
        self.bit_idx.contains_key(name)
    }

    pub fn has_unary(&self, name: &str) -> bool {
        self.unary_idx.contains_key(name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_unique_across_kinds() {
        let mut s = Schema::new(Alphabet::of_chars("ab"));
        s.add_unary("N").unwrap();
        assert!(matches!(s.add_bit("N"), Err(SchemaError::Duplicate(_))));
        assert!(matches!(s.add_unary("and"), Err(SchemaError::Reserved(_))));
        s.add_bit("q").unwrap();
        assert_eq!(s.lookup_bit("q").unwrap(), 0);
        assert!(s.lookup_unary("q").is_err());
    }
}
