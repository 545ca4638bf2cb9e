use crate::alphabet::SymId;
use crate::logic::{check_fragment, BitId, Formula, FragmentTag, RelId, Schema};
use std::collections::BTreeMap;

/// What an update formula recomputes: one unary relation or one bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Target {
    Unary(RelId),
    Bit(BitId),
}

/// Initial auxiliary contents for the all-epsilon word: each unary relation
/// starts either full or empty, each bit at a fixed value. Initialization for
/// a non-empty starting word replays the word through the update formulas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Initializer {
    pub unary_full: Vec<bool>,
    pub bits: Vec<bool>,
}

/// Update formulas keyed by (target, change symbol); `None` is epsilon.
pub type UpdateMap = BTreeMap<(Target, Option<SymId>), Formula>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProgramError {
    #[error("update formula for {0} must use free variables from {1}")]
    BadFreeVars(String, String),
    #[error("update formula for {0} is not in the claimed fragment {1}: {2}")]
    FragmentViolation(String, FragmentTag, String),
    #[error("initializer shape does not match the schema")]
    InitializerMismatch,
    #[error("query bit index {0} out of range")]
    BadQueryBit(BitId),
    #[error("member-bit label '{0}' refers to unknown bit")]
    BadMemberBit(String),
}

/// A dynamic program: schema, claimed fragment, per-(target, symbol) update
/// formulas, declarative initializer, and the distinguished query bit.
///
/// Update formulas for unary relations take free variables `(x; y)` — the
/// position being recomputed and the changed position; bit formulas take
/// `(y)` only. All auxiliary relations are at most unary by construction.
#[derive(Debug, Clone)]
pub struct DynamicProgram {
    pub name: String,
    pub schema: Schema,
    pub fragment: FragmentTag,
    pub updates: UpdateMap,
    pub init: Initializer,
    pub query_bit: BitId,
    /// Optional labelled element bits for evaluation-problem programs
    /// (one bit per monoid element), used by the program transformers.
    pub member_bits: BTreeMap<String, BitId>,
    /// Human-readable intent of each schema item, for explain output and
    /// program-file audits.
    pub intents: BTreeMap<String, String>,
}

impl DynamicProgram {
    /// Full structural validation: free-variable conventions, fragment
    /// membership of every update formula, initializer shape.
    pub fn validate(&self) -> Result<(), ProgramError> {
        for ((target, sym), formula) in &self.updates {
            let target_name = self.target_name(*target);
            let allowed: &[&str] = match target {
                Target::Unary(_) => &["x", "y"],
                Target::Bit(_) => &["y"],
            };
            for v in &formula.free {
                if !allowed.contains(&v.name()) {
                    return Err(ProgramError::BadFreeVars(
                        format!("{target_name}/{}", self.schema.alphabet.token(*sym)),
                        allowed.join(","),
                    ));
                }
            }
            let check = check_fragment(formula, self.fragment);
            if !check.ok {
                return Err(ProgramError::FragmentViolation(
                    format!("{target_name}/{}", self.schema.alphabet.token(*sym)),
                    self.fragment,
                    check.diagnostic.unwrap_or_default(),
                ));
            }
        }
        if self.init.unary_full.len() != self.schema.unary_count()
            || self.init.bits.len() != self.schema.bit_count()
        {
            return Err(ProgramError::InitializerMismatch);
        }
        if self.query_bit as usize >= self.schema.bit_count() {
            return Err(ProgramError::BadQueryBit(self.query_bit));
        }
        for (label, bit) in &self.member_bits {
            if *bit as usize >= self.schema.bit_count() {
                return Err(ProgramError::BadMemberBit(label.clone()));
            }
        }
        Ok(())
    }

    pub fn target_name(&self, t: Target) -> String {
        match t {
            Target::Unary(r) => self.schema.unary_name(r).to_string(),
            Target::Bit(b) => self.schema.bit_name(b).to_string(),
        }
    }

    pub fn update_for(&self, target: Target, sym: Option<SymId>) -> Option<&Formula> {
        self.updates.get(&(target, sym))
    }

    /// All (target, symbol) pairs that are missing an update formula; a
    /// complete program has none.
    pub fn missing_updates(&self) -> Vec<(Target, Option<SymId>)> {
        let mut missing = Vec::new();
        let mut syms: Vec<Option<SymId>> = vec![None];
        syms.extend(self.schema.alphabet.ids().map(Some));
        for r in 0..self.schema.unary_count() as RelId {
            for &s in &syms {
                if !self.updates.contains_key(&(Target::Unary(r), s)) {
                    missing.push((Target::Unary(r), s));
                }
            }
        }
        for b in 0..self.schema.bit_count() as BitId {
            for &s in &syms {
                if !self.updates.contains_key(&(Target::Bit(b), s)) {
                    missing.push((Target::Bit(b), s));
                }
            }
        }
        missing
    }
}
