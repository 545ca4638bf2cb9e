use super::BuildError;
use crate::alphabet::SymId;
use crate::engine::DynamicProgram;
use crate::lang::Dfa;
use crate::logic::Formula;
use crate::monoid::{Elem, SemidirectAction};
use std::collections::BTreeSet;

/// An explicit semidirect recognition: a verified left action of a group on
/// a J⁺ part, and an upset of the product.
#[derive(Debug, Clone)]
pub struct SemidirectPresentation {
    pub action: SemidirectAction,
    pub upset: BTreeSet<Elem>,
}

/// How letter occurrences are tested in subword formulas.
#[derive(Debug, Clone)]
pub enum LetterPred {
    /// Input atoms `W_σ(p)` for the given symbol per tracked letter.
    Input(Vec<SymId>),
}

pub fn build_sigma1plus_program(
    _p: &SemidirectPresentation,
) -> Result<DynamicProgram, BuildError> {
    todo!()
}

pub fn minimal_subwords(_d: &Dfa) -> Result<Vec<Vec<SymId>>, BuildError> {
    todo!()
}

pub fn sigma1plus_upset_formula(_words: &[Vec<usize>], _pred: &LetterPred) -> Formula {
    todo!()
}
