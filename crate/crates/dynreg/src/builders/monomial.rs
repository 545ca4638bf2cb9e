use super::BuildError;
use crate::engine::DynamicProgram;

#[derive(Debug, Clone)]
pub struct MonomialPresentation;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    Positive,
    Complemented,
}

pub fn build_sigma1_monomial_program(
    _p: &MonomialPresentation,
) -> Result<DynamicProgram, BuildError> {
    todo!()
}
