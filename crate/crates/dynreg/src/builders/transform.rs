use super::BuildError;
use crate::alphabet::SymId;
use crate::engine::DynamicProgram;

#[derive(Debug, Clone)]
pub struct DivisionWitness;

pub fn transform_inverse_morphism(
    _p: &DynamicProgram,
    _h: &[(SymId, Vec<Option<SymId>>)],
) -> Result<DynamicProgram, BuildError> {
    todo!()
}

pub fn transform_quotient(
    _p: &DynamicProgram,
    _sym: SymId,
    _left: bool,
) -> Result<DynamicProgram, BuildError> {
    todo!()
}

pub fn combine_disjunction(
    _p: &DynamicProgram,
    _subset: &[String],
) -> Result<DynamicProgram, BuildError> {
    todo!()
}

pub fn transform_division(
    _p: &DynamicProgram,
    _w: &DivisionWitness,
) -> Result<DynamicProgram, BuildError> {
    todo!()
}
