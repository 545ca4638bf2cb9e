use crate::engine::DynamicProgram;
use crate::lang::Dfa;

pub struct CompiledRegex;
pub struct BuildInput;
pub struct BuiltProgram {
    pub program: DynamicProgram,
    pub oracle: Dfa,
}
pub trait BuilderStrategy {}
pub struct BuilderRegistry;
