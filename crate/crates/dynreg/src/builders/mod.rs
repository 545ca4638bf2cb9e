//! Synthesis of dynamic programs and the closure transformers.
//!
//! Four builder strategies produce oracle-verifiable programs:
//!
//! * [`build_group_program`] — quantifier-free updates for group languages.
//! * [`build_sigma2_program`] — Σ₂ updates for arbitrary finite monoids,
//!   via Green's-relation window relations and infix-evaluation formulas.
//! * [`build_sigma1plus_program`] — positive Σ₁ updates for semidirect
//!   products of a J⁺ part with a group, given an explicit presentation.
//! * [`build_sigma1_monomial_program`] — Σ₁ updates for group monomials and
//!   their complements.
//!
//! Each strategy sits behind the [`BuilderStrategy`] trait and is registered
//! by name in a [`BuilderRegistry`], so frontends select them at runtime.
//! The transformers ([`transform_inverse_morphism`], [`transform_quotient`],
//! [`combine_disjunction`], [`transform_division`]) rewrite existing programs
//! along the standard closure properties, preserving the fragment.

mod common;
mod group;
mod monomial;
mod registry;
mod sigma1plus;
mod sigma2;
mod transform;
pub mod wrong;

pub use common::{recognition_dfa, Ctx, End};
pub use group::{build_group_program, GroupPresentation};
pub use monomial::{build_sigma1_monomial_program, MonomialPresentation, Polarity};
pub use registry::{BuildInput, BuilderRegistry, BuilderStrategy, BuiltProgram, CompiledRegex};
pub use sigma1plus::{
    build_sigma1plus_program, minimal_subwords, sigma1plus_upset_formula, LetterPred,
    SemidirectPresentation,
};
pub use sigma2::build_sigma2_program;
pub use transform::{
    combine_disjunction, transform_division, transform_inverse_morphism, transform_quotient,
    DivisionWitness,
};

use crate::engine::ProgramError;
use crate::logic::{FragmentTag, SchemaError};
use crate::monoid::Elem;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BuildError {
    #[error("the target monoid is not a group")]
    NotAGroup,
    #[error("the left part of the semidirect presentation is not in J+")]
    NotJPlus,
    #[error("the right part of the semidirect presentation is not a group")]
    RightNotGroup,
    #[error("element index {0} out of range")]
    BadElement(Elem),
    #[error("the set is not an upset")]
    NotAnUpset,
    #[error("language is not closed under subword insertion: inserting into an accepted word of length {0} leaves the language")]
    NotUpwardClosed(usize),
    #[error("inconsistent presentation: {0}")]
    Inconsistent(String),
    #[error("transformer requires a Prop or Sigma1+ program, got {0}")]
    FragmentOutOfScope(FragmentTag),
    #[error("division witness rejected: {0}")]
    WitnessInvalid(String),
    #[error("unknown member bit '{0}' (the source program does not expose per-element bits)")]
    UnknownMemberBit(String),
    #[error("internal algebra failure: {0}")]
    AlgebraBug(String),
    #[error(transparent)]
    Schema(#[from] SchemaError),
    #[error(transparent)]
    Program(ProgramError),
}
