//! Dynamic membership programs for regular languages.
//!
//! This crate classifies regular languages by algebraic properties of their
//! (ordered) syntactic monoids and synthesizes, runs, and verifies dynamic
//! programs: schemes of first-order update formulas over unary auxiliary
//! relations that maintain language membership while single positions of the
//! input word are edited.
//!
//! The main pieces:
//!
//! * [`lang`] — regex parsing, minimal DFAs, word acceptance (the oracle).
//! * [`monoid`] — finite and ordered monoids, Green's relations, class
//!   predicates (group, J⁺, EJ⁺), semidirect products, division witnesses.
//! * [`logic`] — prenex first-order formulas over the word/auxiliary schema,
//!   fragment checking (Prop, Σ₁, Σ₂ and their positive variants), evaluation.
//! * [`engine`] — the dynamic-program runtime: word state, auxiliary store,
//!   change application with frozen-pre-state semantics, program files.
//! * [`builders`] — synthesis of maintenance programs (quantifier-free for
//!   groups, Σ₂ for arbitrary monoids, positive Σ₁ for semidirect products of
//!   a J⁺ part with a group, Σ₁ for group monomials) plus the closure
//!   transformers, behind a name-keyed strategy registry.
//! * [`verify`] — randomized oracle equivalence and the Higman/substructure
//!   adversary that refutes incorrect programs in the restricted fragments.

pub mod alphabet;
pub mod builders;
pub mod engine;
pub mod lang;
pub mod logic;
pub mod monoid;
pub mod testkit;
pub mod verify;

pub use alphabet::{Alphabet, SymId};
