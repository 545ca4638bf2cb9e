//! Finite monoid and ordered-monoid algebra.
//!
//! Houses the multiplication tables, Green's relations, the class predicates
//! that drive classification (group, J⁺, EJ⁺), semidirect products, and the
//! two constructive division witnesses used by the lower-bound arguments.

mod core;
mod green;
pub mod ordered;
mod semidirect;
mod syntactic;
mod textio;

pub use core::{Elem, FiniteMonoid, MonoidError, Morphism};
pub use green::{GreenData, JClass};
pub use ordered::{u1_minus, u1_plus, OrderError, OrderedMonoid};
pub use semidirect::{SemidirectAction, SemidirectError};
pub use syntactic::{
    syntactic_ordered_monoid, transition_monoid, transition_monoid_with_maps, SyntacticError,
};
pub use textio::{
    monoid_from_text, monoid_to_text, ordered_monoid_from_text, ordered_monoid_to_text,
    MonoidTextError,
};
