//! First-order formulas over the word/auxiliary schema.
//!
//! Formulas are prenex: a quantifier prefix over position variables and a
//! quantifier-free matrix built from letter atoms `W_σ(t)`, old-letter atoms
//! `Wo_σ(t)`, unary auxiliary atoms `R(t)`, nullary bits, the linear order
//! `t ≤ t'`, and equality. Fragments restrict the prefix shape (Prop, Σ₁, Σ₂)
//! and negation placement (the ⁺ variants).
//!
//! Two evaluators are provided: [`eval_formula`] is the naive
//! definition-following one, and [`plan::Evaluator`] is an equivalent
//! component-decomposing, memoizing one used by the dynamic-program engine
//! (property-tested against the naive evaluator).

mod eval;
mod formula;
mod fragment;
pub mod plan;
mod schema;
mod sexpr;

pub use eval::{eval_formula, EvalError, Structure};
pub use formula::{Atom, BitId, Formula, Matrix, NodeFactory, Prenex, Quant, RelId, Var};
pub use fragment::{check_fragment, FragmentCheck, FragmentTag};
pub use schema::{Schema, SchemaError};
pub use sexpr::{formula_from_sexpr, formula_to_sexpr, SexprError};
