//! The dynamic-program runtime.
//!
//! A dynamic program maintains unary auxiliary relations and bits over a
//! fixed-size word whose positions are edited one at a time. On a change
//! `set_σ(i)` the engine snapshots the pre-change letters (serving the
//! `Wo_σ` atoms), writes the new letter, and then recomputes every auxiliary
//! relation and bit by evaluating its update formula for `σ` against the new
//! word and the frozen pre-change auxiliary store.

mod program;
mod run;
mod state;
mod textio;

pub use program::{DynamicProgram, Initializer, ProgramError, Target, UpdateMap};
pub use run::{EngineError, Runtime};
pub use state::{AuxStore, Change, WordState};
pub use textio::{
    parse_change_line, program_from_text, program_to_text, trace_line, ProgramTextError,
};

/// Bundled example program: the hand-written Σ₁ maintenance of "contains an
/// adjacent pair of a's" over {a, b}, with the complement-flag encoding of
/// the next/previous-letter relations.
pub fn example1_program() -> DynamicProgram {
    program_from_text(include_str!("../../fixtures/example1.prog"))
        .expect("bundled fixture parses")
}
