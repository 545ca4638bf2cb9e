//! Regular expressions, minimal DFAs, and word acceptance.
//!
//! This module is the ground truth the rest of the crate is verified against:
//! every synthesized dynamic program is compared step by step with
//! [`Dfa::accepts`] on the language's minimal automaton.

mod compile;
mod dfa;
mod parser;
mod regex;
mod textio;

pub use compile::{compile_min_dfa, minimize, regex_to_nfa, Nfa};
pub use dfa::Dfa;
pub use parser::{parse_regex, RegexError};
pub use regex::{Regex, RegexAst};
pub use textio::DfaTextError;
