//! Verification: randomized oracle equivalence and the Higman/substructure
//! adversary.
//!
//! [`random_verify`] drives a program and the language's minimal DFA through
//! the same random change sequences and reports every step where the query
//! bit and the automaton disagree.
//!
//! [`higman_adversary`] mechanically refutes incorrect programs in the
//! restricted fragments: it pumps one letter to build a family of
//! (word, aux) states, finds two of them where the smaller embeds into the
//! larger as a type-respecting subsequence (Higman's lemma guarantees such a
//! pair exists eventually), and then applies embedding-respecting kill
//! sequences to both. For quantifier-free programs the substructure argument
//! forces both runs to answer identically, and for positive-existential
//! programs the small answer forces the large one; either way a correct
//! program cannot satisfy the forced relation when the final words differ on
//! actual membership, so a disagreement with the oracle is exposed.

mod adversary;
mod higman;
mod random;
mod witness_io;

pub use adversary::{
    higman_adversary, replay_witness, AdversaryError, AdversaryWitness, Disagreement, WhichWord,
};
pub use higman::{find_higman_pair, type_sequence, EmbedMode, PosType, TypedWord};
pub use random::{random_verify, Mismatch, TraceReport, VerifyError};
pub use witness_io::{witness_from_text, witness_to_text, WitnessTextError};
