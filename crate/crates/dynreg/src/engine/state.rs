use crate::alphabet::{Alphabet, SymId};
use std::fmt;

/// The mutable input word: `n` positions, each holding one symbol or epsilon.
#[derive(Clone, PartialEq, Eq)]
pub struct WordState {
    letters: Vec<Option<SymId>>,
}

impl WordState {
    /// The all-epsilon word of size `n` (the canonical initial word).
    pub fn empty(n: usize) -> Self {
        Self {
            letters: vec![None; n],
        }
    }

    pub fn from_letters(letters: Vec<Option<SymId>>) -> Self {
        Self { letters }
    }

    pub fn n(&self) -> usize {
        self.letters.len()
    }

    /// Letter at a 1-based position.
    pub fn get(&self, pos: usize) -> Option<SymId> {
        self.letters[pos - 1]
    }

    pub fn set(&mut self, pos: usize, sym: Option<SymId>) {
        self.letters[pos - 1] = sym;
    }

    pub fn letters(&self) -> &[Option<SymId>] {
        &self.letters
    }

    pub fn render(&self, alphabet: &Alphabet) -> String {
        self.letters
            .iter()
            .map(|l| alphabet.token(*l).to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Debug for WordState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word[")?;
        for l in &self.letters {
            match l {
                Some(s) => write!(f, "{} ", s.0)?,
                None => write!(f, "_ ")?,
            }
        }
        write!(f, "]")
    }
}

/// A single edit: set position `pos` (1-based) to `sym` (`None` = epsilon).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Change {
    pub pos: usize,
    pub sym: Option<SymId>,
}

/// The auxiliary store: one position set per unary relation, one boolean per
/// bit, plus the engine-maintained snapshot of the letters before the most
/// recent change (the `Wo_σ` relations).
#[derive(Clone, PartialEq, Eq)]
pub struct AuxStore {
    pub unary: Vec<Vec<bool>>,
    pub bits: Vec<bool>,
    pub snapshot: Vec<Option<SymId>>,
}

impl AuxStore {
    pub fn new(unary_count: usize, bit_count: usize, n: usize) -> Self {
        Self {
            unary: vec![vec![false; n]; unary_count],
            bits: vec![false; bit_count],
            snapshot: vec![None; n],
        }
    }

    pub fn unary_at(&self, rel: u32, pos: usize) -> bool {
        self.unary[rel as usize][pos - 1]
    }

    pub fn set_unary(&mut self, rel: u32, pos: usize, value: bool) {
        self.unary[rel as usize][pos - 1] = value;
    }
}

impl fmt::Debug for AuxStore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "AuxStore(bits={:?})", self.bits)?;
        for (r, row) in self.unary.iter().enumerate() {
            let set: Vec<usize> = row
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(i, _)| i + 1)
                .collect();
            writeln!(f, "  rel#{r}: {set:?}")?;
        }
        Ok(())
    }
}
