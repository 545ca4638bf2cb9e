use crate::alphabet::{Alphabet, AlphabetError, SymId};
use std::collections::BTreeSet;
use std::fmt;

/// A complete deterministic finite automaton.
///
/// The transition table is total: every state has a successor on every
/// alphabet symbol. States are plain indices `0..states()`.
#[derive(Clone, PartialEq, Eq)]
pub struct Dfa {
    pub alphabet: Alphabet,
    /// `delta[state][symbol]` — row-major transition table.
    pub delta: Vec<Vec<usize>>,
    pub start: usize,
    pub accepting: BTreeSet<usize>,
}

impl Dfa {
    pub fn new(
        alphabet: Alphabet,
        delta: Vec<Vec<usize>>,
        start: usize,
        accepting: BTreeSet<usize>,
    ) -> Self {
        let q = delta.len();
        assert!(q > 0, "a DFA needs at least one state");
        assert!(start < q, "start state out of range");
        for row in &delta {
            assert_eq!(row.len(), alphabet.len(), "transition table must be total");
            for &t in row {
                assert!(t < q, "transition target out of range");
            }
        }
        for &f in &accepting {
            assert!(f < q, "accepting state out of range");
        }
        Self {
            alphabet,
            delta,
            start,
            accepting,
        }
    }

    pub fn states(&self) -> usize {
        self.delta.len()
    }

    pub fn step(&self, state: usize, sym: SymId) -> usize {
        self.delta[state][sym.0 as usize]
    }

    /// Runs the automaton over a word with possible epsilon positions.
    ///
    /// Epsilon positions are skipped: the word read is the subsequence of
    /// non-epsilon symbols.
    pub fn accepts(&self, word: &[Option<SymId>]) -> bool {
        let mut state = self.start;
        for sym in word.iter().flatten() {
            state = self.step(state, *sym);
        }
        self.accepting.contains(&state)
    }

    /// Acceptance for a plain symbol sequence.
    pub fn accepts_symbols(&self, word: &[SymId]) -> bool {
        let mut state = self.start;
        for &sym in word {
            state = self.step(state, sym);
        }
        self.accepting.contains(&state)
    }

    /// Parses a word given as symbol tokens (`eps` allowed) and runs it.
    pub fn accepts_tokens(&self, tokens: &[&str]) -> Result<bool, AlphabetError> {
        let word = tokens
            .iter()
            .map(|t| self.alphabet.lookup_or_epsilon(t))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.accepts(&word))
    }

    /// True if `self` and `other` accept the same language.
    ///
    /// Both automata must share an alphabet; the check is a product-automaton
    /// reachability search.
    pub fn equivalent(&self, other: &Dfa) -> bool {
        if self.alphabet != other.alphabet {
            return false;
        }
        let mut seen = BTreeSet::new();
        let mut stack = vec![(self.start, other.start)];
        while let Some((p, q)) = stack.pop() {
            if !seen.insert((p, q)) {
                continue;
            }
            if self.accepting.contains(&p) != other.accepting.contains(&q) {
                return false;
            }
            for sym in self.alphabet.ids() {
                stack.push((self.step(p, sym), other.step(q, sym)));
            }
        }
        true
    }

    /// True if the two automata are identical up to nothing: same tables.
    ///
    /// Because minimization renumbers canonically, two minimal DFAs for the
    /// same language compare equal with `==`; this alias exists to make tests
    /// read as the intended "isomorphic" claim.
    pub fn isomorphic(&self, other: &Dfa) -> bool {
        self == other
    }
}

impl fmt::Debug for Dfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Dfa(states={}, start={})", self.states(), self.start)?;
        for (s, row) in self.delta.iter().enumerate() {
            let marks = if self.accepting.contains(&s) { "*" } else { " " };
            write!(f, " {marks}{s}:")?;
            for (i, t) in row.iter().enumerate() {
                write!(f, " {}->{}", self.alphabet.name(SymId(i as u16)), t)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
