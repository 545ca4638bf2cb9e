//! Finite alphabets shared by words, automata, and program schemas.
//!
//! The epsilon "symbol" is deliberately not part of any alphabet: a position
//! holding epsilon holds no symbol at all, and APIs that need it use
//! `Option<SymId>` with `None` meaning epsilon.

use std::collections::BTreeSet;
use std::fmt;

/// Index of a symbol within its [`Alphabet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymId(pub u16);

/// Token used for epsilon in all text formats.
pub const EPSILON_TOKEN: &str = "eps";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlphabetError {
    #[error("alphabet must contain at least one symbol")]
    Empty,
    #[error("duplicate symbol '{0}'")]
    Duplicate(String),
    #[error("symbol '{0}' is reserved")]
    Reserved(String),
    #[error("unknown symbol '{0}'")]
    Unknown(String),
}

/// An ordered, duplicate-free set of symbol names.
///
/// Symbols are kept in sorted order so that constructions driven by "the
/// alphabet in sorted order" (canonical DFA numbering, monoid element
/// discovery) are deterministic.
#[derive(Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self, AlphabetError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut seen = BTreeSet::new();
        for sym in symbols {
            let sym = sym.into();
            if sym == EPSILON_TOKEN || sym.is_empty() {
                return Err(AlphabetError::Reserved(sym));
            }
            if !seen.insert(sym.clone()) {
                return Err(AlphabetError::Duplicate(sym));
            }
        }
        if seen.is_empty() {
            return Err(AlphabetError::Empty);
        }
        Ok(Self {
            symbols: seen.into_iter().collect(),
        })
    }

    /// Alphabet over single-character symbols, e.g. `Alphabet::of_chars("ab")`.
    pub fn of_chars(chars: &str) -> Self {
        Self::new(chars.chars().map(|c| c.to_string())).expect("non-empty distinct chars")
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn name(&self, id: SymId) -> &str {
        &self.symbols[id.0 as usize]
    }

    pub fn lookup(&self, name: &str) -> Result<SymId, AlphabetError> {
        self.symbols
            .binary_search_by(|s| s.as_str().cmp(name))
            .map(|i| SymId(i as u16))
            .map_err(|_| AlphabetError::Unknown(name.to_string()))
    }

    /// Parses a symbol token, with `eps` mapping to `None`.
    pub fn lookup_or_epsilon(&self, token: &str) -> Result<Option<SymId>, AlphabetError> {
        if token == EPSILON_TOKEN {
            Ok(None)
        } else {
            self.lookup(token).map(Some)
        }
    }

    pub fn ids(&self) -> impl Iterator<Item = SymId> + '_ {
        (0..self.symbols.len()).map(|i| SymId(i as u16))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.symbols.iter().map(|s| s.as_str())
    }

    /// Display for `Option<SymId>` values, rendering `None` as `eps`.
    pub fn token(&self, sym: Option<SymId>) -> &str {
        match sym {
            Some(id) => self.name(id),
            None => EPSILON_TOKEN,
        }
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alphabet{:?}", self.symbols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorted_and_deduped() {
        let a = Alphabet::new(["b", "a"]).unwrap();
        assert_eq!(a.names().collect::<Vec<_>>(), ["a", "b"]);
        assert_eq!(a.lookup("b").unwrap(), SymId(1));
        assert!(Alphabet::new(["a", "a"]).is_err());
        assert!(Alphabet::new(Vec::<String>::new()).is_err());
        assert!(Alphabet::new(["eps"]).is_err());
    }

    #[test]
    fn epsilon_token_roundtrip() {
        let a = Alphabet::of_chars("ab");
        assert_eq!(a.lookup_or_epsilon("eps").unwrap(), None);
        assert_eq!(a.lookup_or_epsilon("a").unwrap(), Some(SymId(0)));
        assert_eq!(a.token(None), "eps");
    }
}
