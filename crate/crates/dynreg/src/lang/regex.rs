use crate::alphabet::{Alphabet, SymId};
use std::fmt;

/// Syntax tree of a regular expression over a fixed alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RegexAst {
    /// The empty language.
    Empty,
    /// The language containing only the empty word (`1` in the surface syntax).
    Epsilon,
    Letter(SymId),
    Union(Box<RegexAst>, Box<RegexAst>),
    Concat(Box<RegexAst>, Box<RegexAst>),
    Star(Box<RegexAst>),
}

impl RegexAst {
    pub fn depth(&self) -> usize {
        match self {
            RegexAst::Empty | RegexAst::Epsilon | RegexAst::Letter(_) => 1,
            RegexAst::Union(a, b) | RegexAst::Concat(a, b) => 1 + a.depth().max(b.depth()),
            RegexAst::Star(a) => 1 + a.depth(),
        }
    }

    pub fn contains_union(&self) -> bool {
        match self {
            RegexAst::Union(_, _) => true,
            RegexAst::Concat(a, b) => a.contains_union() || b.contains_union(),
            RegexAst::Star(a) => a.contains_union(),
            _ => false,
        }
    }
}

/// A regular expression together with its alphabet.
#[derive(Clone, PartialEq, Eq)]
pub struct Regex {
    pub ast: RegexAst,
    pub alphabet: Alphabet,
}

impl Regex {
    // prec: 0 union context, 1 concat context, 2 star/atom context
    fn fmt_ast(&self, ast: &RegexAst, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        match ast {
            RegexAst::Empty => write!(f, "0"),
            RegexAst::Epsilon => write!(f, "1"),
            RegexAst::Letter(s) => write!(f, "{}", self.alphabet.name(*s)),
            RegexAst::Union(a, b) => {
                if prec > 0 {
                    write!(f, "(")?;
                }
                self.fmt_ast(a, f, 0)?;
                write!(f, "+")?;
                self.fmt_ast(b, f, 0)?;
                if prec > 0 {
                    write!(f, ")")?;
                }
                Ok(())
            }
            RegexAst::Concat(a, b) => {
                if prec > 1 {
                    write!(f, "(")?;
                }
                self.fmt_ast(a, f, 1)?;
                self.fmt_ast(b, f, 1)?;
                if prec > 1 {
                    write!(f, ")")?;
                }
                Ok(())
            }
            RegexAst::Star(a) => {
                match **a {
                    RegexAst::Union(_, _) | RegexAst::Concat(_, _) => {
                        write!(f, "(")?;
                        self.fmt_ast(a, f, 0)?;
                        write!(f, ")")?;
                    }
                    _ => self.fmt_ast(a, f, 2)?,
                }
                write!(f, "*")
            }
        }
    }
}

impl fmt::Display for Regex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_ast(&self.ast, f, 0)
    }
}

impl fmt::Debug for Regex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Regex({})", self)
    }
}
