use super::regex::{Regex, RegexAst};
use crate::alphabet::Alphabet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RegexError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("symbol '{sym}' at position {pos} is not in the alphabet")]
    UnknownSymbol { pos: usize, sym: char },
}

/// Recursive-descent parser for the regex surface syntax.
///
/// Operators by precedence: `*` (postfix), juxtaposition (concatenation),
/// `+` (union). `1` denotes the empty word, parentheses group. Symbols are
/// single characters and must belong to the alphabet.
pub fn parse_regex(src: &str, alphabet: &Alphabet) -> Result<Regex, RegexError> {
    let mut p = Parser {
        chars: src.chars().collect(),
        pos: 0,
        alphabet,
    };
    p.skip_ws();
    let ast = p.union()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(Regex {
        ast,
        alphabet: alphabet.clone(),
    })
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    alphabet: &'a Alphabet,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> RegexError {
        RegexError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn union(&mut self) -> Result<RegexAst, RegexError> {
        let mut left = self.concat()?;
        loop {
            self.skip_ws();
            if self.peek() == Some('+') {
                self.pos += 1;
                self.skip_ws();
                let right = self.concat()?;
                left = RegexAst::Union(Box::new(left), Box::new(right));
            } else {
                return Ok(left);
            }
        }
    }

    fn concat(&mut self) -> Result<RegexAst, RegexError> {
        let mut left = self.starred()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(')') | Some('+') | None => return Ok(left),
                Some('*') => return Err(self.err("unexpected '*'")),
                Some(_) => {
                    let right = self.starred()?;
                    left = RegexAst::Concat(Box::new(left), Box::new(right));
                }
            }
        }
    }

    fn starred(&mut self) -> Result<RegexAst, RegexError> {
        let mut base = self.base()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            base = RegexAst::Star(Box::new(base));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<RegexAst, RegexError> {
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some('(') => {
                let open_pos = self.pos;
                self.pos += 1;
                self.skip_ws();
                let inner = self.union()?;
                self.skip_ws();
                if self.peek() == Some(')') {
                    self.pos += 1;
                    Ok(inner)
                } else {
                    Err(RegexError::Syntax {
                        pos: open_pos,
                        msg: "unbalanced parenthesis".to_string(),
                    })
                }
            }
            Some(')') => Err(self.err("unexpected ')'")),
            Some('1') => {
                self.pos += 1;
                Ok(RegexAst::Epsilon)
            }
            Some('0') => {
                self.pos += 1;
                Ok(RegexAst::Empty)
            }
            Some(c) => {
                let mut buf = [0u8; 4];
                let name: &str = c.encode_utf8(&mut buf);
                match self.alphabet.lookup(name) {
                    Ok(id) => {
                        self.pos += 1;
                        Ok(RegexAst::Letter(id))
                    }
                    Err(_) => Err(RegexError::UnknownSymbol { pos: self.pos, sym: c }),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;

    fn ab() -> Alphabet {
        Alphabet::of_chars("ab")
    }

    #[test]
    fn parses_with_standard_precedence() {
        let r = parse_regex("(a+b)*a(a+b)*", &ab()).unwrap();
        assert_eq!(r.to_string(), "(a+b)*a(a+b)*");
        // star > concat > union
        let r = parse_regex("ab+ba*", &ab()).unwrap();
        assert_eq!(r.to_string(), "ab+ba*");
    }

    #[test]
    fn union_free_ast_depth() {
        let a = Alphabet::of_chars("a");
        let r = parse_regex("(aa)*", &a).unwrap();
        use RegexAst::*;
        match &r.ast {
            Star(inner) => match &**inner {
                Concat(x, y) => {
                    assert!(matches!(**x, Letter(_)));
                    assert!(matches!(**y, Letter(_)));
                }
                other => panic!("expected concat, got {other:?}"),
            },
            other => panic!("expected star, got {other:?}"),
        }
        assert!(!r.ast.contains_union());
    }

    #[test]
    fn unbalanced_paren_reports_position() {
        let a = Alphabet::of_chars("a");
        let err = parse_regex("((a", &a).unwrap_err();
        match err {
            RegexError::Syntax { msg, .. } => assert!(msg.contains("unbalanced")),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn rejects_symbols_outside_alphabet() {
        let a = Alphabet::of_chars("a");
        let err = parse_regex("ac", &a).unwrap_err();
        assert!(matches!(err, RegexError::UnknownSymbol { sym: 'c', .. }));
    }

    #[test]
    fn epsilon_literal() {
        let r = parse_regex("1+a", &Alphabet::of_chars("a")).unwrap();
        assert!(matches!(r.ast, RegexAst::Union(_, _)));
    }
}
