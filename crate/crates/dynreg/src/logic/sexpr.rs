//! S-expression text form for formulas.
//!
//! ```text
//! (exists k (and (N j) (or (<= i j) (W a k) (not (<= k i)))))
//! ```
//!
//! Unary auxiliary relations appear as `(Name var)`, bits as bare names,
//! letters as `(W sym var)`, snapshot letters as `(Wo sym var)`. Quantifiers
//! must be prenex: once the body starts, no further quantifiers may appear.
//! `true` and `false` denote the empty conjunction/disjunction.

use super::formula::{Atom, Formula, Matrix, NodeFactory, Quant, Var};
use super::schema::Schema;
use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::rc::Rc;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SexprError {
    #[error("position {0}: {1}")]
    At(usize, String),
    #[error("quantifier inside the matrix at position {0} (formulas are prenex)")]
    NonPrenex(usize),
    #[error("unknown relation or bit '{0}'")]
    UnknownName(String),
    #[error("{0}")]
    Formula(String),
}

#[derive(Debug, PartialEq)]
enum Tok {
    Open,
    Close,
    Word(String),
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, SexprError> {
    let mut out = Vec::new();
    let mut word = String::new();
    let mut word_start = 0;
    for (i, c) in src.char_indices() {
        if c == '(' || c == ')' || c.is_whitespace() {
            if !word.is_empty() {
                out.push((word_start, Tok::Word(std::mem::take(&mut word))));
            }
            if c == '(' {
                out.push((i, Tok::Open));
            } else if c == ')' {
                out.push((i, Tok::Close));
            }
        } else {
            if word.is_empty() {
                word_start = i;
            }
            word.push(c);
        }
    }
    if !word.is_empty() {
        out.push((word_start, Tok::Word(word)));
    }
    Ok(out)
}

enum Sexp {
    Word(usize, String),
    List(usize, Vec<Sexp>),
}

fn parse_sexp(toks: &[(usize, Tok)], pos: &mut usize) -> Result<Sexp, SexprError> {
    match toks.get(*pos) {
        None => Err(SexprError::At(0, "unexpected end of input".into())),
        Some((at, Tok::Word(w))) => {
            *pos += 1;
            Ok(Sexp::Word(*at, w.clone()))
        }
        Some((at, Tok::Open)) => {
            *pos += 1;
            let mut items = Vec::new();
            loop {
                match toks.get(*pos) {
                    None => return Err(SexprError::At(*at, "unclosed '('".into())),
                    Some((_, Tok::Close)) => {
                        *pos += 1;
                        return Ok(Sexp::List(*at, items));
                    }
                    _ => items.push(parse_sexp(toks, pos)?),
                }
            }
        }
        Some((at, Tok::Close)) => Err(SexprError::At(*at, "unexpected ')'".into())),
    }
}

/// Parses a formula; free variables are whatever occurs unbound, returned in
/// the order of `expected_free` (all of which must be a superset of the
/// actual unbound variables).
pub fn formula_from_sexpr(
    src: &str,
    schema: &Schema,
    expected_free: &[&str],
) -> Result<Formula, SexprError> {
    let toks = tokenize(src)?;
    let mut pos = 0;
    let sexp = parse_sexp(&toks, &mut pos)?;
    if pos != toks.len() {
        return Err(SexprError::At(toks[pos].0, "trailing input".into()));
    }
    let mut factory = NodeFactory::new();
    let mut prefix = Vec::new();
    let mut body = &sexp;
    // Peel the quantifier prefix.
    loop {
        match body {
            Sexp::List(_, items) if items.len() == 3 => {
                if let Sexp::Word(_, head) = &items[0] {
                    if head == "exists" || head == "forall" {
                        let q = if head == "exists" {
                            Quant::Exists
                        } else {
                            Quant::Forall
                        };
                        let var = match &items[1] {
                            Sexp::Word(_, v) => Var::new(v),
                            Sexp::List(at, _) => {
                                return Err(SexprError::At(*at, "expected variable".into()))
                            }
                        };
                        prefix.push((q, var));
                        body = &items[2];
                        continue;
                    }
                }
                break;
            }
            _ => break,
        }
    }
    let matrix = matrix_from(body, schema, &mut factory)?;
    let mut used = BTreeSet::new();
    matrix.collect_vars(&mut used);
    let bound: BTreeSet<&str> = prefix.iter().map(|(_, v)| v.name()).collect();
    let mut free = Vec::new();
    for name in expected_free {
        if !bound.contains(name) {
            free.push(Var::new(name));
        }
    }
    let declared: BTreeSet<&str> = free.iter().map(|v| v.name()).collect();
    for v in &used {
        if !bound.contains(v.name()) && !declared.contains(v.name()) {
            return Err(SexprError::Formula(format!(
                "variable '{}' is neither quantified nor declared free",
                v.name()
            )));
        }
    }
    Formula::new(prefix, matrix, free).map_err(|e| SexprError::Formula(e.to_string()))
}

fn matrix_from(
    s: &Sexp,
    schema: &Schema,
    f: &mut NodeFactory,
) -> Result<Rc<Matrix>, SexprError> {
    match s {
        Sexp::Word(_, w) => match w.as_str() {
            "true" => Ok(f.bool_true()),
            "false" => Ok(f.bool_false()),
            name => {
                let bit = schema
                    .lookup_bit(name)
                    .map_err(|_| SexprError::UnknownName(name.to_string()))?;
                Ok(f.atom(Atom::Bit(bit)))
            }
        },
        Sexp::List(at, items) => {
            let head = match items.first() {
                Some(Sexp::Word(_, w)) => w.as_str(),
                _ => return Err(SexprError::At(*at, "expected an operator".into())),
            };
            match head {
                "and" | "or" => {
                    let children = items[1..]
                        .iter()
                        .map(|c| matrix_from(c, schema, f))
                        .collect::<Result<Vec<_>, _>>()?;
                    Ok(if head == "and" {
                        f.and(children)
                    } else {
                        f.or(children)
                    })
                }
                "not" => {
                    if items.len() != 2 {
                        return Err(SexprError::At(*at, "not takes one argument".into()));
                    }
                    let inner = matrix_from(&items[1], schema, f)?;
                    Ok(f.not(inner))
                }
                "exists" | "forall" => Err(SexprError::NonPrenex(*at)),
                "<=" | "=" => {
                    if items.len() != 3 {
                        return Err(SexprError::At(*at, format!("{head} takes two variables")));
                    }
                    let var = |s: &Sexp| match s {
                        Sexp::Word(_, v) => Ok(Var::new(v)),
                        Sexp::List(at, _) => {
                            Err(SexprError::At(*at, "expected variable".into()))
                        }
                    };
                    let a = var(&items[1])?;
                    let b = var(&items[2])?;
                    Ok(f.atom(if head == "<=" {
                        Atom::Le(a, b)
                    } else {
                        Atom::Eq(a, b)
                    }))
                }
                "W" | "Wo" => {
                    if items.len() != 3 {
                        return Err(SexprError::At(*at, format!("{head} takes symbol and variable")));
                    }
                    let sym = match &items[1] {
                        Sexp::Word(_, s) => schema
                            .alphabet
                            .lookup(s)
                            .map_err(|e| SexprError::At(*at, e.to_string()))?,
                        Sexp::List(at, _) => {
                            return Err(SexprError::At(*at, "expected symbol".into()))
                        }
                    };
                    let v = match &items[2] {
                        Sexp::Word(_, v) => Var::new(v),
                        Sexp::List(at, _) => {
                            return Err(SexprError::At(*at, "expected variable".into()))
                        }
                    };
                    Ok(f.atom(if head == "W" {
                        Atom::Letter(sym, v)
                    } else {
                        Atom::OldLetter(sym, v)
                    }))
                }
                name => {
                    // Unary auxiliary relation application (Name var).
                    if items.len() != 2 {
                        return Err(SexprError::At(
                            *at,
                            format!("relation '{name}' takes one variable"),
                        ));
                    }
                    let rel = schema
                        .lookup_unary(name)
                        .map_err(|_| SexprError::UnknownName(name.to_string()))?;
                    let v = match &items[1] {
                        Sexp::Word(_, v) => Var::new(v),
                        Sexp::List(at, _) => {
                            return Err(SexprError::At(*at, "expected variable".into()))
                        }
                    };
                    Ok(f.atom(Atom::Aux(rel, v)))
                }
            }
        }
    }
}

pub fn formula_to_sexpr(formula: &Formula, schema: &Schema) -> String {
    let mut out = String::new();
    for (q, v) in &formula.prefix {
        let _ = write!(
            out,
            "({} {} ",
            match q {
                Quant::Exists => "exists",
                Quant::Forall => "forall",
            },
            v.name()
        );
    }
    write_matrix(&formula.matrix, schema, &mut out);
    for _ in &formula.prefix {
        out.push(')');
    }
    out
}

fn write_matrix(m: &Matrix, schema: &Schema, out: &mut String) {
    match m {
        Matrix::Atom(a) => match a {
            Atom::Letter(s, v) => {
                let _ = write!(out, "(W {} {})", schema.alphabet.name(*s), v.name());
            }
            Atom::OldLetter(s, v) => {
                let _ = write!(out, "(Wo {} {})", schema.alphabet.name(*s), v.name());
            }
            Atom::Aux(r, v) => {
                let _ = write!(out, "({} {})", schema.unary_name(*r), v.name());
            }
            Atom::Bit(b) => {
                let _ = write!(out, "{}", schema.bit_name(*b));
            }
            Atom::Le(a, b) => {
                let _ = write!(out, "(<= {} {})", a.name(), b.name());
            }
            Atom::Eq(a, b) => {
                let _ = write!(out, "(= {} {})", a.name(), b.name());
            }
        },
        Matrix::Not(inner) => {
            out.push_str("(not ");
            write_matrix(inner, schema, out);
            out.push(')');
        }
        Matrix::And(cs) if cs.is_empty() => out.push_str("true"),
        Matrix::Or(cs) if cs.is_empty() => out.push_str("false"),
        Matrix::And(cs) | Matrix::Or(cs) => {
            out.push_str(if matches!(m, Matrix::And(_)) {
                "(and"
            } else {
                "(or"
            });
            for c in cs {
                out.push(' ');
                write_matrix(c, schema, out);
            }
            out.push(')');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::logic::{check_fragment, FragmentTag};

    fn schema() -> Schema {
        let mut s = Schema::new(Alphabet::of_chars("ab"));
        s.add_unary("N").unwrap();
        s.add_unary("P").unwrap();
        s.add_bit("q").unwrap();
        s.add_bit("c").unwrap();
        s
    }

    #[test]
    fn parses_the_update_formula_shape() {
        let src = "(exists k (and (N j) (or (<= i j) (and (not (<= i j)) (not (<= k j)) (not (<= i k)) (W a k)))))";
        let s = schema();
        let f = formula_from_sexpr(src, &s, &["j", "i"]).unwrap();
        assert_eq!(f.prefix.len(), 1);
        assert_eq!(f.free.len(), 2);
        assert!(check_fragment(&f, FragmentTag::Sigma1).ok);
        // Round-trip through text.
        let text = formula_to_sexpr(&f, &s);
        let f2 = formula_from_sexpr(&text, &s, &["j", "i"]).unwrap();
        assert_eq!(text, formula_to_sexpr(&f2, &s));
    }

    #[test]
    fn rejects_nested_quantifier() {
        let s = schema();
        let err = formula_from_sexpr("(and q (exists k (N k)))", &s, &[]).unwrap_err();
        assert!(matches!(err, SexprError::NonPrenex(_)));
    }

    #[test]
    fn rejects_unknown_relation() {
        let s = schema();
        let err = formula_from_sexpr("(Z j)", &s, &["j"]).unwrap_err();
        assert!(matches!(err, SexprError::UnknownName(_)));
    }

    #[test]
    fn bits_are_bare_words() {
        let s = schema();
        let f = formula_from_sexpr("(and q (not c))", &s, &[]).unwrap();
        assert!(check_fragment(&f, FragmentTag::Prop).ok);
        assert!(!check_fragment(&f, FragmentTag::PropPlus).ok);
    }
}
