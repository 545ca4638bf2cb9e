//! Program file format and trace lines.
//!
//! A program file is line-based:
//!
//! ```text
//! program example1
//! fragment sigma1
//! alphabet a b
//! unary N' init none
//! bit c init 1
//! bit q init 0
//! query q
//! intent N' complement-flagged next-letter relation
//! update N' a (exists k (and ...))
//! member 1 q1
//! ```
//!
//! `update <target> <symbol> <s-expression>` supplies the update formula for
//! one (relation-or-bit, change-symbol) pair; the symbol `eps` is the
//! epsilon change. Unary update formulas may use the free variables `x`
//! (recomputed position) and `y` (changed position); bit formulas only `y`.
//! Only unary relations and bits can be declared, which is exactly the
//! unary-auxiliary regime the engine supports.

use super::program::{DynamicProgram, Initializer, Target, UpdateMap};
use super::state::Change;
use crate::alphabet::Alphabet;
use crate::logic::{
    formula_from_sexpr, formula_to_sexpr, FragmentTag, Schema, SchemaError, SexprError,
};
use std::collections::BTreeMap;
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProgramTextError {
    #[error("line {0}: {1}")]
    Line(usize, String),
    #[error("line {0}: {1}")]
    Schema(usize, SchemaError),
    #[error("line {0}: formula error: {1}")]
    Formula(usize, SexprError),
    #[error("missing '{0}' declaration")]
    Missing(&'static str),
    #[error("program is invalid: {0}")]
    Invalid(String),
}

pub fn program_from_text(text: &str) -> Result<DynamicProgram, ProgramTextError> {
    let mut name = String::from("unnamed");
    let mut fragment: Option<FragmentTag> = None;
    let mut alphabet: Option<Alphabet> = None;
    let mut schema: Option<Schema> = None;
    let mut unary_full: Vec<bool> = Vec::new();
    let mut bit_init: Vec<bool> = Vec::new();
    let mut query: Option<String> = None;
    let mut updates_raw: Vec<(usize, String, String, String)> = Vec::new();
    let mut member_bits: BTreeMap<String, String> = BTreeMap::new();
    let mut intents: BTreeMap<String, String> = BTreeMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |msg: &str| ProgramTextError::Line(lineno, msg.to_string());
        let (kind, rest) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| bad("expected 'kind args'"))?;
        let rest = rest.trim();
        match kind {
            "program" => name = rest.to_string(),
            "fragment" => {
                fragment =
                    Some(FragmentTag::parse(rest).ok_or_else(|| bad("unknown fragment tag"))?);
            }
            "alphabet" => {
                let a = Alphabet::new(rest.split_whitespace())
                    .map_err(|e| bad(&e.to_string()))?;
                schema = Some(Schema::new(a.clone()));
                alphabet = Some(a);
            }
            "unary" | "bit" => {
                let schema = schema
                    .as_mut()
                    .ok_or_else(|| bad("alphabet must be declared first"))?;
                let mut parts = rest.split_whitespace();
                let rel_name = parts.next().ok_or_else(|| bad("missing name"))?;
                match (parts.next(), parts.next()) {
                    (Some("init"), Some(v)) => {
                        if kind == "unary" {
                            let full = match v {
                                "all" => true,
                                "none" => false,
                                _ => return Err(bad("unary init must be 'all' or 'none'")),
                            };
                            schema
                                .add_unary(rel_name)
                                .map_err(|e| ProgramTextError::Schema(lineno, e))?;
                            unary_full.push(full);
                        } else {
                            let b = match v {
                                "1" => true,
                                "0" => false,
                                _ => return Err(bad("bit init must be 0 or 1")),
                            };
                            schema
                                .add_bit(rel_name)
                                .map_err(|e| ProgramTextError::Schema(lineno, e))?;
                            bit_init.push(b);
                        }
                    }
                    _ => return Err(bad("expected '<name> init <value>'")),
                }
                if parts.next().is_some() {
                    return Err(bad("trailing tokens"));
                }
            }
            "query" => query = Some(rest.to_string()),
            "intent" =>stash_intent(rest, &mut intents, lineno)?,
            "update" => {
                let (target, rest2) = rest
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| bad("expected 'update <target> <symbol> <formula>'"))?;
                let (sym, formula) = rest2
                    .trim()
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| bad("expected a formula"))?;
                updates_raw.push((
                    lineno,
                    target.to_string(),
                    sym.to_string(),
                    formula.trim().to_string(),
                ));
            }
            "member" => {
                let mut parts = rest.split_whitespace();
                let label = parts.next().ok_or_else(|| bad("missing element label"))?;
                let bit = parts.next().ok_or_else(|| bad("missing bit name"))?;
                member_bits.insert(label.to_string(), bit.to_string());
            }
            other => return Err(bad(&format!("unknown record '{other}'"))),
        }
    }

    let schema = schema.ok_or(ProgramTextError::Missing("alphabet"))?;
    let alphabet = alphabet.expect("set together with schema");
    let fragment = fragment.ok_or(ProgramTextError::Missing("fragment"))?;
    let query = query.ok_or(ProgramTextError::Missing("query"))?;
    let query_bit = schema
        .lookup_bit(&query)
        .map_err(|e| ProgramTextError::Invalid(e.to_string()))?;

    let mut updates: UpdateMap = BTreeMap::new();
    for (lineno, target_name, sym_token, formula_src) in updates_raw {
        let sym = alphabet
            .lookup_or_epsilon(&sym_token)
            .map_err(|e| ProgramTextError::Line(lineno, e.to_string()))?;
        let (target, free_vars): (Target, &[&str]) = if schema.has_unary(&target_name) {
            (Target::Unary(schema.lookup_unary(&target_name).unwrap()), &["x", "y"])
        } else if schema.has_bit(&target_name) {
            (Target::Bit(schema.lookup_bit(&target_name).unwrap()), &["y"])
        } else {
            return Err(ProgramTextError::Line(
                lineno,
                format!("unknown update target '{target_name}'"),
            ));
        };
        let formula = formula_from_sexpr(&formula_src, &schema, free_vars)
            .map_err(|e| ProgramTextError::Formula(lineno, e))?;
        if updates.insert((target, sym), formula).is_some() {
            return Err(ProgramTextError::Line(
                lineno,
                format!("duplicate update for {target_name}/{sym_token}"),
            ));
        }
    }

    let member_bits = member_bits
        .into_iter()
        .map(|(label, bit_name)| {
            schema
                .lookup_bit(&bit_name)
                .map(|b| (label, b))
                .map_err(|e| ProgramTextError::Invalid(e.to_string()))
        })
        .collect::<Result<BTreeMap<_, _>, _>>()?;

    let program = DynamicProgram {
        name,
        schema,
        fragment,
        updates,
        init: Initializer {
            unary_full,
            bits: bit_init,
        },
        query_bit,
        member_bits,
        intents,
    };
    program
        .validate()
        .map_err(|e| ProgramTextError::Invalid(e.to_string()))?;
    Ok(program)
}

fn stash_intent(
    rest: &str,
    intents: &mut BTreeMap<String, String>,
    lineno: usize,
) -> Result<(), ProgramTextError> {
    let (target, text) = rest
        .split_once(char::is_whitespace)
        .ok_or_else(|| ProgramTextError::Line(lineno, "expected 'intent <target> <text>'".into()))?;
    intents.insert(target.to_string(), text.trim().to_string());
    Ok(())
}

pub fn program_to_text(p: &DynamicProgram) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "program {}", p.name);
    let _ = writeln!(out, "fragment {}", p.fragment.as_str());
    let _ = writeln!(
        out,
        "alphabet {}",
        p.schema.alphabet.names().collect::<Vec<_>>().join(" ")
    );
    for (i, name) in p.schema.unary_names().enumerate() {
        let init = if p.init.unary_full[i] { "all" } else { "none" };
        let _ = writeln!(out, "unary {name} init {init}");
    }
    for (i, name) in p.schema.bit_names().enumerate() {
        let init = if p.init.bits[i] { "1" } else { "0" };
        let _ = writeln!(out, "bit {name} init {init}");
    }
    let _ = writeln!(out, "query {}", p.schema.bit_name(p.query_bit));
    for (label, bit) in &p.member_bits {
        let _ = writeln!(out, "member {label} {}", p.schema.bit_name(*bit));
    }
    for (target, text) in &p.intents {
        let _ = writeln!(out, "intent {target} {text}");
    }
    for ((target, sym), formula) in &p.updates {
        let _ = writeln!(
            out,
            "update {} {} {}",
            p.target_name(*target),
            p.schema.alphabet.token(*sym),
            formula_to_sexpr(formula, &p.schema)
        );
    }
    out
}

/// Renders a trace step as `set σ i -> bit b`.
pub fn trace_line(alphabet: &Alphabet, change: Change, bit: bool) -> String {
    format!(
        "set {} {} -> bit {}",
        alphabet.token(change.sym),
        change.pos,
        u8::from(bit)
    )
}

/// Parses `set σ i`; used by the CLI stdin protocol and replay scripts.
pub fn parse_change_line(alphabet: &Alphabet, line: &str) -> Result<Change, String> {
    let mut parts = line.split_whitespace();
    match (parts.next(), parts.next(), parts.next(), parts.next()) {
        (Some("set"), Some(sym), Some(pos), None) => {
            let sym = alphabet
                .lookup_or_epsilon(sym)
                .map_err(|e| e.to_string())?;
            let pos: usize = pos.parse().map_err(|_| "bad position".to_string())?;
            Ok(Change { pos, sym })
        }
        _ => Err(format!("expected 'set <symbol> <position>', got '{line}'")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::example1_program;

    #[test]
    fn example1_roundtrips_through_text() {
        let p = example1_program();
        let text = program_to_text(&p);
        let p2 = program_from_text(&text).unwrap();
        assert_eq!(program_to_text(&p2), text);
        assert_eq!(p2.fragment, p.fragment);
        assert_eq!(p2.schema, p.schema);
    }

    #[test]
    fn trace_and_change_lines() {
        let p = example1_program();
        let a = Some(p.schema.alphabet.lookup("a").unwrap());
        let c = parse_change_line(&p.schema.alphabet, "set a 3").unwrap();
        assert_eq!(c.pos, 3);
        assert_eq!(c.sym, a);
        assert_eq!(trace_line(&p.schema.alphabet, c, true), "set a 3 -> bit 1");
        let e = parse_change_line(&p.schema.alphabet, "set eps 1").unwrap();
        assert_eq!(e.sym, None);
        assert!(parse_change_line(&p.schema.alphabet, "put a 1").is_err());
    }

    #[test]
    fn rejects_duplicate_updates_and_unknown_targets() {
        let src = "\
fragment prop
alphabet a
bit q init 0
query q
update q a true
update q a false
";
        assert!(matches!(
            program_from_text(src),
            Err(ProgramTextError::Line(6, _))
        ));
        let src2 = "\
fragment prop
alphabet a
bit q init 0
query q
update zz a true
";
        assert!(program_from_text(src2).is_err());
    }
}
