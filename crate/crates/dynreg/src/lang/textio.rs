//! Text serialization of DFAs.
//!
//! One item per line:
//! ```text
//! states 3
//! start 0
//! accept 0,2
//! trans 0,a,1
//! trans 0,b,0
//! ...
//! ```

use super::dfa::Dfa;
use crate::alphabet::Alphabet;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DfaTextError {
    #[error("line {0}: {1}")]
    Line(usize, String),
    #[error("missing '{0}' record")]
    Missing(&'static str),
    #[error("transition table is not total: state {0} lacks symbol '{1}'")]
    NotTotal(usize, String),
}

impl Dfa {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "states {}", self.states());
        let _ = writeln!(out, "start {}", self.start);
        let accept: Vec<String> = self.accepting.iter().map(|s| s.to_string()).collect();
        let _ = writeln!(out, "accept {}", accept.join(","));
        for (s, row) in self.delta.iter().enumerate() {
            for (i, t) in row.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "trans {},{},{}",
                    s,
                    self.alphabet.name(crate::alphabet::SymId(i as u16)),
                    t
                );
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Dfa, DfaTextError> {
        let mut states: Option<usize> = None;
        let mut start: Option<usize> = None;
        let mut accept: Option<BTreeSet<usize>> = None;
        let mut trans: Vec<(usize, String, usize)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |msg: &str| DfaTextError::Line(idx + 1, msg.to_string());
            let (kind, rest) = line.split_once(char::is_whitespace).ok_or_else(|| bad("expected 'kind value'"))?;
            let rest = rest.trim();
            match kind {
                "states" => {
                    states = Some(rest.parse().map_err(|_| bad("bad state count"))?);
                }
                "start" => {
                    start = Some(rest.parse().map_err(|_| bad("bad start state"))?);
                }
                "accept" => {
                    let mut set = BTreeSet::new();
                    if !rest.is_empty() {
                        for item in rest.split(',') {
                            let item = item.trim();
                            if item.is_empty() {
                                continue;
                            }
                            set.insert(item.parse().map_err(|_| bad("bad accepting state"))?);
                        }
                    }
                    accept = Some(set);
                }
                "trans" => {
                    let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
                    if parts.len() != 3 {
                        return Err(bad("expected 'trans state,symbol,state'"));
                    }
                    let from = parts[0].parse().map_err(|_| bad("bad source state"))?;
                    let to = parts[2].parse().map_err(|_| bad("bad target state"))?;
                    trans.push((from, parts[1].to_string(), to));
                }
                other => return Err(bad(&format!("unknown record '{other}'"))),
            }
        }
        let states = states.ok_or(DfaTextError::Missing("states"))?;
        let start = start.ok_or(DfaTextError::Missing("start"))?;
        let accept = accept.ok_or(DfaTextError::Missing("accept"))?;
        let symbols: BTreeSet<&str> = trans.iter().map(|(_, s, _)| s.as_str()).collect();
        let alphabet = Alphabet::new(symbols.iter().copied())
            .map_err(|e| DfaTextError::Line(0, e.to_string()))?;
        let mut table: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (from, sym, to) in &trans {
            let sym_id = alphabet.lookup(sym).expect("symbol from its own set");
            table.insert((*from, sym_id.0 as usize), *to);
        }
        let mut delta = Vec::with_capacity(states);
        for s in 0..states {
            let mut row = Vec::with_capacity(alphabet.len());
            for sym in alphabet.ids() {
                match table.get(&(s, sym.0 as usize)) {
                    Some(&t) => row.push(t),
                    None => {
                        return Err(DfaTextError::NotTotal(s, alphabet.name(sym).to_string()))
                    }
                }
            }
            delta.push(row);
        }
        Ok(Dfa::new(alphabet, delta, start, accept))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{compile_min_dfa, parse_regex};

    #[test]
    fn roundtrip() {
        let d = compile_min_dfa(&parse_regex("(ab)*", &Alphabet::of_chars("ab")).unwrap());
        let text = d.to_text();
        let back = Dfa::from_text(&text).unwrap();
        assert_eq!(d, back);
    }

    #[test]
    fn partial_table_is_rejected() {
        let text = "states 2\nstart 0\naccept 1\ntrans 0,a,1\n";
        // state 1 has no 'a' transition
        assert!(matches!(
            Dfa::from_text(text),
            Err(DfaTextError::NotTotal(1, _))
        ));
    }
}
