//! Replayable text form of adversary witnesses.
//!
//! ```text
//! witness
//! mode exact
//! small 2
//! large 3
//! pi 1 3
//! build-small set a 1
//! build-small set a 2
//! build-large set a 1
//! ...
//! kill-small set b 1
//! ...
//! disagree large expected 0 reported 1
//! ```

use super::adversary::{AdversaryWitness, Disagreement, WhichWord};
use super::higman::EmbedMode;
use crate::alphabet::Alphabet;
use crate::engine::{parse_change_line, Change};
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WitnessTextError {
    #[error("line {0}: {1}")]
    Line(usize, String),
    #[error("missing '{0}' record")]
    Missing(&'static str),
}

pub fn witness_to_text(w: &AdversaryWitness, alphabet: &Alphabet) -> String {
    let mut out = String::from("witness\n");
    let _ = writeln!(
        out,
        "mode {}",
        match w.mode {
            EmbedMode::Exact => "exact",
            EmbedMode::Monotone => "monotone",
        }
    );
    let _ = writeln!(out, "small {}", w.small_n);
    let _ = writeln!(out, "large {}", w.large_n);
    let pi: Vec<String> = w.embedding.iter().map(|p| p.to_string()).collect();
    let _ = writeln!(out, "pi {}", pi.join(" "));
    let mut section = |label: &str, changes: &[Change], out: &mut String| {
        for c in changes {
            let _ = writeln!(out, "{label} set {} {}", alphabet.token(c.sym), c.pos);
        }
    };
    section("build-small", &w.build_small, &mut out);
    section("build-large", &w.build_large, &mut out);
    section("kill-small", &w.kill_small, &mut out);
    section("kill-large", &w.kill_large, &mut out);
    let _ = writeln!(
        out,
        "disagree {} expected {} reported {}",
        match w.disagreement.which {
            WhichWord::Small => "small",
            WhichWord::Large => "large",
        },
        u8::from(w.disagreement.expected),
        u8::from(w.disagreement.reported)
    );
    out
}

pub fn witness_from_text(
    text: &str,
    alphabet: &Alphabet,
) -> Result<AdversaryWitness, WitnessTextError> {
    let mut mode = None;
    let mut small_n = None;
    let mut large_n = None;
    let mut embedding = None;
    let mut build_small = Vec::new();
    let mut build_large = Vec::new();
    let mut kill_small = Vec::new();
    let mut kill_large = Vec::new();
    let mut disagreement = None;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line == "witness" {
            continue;
        }
        let bad = |msg: String| WitnessTextError::Line(lineno, msg);
        let (kind, rest) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| bad("expected 'kind args'".into()))?;
        let rest = rest.trim();
        match kind {
            "mode" => {
                mode = Some(match rest {
                    "exact" => EmbedMode::Exact,
                    "monotone" => EmbedMode::Monotone,
                    other => return Err(bad(format!("unknown mode '{other}'"))),
                })
            }
            "small" => small_n = Some(rest.parse().map_err(|_| bad("bad size".into()))?),
            "large" => large_n = Some(rest.parse().map_err(|_| bad("bad size".into()))?),
            "pi" => {
                embedding = Some(
                    rest.split_whitespace()
                        .map(|t| t.parse::<usize>().map_err(|_| bad("bad position".into())))
                        .collect::<Result<Vec<_>, _>>()?,
                )
            }
            "build-small" | "build-large" | "kill-small" | "kill-large" => {
                let change = parse_change_line(alphabet, rest).map_err(bad)?;
                match kind {
                    "build-small" => build_small.push(change),
                    "build-large" => build_large.push(change),
                    "kill-small" => kill_small.push(change),
                    _ => kill_large.push(change),
                }
            }
            "disagree" => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                match parts.as_slice() {
                    [which, "expected", e, "reported", r] => {
                        let which = match *which {
                            "small" => WhichWord::Small,
                            "large" => WhichWord::Large,
                            other => return Err(bad(format!("unknown word '{other}'"))),
                        };
                        let parse_bit = |s: &str| match s {
                            "0" => Ok(false),
                            "1" => Ok(true),
                            _ => Err(bad("bits are 0 or 1".into())),
                        };
                        disagreement = Some(Disagreement {
                            which,
                            expected: parse_bit(e)?,
                            reported: parse_bit(r)?,
                        });
                    }
                    _ => return Err(bad("expected '<word> expected <b> reported <b>'".into())),
                }
            }
            other => return Err(bad(format!("unknown record '{other}'"))),
        }
    }
    Ok(AdversaryWitness {
        mode: mode.ok_or(WitnessTextError::Missing("mode"))?,
        small_n: small_n.ok_or(WitnessTextError::Missing("small"))?,
        large_n: large_n.ok_or(WitnessTextError::Missing("large"))?,
        embedding: embedding.ok_or(WitnessTextError::Missing("pi"))?,
        build_small,
        build_large,
        kill_small,
        kill_large,
        disagreement: disagreement.ok_or(WitnessTextError::Missing("disagree"))?,
    })
}
