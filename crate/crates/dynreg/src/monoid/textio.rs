//! Text serialization of monoids and ordered monoids.
//!
//! ```text
//! size 2
//! identity 0
//! row 0: 0 1
//! row 1: 1 1
//! order 0: 1 1
//! order 1: 0 1
//! ```
//!
//! The `order` rows are optional; without them the record describes a plain
//! monoid.

use super::core::FiniteMonoid;
use super::ordered::OrderedMonoid;
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MonoidTextError {
    #[error("line {0}: {1}")]
    Line(usize, String),
    #[error("missing '{0}' record")]
    Missing(&'static str),
    #[error("{0}")]
    Invalid(String),
}

pub fn monoid_to_text(m: &FiniteMonoid) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "size {}", m.size());
    let _ = writeln!(out, "identity {}", m.identity());
    for x in m.elems() {
        let row: Vec<String> = m.elems().map(|y| m.mul(x, y).to_string()).collect();
        let _ = writeln!(out, "row {}: {}", x, row.join(" "));
    }
    out
}

pub fn ordered_monoid_to_text(om: &OrderedMonoid) -> String {
    let mut out = monoid_to_text(&om.monoid);
    for x in om.monoid.elems() {
        let row: Vec<&str> = om
            .monoid
            .elems()
            .map(|y| if om.le(x, y) { "1" } else { "0" })
            .collect();
        let _ = writeln!(out, "order {}: {}", x, row.join(" "));
    }
    out
}

struct Parsed {
    size: usize,
    identity: usize,
    rows: Vec<Option<Vec<usize>>>,
    order: Vec<Option<Vec<bool>>>,
    has_order: bool,
}

fn parse(text: &str) -> Result<Parsed, MonoidTextError> {
    let mut size = None;
    let mut identity = None;
    let mut rows: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut order: Vec<(usize, Vec<bool>)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |msg: String| MonoidTextError::Line(idx + 1, msg);
        let (kind, rest) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| bad("expected 'kind value'".into()))?;
        let rest = rest.trim();
        match kind {
            "size" => size = Some(rest.parse().map_err(|_| bad("bad size".into()))?),
            "identity" => identity = Some(rest.parse().map_err(|_| bad("bad identity".into()))?),
            "row" | "order" => {
                let (which, entries) = rest
                    .split_once(':')
                    .ok_or_else(|| bad(format!("expected '{kind} i: entries')")))?;
                let i: usize = which
                    .trim()
                    .parse()
                    .map_err(|_| bad("bad row index".into()))?;
                if kind == "row" {
                    let vals = entries
                        .split_whitespace()
                        .map(|t| t.parse::<usize>().map_err(|_| bad("bad entry".into())))
                        .collect::<Result<Vec<_>, _>>()?;
                    rows.push((i, vals));
                } else {
                    let vals = entries
                        .split_whitespace()
                        .map(|t| match t {
                            "0" => Ok(false),
                            "1" => Ok(true),
                            _ => Err(bad("order entries must be 0/1".into())),
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    order.push((i, vals));
                }
            }
            other => return Err(bad(format!("unknown record '{other}'"))),
        }
    }
    let size = size.ok_or(MonoidTextError::Missing("size"))?;
    let identity = identity.ok_or(MonoidTextError::Missing("identity"))?;
    let mut row_slots: Vec<Option<Vec<usize>>> = vec![None; size];
    for (i, vals) in rows {
        if i >= size {
            return Err(MonoidTextError::Invalid(format!("row index {i} out of range")));
        }
        row_slots[i] = Some(vals);
    }
    let mut order_slots: Vec<Option<Vec<bool>>> = vec![None; size];
    let has_order = !order.is_empty();
    for (i, vals) in order {
        if i >= size {
            return Err(MonoidTextError::Invalid(format!(
                "order index {i} out of range"
            )));
        }
        order_slots[i] = Some(vals);
    }
    Ok(Parsed {
        size,
        identity,
        rows: row_slots,
        order: order_slots,
        has_order,
    })
}

pub fn monoid_from_text(text: &str) -> Result<FiniteMonoid, MonoidTextError> {
    let p = parse(text)?;
    build_monoid(&p)
}

fn build_monoid(p: &Parsed) -> Result<FiniteMonoid, MonoidTextError> {
    let rows = p
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            r.clone()
                .ok_or_else(|| MonoidTextError::Invalid(format!("missing row {i}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    FiniteMonoid::new(rows, p.identity).map_err(|e| MonoidTextError::Invalid(e.to_string()))
}

pub fn ordered_monoid_from_text(text: &str) -> Result<OrderedMonoid, MonoidTextError> {
    let p = parse(text)?;
    let monoid = build_monoid(&p)?;
    if !p.has_order {
        return Err(MonoidTextError::Missing("order"));
    }
    let leq = p
        .order
        .iter()
        .enumerate()
        .map(|(i, r)| {
            r.clone()
                .ok_or_else(|| MonoidTextError::Invalid(format!("missing order row {i}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    OrderedMonoid::new(monoid, leq).map_err(|e| MonoidTextError::Invalid(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::ordered::u1_minus;

    #[test]
    fn monoid_roundtrip() {
        let m = FiniteMonoid::cyclic(3);
        let text = monoid_to_text(&m);
        let back = monoid_from_text(&text).unwrap();
        assert_eq!(back.size(), 3);
        for x in m.elems() {
            for y in m.elems() {
                assert_eq!(m.mul(x, y), back.mul(x, y));
            }
        }
    }

    #[test]
    fn ordered_roundtrip_and_corrupt_table() {
        let om = u1_minus();
        let text = ordered_monoid_to_text(&om);
        let back = ordered_monoid_from_text(&text).unwrap();
        assert!(back.le(1, 0));
        assert!(!back.le(0, 1));

        // Corrupt the multiplication table: associativity must be caught.
        let corrupt = "size 2\nidentity 0\nrow 0: 0 1\nrow 1: 0 1\n";
        assert!(matches!(
            monoid_from_text(corrupt),
            Err(MonoidTextError::Invalid(_))
        ));
    }
}
