//! Test support: independent oracles and enumeration helpers.
//!
//! Everything here is deliberately naive and kept separate from the
//! implementations it is used to check. Tests compare the clever code paths
//! (subset construction, Green's-relation formulas, update-formula programs)
//! against these brute-force definitions.

use crate::alphabet::SymId;
use crate::lang::{Regex, RegexAst};

/// Direct recursive regex matcher; exponential, for short words only.
pub fn regex_matches(r: &Regex, word: &[SymId]) -> bool {
    ast_matches(&r.ast, word)
}

fn ast_matches(ast: &RegexAst, word: &[SymId]) -> bool {
    match ast {
        RegexAst::Empty => false,
        RegexAst::Epsilon => word.is_empty(),
        RegexAst::Letter(s) => word == [*s],
        RegexAst::Union(a, b) => ast_matches(a, word) || ast_matches(b, word),
        RegexAst::Concat(a, b) => (0..=word.len())
            .any(|i| ast_matches(a, &word[..i]) && ast_matches(b, &word[i..])),
        RegexAst::Star(a) => {
            if word.is_empty() {
                return true;
            }
            // First factor must be non-empty, otherwise recursion never ends.
            (1..=word.len()).any(|i| ast_matches(a, &word[..i]) && ast_matches(ast, &word[i..]))
        }
    }
}

/// All words over `k` symbols of length at most `max_len`, shortlex order.
pub fn words_up_to(k: usize, max_len: usize) -> Vec<Vec<SymId>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for s in 0..k {
                let mut w2 = w.clone();
                w2.push(SymId(s as u16));
                out.push(w2.clone());
                next.push(w2);
            }
        }
        frontier = next;
    }
    out
}

/// All words of exactly length `len` over `k` symbols.
pub fn words_of_len(k: usize, len: usize) -> Vec<Vec<SymId>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &out {
            for s in 0..k {
                let mut w2 = w.clone();
                w2.push(SymId(s as u16));
                next.push(w2);
            }
        }
        out = next;
    }
    out
}

/// Deterministic, platform-stable pseudorandom stream (splitmix64).
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Derives an independent substream; used to make trials reproducible
    /// regardless of interleaving.
    pub fn substream(&self, index: u64) -> Self {
        let mut base = Self::new(self.state ^ (0x9e37_79b9_7f4a_7c15u64.wrapping_mul(index + 1)));
        base.next_u64();
        base
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform value in `0..bound` (bound > 0).
    pub fn below(&mut self, bound: usize) -> usize {
        (self.next_u64() % bound as u64) as usize
    }

    pub fn chance(&mut self, num: u32, den: u32) -> bool {
        (self.next_u64() % den as u64) < num as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::lang::{compile_min_dfa, parse_regex};

    #[test]
    fn matcher_agrees_with_compiled_dfa_on_short_words() {
        let corpus = [
            ("(a+b)*a(a+b)*", "ab"),
            ("(aa)*", "a"),
            ("b*", "ab"),
            ("(ab)*", "ab"),
            ("(a+b)*a", "ab"),
            ("(a+b)*aa(a+b)*", "ab"),
            ("a(a+b)*b", "ab"),
            ("1+ab+ba", "ab"),
        ];
        for (src, alpha) in corpus {
            let r = parse_regex(src, &Alphabet::of_chars(alpha)).unwrap();
            let d = compile_min_dfa(&r);
            for w in words_up_to(alpha.len(), 8) {
                assert_eq!(
                    regex_matches(&r, &w),
                    d.accepts_symbols(&w),
                    "disagreement on {src} for {w:?}"
                );
            }
        }
    }

    #[test]
    fn myhill_nerode_class_count_matches_dfa_size() {
        // Approximate Nerode classes: prefixes up to length 6 distinguished by
        // extensions up to length 6.
        let cases = [("(a+b)*a(a+b)*", "ab", 2), ("(aa)*", "a", 2), ("b*", "ab", 2)];
        for (src, alpha, expect) in cases {
            let r = parse_regex(src, &Alphabet::of_chars(alpha)).unwrap();
            let exts = words_up_to(alpha.len(), 6);
            let mut signatures = std::collections::BTreeSet::new();
            for p in words_up_to(alpha.len(), 6) {
                let sig: Vec<bool> = exts
                    .iter()
                    .map(|e| {
                        let mut w = p.clone();
                        w.extend_from_slice(e);
                        regex_matches(&r, &w)
                    })
                    .collect();
                signatures.insert(sig);
            }
            assert_eq!(signatures.len(), expect, "nerode count for {src}");
            assert_eq!(compile_min_dfa(&r).states(), expect, "dfa size for {src}");
        }
    }

    #[test]
    fn splitmix_is_deterministic() {
        let mut a = SplitMix64::new(42);
        let mut b = SplitMix64::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        // Frozen first value so cross-platform drift would be caught.
        assert_eq!(SplitMix64::new(0).next_u64(), 16294208416658607535);
    }
}
