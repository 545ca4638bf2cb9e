use crate::alphabet::SymId;
use crate::engine::{AuxStore, DynamicProgram, WordState};

/// The type of one position: its letter (or epsilon) and the set of unary
/// auxiliary relations holding there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosType {
    pub letter: Option<SymId>,
    pub rels: Vec<bool>,
}

impl PosType {
    /// Exact type equality.
    pub fn equals(&self, other: &PosType) -> bool {
        self == other
    }

    /// Type containment: every fact here also holds there. An epsilon
    /// position imposes no letter fact.
    pub fn contained_in(&self, other: &PosType) -> bool {
        let letter_ok = match self.letter {
            None => true,
            Some(s) => other.letter == Some(s),
        };
        letter_ok
            && self
                .rels
                .iter()
                .zip(&other.rels)
                .all(|(&a, &b)| !a || b)
    }
}

/// A word annotated with per-position types.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypedWord {
    pub types: Vec<PosType>,
}

impl TypedWord {
    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }
}

/// Extracts the type sequence of a (word, aux) state under a program's
/// schema.
pub fn type_sequence(program: &DynamicProgram, word: &WordState, aux: &AuxStore) -> TypedWord {
    let n = word.n();
    let types = (1..=n)
        .map(|pos| PosType {
            letter: word.get(pos),
            rels: (0..program.schema.unary_count())
                .map(|r| aux.unary_at(r as u32, pos))
                .collect(),
        })
        .collect();
    TypedWord { types }
}

/// Embedding comparison mode: exact type equality (the quantifier-free
/// substructure argument) or type containment (the positive-existential one).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmbedMode {
    Exact,
    Monotone,
}

impl EmbedMode {
    fn fits(self, small: &PosType, large: &PosType) -> bool {
        match self {
            EmbedMode::Exact => small.equals(large),
            EmbedMode::Monotone => small.contained_in(large),
        }
    }
}

/// Greedy leftmost subsequence embedding of `small` into `large`; returns the
/// 1-based image positions. Greedy matching is complete for subsequence
/// embedding: if any embedding exists, the leftmost one does.
pub fn embed(small: &TypedWord, large: &TypedWord, mode: EmbedMode) -> Option<Vec<usize>> {
    let mut image = Vec::with_capacity(small.len());
    let mut next = 0usize;
    for t in &small.types {
        let mut found = None;
        for (i, cand) in large.types.iter().enumerate().skip(next) {
            if mode.fits(t, cand) {
                found = Some(i);
                break;
            }
        }
        let i = found?;
        image.push(i + 1);
        next = i + 1;
    }
    Some(image)
}

/// Finds the first pair (by smallest combined length, then smallest short
/// side) of distinct sequences where the shorter embeds into the longer.
/// Returns indices into `seqs` plus the embedding.
pub fn find_higman_pair(
    seqs: &[TypedWord],
    mode: EmbedMode,
) -> Option<(usize, usize, Vec<usize>)> {
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..seqs.len() {
        for j in 0..seqs.len() {
            if seqs[i].len() < seqs[j].len() {
                pairs.push((i, j));
            }
        }
    }
    pairs.sort_by_key(|&(i, j)| (seqs[i].len() + seqs[j].len(), seqs[i].len()));
    for (i, j) in pairs {
        if let Some(pi) = embed(&seqs[i], &seqs[j], mode) {
            return Some((i, j, pi));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tw(types: &[(Option<u16>, &[bool])]) -> TypedWord {
        TypedWord {
            types: types
                .iter()
                .map(|(l, r)| PosType {
                    letter: l.map(SymId),
                    rels: r.to_vec(),
                })
                .collect(),
        }
    }

    #[test]
    fn single_type_alphabet_pigeonholes_immediately() {
        let seqs = vec![
            tw(&[(Some(0), &[false])]),
            tw(&[(Some(0), &[false]), (Some(0), &[false])]),
        ];
        let (i, j, pi) = find_higman_pair(&seqs, EmbedMode::Exact).unwrap();
        assert_eq!((i, j), (0, 1));
        assert_eq!(pi, vec![1]);
    }

    #[test]
    fn crafted_list_without_embedding() {
        // Types alternate so that no shorter sequence embeds: w1 = [T],
        // w2 = [F, F]. T never occurs in w2.
        let seqs = vec![
            tw(&[(Some(0), &[true])]),
            tw(&[(Some(0), &[false]), (Some(0), &[false])]),
        ];
        assert_eq!(find_higman_pair(&seqs, EmbedMode::Exact), None);
        // Monotone mode accepts relation growth but not loss: {T} ⊆ {F}
        // fails, so still no pair.
        assert_eq!(find_higman_pair(&seqs, EmbedMode::Monotone), None);
    }

    #[test]
    fn monotone_accepts_containment_that_exact_rejects() {
        let seqs = vec![
            tw(&[(Some(0), &[false])]),
            tw(&[(Some(0), &[true]), (Some(0), &[true])]),
        ];
        assert_eq!(find_higman_pair(&seqs, EmbedMode::Exact), None);
        let (i, j, pi) = find_higman_pair(&seqs, EmbedMode::Monotone).unwrap();
        assert_eq!((i, j), (0, 1));
        assert_eq!(pi, vec![1]);
    }

    #[test]
    fn epsilon_letter_embeds_anywhere_in_monotone_mode() {
        let small = tw(&[(None, &[false])]);
        let large = tw(&[(Some(1), &[false])]);
        assert!(embed(&small, &large, EmbedMode::Monotone).is_some());
        assert!(embed(&small, &large, EmbedMode::Exact).is_none());
    }

    #[test]
    fn greedy_is_leftmost() {
        let small = tw(&[(Some(0), &[false]), (Some(1), &[false])]);
        let large = tw(&[
            (Some(1), &[false]),
            (Some(0), &[false]),
            (Some(0), &[false]),
            (Some(1), &[false]),
        ]);
        assert_eq!(embed(&small, &large, EmbedMode::Exact).unwrap(), vec![2, 4]);
    }
}
