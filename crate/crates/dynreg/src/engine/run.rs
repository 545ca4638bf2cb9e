use super::program::{DynamicProgram, Target};
use super::state::{AuxStore, Change, WordState};
use crate::alphabet::SymId;
use crate::logic::plan::{Evaluator, Session};
use crate::logic::{BitId, EvalError, RelId, Structure, Var};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("change position {0} outside 1..={1}")]
    PositionOutOfRange(usize, usize),
    #[error("missing update formula for {0} on symbol '{1}'")]
    MissingUpdate(String, String),
    #[error("word has {0} positions but the program was initialized for {1}")]
    SizeMismatch(usize, usize),
    #[error("formula evaluation failed: {0}")]
    Eval(#[from] EvalError),
}

/// Evaluation view during one change: formulas read the already-updated word,
/// the pre-change auxiliary relations, and the pre-change letters as `Wo`.
struct ChangeView<'a> {
    new_word: &'a WordState,
    old_letters: &'a [Option<SymId>],
    old_aux: &'a AuxStore,
}

impl Structure for ChangeView<'_> {
    fn domain_size(&self) -> usize {
        self.new_word.n()
    }

    fn letter_is(&self, pos: usize, sym: SymId) -> bool {
        self.new_word.get(pos) == Some(sym)
    }

    fn old_letter_is(&self, pos: usize, sym: SymId) -> bool {
        self.old_letters[pos - 1] == Some(sym)
    }

    fn unary(&self, rel: RelId, pos: usize) -> bool {
        self.old_aux.unary_at(rel, pos)
    }

    fn bit(&self, bit: BitId) -> bool {
        self.old_aux.bits[bit as usize]
    }
}

/// Read-only view of a settled (word, aux) pair, e.g. for querying formulas
/// between changes; `Wo` serves the stored snapshot.
pub struct StateView<'a> {
    pub word: &'a WordState,
    pub aux: &'a AuxStore,
}

impl Structure for StateView<'_> {
    fn domain_size(&self) -> usize {
        self.word.n()
    }

    fn letter_is(&self, pos: usize, sym: SymId) -> bool {
        self.word.get(pos) == Some(sym)
    }

    fn old_letter_is(&self, pos: usize, sym: SymId) -> bool {
        self.aux.snapshot[pos - 1] == Some(sym)
    }

    fn unary(&self, rel: RelId, pos: usize) -> bool {
        self.aux.unary_at(rel, pos)
    }

    fn bit(&self, bit: BitId) -> bool {
        self.aux.bits[bit as usize]
    }
}

/// Executes one dynamic program. Holds the compiled formula plans, so reuse
/// one runtime across many runs of the same program.
pub struct Runtime<'p> {
    pub program: &'p DynamicProgram,
    eval: Evaluator,
    var_x: Var,
    var_y: Var,
}

impl<'p> Runtime<'p> {
    pub fn new(program: &'p DynamicProgram) -> Self {
        Self {
            program,
            eval: Evaluator::new(),
            var_x: Var::new("x"),
            var_y: Var::new("y"),
        }
    }

    /// Initial (word, aux) for domain size `n` and starting word `w0`.
    ///
    /// The declarative initializer covers the all-epsilon word; a non-epsilon
    /// `w0` is then installed position by position through the program's own
    /// update formulas, which is exactly the state the program would reach.
    pub fn init_program(&self, n: usize, w0: &WordState) -> Result<(WordState, AuxStore), EngineError> {
        if w0.n() != n {
            return Err(EngineError::SizeMismatch(w0.n(), n));
        }
        let p = self.program;
        let mut aux = AuxStore::new(p.schema.unary_count(), p.schema.bit_count(), n);
        for (r, &full) in p.init.unary_full.iter().enumerate() {
            if full {
                aux.unary[r] = vec![true; n];
            }
        }
        aux.bits.copy_from_slice(&p.init.bits);
        let mut word = WordState::empty(n);
        for pos in 1..=n {
            if let Some(sym) = w0.get(pos) {
                let (w2, a2) = self.apply_change(
                    &word,
                    &aux,
                    Change {
                        pos,
                        sym: Some(sym),
                    },
                )?;
                word = w2;
                aux = a2;
            }
        }
        Ok((word, aux))
    }

    /// Applies one change: snapshot, write, recompute all relations and bits
    /// against the frozen pre-state.
    pub fn apply_change(
        &self,
        word: &WordState,
        aux: &AuxStore,
        change: Change,
    ) -> Result<(WordState, AuxStore), EngineError> {
        let p = self.program;
        let n = word.n();
        if change.pos < 1 || change.pos > n {
            return Err(EngineError::PositionOutOfRange(change.pos, n));
        }
        let old_letters: Vec<Option<SymId>> = word.letters().to_vec();
        let mut new_word = word.clone();
        new_word.set(change.pos, change.sym);
        let view = ChangeView {
            new_word: &new_word,
            old_letters: &old_letters,
            old_aux: aux,
        };
        let mut session = Session::new();
        let mut new_aux = AuxStore::new(p.schema.unary_count(), p.schema.bit_count(), n);
        let sym_token = p.schema.alphabet.token(change.sym).to_string();
        for r in 0..p.schema.unary_count() as RelId {
            let formula = p
                .update_for(Target::Unary(r), change.sym)
                .ok_or_else(|| {
                    EngineError::MissingUpdate(p.schema.unary_name(r).to_string(), sym_token.clone())
                })?;
            for pos in 1..=n {
                let asg = [
                    (self.var_x.clone(), pos),
                    (self.var_y.clone(), change.pos),
                ];
                let value = self.eval.eval(formula, &view, &asg, &mut session)?;
                new_aux.set_unary(r, pos, value);
            }
        }
        for b in 0..p.schema.bit_count() as BitId {
            let formula = p.update_for(Target::Bit(b), change.sym).ok_or_else(|| {
                EngineError::MissingUpdate(p.schema.bit_name(b).to_string(), sym_token.clone())
            })?;
            let asg = [(self.var_y.clone(), change.pos)];
            new_aux.bits[b as usize] = self.eval.eval(formula, &view, &asg, &mut session)?;
        }
        new_aux.snapshot = old_letters;
        Ok((new_word, new_aux))
    }

    pub fn query(&self, aux: &AuxStore) -> bool {
        aux.bits[self.program.query_bit as usize]
    }

    /// Runs a change sequence from the initial all-epsilon word, returning
    /// the query bit after every change.
    pub fn run_trace(
        &self,
        n: usize,
        changes: &[Change],
    ) -> Result<(WordState, AuxStore, Vec<bool>), EngineError> {
        let (mut word, mut aux) = self.init_program(n, &WordState::empty(n))?;
        let mut bits = Vec::with_capacity(changes.len());
        for &c in changes {
            let (w2, a2) = self.apply_change(&word, &aux, c)?;
            word = w2;
            aux = a2;
            bits.push(self.query(&aux));
        }
        Ok((word, aux, bits))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::engine::example1_program;
    use crate::logic::{check_fragment, FragmentTag};

    fn sym(alpha: &Alphabet, t: &str) -> Option<SymId> {
        alpha.lookup_or_epsilon(t).unwrap()
    }

    #[test]
    fn example1_loads_and_is_sigma1() {
        let p = example1_program();
        p.validate().unwrap();
        assert!(p.missing_updates().is_empty());
        assert_eq!(p.fragment, FragmentTag::Sigma1);
        for f in p.updates.values() {
            assert!(check_fragment(f, FragmentTag::Sigma1).ok);
        }
    }

    #[test]
    fn example1_tracks_adjacent_a_pairs() {
        let p = example1_program();
        let rt = Runtime::new(&p);
        let a = sym(&p.schema.alphabet, "a");
        let eps = sym(&p.schema.alphabet, "eps");
        let n = 4;
        // set_a(1), set_a(2): "aa.." is in Sigma* aa Sigma*.
        let (_, _, bits) = rt
            .run_trace(
                n,
                &[
                    Change { pos: 1, sym: a },
                    Change { pos: 2, sym: a },
                    Change { pos: 1, sym: eps },
                ],
            )
            .unwrap();
        assert_eq!(bits, vec![false, true, false]);
    }

    #[test]
    fn example1_epsilon_positions_are_transparent() {
        let p = example1_program();
        let rt = Runtime::new(&p);
        let a = sym(&p.schema.alphabet, "a");
        // a at 1 and 3 with an epsilon hole at 2: "a_a" reads as "aa".
        let (_, _, bits) = rt
            .run_trace(3, &[Change { pos: 1, sym: a }, Change { pos: 3, sym: a }])
            .unwrap();
        assert_eq!(bits, vec![false, true]);
    }

    #[test]
    fn init_from_nonempty_word_matches_change_replay() {
        let p = example1_program();
        let rt = Runtime::new(&p);
        let alpha = &p.schema.alphabet;
        let w0 = WordState::from_letters(vec![
            sym(alpha, "b"),
            sym(alpha, "a"),
            sym(alpha, "a"),
            None,
        ]);
        let (word, aux) = rt.init_program(4, &w0).unwrap();
        assert_eq!(word, w0);
        assert!(rt.query(&aux), "baa_ contains aa");
    }

    #[test]
    fn out_of_range_change_is_rejected() {
        let p = example1_program();
        let rt = Runtime::new(&p);
        let (w, aux) = rt.init_program(2, &WordState::empty(2)).unwrap();
        let err = rt.apply_change(&w, &aux, Change { pos: 3, sym: None });
        assert!(matches!(err, Err(EngineError::PositionOutOfRange(3, 2))));
    }

    #[test]
    fn n_zero_is_degenerate_but_valid() {
        let p = example1_program();
        let rt = Runtime::new(&p);
        let (w, aux) = rt.init_program(0, &WordState::empty(0)).unwrap();
        assert_eq!(w.n(), 0);
        assert!(!rt.query(&aux), "empty word has no aa");
    }
}
