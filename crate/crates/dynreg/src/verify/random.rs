use crate::alphabet::SymId;
use crate::engine::{Change, DynamicProgram, EngineError, Runtime, WordState};
use crate::lang::Dfa;
use crate::testkit::SplitMix64;
use serde::Serialize;
use std::time::Instant;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("program alphabet {0:?} does not match oracle alphabet {1:?}")]
    AlphabetMismatch(Vec<String>, Vec<String>),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// One step where the program and the oracle disagreed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub trial: usize,
    pub step: usize,
    pub symbol: String,
    pub position: usize,
    pub program_bit: bool,
    pub oracle_bit: bool,
}

/// Outcome of a randomized differential run.
#[derive(Debug, Clone, Serialize)]
pub struct TraceReport {
    pub seed: u64,
    pub n: usize,
    pub steps: usize,
    pub trials: usize,
    pub changes_applied: usize,
    pub mismatches: Vec<Mismatch>,
    pub elapsed_ms: u128,
}

impl TraceReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn summary(&self) -> String {
        format!(
            "trials={} steps={} n={} seed={} changes={} mismatches={} elapsed={}ms -> {}",
            self.trials,
            self.steps,
            self.n,
            self.seed,
            self.changes_applied,
            self.mismatches.len(),
            self.elapsed_ms,
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

/// Runs `trials` independent random change sequences of length `steps` on a
/// domain of size `n`, comparing the program's query bit with the oracle DFA
/// after every change. Each trial starts from the all-epsilon word and draws
/// changes uniformly: a symbol from Σ ∪ {ε} and a position from `[n]`.
/// Deterministic for a given seed; trials use split substreams so the report
/// does not depend on scheduling.
pub fn random_verify(
    program: &DynamicProgram,
    oracle: &Dfa,
    n: usize,
    steps: usize,
    trials: usize,
    seed: u64,
) -> Result<TraceReport, VerifyError> {
    if program.schema.alphabet != oracle.alphabet {
        return Err(VerifyError::AlphabetMismatch(
            program.schema.alphabet.names().map(String::from).collect(),
            oracle.alphabet.names().map(String::from).collect(),
        ));
    }
    let start = Instant::now();
    let runtime = Runtime::new(program);
    let base = SplitMix64::new(seed);
    let symbol_count = program.schema.alphabet.len();
    let mut mismatches = Vec::new();
    let mut changes_applied = 0;
    for trial in 0..trials {
        let mut rng = base.substream(trial as u64);
        let (mut word, mut aux) = runtime.init_program(n, &WordState::empty(n))?;
        // Step 0: the initial bit must already be correct.
        if runtime.query(&aux) != oracle.accepts(word.letters()) {
            mismatches.push(Mismatch {
                trial,
                step: 0,
                symbol: "init".to_string(),
                position: 0,
                program_bit: runtime.query(&aux),
                oracle_bit: oracle.accepts(word.letters()),
            });
        }
        if n == 0 {
            continue;
        }
        for step in 1..=steps {
            let sym_pick = rng.below(symbol_count + 1);
            let sym = if sym_pick == 0 {
                None
            } else {
                Some(SymId((sym_pick - 1) as u16))
            };
            let pos = 1 + rng.below(n);
            let change = Change { pos, sym };
            let (w2, a2) = runtime.apply_change(&word, &aux, change)?;
            word = w2;
            aux = a2;
            changes_applied += 1;
            let program_bit = runtime.query(&aux);
            let oracle_bit = oracle.accepts(word.letters());
            if program_bit != oracle_bit {
                mismatches.push(Mismatch {
                    trial,
                    step,
                    symbol: program.schema.alphabet.token(sym).to_string(),
                    position: pos,
                    program_bit,
                    oracle_bit,
                });
            }
        }
    }
    Ok(TraceReport {
        seed,
        n,
        steps,
        trials,
        changes_applied,
        mismatches,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::engine::example1_program;
    use crate::lang::{compile_min_dfa, parse_regex};

    #[test]
    fn example1_is_oracle_correct() {
        let p = example1_program();
        let oracle = compile_min_dfa(
            &parse_regex("(a+b)*aa(a+b)*", &Alphabet::of_chars("ab")).unwrap(),
        );
        let report = random_verify(&p, &oracle, 8, 120, 12, 0xd1ce).unwrap();
        assert!(report.passed(), "{:?}", report.mismatches.first());
    }

    #[test]
    fn alphabet_mismatch_is_reported() {
        let p = example1_program();
        let oracle = compile_min_dfa(&parse_regex("a*", &Alphabet::of_chars("a")).unwrap());
        assert!(matches!(
            random_verify(&p, &oracle, 4, 5, 1, 1),
            Err(VerifyError::AlphabetMismatch(..))
        ));
    }

    #[test]
    fn steps_zero_checks_only_initial_bit() {
        let p = example1_program();
        let oracle = compile_min_dfa(
            &parse_regex("(a+b)*aa(a+b)*", &Alphabet::of_chars("ab")).unwrap(),
        );
        let report = random_verify(&p, &oracle, 4, 0, 3, 7).unwrap();
        assert_eq!(report.changes_applied, 0);
        assert!(report.passed());
    }
}
