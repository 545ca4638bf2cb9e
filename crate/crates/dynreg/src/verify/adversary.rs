use super::higman::{embed, type_sequence, EmbedMode, TypedWord};
use crate::alphabet::SymId;
use crate::engine::{AuxStore, Change, DynamicProgram, EngineError, Runtime, WordState};
use crate::lang::Dfa;
use crate::logic::FragmentTag;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WhichWord {
    Small,
    Large,
}

/// The exposed maintenance error: one of the two final words whose query bit
/// contradicts the claimed language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Disagreement {
    pub which: WhichWord,
    pub expected: bool,
    pub reported: bool,
}

/// A replayable refutation: two instance sizes, the order-preserving
/// embedding, the embedding-respecting change sequences, and the final
/// disagreement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdversaryWitness {
    pub mode: EmbedMode,
    pub small_n: usize,
    pub large_n: usize,
    pub embedding: Vec<usize>,
    pub build_small: Vec<Change>,
    pub build_large: Vec<Change>,
    pub kill_small: Vec<Change>,
    pub kill_large: Vec<Change>,
    pub disagreement: Disagreement,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AdversaryError {
    #[error("exact mode requires a quantifier-free program, monotone mode a positive existential one; got {0}")]
    FragmentPrecondition(FragmentTag),
    #[error("pump/kill symbols must belong to the program alphabet")]
    BadSymbols,
    #[error("substructure invariant violated after embedding-respecting changes at position {0}; this indicates an engine or fragment-checking bug")]
    SubstructureViolated(usize),
    #[error("witness replay did not reproduce the recorded bits")]
    ReplayMismatch,
    #[error(transparent)]
    Engine(#[from] EngineError),
}

struct Instance {
    word: WordState,
    aux: AuxStore,
    typed: TypedWord,
}

/// Searches for a refutation of `program`'s claim to maintain `claimed`.
///
/// For sizes `i = 1..=budget`, builds the state reached from the all-epsilon
/// word of size `i` by setting every position to `pump`, left to right. Pairs
/// of states are examined smallest combined size first; when the smaller
/// type sequence embeds into the larger (exactly, or by containment in
/// monotone mode), both instances receive the embedding-respecting kill
/// sequences `set_kill(1..n)` / `set_kill(π(1..n))`. If the two query bits
/// come out equal although the final words differ on membership in
/// `claimed`, one of them contradicts the oracle and is returned as a
/// witness. Pairs whose bits differ are inconclusive and the search goes on.
///
/// Returns `Ok(None)` when the budget is exhausted without a contradiction;
/// by design that outcome is inconclusive (the pair guaranteed by Higman's
/// lemma may lie beyond the budget).
pub fn higman_adversary(
    program: &DynamicProgram,
    claimed: &Dfa,
    pump: SymId,
    kill: SymId,
    budget: usize,
    mode: EmbedMode,
) -> Result<Option<AdversaryWitness>, AdversaryError> {
    match mode {
        EmbedMode::Exact => {
            if !matches!(program.fragment, FragmentTag::Prop | FragmentTag::PropPlus) {
                return Err(AdversaryError::FragmentPrecondition(program.fragment));
            }
        }
        EmbedMode::Monotone => {
            if !matches!(
                program.fragment,
                FragmentTag::Sigma1Plus | FragmentTag::PropPlus
            ) {
                return Err(AdversaryError::FragmentPrecondition(program.fragment));
            }
        }
    }
    let alphabet_len = program.schema.alphabet.len() as u16;
    if pump.0 >= alphabet_len || kill.0 >= alphabet_len {
        return Err(AdversaryError::BadSymbols);
    }

    let runtime = Runtime::new(program);
    let mut instances: Vec<Instance> = Vec::new();
    let mut ensure = |instances: &mut Vec<Instance>, upto: usize| -> Result<(), AdversaryError> {
        while instances.len() < upto {
            let n = instances.len() + 1;
            let changes: Vec<Change> = (1..=n)
                .map(|pos| Change {
                    pos,
                    sym: Some(pump),
                })
                .collect();
            let (word, aux, _) = runtime.run_trace(n, &changes)?;
            let typed = type_sequence(program, &word, &aux);
            instances.push(Instance { word, aux, typed });
        }
        Ok(())
    };

    // Pairs ordered by combined size, then by the small side.
    for sum in 3..=(2 * budget).saturating_sub(1) {
        for small_n in 1..sum.div_ceil(2) {
            let large_n = sum - small_n;
            if large_n > budget || small_n >= large_n {
                continue;
            }
            ensure(&mut instances, large_n)?;
            let small = &instances[small_n - 1];
            let large = &instances[large_n - 1];
            let pi = match embed(&small.typed, &large.typed, mode) {
                Some(pi) => pi,
                None => continue,
            };
            if let Some(witness) = try_pair(
                &runtime, claimed, kill, mode, small, large, small_n, large_n, pi,
            )? {
                // Witnesses must replay before being reported.
                replay_witness(program, claimed, &witness)?;
                return Ok(Some(witness));
            }
        }
    }
    Ok(None)
}

#[allow(clippy::too_many_arguments)]
fn try_pair(
    runtime: &Runtime,
    claimed: &Dfa,
    kill: SymId,
    mode: EmbedMode,
    small: &Instance,
    large: &Instance,
    small_n: usize,
    large_n: usize,
    pi: Vec<usize>,
) -> Result<Option<AdversaryWitness>, AdversaryError> {
    let program = runtime.program;
    let kill_small: Vec<Change> = (1..=small_n)
        .map(|pos| Change {
            pos,
            sym: Some(kill),
        })
        .collect();
    let kill_large: Vec<Change> = pi
        .iter()
        .map(|&pos| Change {
            pos,
            sym: Some(kill),
        })
        .collect();

    let (mut w_s, mut a_s) = (small.word.clone(), small.aux.clone());
    for &c in &kill_small {
        let (w2, a2) = runtime.apply_change(&w_s, &a_s, c)?;
        w_s = w2;
        a_s = a2;
    }
    let (mut w_l, mut a_l) = (large.word.clone(), large.aux.clone());
    for &c in &kill_large {
        let (w2, a2) = runtime.apply_change(&w_l, &a_l, c)?;
        w_l = w2;
        a_l = a2;
    }

    // Substructure invariant: the restriction of the large instance to the
    // embedding image must still relate to the small instance as before the
    // changes (isomorphic in exact mode, type-monotonic in monotone mode).
    let typed_s = type_sequence(program, &w_s, &a_s);
    let typed_l = type_sequence(program, &w_l, &a_l);
    for (idx, &img) in pi.iter().enumerate() {
        let ts = &typed_s.types[idx];
        let tl = &typed_l.types[img - 1];
        let ok = match mode {
            EmbedMode::Exact => ts.equals(tl),
            EmbedMode::Monotone => ts.contained_in(tl),
        };
        if !ok {
            return Err(AdversaryError::SubstructureViolated(idx + 1));
        }
    }

    let oracle_small = claimed.accepts(w_s.letters());
    let oracle_large = claimed.accepts(w_l.letters());
    if oracle_small == oracle_large {
        // This pair cannot force a contradiction regardless of the bits.
        return Ok(None);
    }
    let bit_small = runtime.query(&a_s);
    let bit_large = runtime.query(&a_l);
    if bit_small != bit_large {
        return Ok(None);
    }
    let (which, expected, reported) = if bit_small != oracle_small {
        (WhichWord::Small, oracle_small, bit_small)
    } else {
        (WhichWord::Large, oracle_large, bit_large)
    };
    let build = |n: usize, pump_word: &WordState| -> Vec<Change> {
        (1..=n)
            .map(|pos| Change {
                pos,
                sym: pump_word.get(pos),
            })
            .collect()
    };
    Ok(Some(AdversaryWitness {
        mode,
        small_n,
        large_n,
        embedding: pi,
        build_small: build(small_n, &small.word),
        build_large: build(large_n, &large.word),
        kill_small,
        kill_large,
        disagreement: Disagreement {
            which,
            expected,
            reported,
        },
    }))
}

/// Re-executes a witness from scratch and confirms the recorded
/// disagreement: the identified word's query bit must contradict the oracle
/// exactly as recorded.
pub fn replay_witness(
    program: &DynamicProgram,
    claimed: &Dfa,
    witness: &AdversaryWitness,
) -> Result<Disagreement, AdversaryError> {
    let runtime = Runtime::new(program);
    let run = |n: usize, build: &[Change], kill: &[Change]| -> Result<(WordState, bool), AdversaryError> {
        let mut changes = build.to_vec();
        changes.extend_from_slice(kill);
        let (word, aux, _) = runtime.run_trace(n, &changes)?;
        let bit = runtime.query(&aux);
        Ok((word, bit))
    };
    let (word_s, bit_s) = run(witness.small_n, &witness.build_small, &witness.kill_small)?;
    let (word_l, bit_l) = run(witness.large_n, &witness.build_large, &witness.kill_large)?;
    let (word, bit) = match witness.disagreement.which {
        WhichWord::Small => (&word_s, bit_s),
        WhichWord::Large => (&word_l, bit_l),
    };
    let oracle_bit = claimed.accepts(word.letters());
    if bit != witness.disagreement.reported || oracle_bit != witness.disagreement.expected {
        return Err(AdversaryError::ReplayMismatch);
    }
    if bit == oracle_bit {
        return Err(AdversaryError::ReplayMismatch);
    }
    Ok(witness.disagreement.clone())
}
