use super::dfa::Dfa;
use super::regex::{Regex, RegexAst};
use crate::alphabet::{Alphabet, SymId};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// Nondeterministic automaton with epsilon moves, used as the construction
/// intermediate for regexes and for composite oracles (monomial languages).
#[derive(Debug, Clone)]
pub struct Nfa {
    pub alphabet: Alphabet,
    pub states: usize,
    pub eps: Vec<Vec<usize>>,
    pub trans: Vec<Vec<(SymId, usize)>>,
    pub start: usize,
    pub accepting: BTreeSet<usize>,
}

impl Nfa {
    pub fn empty(alphabet: Alphabet) -> Self {
        Self {
            alphabet,
            states: 0,
            eps: Vec::new(),
            trans: Vec::new(),
            start: 0,
            accepting: BTreeSet::new(),
        }
    }

    pub fn add_state(&mut self) -> usize {
        self.states += 1;
        self.eps.push(Vec::new());
        self.trans.push(Vec::new());
        self.states - 1
    }

    pub fn add_eps(&mut self, from: usize, to: usize) {
        self.eps[from].push(to);
    }

    pub fn add_trans(&mut self, from: usize, sym: SymId, to: usize) {
        self.trans[from].push((sym, to));
    }

    fn eps_closure(&self, set: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut closure = set.clone();
        let mut stack: Vec<usize> = set.iter().copied().collect();
        while let Some(s) = stack.pop() {
            for &t in &self.eps[s] {
                if closure.insert(t) {
                    stack.push(t);
                }
            }
        }
        closure
    }

    /// Subset construction. The result is total (the empty set acts as a dead
    /// state) but not minimal.
    pub fn determinize(&self) -> Dfa {
        let start = self.eps_closure(&BTreeSet::from([self.start]));
        let mut index: BTreeMap<BTreeSet<usize>, usize> = BTreeMap::new();
        let mut order: Vec<BTreeSet<usize>> = Vec::new();
        let mut delta: Vec<Vec<usize>> = Vec::new();
        index.insert(start.clone(), 0);
        order.push(start);
        let mut next = 0;
        while next < order.len() {
            let current = order[next].clone();
            let mut row = Vec::with_capacity(self.alphabet.len());
            for sym in self.alphabet.ids() {
                let mut target = BTreeSet::new();
                for &s in &current {
                    for &(t_sym, t) in &self.trans[s] {
                        if t_sym == sym {
                            target.insert(t);
                        }
                    }
                }
                let target = self.eps_closure(&target);
                let id = *index.entry(target.clone()).or_insert_with(|| {
                    order.push(target);
                    order.len() - 1
                });
                row.push(id);
            }
            delta.push(row);
            next += 1;
        }
        let accepting = order
            .iter()
            .enumerate()
            .filter(|(_, set)| set.iter().any(|s| self.accepting.contains(s)))
            .map(|(i, _)| i)
            .collect();
        Dfa::new(self.alphabet.clone(), delta, 0, accepting)
    }
}

/// Thompson construction: one fragment with a single start and a single
/// accepting state per AST node.
fn thompson(ast: &RegexAst, nfa: &mut Nfa) -> (usize, usize) {
    match ast {
        RegexAst::Empty => {
            let s = nfa.add_state();
            let t = nfa.add_state();
            (s, t)
        }
        RegexAst::Epsilon => {
            let s = nfa.add_state();
            let t = nfa.add_state();
            nfa.add_eps(s, t);
            (s, t)
        }
        RegexAst::Letter(sym) => {
            let s = nfa.add_state();
            let t = nfa.add_state();
            nfa.add_trans(s, *sym, t);
            (s, t)
        }
        RegexAst::Union(a, b) => {
            let (sa, ta) = thompson(a, nfa);
            let (sb, tb) = thompson(b, nfa);
            let s = nfa.add_state();
            let t = nfa.add_state();
            nfa.add_eps(s, sa);
            nfa.add_eps(s, sb);
            nfa.add_eps(ta, t);
            nfa.add_eps(tb, t);
            (s, t)
        }
        RegexAst::Concat(a, b) => {
            let (sa, ta) = thompson(a, nfa);
            let (sb, tb) = thompson(b, nfa);
            nfa.add_eps(ta, sb);
            (sa, tb)
        }
        RegexAst::Star(a) => {
            let (sa, ta) = thompson(a, nfa);
            let s = nfa.add_state();
            let t = nfa.add_state();
            nfa.add_eps(s, sa);
            nfa.add_eps(s, t);
            nfa.add_eps(ta, sa);
            nfa.add_eps(ta, t);
            (s, t)
        }
    }
}

pub fn regex_to_nfa(r: &Regex) -> Nfa {
    let mut nfa = Nfa::empty(r.alphabet.clone());
    let (s, t) = thompson(&r.ast, &mut nfa);
    nfa.start = s;
    nfa.accepting.insert(t);
    nfa
}

/// Moore partition refinement on a complete DFA, followed by removal of
/// unreachable states and canonical BFS renumbering.
pub fn minimize(d: &Dfa) -> Dfa {
    // Restrict to reachable states first.
    let mut reachable = vec![false; d.states()];
    let mut queue = VecDeque::from([d.start]);
    reachable[d.start] = true;
    while let Some(s) = queue.pop_front() {
        for sym in d.alphabet.ids() {
            let t = d.step(s, sym);
            if !reachable[t] {
                reachable[t] = true;
                queue.push_back(t);
            }
        }
    }

    // Partition refinement: class ids per state, seeded by acceptance.
    let mut class: Vec<usize> = (0..d.states())
        .map(|s| usize::from(d.accepting.contains(&s)))
        .collect();
    loop {
        let mut signature: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        let mut next_class = vec![0usize; d.states()];
        for s in 0..d.states() {
            if !reachable[s] {
                continue;
            }
            let mut sig = Vec::with_capacity(1 + d.alphabet.len());
            sig.push(class[s]);
            for sym in d.alphabet.ids() {
                sig.push(class[d.step(s, sym)]);
            }
            let fresh = signature.len();
            next_class[s] = *signature.entry(sig).or_insert(fresh);
        }
        if next_class
            .iter()
            .zip(&class)
            .enumerate()
            .filter(|(s, _)| reachable[*s])
            .all(|(_, (a, b))| a == b)
        {
            break;
        }
        class = next_class;
    }

    // Collapse classes, then renumber canonically by BFS from the start in
    // sorted-alphabet order so downstream monoid extraction is deterministic.
    let repr_class = class[d.start];
    let mut bfs_id: BTreeMap<usize, usize> = BTreeMap::new();
    let mut order: Vec<usize> = Vec::new(); // representative state per new id
    bfs_id.insert(repr_class, 0);
    order.push(d.start);
    let mut next = 0;
    while next < order.len() {
        let s = order[next];
        for sym in d.alphabet.ids() {
            let t = d.step(s, sym);
            let c = class[t];
            bfs_id.entry(c).or_insert_with(|| {
                order.push(t);
                order.len() - 1
            });
        }
        next += 1;
    }
    let mut delta = Vec::with_capacity(order.len());
    let mut accepting = BTreeSet::new();
    for (new_id, &repr) in order.iter().enumerate() {
        let row: Vec<usize> = d
            .alphabet
            .ids()
            .map(|sym| bfs_id[&class[d.step(repr, sym)]])
            .collect();
        delta.push(row);
        if d.accepting.contains(&repr) {
            accepting.insert(new_id);
        }
    }
    Dfa::new(d.alphabet.clone(), delta, 0, accepting)
}

/// Compiles a regex to its minimal complete DFA with canonical numbering.
pub fn compile_min_dfa(r: &Regex) -> Dfa {
    minimize(&regex_to_nfa(r).determinize())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse_regex;

    fn dfa(src: &str, alpha: &str) -> Dfa {
        compile_min_dfa(&parse_regex(src, &Alphabet::of_chars(alpha)).unwrap())
    }

    #[test]
    fn seen_a_flag_language_has_two_states() {
        let d = dfa("(a+b)*a(a+b)*", "ab");
        assert_eq!(d.states(), 2);
        assert!(d.accepts_tokens(&["b", "a"]).unwrap());
        assert!(!d.accepts_tokens(&["b", "b"]).unwrap());
    }

    #[test]
    fn even_as_has_two_states() {
        let d = dfa("(aa)*", "a");
        assert_eq!(d.states(), 2);
        assert!(d.accepts_tokens(&[]).unwrap());
        assert!(!d.accepts_tokens(&["a", "a", "a"]).unwrap());
        assert!(d.accepts_tokens(&["a", "a"]).unwrap());
    }

    #[test]
    fn b_star_over_ab_has_dead_state() {
        let d = dfa("b*", "ab");
        assert_eq!(d.states(), 2);
        assert!(d.accepts_tokens(&["eps", "eps"]).unwrap());
        assert!(d.accepts_tokens(&["b", "b"]).unwrap());
        assert!(!d.accepts_tokens(&["b", "a"]).unwrap());
    }

    #[test]
    fn epsilon_positions_are_skipped() {
        let d = dfa("(a+b)*aa(a+b)*", "ab");
        // "aa" with an interleaved epsilon is still the word "aa".
        assert!(d.accepts_tokens(&["a", "eps", "a"]).unwrap());
        assert!(!d.accepts_tokens(&["a", "b", "a"]).unwrap());
    }

    #[test]
    fn minimization_is_idempotent() {
        for (src, alpha) in [
            ("(a+b)*a(a+b)*", "ab"),
            ("(aa)*", "a"),
            ("(ab)*", "ab"),
            ("b*", "ab"),
            ("(a+b)*ab(a+b)*b*", "ab"),
        ] {
            let d = dfa(src, alpha);
            assert!(minimize(&d).isomorphic(&d), "not idempotent for {src}");
        }
    }

    #[test]
    fn empty_language_compiles() {
        let d = dfa("0", "ab");
        assert_eq!(d.states(), 1);
        assert!(!d.accepts_tokens(&[]).unwrap());
    }
}
