use super::core::{Elem, FiniteMonoid, Morphism};
use super::ordered::{OrderError, OrderedMonoid};
use crate::lang::Dfa;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// The transition monoid of a DFA: all distinct functions `Q → Q` generated
/// by the letter functions, closed under composition.
///
/// Element indices are assigned by BFS from the identity function, expanding
/// by letters in sorted-alphabet order, so the numbering is reproducible.
/// For a minimal DFA this is the syntactic monoid of the language.
pub fn transition_monoid(d: &Dfa) -> (FiniteMonoid, Morphism) {
    let (monoid, morphism, _) = transition_monoid_with_maps(d);
    (monoid, morphism)
}

/// As [`transition_monoid`], additionally returning each element's underlying
/// state transformation.
pub fn transition_monoid_with_maps(d: &Dfa) -> (FiniteMonoid, Morphism, Vec<Vec<usize>>) {
    let q = d.states();
    let identity: Vec<usize> = (0..q).collect();
    let letter_fns: Vec<Vec<usize>> = d
        .alphabet
        .ids()
        .map(|sym| (0..q).map(|s| d.step(s, sym)).collect())
        .collect();

    let mut index: BTreeMap<Vec<usize>, Elem> = BTreeMap::new();
    let mut elems: Vec<Vec<usize>> = Vec::new();
    let mut names: Vec<String> = Vec::new();
    index.insert(identity.clone(), 0);
    elems.push(identity);
    names.push("1".to_string());
    let mut queue = VecDeque::from([0usize]);
    while let Some(e) = queue.pop_front() {
        for (li, lf) in letter_fns.iter().enumerate() {
            // Apply e first, then the letter (left-to-right action).
            let composed: Vec<usize> = elems[e].iter().map(|&s| lf[s]).collect();
            if !index.contains_key(&composed) {
                let id = elems.len();
                index.insert(composed.clone(), id);
                elems.push(composed);
                let mut name = names[e].clone();
                if name == "1" {
                    name.clear();
                }
                name.push_str(d.alphabet.name(crate::alphabet::SymId(li as u16)));
                names.push(name);
                queue.push_back(id);
            }
        }
    }

    let size = elems.len();
    let mut rows = Vec::with_capacity(size);
    for x in 0..size {
        let mut row = Vec::with_capacity(size);
        for y in 0..size {
            let composed: Vec<usize> = elems[x].iter().map(|&s| elems[y][s]).collect();
            row.push(index[&composed]);
        }
        rows.push(row);
    }
    let monoid = FiniteMonoid::new(rows, 0)
        .expect("function composition is associative")
        .with_names(names);
    let letter_map: Vec<Elem> = letter_fns.iter().map(|lf| index[lf]).collect();
    let morphism = Morphism::new(d.alphabet.clone(), monoid.clone(), letter_map);
    (monoid, morphism, elems)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SyntacticError {
    #[error("syntactic order violates order axioms: {0}")]
    Order(#[from] OrderError),
    #[error("accepting element set is not upward closed (elements {0} <= {1} disagree); this indicates a construction bug")]
    AcceptNotUpset(Elem, Elem),
}

/// The syntactic ordered monoid of (the language of) a minimal DFA.
///
/// The order is the standard two-sided syntactic order: `x ≤ y` iff for all
/// contexts `(u, v) ∈ M²`, `u·x·v` accepting implies `u·y·v` accepting, where
/// an element is accepting when its transformation maps the start state into
/// the accepting set. The returned set collects the accepting elements and is
/// verified to be an upset.
pub fn syntactic_ordered_monoid(
    d: &Dfa,
) -> Result<(OrderedMonoid, Morphism, BTreeSet<Elem>), SyntacticError> {
    let (monoid, morphism, maps) = transition_monoid_with_maps(d);
    let n = monoid.size();
    let accepting: Vec<bool> = maps
        .iter()
        .map(|f| d.accepting.contains(&f[d.start]))
        .collect();
    let mut leq = vec![vec![false; n]; n];
    for x in 0..n {
        for y in 0..n {
            leq[x][y] = (0..n).all(|u| {
                (0..n).all(|v| {
                    let ctx_x = monoid.mul(monoid.mul(u, x), v);
                    let ctx_y = monoid.mul(monoid.mul(u, y), v);
                    !accepting[ctx_x] || accepting[ctx_y]
                })
            });
        }
    }
    let ordered = OrderedMonoid::new(monoid, leq)?;
    let accept_set: BTreeSet<Elem> = (0..n).filter(|&x| accepting[x]).collect();
    if !ordered.is_upset(&accept_set) {
        let bad = accept_set
            .iter()
            .find_map(|&x| {
                ordered
                    .monoid
                    .elems()
                    .find(|&y| ordered.le(x, y) && !accept_set.contains(&y))
                    .map(|y| (x, y))
            })
            .expect("non-upset has a violating pair");
        return Err(SyntacticError::AcceptNotUpset(bad.0, bad.1));
    }
    Ok((ordered, morphism, accept_set))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::lang::{compile_min_dfa, parse_regex};
    use crate::monoid::GreenData;

    fn min_dfa(src: &str, alpha: &str) -> Dfa {
        compile_min_dfa(&parse_regex(src, &Alphabet::of_chars(alpha)).unwrap())
    }

    #[test]
    fn aa_star_gives_z2() {
        let (m, phi) = transition_monoid(&min_dfa("(aa)*", "a"));
        assert_eq!(m.size(), 2);
        assert!(m.is_group());
        let a = phi.apply(crate::alphabet::SymId(0));
        assert_eq!(m.mul(a, a), m.identity());
    }

    #[test]
    fn seen_a_gives_u1() {
        let (m, phi) = transition_monoid(&min_dfa("(a+b)*a(a+b)*", "ab"));
        assert_eq!(m.size(), 2);
        let a = phi.apply(crate::alphabet::SymId(0));
        let b = phi.apply(crate::alphabet::SymId(1));
        assert_eq!(b, m.identity());
        assert_eq!(m.mul(a, a), a);
        assert!(!m.is_group());
    }

    #[test]
    fn ends_with_a_gives_u2() {
        let (m, phi) = transition_monoid(&min_dfa("(a+b)*a", "ab"));
        assert_eq!(m.size(), 3);
        let a = phi.apply(crate::alphabet::SymId(0));
        let b = phi.apply(crate::alphabet::SymId(1));
        assert_eq!(m.mul(a, b), b);
        assert_eq!(m.mul(b, a), a);
        assert!(m.is_idempotent(a) && m.is_idempotent(b));
        let g = GreenData::compute(&m);
        assert!(g.r_equiv(a, b) && !g.l_equiv(a, b));
    }

    #[test]
    fn syntactic_order_of_seen_a_is_u1_plus() {
        let (om, phi, upset) = syntactic_ordered_monoid(&min_dfa("(a+b)*a(a+b)*", "ab")).unwrap();
        let one = om.monoid.identity();
        let a = phi.apply(crate::alphabet::SymId(0));
        assert!(om.le(one, a));
        assert!(!om.le(a, one));
        assert_eq!(upset, BTreeSet::from([a]));
        assert!(om.is_jplus());
    }

    #[test]
    fn syntactic_order_of_b_star_is_u1_minus() {
        let (om, phi, upset) = syntactic_ordered_monoid(&min_dfa("b*", "ab")).unwrap();
        let one = om.monoid.identity();
        let a = phi.apply(crate::alphabet::SymId(0));
        assert!(om.le(a, one));
        assert!(!om.le(one, a));
        assert_eq!(upset, BTreeSet::from([one]));
        assert!(!om.is_ejplus());
        assert_eq!(om.find_u1_minus_divisor(), Some(a));
    }

    #[test]
    fn full_language_gives_trivial_monoid() {
        let (om, _, upset) = syntactic_ordered_monoid(&min_dfa("(a+b)*", "ab")).unwrap();
        assert_eq!(om.size(), 1);
        assert_eq!(upset.len(), 1);
    }

    #[test]
    fn aa_factor_is_neither_jplus_nor_ejplus() {
        // Not J⁺: the language is not closed under insertion (aa -> aba).
        // Also not EJ⁺: the image of `b` is idempotent (b ~ bb), yet 1 ≤ b
        // fails in the syntactic order, witnessed by the context (a, a):
        // "aa" is in the language while "aba" is not.
        let dfa = min_dfa("(a+b)*aa(a+b)*", "ab");
        let (om, phi, _) = syntactic_ordered_monoid(&dfa).unwrap();
        assert!(!om.is_jplus());
        let one = om.monoid.identity();
        let a = phi.apply(crate::alphabet::SymId(0));
        let b = phi.apply(crate::alphabet::SymId(1));
        assert!(om.monoid.is_idempotent(b));
        let ctx = |mid| om.monoid.mul(om.monoid.mul(a, mid), a);
        let aa_elem = ctx(one); // evaluates "a a"
        let aba_elem = ctx(b); // evaluates "a b a"
        let (_, _, upset) = syntactic_ordered_monoid(&dfa).unwrap();
        assert!(upset.contains(&aa_elem));
        assert!(!upset.contains(&aba_elem));
        assert!(!om.le(one, b));
        assert!(!om.is_ejplus());
        let e = om.find_u1_minus_divisor().unwrap();
        assert!(om.monoid.is_idempotent(e) && !om.le(one, e));
    }

    #[test]
    fn ab_star_is_not_ejplus() {
        let (om, _, _) = syntactic_ordered_monoid(&min_dfa("(ab)*", "ab")).unwrap();
        assert_eq!(om.size(), 6);
        assert!(!om.is_ejplus());
        // The violating idempotent is one of the two xy-loops.
        let e = om.find_u1_minus_divisor().unwrap();
        assert!(om.monoid.is_idempotent(e));
        assert!(e != om.monoid.identity());
    }

    #[test]
    fn accept_set_equals_up_of_minimal_elements() {
        for (src, alpha) in [
            ("(a+b)*a(a+b)*", "ab"),
            ("b*", "ab"),
            ("(aa)*", "a"),
            ("(ab)*", "ab"),
            ("(a+b)*aa(a+b)*", "ab"),
        ] {
            let (om, _, upset) = syntactic_ordered_monoid(&min_dfa(src, alpha)).unwrap();
            let mins = om.minimal_elements(&upset);
            let rebuilt: BTreeSet<_> = mins.iter().flat_map(|&x| om.up(x)).collect();
            assert_eq!(rebuilt, upset, "minimal-element closure for {src}");
        }
    }
}
