use crate::alphabet::SymId;
use crate::logic::{Atom, Matrix, NodeFactory, Prenex, Var};
use crate::monoid::{Elem, Morphism};
use std::rc::Rc;

/// One endpoint of an infix formula: a position variable, or one of the two
/// virtual boundary positions 0 and n+1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum End {
    At(Var),
    /// Virtual position 0 (the infix starts at the beginning of the word).
    Start,
    /// Virtual position n+1 (the infix ends at the end of the word).
    End,
}

impl End {
    pub fn var(name: &str) -> Self {
        End::At(Var::new(name))
    }

    pub fn key(&self) -> String {
        match self {
            End::At(v) => format!("@{}", v.name()),
            End::Start => "^".to_string(),
            End::End => "$".to_string(),
        }
    }
}

/// Shared formula-construction context: the node factory plus a fresh-name
/// counter for quantified variables.
pub struct Ctx {
    pub f: NodeFactory,
    fresh: u64,
}

impl Default for Ctx {
    fn default() -> Self {
        Self::new()
    }
}

impl Ctx {
    pub fn new() -> Self {
        Self {
            f: NodeFactory::new(),
            fresh: 0,
        }
    }

    pub fn fresh_var(&mut self, hint: &str) -> Var {
        self.fresh += 1;
        Var::new(format!("{hint}{}", self.fresh))
    }

    /// `v < w`.
    pub fn lt(&mut self, v: &Var, w: &Var) -> Rc<Matrix> {
        let le = self.f.atom(Atom::Le(w.clone(), v.clone()));
        self.f.not(le)
    }

    /// `v ≤ w`.
    pub fn le(&mut self, v: &Var, w: &Var) -> Rc<Matrix> {
        self.f.atom(Atom::Le(v.clone(), w.clone()))
    }

    /// Guard `left < v` where `left` may be virtual.
    pub fn gt_left(&mut self, left: &End, v: &Var) -> Rc<Matrix> {
        match left {
            End::At(l) => self.lt(l, v),
            End::Start => self.f.bool_true(),
            End::End => self.f.bool_false(),
        }
    }

    /// Guard `v < right` where `right` may be virtual.
    pub fn lt_right(&mut self, v: &Var, right: &End) -> Rc<Matrix> {
        match right {
            End::At(r) => self.lt(v, r),
            End::End => self.f.bool_true(),
            End::Start => self.f.bool_false(),
        }
    }

    /// Guard `v ≤ left` (the change lies at or before the left endpoint).
    pub fn le_left(&mut self, v: &Var, left: &End) -> Rc<Matrix> {
        match left {
            End::At(l) => self.le(v, l),
            End::Start => self.f.bool_false(),
            End::End => self.f.bool_true(),
        }
    }

    /// Guard `right ≤ v`.
    pub fn ge_right(&mut self, right: &End, v: &Var) -> Rc<Matrix> {
        match right {
            End::At(r) => self.le(r, v),
            End::End => self.f.bool_false(),
            End::Start => self.f.bool_true(),
        }
    }

    /// "The current letter at `v` evaluates to `elem` under `phi`": a
    /// disjunction of letter atoms, plus the all-negative epsilon case when
    /// `elem` is the identity. Reads the new word.
    pub fn val_is(&mut self, phi: &Morphism, elem: Elem, v: &Var) -> Rc<Matrix> {
        let mut cases: Vec<Rc<Matrix>> = phi
            .preimage(elem)
            .into_iter()
            .map(|sym| self.f.atom(Atom::Letter(sym, v.clone())))
            .collect();
        if elem == phi.target.identity() {
            cases.push(self.eps_at(phi, v));
        }
        self.f.or(cases)
    }

    /// "The letter at `v` before the change evaluated to `elem`."
    pub fn old_val_is(&mut self, phi: &Morphism, elem: Elem, v: &Var) -> Rc<Matrix> {
        let mut cases: Vec<Rc<Matrix>> = phi
            .preimage(elem)
            .into_iter()
            .map(|sym| self.f.atom(Atom::OldLetter(sym, v.clone())))
            .collect();
        if elem == phi.target.identity() {
            let negs: Vec<Rc<Matrix>> = phi
                .alphabet
                .ids()
                .map(|sym| {
                    let a = self.f.atom(Atom::OldLetter(sym, v.clone()));
                    self.f.not(a)
                })
                .collect();
            cases.push(self.f.and(negs));
        }
        self.f.or(cases)
    }

    /// Position `v` holds epsilon (no letter atom is true).
    pub fn eps_at(&mut self, phi: &Morphism, v: &Var) -> Rc<Matrix> {
        let negs: Vec<Rc<Matrix>> = phi
            .alphabet
            .ids()
            .map(|sym| {
                let a = self.f.atom(Atom::Letter(sym, v.clone()));
                self.f.not(a)
            })
            .collect();
        self.f.and(negs)
    }

    /// `min(v)` as a universally guarded conjunct: `∀g (g ≤ v → g = v)`.
    /// Returns the guard matrix over the given guard variable.
    pub fn min_guard(&mut self, v: &Var, guard: &Var) -> Rc<Matrix> {
        let le = self.f.atom(Atom::Le(guard.clone(), v.clone()));
        let nle = self.f.not(le);
        let eq = self.f.atom(Atom::Eq(guard.clone(), v.clone()));
        self.f.or(vec![nle, eq])
    }

    /// `max(v)`: `∀g (v ≤ g → g = v)`.
    pub fn max_guard(&mut self, v: &Var, guard: &Var) -> Rc<Matrix> {
        let le = self.f.atom(Atom::Le(v.clone(), guard.clone()));
        let nle = self.f.not(le);
        let eq = self.f.atom(Atom::Eq(guard.clone(), v.clone()));
        self.f.or(vec![nle, eq])
    }

    pub fn qf(&mut self, m: Rc<Matrix>) -> Prenex {
        Prenex::qf(m)
    }
}

/// The evaluation image of a change symbol: `phi(σ)`, with epsilon mapping to
/// the identity.
pub fn change_value(phi: &Morphism, sym: Option<SymId>) -> Elem {
    phi.apply_opt(sym)
}

/// DFA of the language recognized by `(phi, accepting)`: states are the
/// monoid elements reachable from the identity by right multiplication with
/// letter images. Complete but not necessarily minimal, which is fine for an
/// oracle.
pub fn recognition_dfa(
    phi: &Morphism,
    accepting: &std::collections::BTreeSet<Elem>,
) -> crate::lang::Dfa {
    use std::collections::BTreeMap;
    let m = &phi.target;
    let mut index: BTreeMap<Elem, usize> = BTreeMap::new();
    let mut order: Vec<Elem> = Vec::new();
    index.insert(m.identity(), 0);
    order.push(m.identity());
    let mut next = 0;
    while next < order.len() {
        let e = order[next];
        for sym in phi.alphabet.ids() {
            let t = m.mul(e, phi.apply(sym));
            index.entry(t).or_insert_with(|| {
                order.push(t);
                order.len() - 1
            });
        }
        next += 1;
    }
    let delta = order
        .iter()
        .map(|&e| {
            phi.alphabet
                .ids()
                .map(|sym| index[&m.mul(e, phi.apply(sym))])
                .collect()
        })
        .collect();
    let accept = order
        .iter()
        .enumerate()
        .filter(|(_, e)| accepting.contains(e))
        .map(|(i, _)| i)
        .collect();
    crate::lang::Dfa::new(phi.alphabet.clone(), delta, 0, accept)
}
