//! Component-decomposing, memoizing formula evaluation.
//!
//! The dynamic-program engine evaluates many update-formula instances per
//! change, and the synthesized Σ₂ formulas are large disjunctions whose
//! branches use disjoint quantified variables. Evaluating the raw prenex form
//! naively would cost `n^q` for the total variable count. This module
//! compiles each formula once into a plan that
//!
//! * converts the matrix to negation normal form,
//! * recursively splits conjunctions/disjunctions into groups that share no
//!   quantified variables, scoping each quantifier to the group that uses it
//!   (sound on non-empty domains; empty domains fall back to the naive
//!   evaluator), and
//! * memoizes subplan results per structure, keyed by the subplan identity
//!   and the values of its free variables. Plans are interned on the shared
//!   matrix nodes, so a subformula reused by many update formulas is
//!   evaluated once per change.
//!
//! Equivalence with [`super::eval_formula`] is property-tested.

use super::eval::{EvalError, Structure};
use super::formula::{Atom, BitId, Formula, Matrix, Quant, RelId, Var};
use crate::alphabet::SymId;
use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

type VarIdx = u32;

#[derive(Debug, Clone)]
enum PAtom {
    Letter(SymId, VarIdx),
    OldLetter(SymId, VarIdx),
    Aux(RelId, VarIdx),
    Bit(BitId),
    Le(VarIdx, VarIdx),
    Eq(VarIdx, VarIdx),
}

// Negation normal form, hash-consed so shared input subtrees stay shared.
#[derive(Debug)]
enum NMat {
    Lit(PAtom, bool),
    And(Vec<Rc<NMat>>),
    Or(Vec<Rc<NMat>>),
}

#[derive(Hash, PartialEq, Eq)]
enum NKey {
    Lit(AtomKey, bool),
    And(Vec<usize>),
    Or(Vec<usize>),
}

#[derive(Hash, PartialEq, Eq)]
enum AtomKey {
    Letter(u16, VarIdx),
    OldLetter(u16, VarIdx),
    Aux(RelId, VarIdx),
    Bit(BitId),
    Le(VarIdx, VarIdx),
    Eq(VarIdx, VarIdx),
}

fn atom_key(a: &PAtom) -> AtomKey {
    match a {
        PAtom::Letter(s, v) => AtomKey::Letter(s.0, *v),
        PAtom::OldLetter(s, v) => AtomKey::OldLetter(s.0, *v),
        PAtom::Aux(r, v) => AtomKey::Aux(*r, *v),
        PAtom::Bit(b) => AtomKey::Bit(*b),
        PAtom::Le(x, y) => AtomKey::Le(*x, *y),
        PAtom::Eq(x, y) => AtomKey::Eq(*x, *y),
    }
}

struct PNode {
    id: u32,
    /// Variables read by this subtree that it does not itself quantify,
    /// sorted ascending.
    free: Vec<VarIdx>,
    /// Subtree node count; memoization skips tiny nodes.
    size: u32,
    kind: PKind,
}

enum PKind {
    Lit(PAtom, bool),
    And(Vec<Rc<PNode>>),
    Or(Vec<Rc<PNode>>),
    Quant(Quant, VarIdx, Rc<PNode>),
}

struct Inner {
    var_ids: HashMap<String, VarIdx>,
    nnf_memo: HashMap<(usize, bool), Rc<NMat>>,
    nnf_cons: HashMap<NKey, Rc<NMat>>,
    nvars: HashMap<usize, Rc<Vec<VarIdx>>>,
    dominator_memo: HashMap<(usize, VarIdx), usize>,
    plan_intern: HashMap<(usize, Vec<(Quant, VarIdx)>), Rc<PNode>>,
    plans: HashMap<u64, PlanEntry>,
    next_pnode: u32,
    // Keeps every matrix used as a memo key alive so pointer keys stay valid.
    pinned: Vec<Rc<Matrix>>,
    nnf_by_ptr: HashMap<usize, Rc<NMat>>,
}

struct PlanEntry {
    root: Rc<PNode>,
    free: Vec<(Var, VarIdx)>,
}

/// Long-lived plan store for one program's formulas.
#[derive(Default)]
pub struct Evaluator {
    inner: RefCell<Inner>,
}

impl Default for Inner {
    fn default() -> Self {
        Self {
            var_ids: HashMap::new(),
            nnf_memo: HashMap::new(),
            nnf_cons: HashMap::new(),
            nvars: HashMap::new(),
            dominator_memo: HashMap::new(),
            plan_intern: HashMap::new(),
            plans: HashMap::new(),
            next_pnode: 0,
            pinned: Vec::new(),
            nnf_by_ptr: HashMap::new(),
        }
    }
}

#[derive(PartialEq, Eq, Hash)]
enum MemoKey {
    Packed(u32, u128),
    Wide(u32, Box<[u16]>),
}

/// Per-structure scratch state: variable bindings plus the memo table. Must
/// be fresh for every new structure (the engine allocates one per change).
#[derive(Default)]
pub struct Session {
    env: Vec<u16>,
    memo: HashMap<MemoKey, bool>,
}

impl Session {
    pub fn new() -> Self {
        Self::default()
    }
}

impl Evaluator {
    pub fn new() -> Self {
        Self::default()
    }

    /// Debug helper: lists plan subtrees with many free variables.
    pub fn dump_wide_nodes(&self, f: &Formula, min_free: usize) -> String {
        let mut inner = self.inner.borrow_mut();
        let entry = inner.plan_for(f);
        let root = entry.root.clone();
        let names: Vec<String> = {
            let mut v: Vec<(String, VarIdx)> = inner
                .var_ids
                .iter()
                .map(|(k, &i)| (k.clone(), i))
                .collect();
            v.sort_by_key(|(_, i)| *i);
            v.into_iter().map(|(k, _)| k).collect()
        };
        let mut out = String::new();
        let mut seen = std::collections::BTreeSet::new();
        fn go(
            n: &PNode,
            path: &str,
            min_free: usize,
            names: &[String],
            seen: &mut std::collections::BTreeSet<u32>,
            out: &mut String,
        ) {
            use std::fmt::Write as _;
            if n.free.len() >= min_free && seen.insert(n.id) {
                let frees: Vec<&str> =
                    n.free.iter().map(|&v| names[v as usize].as_str()).collect();
                let kind = match &n.kind {
                    PKind::Lit(..) => "lit".to_string(),
                    PKind::And(cs) => format!("and[{}]", cs.len()),
                    PKind::Or(cs) => format!("or[{}]", cs.len()),
                    PKind::Quant(Quant::Exists, v, _) => format!("E{}", names[*v as usize]),
                    PKind::Quant(Quant::Forall, v, _) => format!("A{}", names[*v as usize]),
                };
                let _ = writeln!(
                    out,
                    "{kind} id={} size={} free={:?} path={path}",
                    n.id, n.size, frees
                );
            }
            match &n.kind {
                PKind::Lit(..) => {}
                PKind::And(cs) | PKind::Or(cs) => {
                    for (i, c) in cs.iter().enumerate() {
                        go(c, &format!("{path}.{i}"), min_free, names, seen, out);
                    }
                }
                PKind::Quant(_, _, b) => go(b, &format!("{path}.q"), min_free, names, seen, out),
            }
        }
        go(&root, "r", min_free, &names, &mut seen, &mut out);
        out
    }

    /// Debug helper: renders the plan tree of a formula (truncated).
    pub fn dump_plan(&self, f: &Formula, max_depth: usize) -> String {
        let mut inner = self.inner.borrow_mut();
        let entry = inner.plan_for(f);
        let root = entry.root.clone();
        let names: Vec<String> = {
            let mut v: Vec<(String, VarIdx)> = inner
                .var_ids
                .iter()
                .map(|(k, &i)| (k.clone(), i))
                .collect();
            v.sort_by_key(|(_, i)| *i);
            v.into_iter().map(|(k, _)| k).collect()
        };
        let mut out = String::new();
        fn go(n: &PNode, depth: usize, max: usize, names: &[String], out: &mut String) {
            use std::fmt::Write as _;
            let pad = "  ".repeat(depth);
            let frees: Vec<&str> = n.free.iter().map(|&v| names[v as usize].as_str()).collect();
            match &n.kind {
                PKind::Lit(..) => {
                    let _ = writeln!(out, "{pad}lit id={} free={:?}", n.id, frees);
                }
                PKind::And(cs) | PKind::Or(cs) => {
                    let tag = if matches!(n.kind, PKind::And(_)) { "and" } else { "or" };
                    let _ = writeln!(
                        out,
                        "{pad}{tag} id={} size={} free={:?} children={}",
                        n.id,
                        n.size,
                        frees,
                        cs.len()
                    );
                    if depth < max {
                        for c in cs {
                            go(c, depth + 1, max, names, out);
                        }
                    }
                }
                PKind::Quant(q, v, body) => {
                    let tag = if matches!(q, Quant::Exists) { "E" } else { "A" };
                    let _ = writeln!(
                        out,
                        "{pad}{tag}{} id={} size={} free={:?}",
                        names[*v as usize], n.id, n.size, frees
                    );
                    if depth < max {
                        go(body, depth + 1, max, names, out);
                    }
                }
            }
        }
        go(&root, 0, max_depth, &names, &mut out);
        out
    }

    /// Evaluates `f` against `st` under `assignment`, equivalently to
    /// [`super::eval_formula`].
    pub fn eval(
        &self,
        f: &Formula,
        st: &dyn Structure,
        assignment: &[(Var, usize)],
        session: &mut Session,
    ) -> Result<bool, EvalError> {
        if st.domain_size() == 0 {
            // Quantifier scoping tricks are only sound on non-empty domains.
            return super::eval::eval_formula(f, st, assignment);
        }
        let (root, frees) = {
            let mut inner = self.inner.borrow_mut();
            let entry = inner.plan_for(f);
            (entry.root.clone(), entry.free.clone())
        };
        let n = st.domain_size();
        let mut bound = Vec::with_capacity(frees.len());
        for (var, idx) in &frees {
            let val = assignment
                .iter()
                .find(|(w, _)| w == var)
                .map(|(_, p)| *p)
                .ok_or_else(|| EvalError::Unbound(var.name().to_string()))?;
            if val < 1 || val > n {
                return Err(EvalError::OutOfDomain(var.name().to_string(), val, n));
            }
            bound.push((*idx, val as u16));
        }
        for (idx, val) in bound {
            session.bind(idx, val);
        }
        Ok(run(&root, st, session))
    }
}

impl Session {
    fn bind(&mut self, idx: VarIdx, val: u16) {
        if self.env.len() <= idx as usize {
            self.env.resize(idx as usize + 1, 0);
        }
        self.env[idx as usize] = val;
    }

    #[inline]
    fn get(&self, idx: VarIdx) -> u16 {
        self.env.get(idx as usize).copied().unwrap_or(0)
    }
}

fn run(node: &PNode, st: &dyn Structure, s: &mut Session) -> bool {
    if let PKind::Lit(atom, positive) = &node.kind {
        return eval_lit(atom, *positive, st, s);
    }
    let memo_key = if node.size >= 4 {
        let key = if node.free.len() <= 8 {
            let mut packed: u128 = 0;
            for &v in &node.free {
                packed = (packed << 13) | (s.get(v) as u128);
            }
            MemoKey::Packed(node.id, packed)
        } else {
            let vals: Box<[u16]> = node.free.iter().map(|&v| s.get(v)).collect();
            MemoKey::Wide(node.id, vals)
        };
        if let Some(&hit) = s.memo.get(&key) {
            return hit;
        }
        Some(key)
    } else {
        None
    };
    let result = match &node.kind {
        PKind::Lit(..) => unreachable!(),
        PKind::And(cs) => cs.iter().all(|c| run(c, st, s)),
        PKind::Or(cs) => cs.iter().any(|c| run(c, st, s)),
        PKind::Quant(q, var, body) => {
            let n = st.domain_size() as u16;
            let saved = s.get(*var);
            let r = match q {
                Quant::Exists => (1..=n).any(|p| {
                    s.bind(*var, p);
                    run(body, st, s)
                }),
                Quant::Forall => (1..=n).all(|p| {
                    s.bind(*var, p);
                    run(body, st, s)
                }),
            };
            s.bind(*var, saved);
            r
        }
    };
    if let Some(key) = memo_key {
        s.memo.insert(key, result);
    }
    result
}

fn eval_lit(atom: &PAtom, positive: bool, st: &dyn Structure, s: &Session) -> bool {
    let v = match atom {
        PAtom::Letter(sym, v) => st.letter_is(s.get(*v) as usize, *sym),
        PAtom::OldLetter(sym, v) => st.old_letter_is(s.get(*v) as usize, *sym),
        PAtom::Aux(rel, v) => st.unary(*rel, s.get(*v) as usize),
        PAtom::Bit(b) => st.bit(*b),
        PAtom::Le(x, y) => s.get(*x) <= s.get(*y),
        PAtom::Eq(x, y) => s.get(*x) == s.get(*y),
    };
    v == positive
}

impl Inner {
    fn var_idx(&mut self, v: &Var) -> VarIdx {
        if let Some(&i) = self.var_ids.get(v.name()) {
            return i;
        }
        let i = self.var_ids.len() as VarIdx;
        self.var_ids.insert(v.name().to_string(), i);
        i
    }

    fn plan_for(&mut self, f: &Formula) -> &PlanEntry {
        if !self.plans.contains_key(&f.id) {
            self.pinned.push(f.matrix.clone());
            let nnf = self.nnf(&f.matrix, true);
            let quants: Vec<(Quant, VarIdx)> = f
                .prefix
                .iter()
                .map(|(q, v)| (*q, self.var_idx(v)))
                .collect();
            let root = self.plan(&quants, &nnf);
            let free = f
                .free
                .iter()
                .map(|v| (v.clone(), self.var_idx(v)))
                .collect();
            self.plans.insert(f.id, PlanEntry { root, free });
        }
        &self.plans[&f.id]
    }

    fn patom(&mut self, a: &Atom) -> PAtom {
        match a {
            Atom::Letter(s, v) => PAtom::Letter(*s, self.var_idx(v)),
            Atom::OldLetter(s, v) => PAtom::OldLetter(*s, self.var_idx(v)),
            Atom::Aux(r, v) => PAtom::Aux(*r, self.var_idx(v)),
            Atom::Bit(b) => PAtom::Bit(*b),
            Atom::Le(x, y) => PAtom::Le(self.var_idx(x), self.var_idx(y)),
            Atom::Eq(x, y) => PAtom::Eq(self.var_idx(x), self.var_idx(y)),
        }
    }

    fn cons(&mut self, key: NKey, make: impl FnOnce() -> NMat) -> Rc<NMat> {
        if let Some(hit) = self.nnf_cons.get(&key) {
            return hit.clone();
        }
        let node = Rc::new(make());
        self.nnf_cons.insert(key, node.clone());
        self.nnf_by_ptr
            .insert(Rc::as_ptr(&node) as usize, node.clone());
        node
    }

    fn nnf(&mut self, m: &Rc<Matrix>, positive: bool) -> Rc<NMat> {
        let key = (Rc::as_ptr(m) as usize, positive);
        if let Some(hit) = self.nnf_memo.get(&key) {
            return hit.clone();
        }
        let result = match &**m {
            Matrix::Atom(a) => {
                let pa = self.patom(a);
                self.cons(NKey::Lit(atom_key(&pa), positive), || {
                    NMat::Lit(pa, positive)
                })
            }
            Matrix::Not(inner) => self.nnf(inner, !positive),
            Matrix::And(cs) => {
                let children: Vec<Rc<NMat>> = cs.iter().map(|c| self.nnf(c, positive)).collect();
                let ptrs: Vec<usize> = children.iter().map(|c| Rc::as_ptr(c) as usize).collect();
                if positive {
                    self.cons(NKey::And(ptrs), || NMat::And(children))
                } else {
                    self.cons(NKey::Or(ptrs), || NMat::Or(children))
                }
            }
            Matrix::Or(cs) => {
                let children: Vec<Rc<NMat>> = cs.iter().map(|c| self.nnf(c, positive)).collect();
                let ptrs: Vec<usize> = children.iter().map(|c| Rc::as_ptr(c) as usize).collect();
                if positive {
                    self.cons(NKey::Or(ptrs), || NMat::Or(children))
                } else {
                    self.cons(NKey::And(ptrs), || NMat::And(children))
                }
            }
        };
        self.nnf_memo.insert(key, result.clone());
        result
    }

    fn nmat_vars(&mut self, m: &Rc<NMat>) -> Rc<Vec<VarIdx>> {
        let key = Rc::as_ptr(m) as usize;
        if let Some(hit) = self.nvars.get(&key) {
            return hit.clone();
        }
        let mut vars: Vec<VarIdx> = Vec::new();
        match &**m {
            NMat::Lit(a, _) => match a {
                PAtom::Letter(_, v) | PAtom::OldLetter(_, v) | PAtom::Aux(_, v) => vars.push(*v),
                PAtom::Bit(_) => {}
                PAtom::Le(x, y) | PAtom::Eq(x, y) => {
                    vars.push(*x);
                    vars.push(*y);
                }
            },
            NMat::And(cs) | NMat::Or(cs) => {
                for c in cs {
                    vars.extend(self.nmat_vars(c).iter().copied());
                }
            }
        }
        vars.sort_unstable();
        vars.dedup();
        let vars = Rc::new(vars);
        self.nvars.insert(key, vars.clone());
        vars
    }

    fn fresh_pnode(&mut self, free: Vec<VarIdx>, size: u32, kind: PKind) -> Rc<PNode> {
        let id = self.next_pnode;
        self.next_pnode += 1;
        Rc::new(PNode {
            id,
            free,
            size,
            kind,
        })
    }

    /// The scope of `v` below `node`: the deepest descendant through which
    /// every occurrence of `v` funnels (as a pointer). Since shared subtrees
    /// appear only positively in negation normal form, binding `v` inside
    /// every occurrence of that descendant is equivalent to binding it in the
    /// prefix, on non-empty domains: for a context monotone in the slot `p`,
    /// `Qv F(P(v)) ≡ F(Qv P(v))` for both quantifiers.
    fn dominator(&mut self, node: &Rc<NMat>, v: VarIdx) -> usize {
        let key = (Rc::as_ptr(node) as usize, v);
        if let Some(&hit) = self.dominator_memo.get(&key) {
            return hit;
        }
        let result = match &**node {
            NMat::Lit(..) => key.0,
            NMat::And(cs) | NMat::Or(cs) => {
                let mut sub: Option<usize> = None;
                let mut spread = false;
                for c in cs {
                    if !self.nmat_vars(c).binary_search(&v).is_ok() {
                        continue;
                    }
                    let d = self.dominator(c, v);
                    match sub {
                        None => sub = Some(d),
                        Some(prev) if prev == d => {}
                        Some(_) => {
                            spread = true;
                            break;
                        }
                    }
                }
                if spread {
                    key.0
                } else {
                    sub.expect("v occurs in the node")
                }
            }
        };
        self.dominator_memo.insert(key, result);
        result
    }

    fn plan(&mut self, quants: &[(Quant, VarIdx)], node: &Rc<NMat>) -> Rc<PNode> {
        let used = self.nmat_vars(node);
        let effective: Vec<(Quant, VarIdx)> = quants
            .iter()
            .copied()
            .filter(|(_, v)| used.binary_search(v).is_ok())
            .collect();
        let intern_key = (Rc::as_ptr(node) as usize, effective.clone());
        if let Some(hit) = self.plan_intern.get(&intern_key) {
            return hit.clone();
        }
        let plan = self.plan_uncached(&effective, node, &used);
        self.plan_intern.insert(intern_key, plan.clone());
        plan
    }

    fn plan_uncached(
        &mut self,
        effective: &[(Quant, VarIdx)],
        node: &Rc<NMat>,
        used: &[VarIdx],
    ) -> Rc<PNode> {
        if effective.is_empty() {
            return self.plan_qf(node, used);
        }
        // Decide which variable, if any, must be bound at this node. A
        // variable whose occurrences all funnel through one strict descendant
        // may be deferred (bound per occurrence of that descendant), unless
        // deferring would swap it past a later variable of the other
        // quantifier kind that also occurs inside its scope.
        let here = Rc::as_ptr(node) as usize;
        let mut loop_idx: Option<usize> = None;
        let mut scopes: Vec<usize> = Vec::with_capacity(effective.len());
        for (_, v) in effective {
            scopes.push(self.dominator(node, *v));
        }
        for (i, (_, _v)) in effective.iter().enumerate() {
            if scopes[i] == here {
                loop_idx = Some(i);
                break;
            }
        }
        if let Some(i) = loop_idx {
            // Earlier deferrable variables are about to be swapped past
            // effective[i]; demand commutation safety, else bind them first.
            let (qi, _) = effective[i];
            let mut bind = i;
            for (j, (qj, vj)) in effective.iter().enumerate().take(i) {
                if *qj == qi {
                    continue;
                }
                let scope_node = self.node_by_ptr(scopes[j]);
                if let Some(scope_node) = scope_node {
                    if self.nmat_vars(&scope_node).binary_search(&effective[i].1).is_ok() {
                        bind = j;
                        break;
                    }
                } else {
                    bind = j;
                    break;
                }
                let _ = vj;
            }
            let (q, v) = effective[bind];
            let mut rest: Vec<(Quant, VarIdx)> = effective.to_vec();
            rest.remove(bind);
            let body = self.plan_with(&rest, node, used);
            let mut free: Vec<VarIdx> = body.free.iter().copied().filter(|&w| w != v).collect();
            free.sort_unstable();
            let size = body.size + 1;
            return self.fresh_pnode(free, size, PKind::Quant(q, v, body));
        }
        // Every variable defers into the children.
        match &**node {
            NMat::Lit(..) => {
                // A literal with effective variables: bind them all here.
                let (q, v) = effective[0];
                let body = self.plan_with(&effective[1..], node, used);
                let mut free: Vec<VarIdx> =
                    body.free.iter().copied().filter(|&w| w != v).collect();
                free.sort_unstable();
                let size = body.size + 1;
                self.fresh_pnode(free, size, PKind::Quant(q, v, body))
            }
            NMat::And(cs) | NMat::Or(cs) => {
                let is_and = matches!(&**node, NMat::And(_));
                let mut children: Vec<Rc<PNode>> =
                    cs.iter().map(|c| self.plan(effective, c)).collect();
                children.sort_by_key(|c| c.size);
                let bound: Vec<VarIdx> = effective.iter().map(|(_, v)| *v).collect();
                let mut free: Vec<VarIdx> = children
                    .iter()
                    .flat_map(|c| c.free.iter().copied())
                    .filter(|v| !bound.contains(v))
                    .collect();
                free.sort_unstable();
                free.dedup();
                let size = 1 + children.iter().map(|c| c.size).sum::<u32>();
                let kind = if is_and {
                    PKind::And(children)
                } else {
                    PKind::Or(children)
                };
                self.fresh_pnode(free, size, kind)
            }
        }
    }

    fn node_by_ptr(&self, ptr: usize) -> Option<Rc<NMat>> {
        self.nnf_by_ptr.get(&ptr).cloned()
    }

    /// As [`Self::plan`] but with an explicit effective-quantifier list that
    /// is already filtered against `used`.
    fn plan_with(
        &mut self,
        effective: &[(Quant, VarIdx)],
        node: &Rc<NMat>,
        used: &[VarIdx],
    ) -> Rc<PNode> {
        let intern_key = (Rc::as_ptr(node) as usize, effective.to_vec());
        if let Some(hit) = self.plan_intern.get(&intern_key) {
            return hit.clone();
        }
        let plan = self.plan_uncached(effective, node, used);
        self.plan_intern.insert(intern_key, plan.clone());
        plan
    }

    fn plan_qf(&mut self, node: &Rc<NMat>, used: &[VarIdx]) -> Rc<PNode> {
        match &**node {
            NMat::Lit(a, pos) => {
                self.fresh_pnode(used.to_vec(), 1, PKind::Lit(a.clone(), *pos))
            }
            NMat::And(cs) | NMat::Or(cs) => {
                let is_and = matches!(&**node, NMat::And(_));
                let mut children: Vec<Rc<PNode>> =
                    cs.iter().map(|c| self.plan(&[], c)).collect();
                children.sort_by_key(|c| c.size);
                let size = 1 + children.iter().map(|c| c.size).sum::<u32>();
                let kind = if is_and {
                    PKind::And(children)
                } else {
                    PKind::Or(children)
                };
                self.fresh_pnode(used.to_vec(), size, kind)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::eval::{eval_formula, VecStructure};
    use crate::logic::formula::NodeFactory;
    use crate::testkit::SplitMix64;

    // Random formula generator over a tiny schema (2 symbols, 2 unary, 1 bit).
    fn random_matrix(
        f: &mut NodeFactory,
        rng: &mut SplitMix64,
        vars: &[Var],
        depth: usize,
    ) -> Rc<Matrix> {
        if depth == 0 || rng.chance(1, 3) {
            let v = vars[rng.below(vars.len())].clone();
            let w = vars[rng.below(vars.len())].clone();
            let atom = match rng.below(6) {
                0 => Atom::Letter(SymId(rng.below(2) as u16), v),
                1 => Atom::OldLetter(SymId(rng.below(2) as u16), v),
                2 => Atom::Aux(rng.below(2) as RelId, v),
                3 => Atom::Bit(0),
                4 => Atom::Le(v, w),
                _ => Atom::Eq(v, w),
            };
            return f.atom(atom);
        }
        match rng.below(3) {
            0 => {
                let k = 2 + rng.below(2);
                let cs = (0..k)
                    .map(|_| random_matrix(f, rng, vars, depth - 1))
                    .collect();
                f.and(cs)
            }
            1 => {
                let k = 2 + rng.below(2);
                let cs = (0..k)
                    .map(|_| random_matrix(f, rng, vars, depth - 1))
                    .collect();
                f.or(cs)
            }
            _ => {
                let m = random_matrix(f, rng, vars, depth - 1);
                f.not(m)
            }
        }
    }

    fn random_structure(rng: &mut SplitMix64, n: usize) -> VecStructure {
        let pick = |rng: &mut SplitMix64| match rng.below(3) {
            0 => None,
            s => Some(SymId((s - 1) as u16)),
        };
        VecStructure {
            letters: (0..n).map(|_| pick(rng)).collect(),
            old_letters: (0..n).map(|_| pick(rng)).collect(),
            unary: (0..2)
                .map(|_| (0..n).map(|_| rng.chance(1, 2)).collect())
                .collect(),
            bits: vec![rng.chance(1, 2)],
        }
    }

    #[test]
    fn plan_evaluator_matches_naive_on_random_formulas() {
        let mut rng = SplitMix64::new(2024);
        for round in 0..300 {
            let mut fac = NodeFactory::new();
            let all: Vec<Var> = ["x", "y", "z", "u", "v"]
                .iter()
                .map(|s| Var::new(s))
                .collect();
            let qcount = 1 + rng.below(4);
            let matrix = random_matrix(&mut fac, &mut rng, &all, 3);
            let mut prefix = Vec::new();
            for var in all.iter().take(qcount) {
                let q = if rng.chance(1, 2) {
                    Quant::Exists
                } else {
                    Quant::Forall
                };
                prefix.push((q, var.clone()));
            }
            let free: Vec<Var> = all[qcount..].to_vec();
            let formula = match Formula::new(prefix, matrix, free.clone()) {
                Ok(f) => f,
                Err(_) => continue,
            };
            let n = 1 + rng.below(5);
            let st = random_structure(&mut rng, n);
            let asg: Vec<(Var, usize)> = free
                .iter()
                .map(|v| (v.clone(), 1 + rng.below(n)))
                .collect();
            let expect = eval_formula(&formula, &st, &asg).unwrap();
            let eval = Evaluator::new();
            let mut session = Session::new();
            let got = eval.eval(&formula, &st, &asg, &mut session).unwrap();
            assert_eq!(expect, got, "round {round} formula {formula:?}");
        }
    }

    #[test]
    fn memo_is_consistent_within_one_structure() {
        // Evaluate the same formula at many assignments through one session;
        // results must match fresh sessions.
        let mut rng = SplitMix64::new(7);
        let mut fac = NodeFactory::new();
        let all: Vec<Var> = ["x", "y", "z"].iter().map(|s| Var::new(s)).collect();
        let matrix = random_matrix(&mut fac, &mut rng, &all, 3);
        let formula = Formula::new(
            vec![(Quant::Exists, all[0].clone()), (Quant::Forall, all[1].clone())],
            matrix,
            vec![all[2].clone()],
        );
        let formula = match formula {
            Ok(f) => f,
            Err(_) => return,
        };
        let n = 6;
        let st = random_structure(&mut rng, n);
        let eval = Evaluator::new();
        let mut shared = Session::new();
        for p in 1..=n {
            let asg = [(all[2].clone(), p)];
            let got = eval.eval(&formula, &st, &asg, &mut shared).unwrap();
            let mut fresh = Session::new();
            let expect = eval.eval(&formula, &st, &asg, &mut fresh).unwrap();
            assert_eq!(expect, got);
            assert_eq!(expect, eval_formula(&formula, &st, &asg).unwrap());
        }
    }

    #[test]
    fn empty_domain_falls_back_to_naive() {
        let mut fac = NodeFactory::new();
        let x = Var::new("x");
        let m = fac.atom(Atom::Letter(SymId(0), x.clone()));
        // exists x W_a(x) or forall y not W_a(y): on the empty domain the
        // naive semantics gives false / true respectively.
        let ex = Formula::new(vec![(Quant::Exists, x.clone())], m, vec![]).unwrap();
        let y = Var::new("y");
        let nm = {
            let mut f2 = NodeFactory::new();
            let a = f2.atom(Atom::Letter(SymId(0), y.clone()));
            f2.not(a)
        };
        let fa = Formula::new(vec![(Quant::Forall, y)], nm, vec![]).unwrap();
        let st = VecStructure::default();
        let eval = Evaluator::new();
        let mut s = Session::new();
        assert!(!eval.eval(&ex, &st, &[], &mut s).unwrap());
        assert!(eval.eval(&fa, &st, &[], &mut s).unwrap());
    }
}
