use crate::alphabet::SymId;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::rc::Rc;
use std::sync::atomic::{AtomicU64, Ordering};

pub type RelId = u32;
pub type BitId = u32;

/// A position variable. Cheap to clone; compared by name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub Rc<str>);

impl Var {
    pub fn new(name: impl AsRef<str>) -> Self {
        Var(Rc::from(name.as_ref()))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quant {
    Exists,
    Forall,
}

/// Atomic formulas. `Letter` reads the current word, `OldLetter` the
/// engine-maintained snapshot of the word before the most recent change.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Atom {
    Letter(SymId, Var),
    OldLetter(SymId, Var),
    Aux(RelId, Var),
    Bit(BitId),
    Le(Var, Var),
    Eq(Var, Var),
}

impl Atom {
    pub fn vars(&self) -> Vec<&Var> {
        match self {
            Atom::Letter(_, v) | Atom::OldLetter(_, v) | Atom::Aux(_, v) => vec![v],
            Atom::Bit(_) => vec![],
            Atom::Le(a, b) | Atom::Eq(a, b) => vec![a, b],
        }
    }
}

/// Quantifier-free matrix node. Nodes are hash-consed through a
/// [`NodeFactory`], so structurally equal subtrees built through one factory
/// are pointer-equal; the fast evaluator keys its memo tables on pointers.
#[derive(Debug, PartialEq, Eq, Hash)]
pub enum Matrix {
    Atom(Atom),
    Not(Rc<Matrix>),
    And(Vec<Rc<Matrix>>),
    Or(Vec<Rc<Matrix>>),
}

impl Matrix {
    pub fn is_true(&self) -> bool {
        matches!(self, Matrix::And(cs) if cs.is_empty())
    }

    pub fn is_false(&self) -> bool {
        matches!(self, Matrix::Or(cs) if cs.is_empty())
    }

    /// All variables occurring in the subtree.
    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Matrix::Atom(a) => {
                for v in a.vars() {
                    out.insert(v.clone());
                }
            }
            Matrix::Not(m) => m.collect_vars(out),
            Matrix::And(cs) | Matrix::Or(cs) => {
                for c in cs {
                    c.collect_vars(out);
                }
            }
        }
    }
}

#[derive(Hash, PartialEq, Eq)]
enum NodeKey {
    Atom(Atom),
    Not(usize),
    And(Vec<usize>),
    Or(Vec<usize>),
}

/// Hash-consing factory for matrix nodes.
///
/// `and`/`or` flatten nested conjunctions/disjunctions and drop duplicate
/// children. The empty conjunction is `true`, the empty disjunction `false`.
#[derive(Default)]
pub struct NodeFactory {
    cache: HashMap<NodeKey, Rc<Matrix>>,
}

impl NodeFactory {
    pub fn new() -> Self {
        Self::default()
    }

    fn intern(&mut self, key: NodeKey, make: impl FnOnce() -> Matrix) -> Rc<Matrix> {
        if let Some(hit) = self.cache.get(&key) {
            return hit.clone();
        }
        let node = Rc::new(make());
        self.cache.insert(key, node.clone());
        node
    }

    pub fn atom(&mut self, a: Atom) -> Rc<Matrix> {
        self.intern(NodeKey::Atom(a.clone()), || Matrix::Atom(a))
    }

    pub fn not(&mut self, m: Rc<Matrix>) -> Rc<Matrix> {
        if m.is_true() {
            return self.bool_false();
        }
        if m.is_false() {
            return self.bool_true();
        }
        if let Matrix::Not(inner) = &*m {
            return inner.clone();
        }
        self.intern(NodeKey::Not(Rc::as_ptr(&m) as usize), || Matrix::Not(m))
    }

    // And/Or deliberately do not flatten nested nodes of the same kind:
    // subformulas assembled once and shared by reference must stay intact as
    // single children, which is what lets the evaluator scope quantified
    // variables into them. Constant absorption, duplicate removal, and
    // singleton unwrapping are still applied.
    pub fn and(&mut self, children: Vec<Rc<Matrix>>) -> Rc<Matrix> {
        let mut kept: Vec<Rc<Matrix>> = Vec::with_capacity(children.len());
        for c in children {
            if c.is_true() {
                continue;
            }
            if c.is_false() {
                return self.bool_false();
            }
            kept.push(c);
        }
        let mut seen = BTreeSet::new();
        kept.retain(|c| seen.insert(Rc::as_ptr(c) as usize));
        if kept.len() == 1 {
            return kept.pop().unwrap();
        }
        let key = NodeKey::And(kept.iter().map(|c| Rc::as_ptr(c) as usize).collect());
        self.intern(key, || Matrix::And(kept))
    }

    pub fn or(&mut self, children: Vec<Rc<Matrix>>) -> Rc<Matrix> {
        let mut kept: Vec<Rc<Matrix>> = Vec::with_capacity(children.len());
        for c in children {
            if c.is_false() {
                continue;
            }
            if c.is_true() {
                return self.bool_true();
            }
            kept.push(c);
        }
        let mut seen = BTreeSet::new();
        kept.retain(|c| seen.insert(Rc::as_ptr(c) as usize));
        if kept.len() == 1 {
            return kept.pop().unwrap();
        }
        let key = NodeKey::Or(kept.iter().map(|c| Rc::as_ptr(c) as usize).collect());
        self.intern(key, || Matrix::Or(kept))
    }

    pub fn bool_true(&mut self) -> Rc<Matrix> {
        self.intern(NodeKey::And(vec![]), || Matrix::And(vec![]))
    }

    pub fn bool_false(&mut self) -> Rc<Matrix> {
        self.intern(NodeKey::Or(vec![]), || Matrix::Or(vec![]))
    }

    /// `a < b` as the abbreviation `a ≤ b ∧ ¬(b ≤ a)`, the only negation shape
    /// admitted by the ⁺ fragments.
    pub fn lt(&mut self, a: Var, b: Var) -> Rc<Matrix> {
        let le = self.atom(Atom::Le(a.clone(), b.clone()));
        let ge = self.atom(Atom::Le(b, a));
        let nge = self.not(ge);
        self.and(vec![le, nge])
    }

    /// `a ≠ b` as `a < b ∨ b < a`, admissible in the ⁺ fragments.
    pub fn ne(&mut self, a: Var, b: Var) -> Rc<Matrix> {
        let lt1 = self.lt(a.clone(), b.clone());
        let lt2 = self.lt(b, a);
        self.or(vec![lt1, lt2])
    }

    /// Rewrites every atom via `f`, preserving boolean structure. Used by the
    /// program transformers.
    pub fn map_atoms(
        &mut self,
        m: &Rc<Matrix>,
        f: &mut impl FnMut(&mut NodeFactory, &Atom) -> Rc<Matrix>,
    ) -> Rc<Matrix> {
        match &**m {
            Matrix::Atom(a) => f(self, a),
            Matrix::Not(inner) => {
                let i = self.map_atoms(inner, f);
                self.not(i)
            }
            Matrix::And(cs) => {
                let mapped = cs.iter().map(|c| self.map_atoms(c, f)).collect();
                self.and(mapped)
            }
            Matrix::Or(cs) => {
                let mapped = cs.iter().map(|c| self.map_atoms(c, f)).collect();
                self.or(mapped)
            }
        }
    }
}

static NEXT_FORMULA_ID: AtomicU64 = AtomicU64::new(0);

/// A prenex first-order formula: quantifier prefix plus quantifier-free
/// matrix, with an explicit list of free variables.
#[derive(Clone)]
pub struct Formula {
    pub id: u64,
    pub prefix: Vec<(Quant, Var)>,
    pub matrix: Rc<Matrix>,
    pub free: Vec<Var>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormulaError {
    #[error("variable '{0}' is used but neither bound nor declared free")]
    Undeclared(String),
    #[error("variable '{0}' is bound twice or shadows a free variable")]
    Rebound(String),
}

impl Formula {
    pub fn new(
        prefix: Vec<(Quant, Var)>,
        matrix: Rc<Matrix>,
        free: Vec<Var>,
    ) -> Result<Self, FormulaError> {
        let mut bound: BTreeSet<Var> = free.iter().cloned().collect();
        if bound.len() != free.len() {
            return Err(FormulaError::Rebound(
                free.iter()
                    .find(|v| free.iter().filter(|w| w == v).count() > 1)
                    .map(|v| v.name().to_string())
                    .unwrap_or_default(),
            ));
        }
        for (_, v) in &prefix {
            if !bound.insert(v.clone()) {
                return Err(FormulaError::Rebound(v.name().to_string()));
            }
        }
        let mut used = BTreeSet::new();
        matrix.collect_vars(&mut used);
        for v in &used {
            if !bound.contains(v) {
                return Err(FormulaError::Undeclared(v.name().to_string()));
            }
        }
        Ok(Self {
            id: NEXT_FORMULA_ID.fetch_add(1, Ordering::Relaxed),
            prefix,
            matrix,
            free,
        })
    }

    pub fn quantifier_count(&self) -> usize {
        self.prefix.len()
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Formula#{}(", self.id)?;
        for (q, v) in &self.prefix {
            let q = match q {
                Quant::Exists => "E",
                Quant::Forall => "A",
            };
            write!(f, "{q}{v:?} ")?;
        }
        write!(f, "| free {:?})", self.free)
    }
}

/// A prenex building block: existential block, universal block, matrix.
///
/// Pieces are combined with `and`/`or`; all quantified variables must be
/// chosen distinct across combined pieces (the builders use a fresh-name
/// counter), which keeps the combination semantics-preserving on non-empty
/// domains. The final [`Formula`] prefix places all existentials before all
/// universals, so anything assembled from pieces is syntactically Σ₂ (or
/// lower when blocks are empty).
#[derive(Clone)]
pub struct Prenex {
    pub evars: Vec<Var>,
    pub avars: Vec<Var>,
    pub matrix: Rc<Matrix>,
}

impl Prenex {
    pub fn qf(matrix: Rc<Matrix>) -> Self {
        Self {
            evars: vec![],
            avars: vec![],
            matrix,
        }
    }

    pub fn exists(mut self, vars: Vec<Var>) -> Self {
        let mut vs = vars;
        vs.extend(self.evars);
        self.evars = vs;
        self
    }

    pub fn forall(mut self, vars: Vec<Var>) -> Self {
        let mut vs = vars;
        vs.extend(self.avars);
        self.avars = vs;
        self
    }

    pub fn and(f: &mut NodeFactory, pieces: Vec<Prenex>) -> Self {
        let mut evars = Vec::new();
        let mut avars = Vec::new();
        let mut ms = Vec::new();
        for p in pieces {
            evars.extend(p.evars);
            avars.extend(p.avars);
            ms.push(p.matrix);
        }
        Self {
            evars,
            avars,
            matrix: f.and(ms),
        }
    }

    pub fn or(f: &mut NodeFactory, pieces: Vec<Prenex>) -> Self {
        let mut evars = Vec::new();
        let mut avars = Vec::new();
        let mut ms = Vec::new();
        for p in pieces {
            evars.extend(p.evars);
            avars.extend(p.avars);
            ms.push(p.matrix);
        }
        Self {
            evars,
            avars,
            matrix: f.or(ms),
        }
    }

    /// Closes the piece into a formula with the given free variables,
    /// dropping quantified variables that no longer occur in the matrix
    /// (constant folding can eliminate them).
    pub fn into_formula(self, free: Vec<Var>) -> Formula {
        let mut used = BTreeSet::new();
        self.matrix.collect_vars(&mut used);
        let dedup = |vars: Vec<Var>| {
            let mut seen = BTreeSet::new();
            vars.into_iter()
                .filter(|v| used.contains(v) && seen.insert(v.clone()))
                .collect::<Vec<_>>()
        };
        let evars = dedup(self.evars);
        let avars = dedup(self.avars);
        let mut prefix: Vec<(Quant, Var)> =
            evars.into_iter().map(|v| (Quant::Exists, v)).collect();
        prefix.extend(avars.into_iter().map(|v| (Quant::Forall, v)));
        Formula::new(prefix, self.matrix, free).expect("builder produced ill-formed formula")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factory_shares_structurally_equal_nodes() {
        let mut f = NodeFactory::new();
        let x = Var::new("x");
        let a1 = f.atom(Atom::Aux(0, x.clone()));
        let a2 = f.atom(Atom::Aux(0, x.clone()));
        assert!(Rc::ptr_eq(&a1, &a2));
        let t = f.bool_true();
        let and1 = f.and(vec![a1.clone(), t]);
        assert!(Rc::ptr_eq(&and1, &a1), "true is absorbed and singleton unwrapped");
        let or1 = f.or(vec![a1.clone(), a2.clone()]);
        assert!(Rc::ptr_eq(&or1, &a1), "duplicate children collapse");
    }

    #[test]
    fn formula_well_formedness() {
        let mut f = NodeFactory::new();
        let x = Var::new("x");
        let y = Var::new("y");
        let m = f.atom(Atom::Le(x.clone(), y.clone()));
        assert!(Formula::new(vec![(Quant::Exists, y.clone())], m.clone(), vec![x.clone()]).is_ok());
        assert!(matches!(
            Formula::new(vec![], m.clone(), vec![x.clone()]),
            Err(FormulaError::Undeclared(_))
        ));
        assert!(matches!(
            Formula::new(
                vec![(Quant::Exists, x.clone())],
                m,
                vec![x.clone(), y.clone()]
            ),
            Err(FormulaError::Rebound(_))
        ));
    }
}
