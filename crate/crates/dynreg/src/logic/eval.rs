use super::formula::{Atom, BitId, Formula, Matrix, Quant, RelId, Var};
use crate::alphabet::SymId;

/// Read access to a word structure plus auxiliary store, as the formulas see
/// it: current letters, snapshot (old) letters, unary relations, bits.
/// Positions are 1-based; `domain_size` may be 0.
pub trait Structure {
    fn domain_size(&self) -> usize;
    fn letter_is(&self, pos: usize, sym: SymId) -> bool;
    fn old_letter_is(&self, pos: usize, sym: SymId) -> bool;
    fn unary(&self, rel: RelId, pos: usize) -> bool;
    fn bit(&self, bit: BitId) -> bool;
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("unbound variable '{0}'")]
    Unbound(String),
    #[error("assignment for '{0}' is position {1}, outside 1..={2}")]
    OutOfDomain(String, usize, usize),
}

/// Naive evaluation under standard first-order semantics: quantifiers loop
/// over positions `1..=n`, the matrix is evaluated directly. Exponential in
/// the number of quantified variables.
pub fn eval_formula(
    f: &Formula,
    st: &dyn Structure,
    assignment: &[(Var, usize)],
) -> Result<bool, EvalError> {
    let n = st.domain_size();
    let mut env: Vec<(Var, usize)> = Vec::with_capacity(assignment.len() + f.prefix.len());
    for v in &f.free {
        let val = assignment
            .iter()
            .find(|(w, _)| w == v)
            .map(|(_, p)| *p)
            .ok_or_else(|| EvalError::Unbound(v.name().to_string()))?;
        if val < 1 || val > n {
            return Err(EvalError::OutOfDomain(v.name().to_string(), val, n));
        }
        env.push((v.clone(), val));
    }
    Ok(eval_prefix(&f.prefix, &f.matrix, st, &mut env))
}

fn eval_prefix(
    prefix: &[(Quant, Var)],
    matrix: &Matrix,
    st: &dyn Structure,
    env: &mut Vec<(Var, usize)>,
) -> bool {
    match prefix.first() {
        None => eval_matrix(matrix, st, env),
        Some((q, v)) => {
            let n = st.domain_size();
            let rest = &prefix[1..];
            match q {
                Quant::Exists => (1..=n).any(|p| {
                    env.push((v.clone(), p));
                    let r = eval_prefix(rest, matrix, st, env);
                    env.pop();
                    r
                }),
                Quant::Forall => (1..=n).all(|p| {
                    env.push((v.clone(), p));
                    let r = eval_prefix(rest, matrix, st, env);
                    env.pop();
                    r
                }),
            }
        }
    }
}

fn lookup(env: &[(Var, usize)], v: &Var) -> usize {
    env.iter()
        .rev()
        .find(|(w, _)| w == v)
        .map(|(_, p)| *p)
        .expect("well-formedness guarantees bound variables")
}

fn eval_matrix(m: &Matrix, st: &dyn Structure, env: &[(Var, usize)]) -> bool {
    match m {
        Matrix::Atom(a) => eval_atom(a, st, env),
        Matrix::Not(inner) => !eval_matrix(inner, st, env),
        Matrix::And(cs) => cs.iter().all(|c| eval_matrix(c, st, env)),
        Matrix::Or(cs) => cs.iter().any(|c| eval_matrix(c, st, env)),
    }
}

fn eval_atom(a: &Atom, st: &dyn Structure, env: &[(Var, usize)]) -> bool {
    match a {
        Atom::Letter(sym, v) => st.letter_is(lookup(env, v), *sym),
        Atom::OldLetter(sym, v) => st.old_letter_is(lookup(env, v), *sym),
        Atom::Aux(rel, v) => st.unary(*rel, lookup(env, v)),
        Atom::Bit(b) => st.bit(*b),
        Atom::Le(x, y) => lookup(env, x) <= lookup(env, y),
        Atom::Eq(x, y) => lookup(env, x) == lookup(env, y),
    }
}

/// A plain in-memory structure, mostly for tests and parsing round-trips.
#[derive(Debug, Clone, Default)]
pub struct VecStructure {
    pub letters: Vec<Option<SymId>>,
    pub old_letters: Vec<Option<SymId>>,
    pub unary: Vec<Vec<bool>>,
    pub bits: Vec<bool>,
}

impl Structure for VecStructure {
    fn domain_size(&self) -> usize {
        self.letters.len()
    }

    fn letter_is(&self, pos: usize, sym: SymId) -> bool {
        self.letters[pos - 1] == Some(sym)
    }

    fn old_letter_is(&self, pos: usize, sym: SymId) -> bool {
        self.old_letters[pos - 1] == Some(sym)
    }

    fn unary(&self, rel: RelId, pos: usize) -> bool {
        self.unary[rel as usize][pos - 1]
    }

    fn bit(&self, bit: BitId) -> bool {
        self.bits[bit as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::formula::NodeFactory;

    fn structure(letters: Vec<Option<SymId>>) -> VecStructure {
        let n = letters.len();
        VecStructure {
            letters,
            old_letters: vec![None; n],
            unary: vec![vec![false; n]],
            bits: vec![false],
        }
    }

    #[test]
    fn min_position_formula() {
        // forall i (i <= j -> i = j), with j free: true only at j = 1.
        let mut f = NodeFactory::new();
        let (i, j) = (Var::new("i"), Var::new("j"));
        let le = f.atom(Atom::Le(i.clone(), j.clone()));
        let nle = f.not(le);
        let eq = f.atom(Atom::Eq(i.clone(), j.clone()));
        let m = f.or(vec![nle, eq]);
        let formula = Formula::new(vec![(Quant::Forall, i)], m, vec![j.clone()]).unwrap();
        let st = structure(vec![None, None, None]);
        assert!(eval_formula(&formula, &st, &[(j.clone(), 1)]).unwrap());
        assert!(!eval_formula(&formula, &st, &[(j.clone(), 2)]).unwrap());
        assert!(!eval_formula(&formula, &st, &[(j, 3)]).unwrap());
    }

    #[test]
    fn letter_atom_checks_position() {
        let mut f = NodeFactory::new();
        let x = Var::new("x");
        let m = f.atom(Atom::Letter(SymId(0), x.clone()));
        let formula = Formula::new(vec![], m, vec![x.clone()]).unwrap();
        let st = structure(vec![Some(SymId(1)), Some(SymId(0))]);
        assert!(!eval_formula(&formula, &st, &[(x.clone(), 1)]).unwrap());
        assert!(eval_formula(&formula, &st, &[(x.clone(), 2)]).unwrap());
        // Unbound variable errors.
        assert!(matches!(
            eval_formula(&formula, &st, &[]),
            Err(EvalError::Unbound(_))
        ));
    }

    #[test]
    fn sentence_invariant_under_bound_renaming() {
        let mk = |name: &str| {
            let mut f = NodeFactory::new();
            let v = Var::new(name);
            let m = f.atom(Atom::Letter(SymId(0), v.clone()));
            Formula::new(vec![(Quant::Exists, v)], m, vec![]).unwrap()
        };
        let f1 = mk("x");
        let f2 = mk("zz");
        let st = structure(vec![None, Some(SymId(0))]);
        assert_eq!(
            eval_formula(&f1, &st, &[]).unwrap(),
            eval_formula(&f2, &st, &[]).unwrap()
        );
    }

    #[test]
    fn empty_domain_semantics() {
        let mut f = NodeFactory::new();
        let x = Var::new("x");
        let m = f.atom(Atom::Letter(SymId(0), x.clone()));
        let ex = Formula::new(vec![(Quant::Exists, x.clone())], m.clone(), vec![]).unwrap();
        let fa = Formula::new(vec![(Quant::Forall, x)], m, vec![]).unwrap();
        let st = structure(vec![]);
        assert!(!eval_formula(&ex, &st, &[]).unwrap());
        assert!(eval_formula(&fa, &st, &[]).unwrap());
    }
}
