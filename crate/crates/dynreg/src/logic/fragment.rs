use super::formula::{Atom, Formula, Matrix, Quant};
use std::fmt;

/// The update-formula fragments: quantifier prefix shape plus, for the ⁺
/// variants, the restriction that negation appears only directly on a
/// linear-order atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FragmentTag {
    Prop,
    PropPlus,
    Sigma1,
    Sigma1Plus,
    Sigma2,
    Sigma2Plus,
}

impl FragmentTag {
    pub fn is_positive(self) -> bool {
        matches!(
            self,
            FragmentTag::PropPlus | FragmentTag::Sigma1Plus | FragmentTag::Sigma2Plus
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FragmentTag::Prop => "prop",
            FragmentTag::PropPlus => "prop+",
            FragmentTag::Sigma1 => "sigma1",
            FragmentTag::Sigma1Plus => "sigma1+",
            FragmentTag::Sigma2 => "sigma2",
            FragmentTag::Sigma2Plus => "sigma2+",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "prop" => Some(FragmentTag::Prop),
            "prop+" => Some(FragmentTag::PropPlus),
            "sigma1" => Some(FragmentTag::Sigma1),
            "sigma1+" => Some(FragmentTag::Sigma1Plus),
            "sigma2" => Some(FragmentTag::Sigma2),
            "sigma2+" => Some(FragmentTag::Sigma2Plus),
            _ => None,
        }
    }
}

impl fmt::Display for FragmentTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of a fragment check: either a pass, or the first violation with a
/// human-readable diagnostic naming the offending construct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FragmentCheck {
    pub ok: bool,
    pub diagnostic: Option<String>,
}

impl FragmentCheck {
    fn pass() -> Self {
        Self {
            ok: true,
            diagnostic: None,
        }
    }

    fn fail(msg: String) -> Self {
        Self {
            ok: false,
            diagnostic: Some(msg),
        }
    }
}

/// Checks whether `f` lies in the fragment `tag`.
///
/// Prefix shapes: `Prop` forbids quantifiers, `Σ₁` admits only existentials,
/// `Σ₂` an existential block followed by a universal block (either may be
/// empty). The ⁺ variants additionally require every negation to sit directly
/// on a `≤` atom.
pub fn check_fragment(f: &Formula, tag: FragmentTag) -> FragmentCheck {
    match tag {
        FragmentTag::Prop | FragmentTag::PropPlus => {
            if let Some((q, v)) = f.prefix.first() {
                return FragmentCheck::fail(format!(
                    "quantifier {} {} not allowed in a quantifier-free fragment",
                    quant_name(*q),
                    v.name()
                ));
            }
        }
        FragmentTag::Sigma1 | FragmentTag::Sigma1Plus => {
            if let Some((_, v)) = f.prefix.iter().find(|(q, _)| *q == Quant::Forall) {
                return FragmentCheck::fail(format!(
                    "universal quantifier on {} not allowed in an existential fragment",
                    v.name()
                ));
            }
        }
        FragmentTag::Sigma2 | FragmentTag::Sigma2Plus => {
            let mut seen_forall = false;
            for (q, v) in &f.prefix {
                match q {
                    Quant::Forall => seen_forall = true,
                    Quant::Exists if seen_forall => {
                        return FragmentCheck::fail(format!(
                            "existential quantifier on {} after a universal block",
                            v.name()
                        ));
                    }
                    Quant::Exists => {}
                }
            }
        }
    }
    if tag.is_positive() {
        if let Some(msg) = first_bad_negation(&f.matrix) {
            return FragmentCheck::fail(msg);
        }
    }
    FragmentCheck::pass()
}

fn quant_name(q: Quant) -> &'static str {
    match q {
        Quant::Exists => "exists",
        Quant::Forall => "forall",
    }
}

fn first_bad_negation(m: &Matrix) -> Option<String> {
    match m {
        Matrix::Atom(_) => None,
        Matrix::Not(inner) => match &**inner {
            Matrix::Atom(Atom::Le(_, _)) => None,
            Matrix::Atom(Atom::Eq(a, b)) => Some(format!(
                "negation on equality {} = {} (use the strict-order disjunction instead)",
                a.name(),
                b.name()
            )),
            Matrix::Atom(Atom::Aux(r, v)) => {
                Some(format!("negation on unary relation #{r}({})", v.name()))
            }
            Matrix::Atom(Atom::Bit(b)) => Some(format!("negation on bit #{b}")),
            Matrix::Atom(Atom::Letter(s, v)) => {
                Some(format!("negation on letter atom W[{}]({})", s.0, v.name()))
            }
            Matrix::Atom(Atom::OldLetter(s, v)) => {
                Some(format!("negation on old-letter atom Wo[{}]({})", s.0, v.name()))
            }
            _ => Some("negation on a compound subformula".to_string()),
        },
        Matrix::And(cs) | Matrix::Or(cs) => cs.iter().find_map(|c| first_bad_negation(c)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::formula::{Atom, NodeFactory, Var};

    fn exists(vs: &[&str]) -> Vec<(Quant, Var)> {
        vs.iter().map(|v| (Quant::Exists, Var::new(v))).collect()
    }

    #[test]
    fn example_update_formula_is_sigma1() {
        // exists k [ N(j) and (i <= j or (j < i and j < k and k < i and W_a(k))) ]
        let mut f = NodeFactory::new();
        let (i, j, k) = (Var::new("i"), Var::new("j"), Var::new("k"));
        let n_j = f.atom(Atom::Aux(0, j.clone()));
        let i_le_j = f.atom(Atom::Le(i.clone(), j.clone()));
        let j_lt_i = f.lt(j.clone(), i.clone());
        let j_lt_k = f.lt(j.clone(), k.clone());
        let k_lt_i = f.lt(k.clone(), i.clone());
        let w_a_k = f.atom(Atom::Letter(crate::alphabet::SymId(0), k.clone()));
        let inner = f.and(vec![j_lt_i, j_lt_k, k_lt_i, w_a_k]);
        let disj = f.or(vec![i_le_j, inner]);
        let matrix = f.and(vec![n_j, disj]);
        let formula = Formula::new(exists(&["k"]), matrix, vec![j, i]).unwrap();
        assert!(check_fragment(&formula, FragmentTag::Sigma1).ok);
        assert!(check_fragment(&formula, FragmentTag::Sigma2).ok);
        assert!(!check_fragment(&formula, FragmentTag::Prop).ok);
        // All negations here sit on <=, so it is even Sigma1+.
        assert!(check_fragment(&formula, FragmentTag::Sigma1Plus).ok);
    }

    #[test]
    fn negated_relation_breaks_plus_with_diagnostic() {
        let mut f = NodeFactory::new();
        let j = Var::new("j");
        let n_j = f.atom(Atom::Aux(0, j.clone()));
        let neg = f.not(n_j);
        let formula = Formula::new(vec![], neg, vec![j]).unwrap();
        let check = check_fragment(&formula, FragmentTag::Sigma1Plus);
        assert!(!check.ok);
        assert!(check.diagnostic.unwrap().contains("negation on unary relation"));
        assert!(check_fragment(&formula, FragmentTag::Sigma1).ok);
    }

    #[test]
    fn prenexed_min_guard_is_sigma2_not_sigma1() {
        // exists j exists k forall i [ (i <= j -> i = j) and ... ]
        let mut f = NodeFactory::new();
        let (i, j, k) = (Var::new("i"), Var::new("j"), Var::new("k"));
        let i_le_j = f.atom(Atom::Le(i.clone(), j.clone()));
        let not_le = f.not(i_le_j);
        let i_eq_j = f.atom(Atom::Eq(i.clone(), j.clone()));
        let min_guard = f.or(vec![not_le, i_eq_j]);
        let k_atom = f.atom(Atom::Aux(0, k.clone()));
        let matrix = f.and(vec![min_guard, k_atom]);
        let formula = Formula::new(
            vec![
                (Quant::Exists, j),
                (Quant::Exists, k),
                (Quant::Forall, i),
            ],
            matrix,
            vec![],
        )
        .unwrap();
        assert!(check_fragment(&formula, FragmentTag::Sigma2).ok);
        let c1 = check_fragment(&formula, FragmentTag::Sigma1);
        assert!(!c1.ok);
        assert!(c1.diagnostic.unwrap().contains("universal quantifier"));
    }

    #[test]
    fn forall_then_exists_is_not_sigma2() {
        let mut f = NodeFactory::new();
        let (i, j) = (Var::new("i"), Var::new("j"));
        let m = f.atom(Atom::Le(i.clone(), j.clone()));
        let formula =
            Formula::new(vec![(Quant::Forall, i), (Quant::Exists, j)], m, vec![]).unwrap();
        assert!(!check_fragment(&formula, FragmentTag::Sigma2).ok);
    }
}
