use super::core::{Elem, FiniteMonoid};
use super::ordered::{OrderError, OrderedMonoid};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SemidirectError {
    #[error("action table must be |N| x |M|")]
    BadShape,
    #[error("left-action axiom {axiom} fails at {witness}")]
    Axiom { axiom: u8, witness: String },
    #[error("product order invalid: {0}")]
    Order(#[from] OrderError),
}

/// A left action of an ordered monoid `(N, ≤)` on an ordered monoid `(M, ≤)`,
/// the data defining a semidirect product `M ∗ N`.
///
/// The six axioms are checked exhaustively at construction:
/// 1. `(y₁y₂)·x = y₁·(y₂·x)`
/// 2. `y·(x₁x₂) = (y·x₁)(y·x₂)`
/// 3. `1·x = x`
/// 4. `y·1 = 1`
/// 5. `x₁ ≤ x₂ ⇒ y·x₁ ≤ y·x₂`
/// 6. `y₁ ≤ y₂ ⇒ y₁·x ≤ y₂·x`
#[derive(Debug, Clone)]
pub struct SemidirectAction {
    pub left: OrderedMonoid,
    pub right: OrderedMonoid,
    /// `action[y * |M| + x]` — the element `y·x` of M.
    action: Vec<Elem>,
}

impl SemidirectAction {
    pub fn new(
        left: OrderedMonoid,
        right: OrderedMonoid,
        action_rows: Vec<Vec<Elem>>,
    ) -> Result<Self, SemidirectError> {
        let m = left.monoid.size();
        let n = right.monoid.size();
        if action_rows.len() != n || action_rows.iter().any(|r| r.len() != m) {
            return Err(SemidirectError::BadShape);
        }
        let mut action = Vec::with_capacity(n * m);
        for row in &action_rows {
            for &v in row {
                if v >= m {
                    return Err(SemidirectError::BadShape);
                }
            }
            action.extend_from_slice(row);
        }
        let act = Self {
            left,
            right,
            action,
        };
        act.check_axioms()?;
        Ok(act)
    }

    /// The trivial action `y·x = x`.
    pub fn trivial(left: OrderedMonoid, right: OrderedMonoid) -> Self {
        let rows = (0..right.monoid.size())
            .map(|_| (0..left.monoid.size()).collect())
            .collect();
        Self::new(left, right, rows).expect("trivial action satisfies all axioms")
    }

    #[inline]
    pub fn act(&self, y: Elem, x: Elem) -> Elem {
        self.action[y * self.left.monoid.size() + x]
    }

    fn check_axioms(&self) -> Result<(), SemidirectError> {
        let lm = &self.left.monoid;
        let rm = &self.right.monoid;
        let fail = |axiom: u8, witness: String| Err(SemidirectError::Axiom { axiom, witness });
        for y1 in rm.elems() {
            for y2 in rm.elems() {
                for x in lm.elems() {
                    if self.act(rm.mul(y1, y2), x) != self.act(y1, self.act(y2, x)) {
                        return fail(1, format!("y1={y1}, y2={y2}, x={x}"));
                    }
                }
            }
        }
        for y in rm.elems() {
            for x1 in lm.elems() {
                for x2 in lm.elems() {
                    if self.act(y, lm.mul(x1, x2)) != lm.mul(self.act(y, x1), self.act(y, x2)) {
                        return fail(2, format!("y={y}, x1={x1}, x2={x2}"));
                    }
                }
            }
        }
        for x in lm.elems() {
            if self.act(rm.identity(), x) != x {
                return fail(3, format!("x={x}"));
            }
        }
        for y in rm.elems() {
            if self.act(y, lm.identity()) != lm.identity() {
                return fail(4, format!("y={y}"));
            }
        }
        for y in rm.elems() {
            for x1 in lm.elems() {
                for x2 in lm.elems() {
                    if self.left.le(x1, x2) && !self.left.le(self.act(y, x1), self.act(y, x2)) {
                        return fail(5, format!("y={y}, x1={x1}, x2={x2}"));
                    }
                }
            }
        }
        for y1 in rm.elems() {
            for y2 in rm.elems() {
                for x in lm.elems() {
                    if self.right.le(y1, y2) && !self.left.le(self.act(y1, x), self.act(y2, x)) {
                        return fail(6, format!("y1={y1}, y2={y2}, x={x}"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Index of the pair `(x, y)` in the product monoid.
    pub fn pair_index(&self, x: Elem, y: Elem) -> Elem {
        x * self.right.monoid.size() + y
    }

    pub fn pair_of(&self, idx: Elem) -> (Elem, Elem) {
        let n = self.right.monoid.size();
        (idx / n, idx % n)
    }

    /// The semidirect product `(M,≤) ∗ (N,≤)` with componentwise order.
    ///
    /// `(x₁,y₁)(x₂,y₂) = (x₁ (y₁·x₂), y₁y₂)`.
    pub fn semidirect_product(&self) -> Result<OrderedMonoid, SemidirectError> {
        let lm = &self.left.monoid;
        let rm = &self.right.monoid;
        let size = lm.size() * rm.size();
        let mut rows = Vec::with_capacity(size);
        let mut names = Vec::with_capacity(size);
        for idx1 in 0..size {
            let (x1, y1) = self.pair_of(idx1);
            let mut row = Vec::with_capacity(size);
            for idx2 in 0..size {
                let (x2, y2) = self.pair_of(idx2);
                let x = lm.mul(x1, self.act(y1, x2));
                let y = rm.mul(y1, y2);
                row.push(self.pair_index(x, y));
            }
            rows.push(row);
            names.push(format!("({},{})", lm.name(x1), rm.name(y1)));
        }
        let identity = self.pair_index(lm.identity(), rm.identity());
        // Associativity is re-verified by the FiniteMonoid constructor.
        let monoid = FiniteMonoid::new(rows, identity)
            .map_err(|e| SemidirectError::Axiom {
                axiom: 1,
                witness: format!("product not a monoid: {e}"),
            })?
            .with_names(names);
        let leq = (0..size)
            .map(|i| {
                let (x1, y1) = self.pair_of(i);
                (0..size)
                    .map(|j| {
                        let (x2, y2) = self.pair_of(j);
                        self.left.le(x1, x2) && self.right.le(y1, y2)
                    })
                    .collect()
            })
            .collect();
        Ok(OrderedMonoid::new(monoid, leq)?)
    }

    /// The unfolded product formula
    /// `(x₁ (y₁·x₂) (y₁y₂·x₃) ⋯ (y₁⋯y_{n−1}·x_n), y₁⋯y_n)`,
    /// used as the independent route against folding in the product monoid.
    pub fn unfold_pairs(&self, pairs: &[(Elem, Elem)]) -> (Elem, Elem) {
        let lm = &self.left.monoid;
        let rm = &self.right.monoid;
        let mut group_prefix = rm.identity();
        let mut sum = lm.identity();
        for &(x, y) in pairs {
            sum = lm.mul(sum, self.act(group_prefix, x));
            group_prefix = rm.mul(group_prefix, y);
        }
        (sum, group_prefix)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::ordered::{u1_plus, OrderedMonoid};
    use crate::monoid::FiniteMonoid;

    fn z2_discrete() -> OrderedMonoid {
        OrderedMonoid::discrete(FiniteMonoid::cyclic(2))
    }

    #[test]
    fn trivial_action_gives_direct_product() {
        let act = SemidirectAction::trivial(u1_plus(), z2_discrete());
        let p = act.semidirect_product().unwrap();
        assert_eq!(p.size(), 4);
        // Componentwise multiplication.
        let i = |x, y| act.pair_index(x, y);
        assert_eq!(p.monoid.mul(i(1, 0), i(0, 1)), i(1, 1));
        assert_eq!(p.monoid.mul(i(1, 1), i(1, 1)), i(1, 0));
    }

    #[test]
    fn axiom_4_violation_is_named() {
        // Right part U₁ (discrete order), its zero acting as the constant-a
        // endomorphism of U₁⁺. Axioms 1-3 hold, but a·1 = a breaks y·1 = 1.
        let err = SemidirectAction::new(
            u1_plus(),
            OrderedMonoid::discrete(FiniteMonoid::u1()),
            vec![vec![0, 1], vec![1, 1]],
        );
        match err {
            Err(SemidirectError::Axiom { axiom: 4, .. }) => {}
            other => panic!("expected axiom-4 violation, got {other:?}"),
        }
    }

    #[test]
    fn unfolding_matches_folding_for_short_sequences() {
        let actions = [
            SemidirectAction::trivial(u1_plus(), z2_discrete()),
            SemidirectAction::trivial(
                OrderedMonoid::discrete(FiniteMonoid::u1()),
                z2_discrete(),
            ),
        ];
        for act in actions {
            let product = act.semidirect_product().unwrap();
            let m = act.left.monoid.size();
            let n = act.right.monoid.size();
            let all_pairs: Vec<(Elem, Elem)> = (0..m)
                .flat_map(|x| (0..n).map(move |y| (x, y)))
                .collect();
            let mut seqs: Vec<Vec<(Elem, Elem)>> = vec![Vec::new()];
            let mut frontier: Vec<Vec<(Elem, Elem)>> = vec![Vec::new()];
            for _ in 0..5 {
                let mut next = Vec::new();
                for s in &frontier {
                    for &p in &all_pairs {
                        let mut s2 = s.clone();
                        s2.push(p);
                        next.push(s2);
                    }
                }
                seqs.extend(next.iter().cloned());
                frontier = next;
            }
            for s in seqs {
                let folded = product
                    .monoid
                    .product(s.iter().map(|&(x, y)| act.pair_index(x, y)));
                assert_eq!(act.pair_of(folded), act.unfold_pairs(&s), "seq {s:?}");
            }
        }
    }
}
