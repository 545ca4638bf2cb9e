use super::core::{Elem, FiniteMonoid};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrderError {
    #[error("order matrix must be {0}x{0}")]
    BadShape(usize),
    #[error("order is not reflexive at {0}")]
    NotReflexive(Elem),
    #[error("order is not antisymmetric at {0},{1}")]
    NotAntisymmetric(Elem, Elem),
    #[error("order is not transitive at {0},{1},{2}")]
    NotTransitive(Elem, Elem, Elem),
    #[error("order is not compatible: {0}≤{1} and {2}≤{3} but not {0}{2}≤{1}{3}")]
    NotCompatible(Elem, Elem, Elem, Elem),
}

/// A finite monoid with a compatible partial order.
#[derive(Clone, PartialEq, Eq)]
pub struct OrderedMonoid {
    pub monoid: FiniteMonoid,
    leq: Vec<bool>,
}

impl OrderedMonoid {
    pub fn new(monoid: FiniteMonoid, leq_rows: Vec<Vec<bool>>) -> Result<Self, OrderError> {
        let n = monoid.size();
        if leq_rows.len() != n || leq_rows.iter().any(|r| r.len() != n) {
            return Err(OrderError::BadShape(n));
        }
        let mut leq = Vec::with_capacity(n * n);
        for row in &leq_rows {
            leq.extend_from_slice(row);
        }
        let om = Self { monoid, leq };
        om.validate()?;
        Ok(om)
    }

    /// The trivial (discrete) order: x ≤ y iff x = y.
    pub fn discrete(monoid: FiniteMonoid) -> Self {
        let n = monoid.size();
        let rows = (0..n)
            .map(|x| (0..n).map(|y| x == y).collect())
            .collect();
        Self::new(monoid, rows).expect("equality is always compatible")
    }

    fn validate(&self) -> Result<(), OrderError> {
        let m = &self.monoid;
        for x in m.elems() {
            if !self.le(x, x) {
                return Err(OrderError::NotReflexive(x));
            }
        }
        for x in m.elems() {
            for y in m.elems() {
                if x != y && self.le(x, y) && self.le(y, x) {
                    return Err(OrderError::NotAntisymmetric(x, y));
                }
                for z in m.elems() {
                    if self.le(x, y) && self.le(y, z) && !self.le(x, z) {
                        return Err(OrderError::NotTransitive(x, y, z));
                    }
                }
            }
        }
        for x in m.elems() {
            for y in m.elems() {
                if !self.le(x, y) {
                    continue;
                }
                for x2 in m.elems() {
                    for y2 in m.elems() {
                        if self.le(x2, y2) && !self.le(m.mul(x, x2), m.mul(y, y2)) {
                            return Err(OrderError::NotCompatible(x, y, x2, y2));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.monoid.size()
    }

    #[inline]
    pub fn le(&self, x: Elem, y: Elem) -> bool {
        self.leq[x * self.monoid.size() + y]
    }

    /// The upward closure of `x`.
    pub fn up(&self, x: Elem) -> BTreeSet<Elem> {
        self.monoid.elems().filter(|&y| self.le(x, y)).collect()
    }

    /// Upward closure of a set.
    pub fn upward_closure(&self, set: &BTreeSet<Elem>) -> BTreeSet<Elem> {
        set.iter().flat_map(|&x| self.up(x)).collect()
    }

    pub fn is_upset(&self, set: &BTreeSet<Elem>) -> bool {
        &self.upward_closure(set) == set
    }

    /// Minimal elements of an upset (the antichain generating it).
    pub fn minimal_elements(&self, set: &BTreeSet<Elem>) -> Vec<Elem> {
        set.iter()
            .copied()
            .filter(|&x| !set.iter().any(|&y| y != x && self.le(y, x)))
            .collect()
    }

    /// J⁺ membership: the identity is below every element.
    pub fn is_jplus(&self) -> bool {
        let one = self.monoid.identity();
        self.monoid.elems().all(|x| self.le(one, x))
    }

    /// EJ⁺ membership: the identity is below every idempotent. By the
    /// Pin–Weil theorem this is exactly membership in the wreath product of
    /// J⁺ with the groups.
    pub fn is_ejplus(&self) -> bool {
        let one = self.monoid.identity();
        self.monoid
            .elems()
            .filter(|&e| self.monoid.is_idempotent(e))
            .all(|e| self.le(one, e))
    }

    /// Witness realizing a U₁⁻ division when the ordered monoid is outside
    /// EJ⁺: an idempotent `e` with `1 ≰ e`. Returns the smallest such index,
    /// or `None` exactly when [`Self::is_ejplus`] holds.
    pub fn find_u1_minus_divisor(&self) -> Option<Elem> {
        let one = self.monoid.identity();
        self.monoid
            .elems()
            .find(|&e| self.monoid.is_idempotent(e) && !self.le(one, e))
    }
}

impl fmt::Debug for OrderedMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "OrderedMonoid over {:?}", self.monoid)?;
        write!(f, "  strict pairs:")?;
        for x in self.monoid.elems() {
            for y in self.monoid.elems() {
                if x != y && self.le(x, y) {
                    write!(f, " {}<{}", self.monoid.name(x), self.monoid.name(y))?;
                }
            }
        }
        writeln!(f)
    }
}

/// U₁⁺: U₁ ordered by 1 ≤ a.
pub fn u1_plus() -> OrderedMonoid {
    OrderedMonoid::new(
        FiniteMonoid::u1(),
        vec![vec![true, true], vec![false, true]],
    )
    .unwrap()
}

/// U₁⁻: U₁ ordered by a ≤ 1.
pub fn u1_minus() -> OrderedMonoid {
    OrderedMonoid::new(
        FiniteMonoid::u1(),
        vec![vec![true, false], vec![true, true]],
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jplus_and_ejplus_on_u1_variants() {
        assert!(u1_plus().is_jplus());
        assert!(u1_plus().is_ejplus());
        assert!(!u1_minus().is_jplus());
        assert!(!u1_minus().is_ejplus());
        assert_eq!(u1_minus().find_u1_minus_divisor(), Some(1));
        assert_eq!(u1_plus().find_u1_minus_divisor(), None);
    }

    #[test]
    fn any_ordered_group_is_ejplus() {
        // Finite groups admit only the discrete compatible order.
        let g = OrderedMonoid::discrete(FiniteMonoid::cyclic(4));
        assert!(g.is_ejplus());
        assert!(g.find_u1_minus_divisor().is_none());
        // But a nontrivial group is not J⁺ under equality.
        assert!(!g.is_jplus());
    }

    #[test]
    fn incompatible_orders_are_rejected() {
        // On U₁ order a ≤ 1 AND 1 ≤ a breaks antisymmetry.
        let err = OrderedMonoid::new(
            FiniteMonoid::u1(),
            vec![vec![true, true], vec![true, true]],
        );
        assert!(matches!(err, Err(OrderError::NotAntisymmetric(..))));
    }

    #[test]
    fn upsets_and_minimal_elements() {
        let om = u1_plus();
        let up_a: BTreeSet<_> = om.up(1);
        assert_eq!(up_a, BTreeSet::from([1]));
        let up_1: BTreeSet<_> = om.up(0);
        assert_eq!(up_1, BTreeSet::from([0, 1]));
        assert!(om.is_upset(&up_a));
        assert!(!om.is_upset(&BTreeSet::from([0])));
        assert_eq!(om.minimal_elements(&up_1), vec![0]);
    }
}
