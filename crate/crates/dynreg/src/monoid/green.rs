use super::core::{Elem, FiniteMonoid};

/// Index of a J-class within [`GreenData::j_classes`].
pub type JClass = usize;

/// Green's preorders and equivalence classes of a finite monoid, computed
/// exactly by enumerating multipliers.
///
/// `x ≤_R y` iff `x = y·α` for some α; `x ≤_L y` iff `x = α·y`;
/// `x ≤_J y` iff `x = α·y·β`; `x ≤_H y` iff both.
#[derive(Debug, Clone)]
pub struct GreenData {
    size: usize,
    pub leq_r: Vec<bool>,
    pub leq_l: Vec<bool>,
    pub leq_j: Vec<bool>,
    pub leq_h: Vec<bool>,
    /// Class index per element, canonical: the class of the smallest member
    /// element gets the smallest index.
    pub r_class: Vec<usize>,
    pub l_class: Vec<usize>,
    pub j_class: Vec<JClass>,
    pub h_class: Vec<usize>,
    /// Member lists per J-class index.
    pub j_classes: Vec<Vec<Elem>>,
    /// `j_order[a * j_count + b]` — J-class `a` ≤ J-class `b` in the induced
    /// partial order on J-classes.
    j_order: Vec<bool>,
}

impl GreenData {
    pub fn compute(m: &FiniteMonoid) -> Self {
        let n = m.size();
        let mut leq_r = vec![false; n * n];
        let mut leq_l = vec![false; n * n];
        let mut leq_j = vec![false; n * n];
        let mut leq_h = vec![false; n * n];
        for x in m.elems() {
            for y in m.elems() {
                let r = m.elems().any(|a| m.mul(y, a) == x);
                let l = m.elems().any(|a| m.mul(a, y) == x);
                let j = m
                    .elems()
                    .any(|a| m.elems().any(|b| m.mul(m.mul(a, y), b) == x));
                leq_r[x * n + y] = r;
                leq_l[x * n + y] = l;
                leq_j[x * n + y] = j;
                leq_h[x * n + y] = r && l;
            }
        }

        let classes_of = |leq: &Vec<bool>| -> Vec<usize> {
            let mut class = vec![usize::MAX; n];
            let mut next = 0;
            for x in 0..n {
                if class[x] != usize::MAX {
                    continue;
                }
                for y in x..n {
                    if leq[x * n + y] && leq[y * n + x] {
                        if class[y] == usize::MAX {
                            class[y] = next;
                        }
                    }
                }
                next += 1;
            }
            class
        };
        let r_class = classes_of(&leq_r);
        let l_class = classes_of(&leq_l);
        let j_class = classes_of(&leq_j);
        let h_class = classes_of(&leq_h);

        let j_count = j_class.iter().max().map_or(0, |&c| c + 1);
        let mut j_classes = vec![Vec::new(); j_count];
        for x in m.elems() {
            j_classes[j_class[x]].push(x);
        }
        let mut j_order = vec![false; j_count * j_count];
        for a in 0..j_count {
            for b in 0..j_count {
                let x = j_classes[a][0];
                let y = j_classes[b][0];
                j_order[a * j_count + b] = leq_j[x * n + y];
            }
        }

        Self {
            size: n,
            leq_r,
            leq_l,
            leq_j,
            leq_h,
            r_class,
            l_class,
            j_class,
            h_class,
            j_classes,
            j_order,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn j_count(&self) -> usize {
        self.j_classes.len()
    }

    #[inline]
    pub fn le_r(&self, x: Elem, y: Elem) -> bool {
        self.leq_r[x * self.size + y]
    }

    #[inline]
    pub fn le_l(&self, x: Elem, y: Elem) -> bool {
        self.leq_l[x * self.size + y]
    }

    #[inline]
    pub fn le_j(&self, x: Elem, y: Elem) -> bool {
        self.leq_j[x * self.size + y]
    }

    #[inline]
    pub fn le_h(&self, x: Elem, y: Elem) -> bool {
        self.leq_h[x * self.size + y]
    }

    pub fn r_equiv(&self, x: Elem, y: Elem) -> bool {
        self.r_class[x] == self.r_class[y]
    }

    pub fn l_equiv(&self, x: Elem, y: Elem) -> bool {
        self.l_class[x] == self.l_class[y]
    }

    pub fn j_equiv(&self, x: Elem, y: Elem) -> bool {
        self.j_class[x] == self.j_class[y]
    }

    pub fn h_equiv(&self, x: Elem, y: Elem) -> bool {
        self.h_class[x] == self.h_class[y]
    }

    /// J-class order: class `a` ≤ class `b`.
    #[inline]
    pub fn j_class_le(&self, a: JClass, b: JClass) -> bool {
        self.j_order[a * self.j_count() + b]
    }

    /// `x ≥_J J` — the J-class of `x` is at least the class `j`.
    #[inline]
    pub fn elem_ge_class(&self, x: Elem, j: JClass) -> bool {
        self.j_class_le(j, self.j_class[x])
    }

    /// Members of the H-class of `x`.
    pub fn h_members(&self, x: Elem) -> Vec<Elem> {
        (0..self.size)
            .filter(|&y| self.h_class[y] == self.h_class[x])
            .collect()
    }

    /// All strictly decreasing chains of J-classes starting from the class of
    /// the identity (the global maximum). Each chain is a sequence of class
    /// indices; chains are not required to be saturated.
    pub fn falling_chains_from_top(&self, top: JClass) -> Vec<Vec<JClass>> {
        let mut out = Vec::new();
        let mut stack = vec![vec![top]];
        while let Some(chain) = stack.pop() {
            out.push(chain.clone());
            let last = *chain.last().unwrap();
            for c in 0..self.j_count() {
                if c != last && self.j_class_le(c, last) {
                    let mut ext = chain.clone();
                    ext.push(c);
                    stack.push(ext);
                }
            }
        }
        out.sort();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::FiniteMonoid;

    fn u2() -> FiniteMonoid {
        // 1, a, b with x·a = a, x·b = b; syntactic monoid of (a+b)*a.
        FiniteMonoid::new(vec![vec![0, 1, 2], vec![1, 1, 2], vec![2, 1, 2]], 0)
            .unwrap()
            .with_names(vec!["1".into(), "a".into(), "b".into()])
    }

    #[test]
    fn groups_are_single_h_class() {
        let z2 = FiniteMonoid::cyclic(2);
        let g = GreenData::compute(&z2);
        assert!(g.h_equiv(0, 1));
        assert!(g.r_equiv(0, 1) && g.l_equiv(0, 1) && g.j_equiv(0, 1));
        assert_eq!(g.j_count(), 1);
    }

    #[test]
    fn u2_r_but_not_l() {
        let g = GreenData::compute(&u2());
        // a=1, b=2 are R-equivalent but not L-equivalent.
        assert!(g.r_equiv(1, 2));
        assert!(!g.l_equiv(1, 2));
        assert!(g.j_equiv(1, 2));
        // The identity's J-class is strictly above.
        assert!(g.j_class_le(g.j_class[1], g.j_class[0]));
        assert!(!g.j_class_le(g.j_class[0], g.j_class[1]));
    }

    #[test]
    fn u1_all_classes_singleton() {
        let g = GreenData::compute(&FiniteMonoid::u1());
        assert!(!g.j_equiv(0, 1));
        assert!(g.le_j(1, 0)); // a ≤_J 1
        assert!(!g.le_j(0, 1)); // 1 ≥_J a strictly
    }

    #[test]
    fn h_is_conjunction_and_classes_partition() {
        for m in [FiniteMonoid::u1(), u2(), FiniteMonoid::cyclic(6), FiniteMonoid::symmetric(3)] {
            let g = GreenData::compute(&m);
            for x in m.elems() {
                for y in m.elems() {
                    assert_eq!(g.le_h(x, y), g.le_r(x, y) && g.le_l(x, y));
                    assert_eq!(g.h_equiv(x, y), g.r_equiv(x, y) && g.l_equiv(x, y));
                    // R ⊆ J and L ⊆ J as equivalences.
                    if g.r_equiv(x, y) || g.l_equiv(x, y) {
                        assert!(g.j_equiv(x, y));
                    }
                }
            }
            // Multiplying never climbs the J-order.
            for a in m.elems() {
                for x in m.elems() {
                    for b in m.elems() {
                        let y = m.mul(m.mul(a, x), b);
                        assert!(g.le_j(y, x));
                    }
                }
            }
        }
    }

    #[test]
    fn j_meets_r_order_strengthens_to_r_equiv() {
        // x J y and x ≤_R y implies x R y, exhaustively on fixtures.
        for m in [FiniteMonoid::u1(), u2(), FiniteMonoid::cyclic(6), FiniteMonoid::symmetric(3)] {
            let g = GreenData::compute(&m);
            for x in m.elems() {
                for y in m.elems() {
                    if g.j_equiv(x, y) && g.le_r(x, y) {
                        assert!(g.r_equiv(x, y));
                    }
                    if g.j_equiv(x, y) && g.le_l(x, y) {
                        assert!(g.l_equiv(x, y));
                    }
                }
            }
        }
    }

    #[test]
    fn falling_chains_enumerate_strict_descents() {
        let g = GreenData::compute(&u2());
        let top = g.j_class[0];
        let chains = g.falling_chains_from_top(top);
        // U₂ has two J-classes: {1} above {a,b}: chains are [top] and [top, lower].
        assert_eq!(chains.len(), 2);
    }
}
