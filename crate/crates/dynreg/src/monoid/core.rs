use crate::alphabet::{Alphabet, AlphabetError, SymId};
use std::fmt;

/// Index of a monoid element within its multiplication table.
pub type Elem = usize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MonoidError {
    #[error("multiplication table must be square ({0} rows, row {1} has {2} entries)")]
    NotSquare(usize, usize, usize),
    #[error("entry {0}*{1} = {2} is out of range")]
    OutOfRange(Elem, Elem, Elem),
    #[error("identity law fails: {0}")]
    IdentityLaw(String),
    #[error("associativity fails at ({0}*{1})*{2} != {0}*({1}*{2})")]
    Associativity(Elem, Elem, Elem),
    #[error("morphism: {0}")]
    Morphism(#[from] AlphabetError),
}

/// A finite monoid given by its multiplication table.
///
/// Associativity and the identity law are checked exhaustively at
/// construction; everything downstream may assume they hold.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteMonoid {
    size: usize,
    mult: Vec<Elem>, // row-major size*size
    identity: Elem,
    /// Optional display names (e.g. shortest generating words); not part of
    /// equality.
    names: Option<Vec<String>>,
}

impl FiniteMonoid {
    pub fn new(mult_rows: Vec<Vec<Elem>>, identity: Elem) -> Result<Self, MonoidError> {
        let size = mult_rows.len();
        let mut mult = Vec::with_capacity(size * size);
        for (i, row) in mult_rows.iter().enumerate() {
            if row.len() != size {
                return Err(MonoidError::NotSquare(size, i, row.len()));
            }
            mult.extend_from_slice(row);
        }
        for x in 0..size {
            for y in 0..size {
                let v = mult[x * size + y];
                if v >= size {
                    return Err(MonoidError::OutOfRange(x, y, v));
                }
            }
        }
        if identity >= size {
            return Err(MonoidError::IdentityLaw(format!(
                "identity index {identity} out of range"
            )));
        }
        let m = Self {
            size,
            mult,
            identity,
            names: None,
        };
        for x in 0..size {
            if m.mul(m.identity, x) != x || m.mul(x, m.identity) != x {
                return Err(MonoidError::IdentityLaw(format!("at element {x}")));
            }
        }
        for x in 0..size {
            for y in 0..size {
                for z in 0..size {
                    if m.mul(m.mul(x, y), z) != m.mul(x, m.mul(y, z)) {
                        return Err(MonoidError::Associativity(x, y, z));
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.size);
        self.names = Some(names);
        self
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn identity(&self) -> Elem {
        self.identity
    }

    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        self.mult[x * self.size + y]
    }

    pub fn elems(&self) -> impl Iterator<Item = Elem> {
        0..self.size
    }

    pub fn name(&self, x: Elem) -> String {
        match &self.names {
            Some(names) => names[x].clone(),
            None => format!("m{x}"),
        }
    }

    pub fn names(&self) -> Vec<String> {
        self.elems().map(|x| self.name(x)).collect()
    }

    /// Left-to-right product of a sequence of elements.
    pub fn product(&self, xs: impl IntoIterator<Item = Elem>) -> Elem {
        xs.into_iter().fold(self.identity, |acc, x| self.mul(acc, x))
    }

    pub fn is_idempotent(&self, x: Elem) -> bool {
        self.mul(x, x) == x
    }

    /// The unique idempotent among the powers of `x`, found by iterating
    /// powers until the cycle is entered.
    pub fn idempotent_power(&self, x: Elem) -> Elem {
        let mut p = x;
        for _ in 0..=2 * self.size {
            if self.is_idempotent(p) {
                return p;
            }
            p = self.mul(p, x);
        }
        unreachable!("every element of a finite monoid has an idempotent power")
    }

    /// True iff every element has a two-sided inverse.
    pub fn is_group(&self) -> bool {
        self.elems().all(|x| {
            self.elems()
                .any(|y| self.mul(x, y) == self.identity && self.mul(y, x) == self.identity)
        })
    }

    /// Inverse of `x`, if it has one.
    pub fn inverse(&self, x: Elem) -> Option<Elem> {
        self.elems()
            .find(|&y| self.mul(x, y) == self.identity && self.mul(y, x) == self.identity)
    }

    /// Witness for "not a group": an idempotent `e != 1`, in which case
    /// `{1, e}` is a submonoid isomorphic to U₁. Returns the smallest such
    /// index, or `None` when the monoid is a group.
    pub fn find_u1_submonoid(&self) -> Option<Elem> {
        self.elems()
            .find(|&e| e != self.identity && self.is_idempotent(e))
    }

    /// The two-element monoid U₁ = {1, a} with a·a = a (the zero).
    pub fn u1() -> Self {
        FiniteMonoid::new(vec![vec![0, 1], vec![1, 1]], 0)
            .unwrap()
            .with_names(vec!["1".into(), "a".into()])
    }

    /// The cyclic group of order `n`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0);
        let rows = (0..n)
            .map(|x| (0..n).map(|y| (x + y) % n).collect())
            .collect();
        let names = (0..n).map(|x| format!("g{x}")).collect();
        FiniteMonoid::new(rows, 0).unwrap().with_names(names)
    }

    /// The symmetric group on `n` points, elements ordered lexicographically
    /// by their permutation word.
    pub fn symmetric(n: usize) -> Self {
        let perms = permutations(n);
        let index = |p: &[usize]| perms.iter().position(|q| q == p).unwrap();
        let rows: Vec<Vec<Elem>> = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| {
                        // x·y acts left-to-right: apply p, then q.
                        let composed: Vec<usize> = (0..n).map(|i| q[p[i]]).collect();
                        index(&composed)
                    })
                    .collect()
            })
            .collect();
        let id = index(&(0..n).collect::<Vec<_>>());
        let names = perms.iter().map(|p| format!("{p:?}")).collect();
        FiniteMonoid::new(rows, id).unwrap().with_names(names)
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for p in out {
            for v in 0..n {
                if !p.contains(&v) {
                    let mut p2 = p.clone();
                    p2.push(v);
                    next.push(p2);
                }
            }
        }
        out = next;
    }
    out
}

impl fmt::Debug for FiniteMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FiniteMonoid(size={}, identity={})", self.size, self.identity)?;
        for x in self.elems() {
            write!(f, "  {}:", self.name(x))?;
            for y in self.elems() {
                write!(f, " {}", self.name(self.mul(x, y)))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// A letter-to-element evaluation map `φ: Σ* → M`, given on letters.
#[derive(Clone, PartialEq, Eq)]
pub struct Morphism {
    pub alphabet: Alphabet,
    pub target: FiniteMonoid,
    letter_map: Vec<Elem>,
}

impl Morphism {
    pub fn new(alphabet: Alphabet, target: FiniteMonoid, letter_map: Vec<Elem>) -> Self {
        assert_eq!(letter_map.len(), alphabet.len());
        for &e in &letter_map {
            assert!(e < target.size());
        }
        Self {
            alphabet,
            target,
            letter_map,
        }
    }

    #[inline]
    pub fn apply(&self, sym: SymId) -> Elem {
        self.letter_map[sym.0 as usize]
    }

    /// Image of a position value; epsilon maps to the identity.
    #[inline]
    pub fn apply_opt(&self, sym: Option<SymId>) -> Elem {
        match sym {
            Some(s) => self.apply(s),
            None => self.target.identity(),
        }
    }

    /// Left-to-right fold of a word with epsilon positions.
    pub fn evaluate_word(&self, word: &[Option<SymId>]) -> Elem {
        word.iter()
            .fold(self.target.identity(), |acc, &sym| {
                self.target.mul(acc, self.apply_opt(sym))
            })
    }

    /// Letters whose image is `x`.
    pub fn preimage(&self, x: Elem) -> Vec<SymId> {
        self.alphabet
            .ids()
            .filter(|&s| self.apply(s) == x)
            .collect()
    }
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Morphism{{")?;
        for s in self.alphabet.ids() {
            write!(
                f,
                " {}->{}",
                self.alphabet.name(s),
                self.target.name(self.apply(s))
            )?;
        }
        write!(f, " }}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_broken_tables() {
        // Non-associative magma on {0,1}: 0*0=1 breaks identity.
        assert!(matches!(
            FiniteMonoid::new(vec![vec![1, 1], vec![1, 0]], 0),
            Err(MonoidError::IdentityLaw(_))
        ));
        // Right-zero-ish table that violates associativity:
        // identity 0 fine, but 1*1=2, 2*1=1, 1*2=1, 2*2=2 gives
        // (1*1)*1 = 2*1 = 1 vs 1*(1*1) = 1*2 = 1 ... need a genuine break:
        let bad = FiniteMonoid::new(
            vec![vec![0, 1, 2], vec![1, 2, 2], vec![2, 2, 1]],
            0,
        );
        assert!(matches!(bad, Err(MonoidError::Associativity(..))));
    }

    #[test]
    fn idempotent_power_in_cyclic_groups() {
        let z2 = FiniteMonoid::cyclic(2);
        assert_eq!(z2.idempotent_power(1), 0);
        let z6 = FiniteMonoid::cyclic(6);
        // Brute force: first idempotent among g, g^2, ..., g^6.
        let g = 1;
        let mut p = g;
        let mut expect = None;
        for _ in 0..6 {
            if z6.mul(p, p) == p {
                expect = Some(p);
                break;
            }
            p = z6.mul(p, g);
        }
        assert_eq!(z6.idempotent_power(g), expect.unwrap());
        assert_eq!(z6.idempotent_power(g), z6.identity());
    }

    #[test]
    fn u1_is_not_a_group_and_has_witness() {
        let u1 = FiniteMonoid::u1();
        assert!(!u1.is_group());
        assert_eq!(u1.find_u1_submonoid(), Some(1));
        assert_eq!(u1.idempotent_power(1), 1);
    }

    #[test]
    fn groups_have_no_u1_witness() {
        assert!(FiniteMonoid::cyclic(3).is_group());
        assert_eq!(FiniteMonoid::cyclic(3).find_u1_submonoid(), None);
        let s3 = FiniteMonoid::symmetric(3);
        assert_eq!(s3.size(), 6);
        assert!(s3.is_group());
    }

    #[test]
    fn group_iff_all_idempotent_powers_are_identity() {
        for m in [
            FiniteMonoid::u1(),
            FiniteMonoid::cyclic(2),
            FiniteMonoid::cyclic(6),
            FiniteMonoid::symmetric(3),
        ] {
            let via_powers = m.elems().all(|x| m.idempotent_power(x) == m.identity());
            assert_eq!(m.is_group(), via_powers);
        }
    }

    #[test]
    fn evaluate_word_matches_any_parenthesization() {
        // U₂: 1, a, b with xa = a, xb = b for x in {a,b}; a,b idempotent.
        let u2 = FiniteMonoid::new(
            vec![vec![0, 1, 2], vec![1, 1, 2], vec![2, 1, 2]],
            0,
        )
        .unwrap();
        let alpha = Alphabet::of_chars("ab");
        let phi = Morphism::new(alpha, u2.clone(), vec![1, 2]);
        let mut rng = crate::testkit::SplitMix64::new(7);
        for _ in 0..50 {
            let word: Vec<Option<SymId>> = (0..10)
                .map(|_| match rng.below(3) {
                    0 => None,
                    1 => Some(SymId(0)),
                    _ => Some(SymId(1)),
                })
                .collect();
            // Pairwise right-associated product as the second route.
            let vals: Vec<Elem> = word.iter().map(|&s| phi.apply_opt(s)).collect();
            let right = vals
                .iter()
                .rev()
                .fold(u2.identity(), |acc, &x| u2.mul(x, acc));
            assert_eq!(phi.evaluate_word(&word), right);
        }
    }
}
