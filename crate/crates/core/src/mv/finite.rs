use std::sync::Arc;

use crate::bitset::BitSet;
use crate::lattice::{DualSpacePoint, FiniteDistLattice, FiniteLattice};
use crate::order::FinitePoset;

use super::{check_laws, AxiomViolation, MvError, MvOps};

pub const DEFAULT_CARRIER_CAP: usize = 4096;

/// A finite MV-algebra on `0..size` backed by `¬` and `⊕` tables, with its
/// lattice reduct precomputed.
#[derive(Clone)]
pub struct FiniteMv {
    inner: Arc<Inner>,
}

struct Inner {
    zero: usize,
    neg: Vec<u32>,
    oplus: Vec<u32>,
    lattice: FiniteDistLattice,
    label: String,
    /// Mixed radix of a product (most significant first); empty otherwise.
    radix: Vec<usize>,
}

impl std::fmt::Debug for FiniteMv {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FiniteMv({}, size {})", self.inner.label, self.size())
    }
}

impl PartialEq for FiniteMv {
    fn eq(&self, other: &Self) -> bool {
        self.inner.zero == other.inner.zero
            && self.inner.neg == other.inner.neg
            && self.inner.oplus == other.inner.oplus
    }
}

/// Raw tables viewed through [`MvOps`] for the axiom scan.
struct RawTables<'a> {
    zero: usize,
    neg: &'a [usize],
    oplus: &'a [Vec<usize>],
}

impl MvOps for RawTables<'_> {
    type Elem = usize;

    fn zero(&self) -> usize {
        self.zero
    }

    fn neg(&self, a: usize) -> usize {
        self.neg[a]
    }

    fn oplus(&self, a: usize, b: usize) -> usize {
        self.oplus[a][b]
    }
}

impl FiniteMv {
    /// `Łn` on `0..=n`: `a ⊕ b = min(a + b, n)`, `¬a = n − a`.
    pub fn lukasiewicz(n: usize) -> Result<Self, MvError> {
        if n == 0 {
            return Err(MvError::ZeroChain);
        }
        let size = n + 1;
        let neg = (0..size).map(|a| (n - a) as u32).collect();
        let oplus = (0..size)
            .flat_map(|a| (0..size).map(move |b| (a + b).min(n) as u32))
            .collect();
        Ok(Self::from_valid(0, neg, oplus, format!("Ł{n}"), Vec::new()))
    }

    /// Componentwise product; element indices are mixed-radix with the first
    /// factor most significant.
    pub fn product(factors: &[FiniteMv], cap: usize) -> Result<Self, MvError> {
        if factors.is_empty() {
            return Err(MvError::EmptyProduct);
        }
        let mut size = 1usize;
        for f in factors {
            size = size.saturating_mul(f.size());
            if size > cap {
                return Err(MvError::CapExceeded { size, cap });
            }
        }
        let radix: Vec<usize> = factors.iter().map(FiniteMv::size).collect();
        let decode = |mut i: usize| {
            let mut coords = vec![0; radix.len()];
            for (slot, r) in coords.iter_mut().zip(&radix).rev() {
                *slot = i % r;
                i /= r;
            }
            coords
        };
        let encode = |coords: &[usize]| coords.iter().zip(&radix).fold(0, |acc, (c, r)| acc * r + c);
        let coords: Vec<Vec<usize>> = (0..size).map(decode).collect();
        let neg = coords
            .iter()
            .map(|c| {
                let n: Vec<usize> = c.iter().zip(factors).map(|(&x, f)| f.neg(x)).collect();
                encode(&n) as u32
            })
            .collect();
        let mut oplus = Vec::with_capacity(size * size);
        for a in &coords {
            for b in &coords {
                let s: Vec<usize> = a
                    .iter()
                    .zip(b)
                    .zip(factors)
                    .map(|((&x, &y), f)| f.oplus(x, y))
                    .collect();
                oplus.push(encode(&s) as u32);
            }
        }
        let label = factors.iter().map(|f| f.label().to_string()).collect::<Vec<_>>().join("×");
        Ok(Self::from_valid(0, neg, oplus, label, radix))
    }

    /// Builds an algebra from explicit tables after a full axiom scan. When
    /// `zero` is omitted it is taken to be the neutral element of `⊕`.
    pub fn from_tables(
        zero: Option<usize>,
        neg: &[usize],
        oplus: &[Vec<usize>],
    ) -> Result<Self, MvError> {
        let size = neg.len();
        if size == 0 {
            return Err(MvError::Empty);
        }
        if oplus.len() != size || oplus.iter().any(|r| r.len() != size) {
            return Err(MvError::Shape { expected: size });
        }
        for &value in neg.iter().chain(oplus.iter().flatten()).chain(zero.iter()) {
            if value >= size {
                return Err(MvError::Range { value, size });
            }
        }
        if size == 1 {
            return Err(MvError::Trivial);
        }
        let zero = match zero {
            Some(z) => z,
            None => (0..size)
                .find(|&e| (0..size).all(|x| oplus[x][e] == x))
                .ok_or(MvError::NoNeutral)?,
        };
        Self::check_tables(zero, neg, oplus).map_err(MvError::Axiom)?;
        let flat = oplus.iter().flatten().map(|&v| v as u32).collect();
        let neg = neg.iter().map(|&v| v as u32).collect();
        Ok(Self::from_valid(zero, neg, flat, format!("tables[{size}]"), Vec::new()))
    }

    /// Exhaustive axiom scan over raw tables (entries must be in range).
    pub fn check_tables(zero: usize, neg: &[usize], oplus: &[Vec<usize>]) -> Result<(), AxiomViolation> {
        let raw = RawTables { zero, neg, oplus };
        let elems: Vec<usize> = (0..neg.len()).collect();
        check_laws(&raw, &elems)
    }

    /// Re-runs the axiom scan on this algebra's own tables.
    pub fn check_axioms(&self) -> Result<(), AxiomViolation> {
        let (neg, oplus) = self.tables();
        Self::check_tables(self.zero(), &neg, &oplus)
    }

    /// Tables are trusted to satisfy the axioms.
    fn from_valid(zero: usize, neg: Vec<u32>, oplus: Vec<u32>, label: String, radix: Vec<usize>) -> Self {
        let size = neg.len();
        let op = |a: usize, b: usize| oplus[a * size + b] as usize;
        let ng = |a: usize| neg[a] as usize;
        let one = ng(zero);
        let mut join = vec![0u32; size * size];
        let mut meet = vec![0u32; size * size];
        for a in 0..size {
            for b in 0..size {
                // a ∨ b = ¬(¬a ⊕ b) ⊕ b
                join[a * size + b] = op(ng(op(ng(a), b)), b) as u32;
            }
        }
        for a in 0..size {
            for b in 0..size {
                meet[a * size + b] = neg[join[ng(a) * size + ng(b)] as usize];
            }
        }
        let up = (0..size)
            .map(|a| BitSet::from_elems(size, (0..size).filter(|&b| op(ng(a), b) == one)))
            .collect();
        let lattice = FiniteLattice::assemble(FinitePoset::from_up_rows_unchecked(up), join, meet);
        FiniteMv {
            inner: Arc::new(Inner {
                zero,
                neg,
                oplus,
                lattice: FiniteDistLattice::new_unchecked(lattice),
                label,
                radix,
            }),
        }
    }

    pub fn size(&self) -> usize {
        self.inner.neg.len()
    }

    pub fn label(&self) -> &str {
        &self.inner.label
    }

    /// The distributive lattice reduct.
    pub fn lattice(&self) -> &FiniteDistLattice {
        &self.inner.lattice
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size()
    }

    pub fn tables(&self) -> (Vec<usize>, Vec<Vec<usize>>) {
        let n = self.size();
        let neg = self.inner.neg.iter().map(|&v| v as usize).collect();
        let oplus = (0..n).map(|a| (0..n).map(|b| self.oplus(a, b)).collect()).collect();
        (neg, oplus)
    }

    /// Product coordinates of an element (a single coordinate otherwise).
    pub fn coords(&self, mut a: usize) -> Vec<usize> {
        if self.inner.radix.is_empty() {
            return vec![a];
        }
        let mut out = vec![0; self.inner.radix.len()];
        for (slot, r) in out.iter_mut().zip(&self.inner.radix).rev() {
            *slot = a % r;
            a /= r;
        }
        out
    }

    /// Inverse of [`FiniteMv::coords`].
    pub fn from_coords(&self, coords: &[usize]) -> usize {
        if self.inner.radix.is_empty() {
            return coords[0];
        }
        coords.iter().zip(&self.inner.radix).fold(0, |acc, (c, r)| acc * r + c)
    }

    pub fn format_elem(&self, a: usize) -> String {
        if self.inner.radix.is_empty() {
            a.to_string()
        } else {
            let parts: Vec<String> = self.coords(a).iter().map(usize::to_string).collect();
            format!("({})", parts.join(","))
        }
    }

    pub fn is_chain(&self) -> bool {
        self.lattice().order().is_chain(&BitSet::full(self.size()))
    }

    pub fn idempotents(&self) -> Vec<usize> {
        self.elements().filter(|&e| self.oplus(e, e) == e).collect()
    }

    pub fn is_mv_ideal(&self, s: &BitSet) -> bool {
        s.domain() == self.size()
            && s.contains(self.zero())
            && self.lattice().order().is_downset(s)
            && s.iter().all(|a| s.iter().all(|b| s.contains(self.oplus(a, b))))
    }

    /// Least MV-ideal containing `s`: close downward and under `⊕` until
    /// stable. The empty set generates `{0}`.
    pub fn ideal_generated(&self, s: &BitSet) -> BitSet {
        let order = self.lattice().order();
        let mut cur = order.down_closure(&s.union(&BitSet::singleton(self.size(), self.zero())));
        loop {
            let mut next = cur.clone();
            for a in cur.iter() {
                for b in cur.iter() {
                    next.insert(self.oplus(a, b));
                }
            }
            let next = order.down_closure(&next);
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    /// All MV-ideals, as `↓e` for idempotent `e`, in canonical order.
    pub fn mv_ideals(&self) -> Vec<BitSet> {
        let mut out: Vec<BitSet> = self
            .idempotents()
            .into_iter()
            .map(|e| self.lattice().order().down_set(e).clone())
            .collect();
        out.sort();
        out
    }

    /// Oracle: every downset of the carrier that is closed under `⊕`.
    pub fn mv_ideals_brute(&self) -> Vec<BitSet> {
        let mut out = Vec::new();
        self.lattice().order().for_each_downset(|d| {
            if self.is_mv_ideal(d) {
                out.push(d.clone());
            }
            true
        });
        out.sort();
        out
    }

    fn require_ideal(&self, ideal: &BitSet) -> Result<(), MvError> {
        if self.is_mv_ideal(ideal) {
            Ok(())
        } else {
            Err(MvError::NotMvIdeal)
        }
    }

    /// A pair `(a, b)` with neither `a ⊖ b` nor `b ⊖ a` in the ideal.
    pub fn primality_witness(&self, ideal: &BitSet) -> Result<Option<(usize, usize)>, MvError> {
        self.require_ideal(ideal)?;
        for a in self.elements() {
            for b in a..self.size() {
                if !ideal.contains(self.ominus(a, b)) && !ideal.contains(self.ominus(b, a)) {
                    return Ok(Some((a, b)));
                }
            }
        }
        Ok(None)
    }

    pub fn is_prime_mv_ideal(&self, ideal: &BitSet) -> Result<bool, MvError> {
        Ok(!ideal.contains(self.one()) && self.primality_witness(ideal)?.is_none())
    }

    /// Proper, and adjoining any outside element generates the whole algebra.
    pub fn is_maximal_mv_ideal(&self, ideal: &BitSet) -> Result<bool, MvError> {
        self.require_ideal(ideal)?;
        if ideal.contains(self.one()) {
            return Ok(false);
        }
        Ok(ideal.complement().iter().all(|a| {
            let mut grown = ideal.clone();
            grown.insert(a);
            self.ideal_generated(&grown).is_full()
        }))
    }

    /// Prime MV-ideals: prime lattice ideals that are closed under `⊕`.
    pub fn prime_mv_ideals(&self) -> Vec<BitSet> {
        self.lattice()
            .prime_ideals()
            .into_iter()
            .map(|p: DualSpacePoint| p.ideal.members().clone())
            .filter(|i| self.is_mv_ideal(i))
            .collect()
    }

    /// Oracle: prime MV-ideals by scanning every downset.
    pub fn prime_mv_ideals_brute(&self) -> Vec<BitSet> {
        self.mv_ideals_brute()
            .into_iter()
            .filter(|i| self.is_prime_mv_ideal(i).unwrap_or(false))
            .collect()
    }

    pub fn maximal_mv_ideals(&self) -> Vec<BitSet> {
        self.prime_mv_ideals()
            .into_iter()
            .filter(|i| self.is_maximal_mv_ideal(i).unwrap_or(false))
            .collect()
    }

    /// `a ~ b` iff `a ⊖ b ∈ I` and `b ⊖ a ∈ I`.
    pub fn congruent_mod(&self, ideal: &BitSet, a: usize, b: usize) -> bool {
        ideal.contains(self.ominus(a, b)) && ideal.contains(self.ominus(b, a))
    }

    /// Quotient by an MV-ideal; classes are numbered by least member.
    pub fn quotient(&self, ideal: &BitSet) -> Result<Quotient, MvError> {
        self.require_ideal(ideal)?;
        let n = self.size();
        let mut projection = vec![usize::MAX; n];
        let mut reps = Vec::new();
        let mut classes = Vec::new();
        for a in 0..n {
            if projection[a] != usize::MAX {
                continue;
            }
            let class = BitSet::from_elems(n, (a..n).filter(|&b| self.congruent_mod(ideal, a, b)));
            for b in class.iter() {
                projection[b] = reps.len();
            }
            reps.push(a);
            classes.push(class);
        }
        let m = reps.len();
        if m == 1 {
            return Err(MvError::Trivial);
        }
        let neg = reps.iter().map(|&r| projection[self.neg(r)] as u32).collect();
        let oplus = reps
            .iter()
            .flat_map(|&r| reps.iter().map(move |&s| (r, s)))
            .map(|(r, s)| projection[self.oplus(r, s)] as u32)
            .collect();
        let label = format!("{}/I", self.label());
        let algebra = Self::from_valid(projection[self.zero()], neg, oplus, label, Vec::new());
        Ok(Quotient {
            algebra,
            projection,
            classes,
        })
    }
}

impl MvOps for FiniteMv {
    type Elem = usize;

    #[inline]
    fn zero(&self) -> usize {
        self.inner.zero
    }

    #[inline]
    fn neg(&self, a: usize) -> usize {
        self.inner.neg[a] as usize
    }

    #[inline]
    fn oplus(&self, a: usize, b: usize) -> usize {
        self.inner.oplus[a * self.size() + b] as usize
    }

    #[inline]
    fn join(&self, a: usize, b: usize) -> usize {
        self.inner.lattice.join(a, b)
    }

    #[inline]
    fn meet(&self, a: usize, b: usize) -> usize {
        self.inner.lattice.meet(a, b)
    }

    #[inline]
    fn leq(&self, a: usize, b: usize) -> bool {
        self.inner.lattice.leq(a, b)
    }
}

/// `A/I` with the canonical projection.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub algebra: FiniteMv,
    pub projection: Vec<usize>,
    pub classes: Vec<BitSet>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mv::Law;
    use proptest::prelude::*;

    fn l(n: usize) -> FiniteMv {
        FiniteMv::lukasiewicz(n).unwrap()
    }

    fn l2xl3() -> FiniteMv {
        FiniteMv::product(&[l(2), l(3)], DEFAULT_CARRIER_CAP).unwrap()
    }

    #[test]
    fn lukasiewicz_arithmetic() {
        assert!(matches!(FiniteMv::lukasiewicz(0), Err(MvError::ZeroChain)));
        let b = l(1);
        assert_eq!(b.idempotents(), vec![0, 1]);
        let l2 = l(2);
        assert_eq!((l2.oplus(1, 1), l2.neg(1)), (2, 1));
        assert_eq!((l2.ominus(2, 1), l2.odot(1, 1)), (1, 0));
        let l3 = l(3);
        assert_eq!((l3.oplus(1, 1), l3.ominus(2, 1), l3.join(2, 1)), (2, 1, 2));
        assert_eq!(l3.nmul(0, 2), 0);
        assert_eq!(l3.nmul(5, 1), 3);
        for a in l3.elements() {
            assert_eq!(l3.ominus(a, 0), a);
            assert_eq!(l3.ominus(a, a), 0);
        }
    }

    #[test]
    fn derived_ops_match_defaults() {
        let a = l2xl3();
        let raw = a.tables();
        let plain = RawTables {
            zero: a.zero(),
            neg: &raw.0,
            oplus: &raw.1,
        };
        for x in a.elements() {
            for y in a.elements() {
                assert_eq!(a.join(x, y), plain.join(x, y));
                assert_eq!(a.meet(x, y), plain.meet(x, y));
                assert_eq!(a.leq(x, y), plain.leq(x, y));
            }
        }
    }

    #[test]
    fn products() {
        let b4 = FiniteMv::product(&[l(1), l(1)], 16).unwrap();
        assert_eq!(b4.size(), 4);
        assert_eq!(b4.idempotents().len(), 4);
        let p = FiniteMv::product(&[l(2), l(1)], 16).unwrap();
        assert_eq!(p.size(), 6);
        let s = p.oplus(p.from_coords(&[1, 0]), p.from_coords(&[1, 1]));
        assert_eq!(p.coords(s), vec![2, 1]);
        assert_eq!(l2xl3().size(), 12);
        assert!(matches!(
            FiniteMv::product(&[l(7), l(7)], 32),
            Err(MvError::CapExceeded { size: 64, cap: 32 })
        ));
        assert_eq!(l2xl3().format_elem(7), "(1,3)");
    }

    #[test]
    fn table_construction() {
        let (neg, oplus) = l(2).tables();
        assert!(FiniteMv::from_tables(None, &neg, &oplus).is_ok());
        let err = FiniteMv::from_tables(Some(0), &[0, 1, 2], &oplus).unwrap_err();
        assert_eq!(
            err,
            MvError::Axiom(AxiomViolation {
                law: Law::Characteristic,
                witness: vec![0, 1]
            })
        );
        assert_eq!(FiniteMv::from_tables(None, &[], &[]).unwrap_err(), MvError::Empty);
        assert_eq!(FiniteMv::from_tables(None, &[0], &[vec![0]]).unwrap_err(), MvError::Trivial);
        let mut bad = l(3).tables();
        bad.1[1][2] = 2;
        bad.1[2][1] = 2;
        let err = FiniteMv::from_tables(Some(0), &bad.0, &bad.1).unwrap_err();
        assert!(matches!(err, MvError::Axiom(AxiomViolation { law: Law::Associativity, .. })));
    }

    #[test]
    fn axioms_hold_on_chains_and_products() {
        for n in 1..=8 {
            assert_eq!(l(n).check_axioms(), Ok(()));
        }
        assert_eq!(l2xl3().check_axioms(), Ok(()));
    }

    #[test]
    fn ideal_generation() {
        let l2 = l(2);
        assert_eq!(l2.ideal_generated(&BitSet::new(3)).to_vec(), vec![0]);
        assert!(l2.ideal_generated(&BitSet::singleton(3, 1)).is_full());
        let a = l2xl3();
        let g = a.ideal_generated(&BitSet::singleton(12, a.from_coords(&[1, 0])));
        let expect: Vec<usize> = (0..=2).map(|x| a.from_coords(&[x, 0])).collect();
        assert_eq!(g.to_vec(), expect);
    }

    #[test]
    fn primes_and_maximals() {
        let l2 = l(2);
        let zero = BitSet::singleton(3, 0);
        assert!(l2.is_prime_mv_ideal(&zero).unwrap());
        assert!(l2.is_maximal_mv_ideal(&zero).unwrap());
        assert_eq!(l2.prime_mv_ideals(), vec![zero]);
        let a = l2xl3();
        let kernel1 = BitSet::from_elems(12, (0..=3).map(|y| a.from_coords(&[0, y])));
        assert!(a.is_prime_mv_ideal(&kernel1).unwrap());
        assert!(a.is_maximal_mv_ideal(&kernel1).unwrap());
        let bottom = BitSet::singleton(12, 0);
        assert_eq!(
            a.primality_witness(&bottom).unwrap(),
            Some((a.from_coords(&[0, 1]), a.from_coords(&[1, 0])))
        );
        assert_eq!(a.prime_mv_ideals().len(), 2);
        assert_eq!(a.prime_mv_ideals(), a.prime_mv_ideals_brute());
        assert_eq!(
            a.is_prime_mv_ideal(&BitSet::singleton(12, 1)),
            Err(MvError::NotMvIdeal)
        );
    }

    #[test]
    fn quotients() {
        let a = l2xl3();
        let q = a.quotient(&BitSet::singleton(12, 0)).unwrap();
        assert_eq!(q.algebra.size(), 12);
        let kernel2 = BitSet::from_elems(12, (0..=2).map(|x| a.from_coords(&[x, 0])));
        let q = a.quotient(&kernel2).unwrap();
        assert_eq!(q.algebra.size(), 4);
        assert!(q.algebra.is_chain());
        for x in a.elements() {
            for y in a.elements() {
                assert_eq!(q.projection[a.oplus(x, y)], q.algebra.oplus(q.projection[x], q.projection[y]));
            }
            assert_eq!(q.projection[a.neg(x)], q.algebra.neg(q.projection[x]));
        }
        assert_eq!(a.quotient(&BitSet::full(12)).unwrap_err(), MvError::Trivial);
    }

    #[test]
    fn mv_ideals_are_principal_on_idempotents() {
        for alg in [l(4), l2xl3(), FiniteMv::product(&[l(1), l(2), l(1)], 64).unwrap()] {
            assert_eq!(alg.mv_ideals(), alg.mv_ideals_brute());
        }
    }

    /// Generated ideal equals the down-closure of all finite sums.
    fn sums_oracle(a: &FiniteMv, s: &BitSet) -> BitSet {
        let mut sums = BitSet::singleton(a.size(), a.zero());
        loop {
            let mut next = sums.clone();
            for x in sums.iter() {
                for g in s.iter() {
                    next.insert(a.oplus(x, g));
                }
            }
            if next == sums {
                break;
            }
            sums = next;
        }
        a.lattice().order().down_closure(&sums)
    }

    proptest! {
        #[test]
        fn generated_ideal_matches_finite_sums(elems in proptest::collection::vec(0usize..12, 0..4)) {
            let a = l2xl3();
            let s = BitSet::from_elems(12, elems);
            prop_assert_eq!(a.ideal_generated(&s), sums_oracle(&a, &s));
        }
    }
}
