//! Finite bounded lattices, their prime spectra, and Birkhoff/Priestley
//! duality at finite scale.
//!
//! Every finite spectral space is Alexandrov, so the three topologies on a
//! spectrum are determined by the inclusion order of prime ideals: the
//! spectral topology is "all downsets", the co-spectral topology is "all
//! upsets", and the patch topology is discrete. Open, closed and compact
//! predicates elsewhere in the crate are order predicates through this
//! translation; see [`crate::topology`].

use std::collections::HashMap;
use std::ops::Deref;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::BitSet;
use crate::order::{FinitePoset, OrderError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("empty carrier")]
    Empty,
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error("table is not {size}x{size}")]
    TableShape { size: usize },
    #[error("table entry {value} outside the carrier")]
    TableRange { value: usize },
    #[error("{a} and {b} have no least upper bound")]
    NoJoin { a: usize, b: usize },
    #[error("{a} and {b} have no greatest lower bound")]
    NoMeet { a: usize, b: usize },
    #[error("meet table disagrees with the order induced by join at ({a}, {b})")]
    MeetMismatch { a: usize, b: usize },
    #[error("not distributive: {a} ∧ ({b} ∨ {c}) != ({a} ∧ {b}) ∨ ({a} ∧ {c})")]
    NotDistributive { a: usize, b: usize, c: usize },
    #[error("subset is not a lattice ideal")]
    NotIdeal,
    #[error("subset is not a lattice filter")]
    NotFilter,
    #[error("subset is not a prime ideal")]
    NotPrime,
}

/// A finite bounded lattice on `0..size`. Distributivity is not assumed.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteLattice {
    order: FinitePoset,
    join: Vec<u32>,
    meet: Vec<u32>,
    bot: usize,
    top: usize,
}

impl std::fmt::Debug for FiniteLattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteLattice")
            .field("size", &self.size())
            .field("bot", &self.bot)
            .field("top", &self.top)
            .finish()
    }
}

impl FiniteLattice {
    /// Derives join and meet from a partial order, failing if some pair
    /// lacks a least upper or greatest lower bound.
    pub fn from_order(order: FinitePoset) -> Result<Self, LatticeError> {
        let n = order.size();
        if n == 0 {
            return Err(LatticeError::Empty);
        }
        let down_len: Vec<usize> = (0..n).map(|a| order.down_set(a).len()).collect();
        let up_len: Vec<usize> = (0..n).map(|a| order.up_set(a).len()).collect();
        let mut join = vec![0u32; n * n];
        let mut meet = vec![0u32; n * n];
        for a in 0..n {
            for b in a..n {
                let ub = order.up_set(a).intersection(order.up_set(b));
                let j = ub
                    .iter()
                    .min_by_key(|&u| down_len[u])
                    .filter(|&u| *order.up_set(u) == ub)
                    .ok_or(LatticeError::NoJoin { a, b })?;
                let lb = order.down_set(a).intersection(order.down_set(b));
                let m = lb
                    .iter()
                    .min_by_key(|&l| up_len[l])
                    .filter(|&l| *order.down_set(l) == lb)
                    .ok_or(LatticeError::NoMeet { a, b })?;
                join[a * n + b] = j as u32;
                join[b * n + a] = j as u32;
                meet[a * n + b] = m as u32;
                meet[b * n + a] = m as u32;
            }
        }
        Ok(Self::assemble(order, join, meet))
    }

    /// Builds a lattice from explicit join and meet tables. The order is
    /// read off the join table (`a <= b` iff `a ∨ b = b`), then both tables
    /// are checked to be the least upper and greatest lower bounds.
    pub fn from_tables(join: &[Vec<usize>], meet: &[Vec<usize>]) -> Result<Self, LatticeError> {
        let n = join.len();
        if n == 0 {
            return Err(LatticeError::Empty);
        }
        for t in [join, meet] {
            if t.len() != n || t.iter().any(|row| row.len() != n) {
                return Err(LatticeError::TableShape { size: n });
            }
            if let Some(&value) = t.iter().flatten().find(|&&v| v >= n) {
                return Err(LatticeError::TableRange { value });
            }
        }
        let up: Vec<BitSet> = (0..n)
            .map(|a| BitSet::from_elems(n, (0..n).filter(|&b| join[a][b] == b)))
            .collect();
        let order = FinitePoset::from_up_rows(up)?;
        for a in 0..n {
            for b in 0..n {
                if (meet[a][b] == a) != order.leq(a, b) {
                    return Err(LatticeError::MeetMismatch { a, b });
                }
                let ub = order.up_set(a).intersection(order.up_set(b));
                if *order.up_set(join[a][b]) != ub {
                    return Err(LatticeError::NoJoin { a, b });
                }
                let lb = order.down_set(a).intersection(order.down_set(b));
                if *order.down_set(meet[a][b]) != lb {
                    return Err(LatticeError::NoMeet { a, b });
                }
            }
        }
        let flat = |t: &[Vec<usize>]| t.iter().flatten().map(|&v| v as u32).collect();
        Ok(Self::assemble(order, flat(join), flat(meet)))
    }

    /// Tables are trusted; only the bounds are located.
    pub(crate) fn assemble(order: FinitePoset, join: Vec<u32>, meet: Vec<u32>) -> Self {
        let n = order.size();
        let bot = (0..n).find(|&a| order.up_set(a).len() == n).expect("lattice has a bottom");
        let top = (0..n).find(|&a| order.down_set(a).len() == n).expect("lattice has a top");
        FiniteLattice {
            order,
            join,
            meet,
            bot,
            top,
        }
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.order.size()
    }

    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.size() + b] as usize
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.size() + b] as usize
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.order.leq(a, b)
    }

    #[inline]
    pub fn bot(&self) -> usize {
        self.bot
    }

    #[inline]
    pub fn top(&self) -> usize {
        self.top
    }

    pub fn order(&self) -> &FinitePoset {
        &self.order
    }

    pub fn join_all<I: IntoIterator<Item = usize>>(&self, elems: I) -> usize {
        elems.into_iter().fold(self.bot, |acc, e| self.join(acc, e))
    }

    pub fn meet_all<I: IntoIterator<Item = usize>>(&self, elems: I) -> usize {
        elems.into_iter().fold(self.top, |acc, e| self.meet(acc, e))
    }

    pub fn join_irreducibles(&self) -> Vec<usize> {
        (0..self.size())
            .filter(|&j| {
                j != self.bot && {
                    let mut below = self.order.down_set(j).clone();
                    below.remove(j);
                    self.join_all(below.iter()) != j
                }
            })
            .collect()
    }

    /// Distributivity via join-primality of join-irreducibles: a finite
    /// lattice is distributive iff every join-irreducible `j` with
    /// `j <= b ∨ c` lies below `b` or below `c`.
    pub fn distributivity_witness(&self) -> Option<(usize, usize, usize)> {
        let n = self.size();
        for j in self.join_irreducibles() {
            let above = self.order.up_set(j);
            for b in 0..n {
                if above.contains(b) {
                    continue;
                }
                for c in b..n {
                    if !above.contains(c) && above.contains(self.join(b, c)) {
                        return Some((j, b, c));
                    }
                }
            }
        }
        None
    }

    pub fn is_ideal(&self, s: &BitSet) -> bool {
        s.domain() == self.size()
            && s.contains(self.bot)
            && self.order.is_downset(s)
            && s.contains(self.join_all(s.iter()))
    }

    pub fn is_filter(&self, s: &BitSet) -> bool {
        s.domain() == self.size()
            && s.contains(self.top)
            && self.order.is_upset(s)
            && s.contains(self.meet_all(s.iter()))
    }

    pub fn is_prime_ideal(&self, s: &BitSet) -> bool {
        self.is_ideal(s)
            && !s.contains(self.top)
            && (0..self.size()).all(|a| {
                s.contains(a) || (a..self.size()).all(|b| s.contains(b) || !s.contains(self.meet(a, b)))
            })
    }

    /// The lattice ideal generated by `s`: `↓⋁s` (just `{bot}` when empty).
    pub fn ideal_generated(&self, s: &BitSet) -> IdealSet {
        IdealSet(self.order.down_set(self.join_all(s.iter())).clone())
    }

    pub fn principal_ideal(&self, a: usize) -> IdealSet {
        IdealSet(self.order.down_set(a).clone())
    }

    pub fn principal_filter(&self, a: usize) -> FilterSet {
        FilterSet(self.order.up_set(a).clone())
    }

    /// Every lattice ideal of a finite lattice is principal.
    pub fn ideals(&self) -> Vec<IdealSet> {
        let mut out: Vec<IdealSet> = (0..self.size()).map(|a| self.principal_ideal(a)).collect();
        out.sort();
        out
    }

    pub fn filters(&self) -> Vec<FilterSet> {
        let mut out: Vec<FilterSet> = (0..self.size()).map(|a| self.principal_filter(a)).collect();
        out.sort();
        out
    }

    /// Prime ideals via the complements of principal filters on
    /// join-irreducibles, keeping only those that really are prime. This is
    /// exact in every finite lattice, distributive or not.
    pub fn prime_ideals(&self) -> Vec<DualSpacePoint> {
        let mut out: Vec<DualSpacePoint> = self
            .join_irreducibles()
            .into_iter()
            .map(|j| self.order.up_set(j).complement())
            .filter(|i| self.is_prime_ideal(i))
            .map(|i| DualSpacePoint::from_ideal(IdealSet(i)))
            .collect();
        out.sort();
        out
    }

    /// Oracle: prime ideals found by scanning every downset of the carrier.
    pub fn prime_ideals_brute(&self) -> Vec<DualSpacePoint> {
        let mut out = Vec::new();
        self.order.for_each_downset(|d| {
            if self.is_prime_ideal(d) {
                out.push(DualSpacePoint::from_ideal(IdealSet(d.clone())));
            }
            true
        });
        out.sort();
        out
    }

    /// Checks the lattice normality condition; returns a failing pair
    /// `(d1, d2)` with `d1 ∨ d2 = top` that admits no separating `c1, c2`.
    pub fn normality_witness(&self) -> Option<(usize, usize)> {
        let n = self.size();
        let disjoint: Vec<BitSet> = (0..n)
            .map(|c| BitSet::from_elems(n, (0..n).filter(|&d| self.meet(c, d) == self.bot)))
            .collect();
        let completes: Vec<BitSet> = (0..n)
            .map(|d| BitSet::from_elems(n, (0..n).filter(|&c| self.join(c, d) == self.top)))
            .collect();
        for d1 in 0..n {
            for d2 in d1..n {
                if self.join(d1, d2) != self.top {
                    continue;
                }
                let ok = completes[d2]
                    .iter()
                    .any(|c1| !disjoint[c1].is_disjoint(&completes[d1]));
                if !ok {
                    return Some((d1, d2));
                }
            }
        }
        None
    }

    pub fn is_normal(&self) -> bool {
        self.normality_witness().is_none()
    }
}

/// A finite lattice known to be distributive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteDistLattice(FiniteLattice);

impl FiniteDistLattice {
    pub fn new(lattice: FiniteLattice) -> Result<Self, LatticeError> {
        match lattice.distributivity_witness() {
            Some((a, b, c)) => Err(LatticeError::NotDistributive { a, b, c }),
            None => Ok(FiniteDistLattice(lattice)),
        }
    }

    pub fn from_order(order: FinitePoset) -> Result<Self, LatticeError> {
        Self::new(FiniteLattice::from_order(order)?)
    }

    pub fn from_tables(join: &[Vec<usize>], meet: &[Vec<usize>]) -> Result<Self, LatticeError> {
        Self::new(FiniteLattice::from_tables(join, meet)?)
    }

    pub(crate) fn new_unchecked(lattice: FiniteLattice) -> Self {
        FiniteDistLattice(lattice)
    }

    pub fn into_inner(self) -> FiniteLattice {
        self.0
    }

    /// The prime spectrum with its inclusion order and Stone map.
    pub fn spectrum(&self) -> PrimeSpectrum {
        PrimeSpectrum::new(self)
    }
}

impl Deref for FiniteDistLattice {
    type Target = FiniteLattice;

    fn deref(&self) -> &FiniteLattice {
        &self.0
    }
}

/// Lattice of all downsets of `poset`, ordered by inclusion, with elements
/// indexed in subset-lexicographic order of the downsets.
pub fn lattice_from_downsets(poset: &FinitePoset) -> (FiniteDistLattice, Vec<BitSet>) {
    let downsets = poset.downsets();
    let n = downsets.len();
    let index: HashMap<&BitSet, u32> = downsets
        .iter()
        .enumerate()
        .map(|(i, d)| (d, i as u32))
        .collect();
    let mut join = vec![0u32; n * n];
    let mut meet = vec![0u32; n * n];
    for a in 0..n {
        for b in a..n {
            let j = index[&downsets[a].union(&downsets[b])];
            let m = index[&downsets[a].intersection(&downsets[b])];
            join[a * n + b] = j;
            join[b * n + a] = j;
            meet[a * n + b] = m;
            meet[b * n + a] = m;
        }
    }
    let up: Vec<BitSet> = (0..n)
        .map(|a| BitSet::from_elems(n, (0..n).filter(|&b| downsets[a].is_subset(&downsets[b]))))
        .collect();
    let lattice = FiniteLattice::assemble(FinitePoset::from_up_rows_unchecked(up), join, meet);
    (FiniteDistLattice(lattice), downsets)
}

/// A lattice ideal, held as a subset of the carrier.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct IdealSet(pub(crate) BitSet);

impl IdealSet {
    pub fn new(lattice: &FiniteLattice, members: BitSet) -> Result<Self, LatticeError> {
        if lattice.is_ideal(&members) {
            Ok(IdealSet(members))
        } else {
            Err(LatticeError::NotIdeal)
        }
    }

    pub fn members(&self) -> &BitSet {
        &self.0
    }

    pub fn contains(&self, a: usize) -> bool {
        self.0.contains(a)
    }
}

/// A lattice filter, held as a subset of the carrier.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct FilterSet(pub(crate) BitSet);

impl FilterSet {
    pub fn new(lattice: &FiniteLattice, members: BitSet) -> Result<Self, LatticeError> {
        if lattice.is_filter(&members) {
            Ok(FilterSet(members))
        } else {
            Err(LatticeError::NotFilter)
        }
    }

    pub fn members(&self) -> &BitSet {
        &self.0
    }

    pub fn contains(&self, a: usize) -> bool {
        self.0.contains(a)
    }
}

/// A point of the dual space: a prime ideal and its complementary prime
/// filter. Points order by their ideals, subset-lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DualSpacePoint {
    pub ideal: IdealSet,
    pub filter: FilterSet,
}

impl DualSpacePoint {
    pub(crate) fn from_ideal(ideal: IdealSet) -> Self {
        let filter = FilterSet(ideal.0.complement());
        DualSpacePoint { ideal, filter }
    }

    pub fn new(lattice: &FiniteLattice, ideal: BitSet) -> Result<Self, LatticeError> {
        if lattice.is_prime_ideal(&ideal) {
            Ok(Self::from_ideal(IdealSet(ideal)))
        } else {
            Err(LatticeError::NotPrime)
        }
    }
}

/// Inclusion order on a list of points.
pub fn dual_order(points: &[DualSpacePoint]) -> FinitePoset {
    let n = points.len();
    let up = points
        .iter()
        .map(|x| {
            BitSet::from_elems(
                n,
                (0..n).filter(|&y| x.ideal.0.is_subset(&points[y].ideal.0)),
            )
        })
        .collect();
    FinitePoset::from_up_rows_unchecked(up)
}

/// The prime spectrum `X` of a finite distributive lattice.
#[derive(Debug, Clone)]
pub struct PrimeSpectrum {
    points: Vec<DualSpacePoint>,
    order: FinitePoset,
    stone: Vec<BitSet>,
    index: HashMap<BitSet, usize>,
}

impl PrimeSpectrum {
    pub fn new(lattice: &FiniteLattice) -> Self {
        Self::from_points(lattice, lattice.prime_ideals())
    }

    pub(crate) fn from_points(lattice: &FiniteLattice, points: Vec<DualSpacePoint>) -> Self {
        let order = dual_order(&points);
        let stone = (0..lattice.size())
            .map(|a| {
                BitSet::from_elems(
                    points.len(),
                    points
                        .iter()
                        .enumerate()
                        .filter(|(_, x)| !x.ideal.contains(a))
                        .map(|(i, _)| i),
                )
            })
            .collect();
        let index = points
            .iter()
            .enumerate()
            .map(|(i, x)| (x.ideal.0.clone(), i))
            .collect();
        PrimeSpectrum {
            points,
            order,
            stone,
            index,
        }
    }

    pub fn points(&self) -> &[DualSpacePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn order(&self) -> &FinitePoset {
        &self.order
    }

    pub fn ideal(&self, x: usize) -> &BitSet {
        &self.points[x].ideal.0
    }

    /// The point whose prime ideal is exactly `ideal`.
    pub fn point_of(&self, ideal: &BitSet) -> Option<usize> {
        self.index.get(ideal).copied()
    }

    /// `â = {x : a ∉ I_x}`.
    pub fn stone_map(&self, a: usize) -> &BitSet {
        &self.stone[a]
    }

    /// Image of a filter: `{x : F ⊆ F_x}`, a closed downset.
    pub fn stone_of_filter(&self, f: &FilterSet) -> BitSet {
        let mut out = BitSet::full(self.len());
        for a in f.0.iter() {
            out.intersect_with(&self.stone[a]);
        }
        out
    }

    /// Image of an ideal: `{x : I ⊄ I_x}`, an open downset.
    pub fn stone_of_ideal(&self, i: &IdealSet) -> BitSet {
        let mut out = BitSet::new(self.len());
        for a in i.0.iter() {
            out.union_with(&self.stone[a]);
        }
        out
    }

    /// `S_θ = {x : ∀(a,b) ∈ θ, a ∈ I_x ⇔ b ∈ I_x}`.
    pub fn closed_subspace_of_congruence(&self, theta: &[(usize, usize)]) -> BitSet {
        BitSet::from_elems(
            self.len(),
            (0..self.len()).filter(|&x| {
                let i = self.ideal(x);
                theta.iter().all(|&(a, b)| i.contains(a) == i.contains(b))
            }),
        )
    }

    /// `θ_S = {(a,b) : ∀x ∈ S, a ∈ I_x ⇔ b ∈ I_x}`.
    pub fn congruence_of_subspace(&self, subspace: &BitSet) -> Relation {
        let n = self.stone.len();
        let rows = (0..n)
            .map(|a| {
                BitSet::from_elems(
                    n,
                    (0..n).filter(|&b| {
                        self.stone[a].intersection(subspace) == self.stone[b].intersection(subspace)
                    }),
                )
            })
            .collect();
        Relation { rows }
    }
}

/// A binary relation on `0..size`, row `a` holding every `b` with `a θ b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    rows: Vec<BitSet>,
}

impl Relation {
    pub fn from_pairs(size: usize, pairs: &[(usize, usize)]) -> Self {
        let mut rows = vec![BitSet::new(size); size];
        for &(a, b) in pairs {
            rows[a].insert(b);
        }
        Relation { rows }
    }

    pub fn identity(size: usize) -> Self {
        Relation {
            rows: (0..size).map(|a| BitSet::singleton(size, a)).collect(),
        }
    }

    pub fn full(size: usize) -> Self {
        Relation {
            rows: vec![BitSet::full(size); size],
        }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.rows[a].contains(b)
    }

    pub fn row(&self, a: usize) -> &BitSet {
        &self.rows[a]
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(a, r)| r.iter().map(move |b| (a, b)))
            .collect()
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.rows.iter().zip(&other.rows).all(|(a, b)| a.is_subset(b))
    }

    /// Equivalence classes, each listed once by least member.
    pub fn classes(&self) -> Vec<BitSet> {
        let mut out: Vec<BitSet> = Vec::new();
        for a in 0..self.size() {
            if !out.iter().any(|c| c.contains(a)) {
                out.push(self.rows[a].clone());
            }
        }
        out
    }

    pub fn is_equivalence(&self) -> bool {
        let n = self.size();
        (0..n).all(|a| {
            self.contains(a, a)
                && self.rows[a].iter().all(|b| self.contains(b, a) && self.rows[b].is_subset(&self.rows[a]))
        })
    }

    /// Equivalence compatible with both lattice operations.
    pub fn is_congruence(&self, lattice: &FiniteLattice) -> bool {
        self.is_equivalence()
            && self.pairs().into_iter().all(|(a, b)| {
                (0..self.size()).all(|c| {
                    self.contains(lattice.join(a, c), lattice.join(b, c))
                        && self.contains(lattice.meet(a, c), lattice.meet(b, c))
                })
            })
    }
}

/// Least lattice congruence containing `pairs`, by fixpoint iteration.
pub fn congruence_generated(lattice: &FiniteLattice, pairs: &[(usize, usize)]) -> Relation {
    let n = lattice.size();
    let mut rel = Relation::identity(n);
    for &(a, b) in pairs {
        rel.rows[a].insert(b);
        rel.rows[b].insert(a);
    }
    loop {
        let mut changed = false;
        for (a, b) in rel.pairs() {
            for c in 0..n {
                for (x, y) in [
                    (lattice.join(a, c), lattice.join(b, c)),
                    (lattice.meet(a, c), lattice.meet(b, c)),
                ] {
                    changed |= rel.rows[x].insert(y);
                    changed |= rel.rows[y].insert(x);
                }
            }
        }
        // Transitive closure on rows.
        for k in 0..n {
            let row_k = rel.rows[k].clone();
            for a in 0..n {
                if rel.rows[a].contains(k) && !row_k.is_subset(&rel.rows[a]) {
                    rel.rows[a].union_with(&row_k);
                    changed = true;
                }
            }
        }
        if !changed {
            return rel;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RoundtripError {
    #[error("Stone map is not injective: {a} and {b} have the same image")]
    NotInjective { a: usize, b: usize },
    #[error("Stone map does not preserve the join of {a} and {b}")]
    JoinNotPreserved { a: usize, b: usize },
    #[error("Stone map does not preserve the meet of {a} and {b}")]
    MeetNotPreserved { a: usize, b: usize },
    #[error("downset {missing:?} of the dual order is not hit by the Stone map")]
    NotSurjective { missing: BitSet },
}

/// Witness that `a ↦ â` is an isomorphism onto the downsets of the dual.
#[derive(Debug, Clone)]
pub struct RoundtripWitness {
    pub spectrum: PrimeSpectrum,
    pub downsets: FiniteDistLattice,
    /// `map[a]` is the index of `â` among the downsets.
    pub map: Vec<usize>,
}

pub fn duality_roundtrip(lattice: &FiniteLattice) -> Result<RoundtripWitness, RoundtripError> {
    let spectrum = PrimeSpectrum::new(lattice);
    let (downsets, sets) = lattice_from_downsets(spectrum.order());
    let index: HashMap<&BitSet, usize> = sets.iter().enumerate().map(|(i, d)| (d, i)).collect();
    let n = lattice.size();
    let mut seen: HashMap<usize, usize> = HashMap::new();
    let mut map = Vec::with_capacity(n);
    for a in 0..n {
        let image = index[spectrum.stone_map(a)];
        if let Some(&b) = seen.get(&image) {
            return Err(RoundtripError::NotInjective { a: b, b: a });
        }
        seen.insert(image, a);
        map.push(image);
    }
    for a in 0..n {
        for b in a..n {
            if map[lattice.join(a, b)] != downsets.join(map[a], map[b]) {
                return Err(RoundtripError::JoinNotPreserved { a, b });
            }
            if map[lattice.meet(a, b)] != downsets.meet(map[a], map[b]) {
                return Err(RoundtripError::MeetNotPreserved { a, b });
            }
        }
    }
    if let Some(missing) = (0..sets.len()).find(|i| !seen.contains_key(i)) {
        return Err(RoundtripError::NotSurjective {
            missing: sets[missing].clone(),
        });
    }
    Ok(RoundtripWitness {
        spectrum,
        downsets,
        map,
    })
}

/// JSON lattice input: either generating order pairs or explicit tables.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(untagged)]
pub enum LatticeSpec {
    Order {
        size: usize,
        leq: Vec<(usize, usize)>,
    },
    Tables {
        join: Vec<Vec<usize>>,
        meet: Vec<Vec<usize>>,
    },
}

impl LatticeSpec {
    pub fn build(&self) -> Result<FiniteLattice, LatticeError> {
        match self {
            LatticeSpec::Order { size, leq } => {
                FiniteLattice::from_order(FinitePoset::from_pairs(*size, leq)?)
            }
            LatticeSpec::Tables { join, meet } => FiniteLattice::from_tables(join, meet),
        }
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn chain(n: usize) -> FiniteDistLattice {
        FiniteDistLattice::from_order(FinitePoset::chain(n)).unwrap()
    }

    /// `{0, a=1, b=2, 1=3}`.
    pub fn boolean_square() -> FiniteDistLattice {
        FiniteDistLattice::from_order(
            FinitePoset::from_pairs(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap(),
        )
        .unwrap()
    }

    /// Diamond `M3`: `0 < a, b, c < 1`.
    pub fn m3() -> FiniteLattice {
        FiniteLattice::from_order(
            FinitePoset::from_pairs(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]).unwrap(),
        )
        .unwrap()
    }

    /// Pentagon `N5`: `0 < a < c < 1`, `0 < b < 1`.
    pub fn n5() -> FiniteLattice {
        FiniteLattice::from_order(
            FinitePoset::from_pairs(5, &[(0, 1), (1, 3), (3, 4), (0, 2), (2, 4)]).unwrap(),
        )
        .unwrap()
    }
}
