//! The dual space of a finite MV-algebra: the prime lattice ideals `X` with
//! the involution `i`, the partial addition `+`, the MV-spectrum `Y`, the
//! maximal spectrum `Z`, the retractions `k: X → Y` and `m: Y → Z`, and the
//! zig-zag relation `W` whose quotient recovers `Z` from the lattice alone.
//!
//! Topological claims are finite order claims: `(X, τ↓)` has the downsets
//! as opens and `{â}` as basic opens, `τ↑` the upsets, `τᵖ` is discrete.

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::bitset::BitSet;
use crate::ideal_arith::{chang_ominus_bar, chang_oplus_bar};
use crate::lattice::{FiniteLattice, PrimeSpectrum, Relation};
use crate::mv::{Algebra, Chang, ChangElem, ChangIdeal, FiniteMv, MvOps};
use crate::topology::{find_order_isomorphism, FiniteSpace, IsoSearch};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectrumError {
    #[error("point {0} is not in Y")]
    NotInY(usize),
    #[error("points {0} and {1} are incomparable")]
    Incomparable(usize, usize),
    #[error("{x} + k({x_prime}) is undefined")]
    InterpolationUndefined { x: usize, x_prime: usize },
    #[error("W and ker(m∘k) disagree at ({0}, {1})")]
    WNotKernel(usize, usize),
    #[error("W-class {0} does not contain exactly one point of Z")]
    ClassWithoutUniqueZ(usize),
    #[error("class-to-Z bijection is not a homeomorphism")]
    NotHomeomorphic,
}

/// The dual space of a finite MV-algebra with all of its structure.
#[derive(Debug, Clone)]
pub struct MvDualSpace {
    algebra: FiniteMv,
    spectrum: PrimeSpectrum,
    /// `I_x = ↓gen[x]`; every lattice ideal of a finite lattice is principal.
    gen: Vec<usize>,
    involution: Vec<usize>,
    plus: Vec<Option<usize>>,
    y: BitSet,
    z: BitSet,
    k: Vec<usize>,
    m: Vec<Option<usize>>,
}

impl MvDualSpace {
    pub fn build(algebra: &FiniteMv) -> Self {
        let lat = algebra.lattice();
        let spectrum = lat.spectrum();
        let n = spectrum.len();
        let gen: Vec<usize> = (0..n).map(|x| lat.join_all(spectrum.ideal(x).iter())).collect();
        let involution = (0..n)
            .map(|x| {
                let negated = spectrum.points()[x].filter.members().iter().map(|a| algebra.neg(a));
                let ideal = BitSet::from_elems(algebra.size(), negated);
                spectrum.point_of(&ideal).expect("¬F_x is a prime ideal")
            })
            .collect();
        let mut plus = vec![None; n * n];
        for x in 0..n {
            for y in 0..n {
                let sum = algebra.oplus(gen[x], gen[y]);
                plus[x * n + y] = spectrum.point_of(lat.order().down_set(sum));
            }
        }
        let y = BitSet::from_elems(n, (0..n).filter(|&x| algebra.oplus(gen[x], gen[x]) == gen[x]));
        let z = BitSet::from_elems(
            n,
            y.iter()
                .filter(|&p| algebra.is_maximal_mv_ideal(spectrum.ideal(p)).expect("MV-ideal")),
        );
        let mut space = MvDualSpace {
            algebra: algebra.clone(),
            spectrum,
            gen,
            involution,
            plus,
            y,
            z,
            k: Vec::new(),
            m: Vec::new(),
        };
        space.k = (0..n)
            .map(|x| {
                let ideal = space.k_formula(x);
                space.spectrum.point_of(&ideal).expect("k(x) is a prime ideal")
            })
            .collect();
        space.m = (0..n)
            .map(|p| {
                space.y.contains(p).then(|| {
                    space
                        .z
                        .iter()
                        .find(|&q| space.spectrum.order().leq(p, q))
                        .expect("a maximal MV-ideal lies above every prime")
                })
            })
            .collect();
        space
    }

    pub fn algebra(&self) -> &FiniteMv {
        &self.algebra
    }

    pub fn spectrum(&self) -> &PrimeSpectrum {
        &self.spectrum
    }

    pub fn len(&self) -> usize {
        self.spectrum.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spectrum.is_empty()
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.spectrum.order().leq(x, y)
    }

    pub fn ideal(&self, x: usize) -> &BitSet {
        self.spectrum.ideal(x)
    }

    /// Generator of the principal ideal `I_x`.
    pub fn generator(&self, x: usize) -> usize {
        self.gen[x]
    }

    /// `â` as a set of points.
    pub fn hat(&self, a: usize) -> &BitSet {
        self.spectrum.stone_map(a)
    }

    /// The point with `I_{i(x)} = ¬F_x`.
    pub fn involution(&self, x: usize) -> usize {
        self.involution[x]
    }

    /// `x + y`, defined iff `I_x ⊕̄ I_y` is a prime ideal.
    pub fn partial_plus(&self, x: usize, y: usize) -> Option<usize> {
        self.plus[x * self.len() + y]
    }

    pub fn plus_domain(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .filter(|&(x, y)| self.partial_plus(x, y).is_some())
            .collect()
    }

    pub fn y(&self) -> &BitSet {
        &self.y
    }

    pub fn z(&self) -> &BitSet {
        &self.z
    }

    pub fn k_map(&self, x: usize) -> usize {
        self.k[x]
    }

    /// `{a : ∀c (c ⊖ a ∈ I_x → c ∈ I_x)}`.
    pub fn k_formula(&self, x: usize) -> BitSet {
        let alg = &self.algebra;
        let ix = self.ideal(x);
        BitSet::from_elems(
            alg.size(),
            alg.elements()
                .filter(|&a| alg.elements().all(|c| !ix.contains(alg.ominus(c, a)) || ix.contains(c))),
        )
    }

    /// Oracle: the largest MV-ideal `J` with `I_x ⊕̄ J ⊆ I_x`, found by
    /// scanning every MV-ideal obtained from a downset scan.
    pub fn k_oracle(&self, x: usize, mv_ideals: &[BitSet]) -> Option<BitSet> {
        let alg = &self.algebra;
        let ix = self.ideal(x);
        let ok: Vec<&BitSet> = mv_ideals
            .iter()
            .filter(|j| {
                j.iter()
                    .all(|b| ix.iter().all(|a| ix.contains(alg.oplus(a, b))))
            })
            .collect();
        ok.iter()
            .find(|j| ok.iter().all(|other| other.is_subset(j)))
            .map(|j| (*j).clone())
    }

    /// `C_y = {x : I_x ⊕̄ I_y ⊆ I_x}`.
    pub fn c_set(&self, y: usize) -> BitSet {
        let alg = &self.algebra;
        BitSet::from_elems(
            self.len(),
            (0..self.len()).filter(|&x| alg.leq(alg.oplus(self.gen[x], self.gen[y]), self.gen[x])),
        )
    }

    /// `k⁻¹(↑y)`.
    pub fn fiber(&self, y: usize) -> Result<BitSet, SpectrumError> {
        if !self.y.contains(y) {
            return Err(SpectrumError::NotInY(y));
        }
        Ok(BitSet::from_elems(
            self.len(),
            (0..self.len()).filter(|&x| self.leq(y, self.k[x])),
        ))
    }

    /// The witness `x + k(x′)` for `x ≤ x′`.
    pub fn interpolate(&self, x: usize, x_prime: usize) -> Result<usize, SpectrumError> {
        if !self.leq(x, x_prime) {
            return Err(SpectrumError::Incomparable(x, x_prime));
        }
        self.partial_plus(x, self.k[x_prime])
            .ok_or(SpectrumError::InterpolationUndefined { x, x_prime })
    }

    /// The unique point of `Z` above `y`.
    pub fn m_map(&self, y: usize) -> Result<usize, SpectrumError> {
        self.m[y].ok_or(SpectrumError::NotInY(y))
    }

    pub fn mk(&self, x: usize) -> usize {
        self.m[self.k[x]].expect("k lands in Y")
    }

    /// `W` read off the order alone.
    pub fn w_relation(&self) -> Relation {
        w_relation(self.spectrum.order().size(), |a, b| self.leq(a, b))
    }

    /// `𝔬_z = ⋂ {I_y : y ∈ Y, y ≤ z}`.
    pub fn germinal_ideal(&self, z: usize) -> BitSet {
        let mut out = BitSet::full(self.algebra.size());
        for y in self.y.iter().filter(|&y| self.leq(y, z)) {
            out.intersect_with(self.ideal(y));
        }
        out
    }

    /// `S_J = {x : I_x ⊕̄ J ⊆ I_x}` for an MV-ideal `J`.
    pub fn closed_subspace_of_ideal(&self, j: &BitSet) -> BitSet {
        let alg = &self.algebra;
        BitSet::from_elems(
            self.len(),
            (0..self.len()).filter(|&x| {
                let ix = self.ideal(x);
                j.iter().all(|b| ix.iter().all(|a| ix.contains(alg.oplus(a, b))))
            }),
        )
    }

    pub fn space(&self) -> FiniteSpace {
        FiniteSpace::from_poset(self.spectrum.order())
    }

    /// Computes `W`, checks it against `ker(m∘k)`, and certifies the
    /// class-to-`Z` bijection as a homeomorphism.
    pub fn w_quotient(&self) -> Result<WQuotient, SpectrumError> {
        let w = self.w_relation();
        let n = self.len();
        for a in 0..n {
            for b in 0..n {
                if w.contains(a, b) != (self.mk(a) == self.mk(b)) {
                    return Err(SpectrumError::WNotKernel(a, b));
                }
            }
        }
        let classes = w.classes();
        let z_list = self.z.to_vec();
        let mut to_z = Vec::with_capacity(classes.len());
        for (c, class) in classes.iter().enumerate() {
            let hits = class.intersection(&self.z);
            if hits.len() != 1 {
                return Err(SpectrumError::ClassWithoutUniqueZ(c));
            }
            let z = hits.first().unwrap();
            to_z.push(z_list.iter().position(|&q| q == z).unwrap());
        }
        let quotient = self.space().quotient(&classes);
        let z_space = self.space().subspace(&self.z);
        if !quotient.is_homeomorphism(&z_space, &to_z) {
            return Err(SpectrumError::NotHomeomorphic);
        }
        Ok(WQuotient {
            classes,
            z_points: z_list,
            class_to_z: to_z,
        })
    }

    pub fn report(&self) -> SpaceReport {
        let alg = &self.algebra;
        let n = self.len();
        let fmt = |s: &BitSet| s.iter().map(|a| alg.format_elem(a)).collect::<Vec<_>>();
        SpaceReport {
            algebra: alg.label().to_string(),
            carrier: alg.size(),
            points: (0..n)
                .map(|x| PointReport {
                    index: x,
                    ideal: fmt(self.ideal(x)),
                    generator: alg.format_elem(self.gen[x]),
                    involution: self.involution[x],
                    in_y: self.y.contains(x),
                    in_z: self.z.contains(x),
                    k: self.k[x],
                    m: self.m[x],
                })
                .collect(),
            order: self.spectrum.order().covers(),
            plus: self
                .plus_domain()
                .into_iter()
                .map(|(x, y)| (x, y, self.partial_plus(x, y).unwrap()))
                .collect(),
            y: self.y.to_vec(),
            z: self.z.to_vec(),
        }
    }

    /// DOT: order covers upward, `Y` double-circled, `Z` filled, `+` as
    /// labelled dashed edges when `with_plus`.
    pub fn to_dot(&self, with_plus: bool) -> String {
        let mut s = String::from("digraph X {\n  rankdir=BT;\n");
        for x in 0..self.len() {
            let shape = if self.y.contains(x) { "doublecircle" } else { "circle" };
            let fill = if self.z.contains(x) { ", style=filled" } else { "" };
            let _ = writeln!(s, "  {x} [label=\"{x}\", shape={shape}{fill}];");
        }
        for (a, b) in self.spectrum.order().covers() {
            let _ = writeln!(s, "  {a} -> {b};");
        }
        if with_plus {
            for (x, y) in self.plus_domain() {
                if x <= y {
                    let r = self.partial_plus(x, y).unwrap();
                    let _ = writeln!(s, "  {x} -> {r} [style=dashed, label=\"+{y}\"];");
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

/// `x₁ W x₂` iff some `x₀` lies above a point below `x₁` and a point below `x₂`.
pub fn w_relation(n: usize, leq: impl Fn(usize, usize) -> bool) -> Relation {
    let down: Vec<BitSet> = (0..n).map(|a| BitSet::from_elems(n, (0..n).filter(|&b| leq(b, a)))).collect();
    // reach[a]: every point above something below a
    let reach: Vec<BitSet> = (0..n)
        .map(|a| {
            BitSet::from_elems(
                n,
                (0..n).filter(|&x0| down[a].iter().any(|b| leq(b, x0))),
            )
        })
        .collect();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| !reach[a].is_disjoint(&reach[b]))
        .collect();
    Relation::from_pairs(n, &pairs)
}

#[derive(Debug, Clone, Serialize)]
pub struct WQuotient {
    pub classes: Vec<BitSet>,
    pub z_points: Vec<usize>,
    /// `class_to_z[c]` indexes into `z_points`.
    pub class_to_z: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PointReport {
    pub index: usize,
    pub ideal: Vec<String>,
    pub generator: String,
    pub involution: usize,
    pub in_y: bool,
    pub in_z: bool,
    pub k: usize,
    pub m: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpaceReport {
    pub algebra: String,
    pub carrier: usize,
    pub points: Vec<PointReport>,
    pub order: Vec<(usize, usize)>,
    pub plus: Vec<(usize, usize, usize)>,
    pub y: Vec<usize>,
    pub z: Vec<usize>,
}

/// `Z` recovered from the lattice reduct alone: the quotient of
/// `(X, τ↓)` by `W`.
pub fn lattice_only_z(lattice: &FiniteLattice) -> FiniteSpace {
    let spectrum = PrimeSpectrum::new(lattice);
    let w = w_relation(spectrum.len(), |a, b| spectrum.order().leq(a, b));
    FiniteSpace::from_poset(spectrum.order()).quotient(&w.classes())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum KaplanskyVerdict {
    Homeomorphic { z_points: usize },
    NotHomeomorphic,
    LatticesNotIsomorphic,
    IncomparableCarriers,
    Timeout,
    Skipped { reason: String },
}

impl KaplanskyVerdict {
    /// Failure means a counterexample, never an undecided search.
    pub fn is_failure(&self) -> bool {
        matches!(self, KaplanskyVerdict::NotHomeomorphic)
    }
}

pub const KAPLANSKY_CARRIER_CAP: usize = 64;
pub const DEFAULT_ISO_BUDGET: u64 = 5_000_000;

/// `Z` from the lattice (via `W`) against `Z` from maximal MV-ideals.
pub fn kaplansky_self(space: &MvDualSpace) -> KaplanskyVerdict {
    let from_lattice = lattice_only_z(space.algebra().lattice());
    let from_mv = space.space().subspace(space.z());
    match from_lattice.find_homeomorphism(&from_mv, DEFAULT_ISO_BUDGET) {
        IsoSearch::Found(_) => KaplanskyVerdict::Homeomorphic {
            z_points: from_mv.size(),
        },
        IsoSearch::NotIsomorphic => KaplanskyVerdict::NotHomeomorphic,
        IsoSearch::Timeout => KaplanskyVerdict::Timeout,
    }
}

/// If the lattice reducts of `a` and `b` are isomorphic, their maximal
/// spectra must be homeomorphic.
pub fn kaplansky_check(a: &Algebra, b: &Algebra, budget: u64) -> KaplanskyVerdict {
    let (fa, fb) = match (a, b) {
        (Algebra::Chang(_), Algebra::Chang(_)) => {
            return KaplanskyVerdict::Homeomorphic { z_points: 1 };
        }
        (Algebra::Finite(fa), Algebra::Finite(fb)) => (fa, fb),
        _ => return KaplanskyVerdict::IncomparableCarriers,
    };
    if fa.size().max(fb.size()) > KAPLANSKY_CARRIER_CAP {
        return KaplanskyVerdict::Skipped {
            reason: format!("carrier above {KAPLANSKY_CARRIER_CAP}"),
        };
    }
    let rows = |m: &FiniteMv| -> Vec<BitSet> {
        (0..m.size()).map(|x| m.lattice().order().up_set(x).clone()).collect()
    };
    match find_order_isomorphism(&rows(fa), &rows(fb), budget) {
        IsoSearch::NotIsomorphic => KaplanskyVerdict::LatticesNotIsomorphic,
        IsoSearch::Timeout => KaplanskyVerdict::Timeout,
        IsoSearch::Found(_) => {
            let za = MvDualSpace::build(fa);
            let zb = MvDualSpace::build(fb);
            let sa = za.space().subspace(za.z());
            let sb = zb.space().subspace(zb.z());
            match sa.find_homeomorphism(&sb, budget) {
                IsoSearch::Found(_) => KaplanskyVerdict::Homeomorphic { z_points: sa.size() },
                IsoSearch::NotIsomorphic => KaplanskyVerdict::NotHomeomorphic,
                IsoSearch::Timeout => KaplanskyVerdict::Timeout,
            }
        }
    }
}

/// Points of Chang's spectrum: `I_n = ↓fin(n)`, `I_ω` (the radical) and
/// `J_m = ↓cofin(m)` for `m >= 1`, ordered
/// `I₀ < I₁ < ⋯ < I_ω < ⋯ < J₂ < J₁`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChangPoint {
    I(u64),
    Omega,
    J(std::cmp::Reverse<u64>),
}

impl ChangPoint {
    pub fn j(m: u64) -> Self {
        assert!(m >= 1, "J_m needs m >= 1");
        ChangPoint::J(std::cmp::Reverse(m))
    }

    pub fn ideal(&self) -> ChangIdeal {
        match *self {
            ChangPoint::I(0) => ChangIdeal::Zero,
            ChangPoint::I(n) => ChangIdeal::Truncation(n),
            ChangPoint::Omega => ChangIdeal::Radical,
            ChangPoint::J(std::cmp::Reverse(m)) => ChangIdeal::CoFinite(m),
        }
    }

    /// The point of a proper ideal.
    pub fn of_ideal(ideal: ChangIdeal) -> Option<Self> {
        match ideal {
            ChangIdeal::Zero => Some(ChangPoint::I(0)),
            ChangIdeal::Truncation(n) => Some(ChangPoint::I(n)),
            ChangIdeal::Radical => Some(ChangPoint::Omega),
            ChangIdeal::CoFinite(0) => None,
            ChangIdeal::CoFinite(m) => Some(ChangPoint::j(m)),
        }
    }

    /// Points with every index `<= n`, in increasing order.
    pub fn bounded(n: u64) -> Vec<Self> {
        let mut out: Vec<Self> = (0..=n).map(ChangPoint::I).collect();
        out.push(ChangPoint::Omega);
        out.extend((1..=n).rev().map(ChangPoint::j));
        out
    }
}

impl std::fmt::Display for ChangPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ChangPoint::I(n) => write!(f, "I{n}"),
            ChangPoint::Omega => write!(f, "Iω"),
            ChangPoint::J(std::cmp::Reverse(m)) => write!(f, "J{m}"),
        }
    }
}

impl Serialize for ChangPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Chang's dual space, computed symbolically on the point taxonomy.
pub struct ChangSpace;

impl ChangSpace {
    /// `I_{i(x)} = ¬F_x`.
    pub fn involution(x: ChangPoint) -> ChangPoint {
        let filter = x.ideal().complement().expect("points are proper ideals");
        ChangPoint::of_ideal(filter.negate()).expect("¬F_x is proper")
    }

    pub fn partial_plus(x: ChangPoint, y: ChangPoint) -> Option<ChangPoint> {
        ChangPoint::of_ideal(chang_oplus_bar(x.ideal(), y.ideal()))
    }

    pub fn in_y(x: ChangPoint) -> bool {
        x.ideal().is_prime_mv_ideal()
    }

    pub fn in_z(x: ChangPoint) -> bool {
        x.ideal().is_maximal_mv_ideal()
    }

    /// Closed form: `k(I_n) = I₀` for `n >= 1`, `k` fixes `I₀` and `I_ω`,
    /// and `k(J_m) = I₀`.
    pub fn k_map(x: ChangPoint) -> ChangPoint {
        match x {
            ChangPoint::Omega => ChangPoint::Omega,
            _ => ChangPoint::I(0),
        }
    }

    /// `k` through the filter arithmetic: `I_{k(x)} = (F_x ⊖̄ I_x)ᶜ`.
    pub fn k_via_filters(x: ChangPoint) -> ChangPoint {
        let f = x.ideal().complement().expect("proper");
        let diff = chang_ominus_bar(f, x.ideal());
        let complement = match diff {
            crate::mv::ChangFilter::CoRadical => ChangIdeal::Radical,
            crate::mv::ChangFilter::Principal(ChangElem::Fin(0)) => ChangIdeal::CoFinite(0),
            crate::mv::ChangFilter::Principal(ChangElem::Fin(p)) => ChangIdeal::principal(ChangElem::Fin(p - 1)),
            crate::mv::ChangFilter::Principal(ChangElem::Cofin(p)) => ChangIdeal::CoFinite(p + 1),
        };
        ChangPoint::of_ideal(complement).expect("k(x) is proper")
    }

    /// The quantifier formula `{a : ∀c (c ⊖ a ∈ I_x → c ∈ I_x)}` decided on
    /// the window: `a` ranges over indices `< n/2`, `c` over indices `<= n`.
    /// Returns the first `a` where the formula and the closed form disagree.
    pub fn k_formula_mismatch(x: ChangPoint, n: u64) -> Option<ChangElem> {
        let ix = x.ideal();
        let k = Self::k_map(x).ideal();
        let window = Chang::bounded_elements(n);
        let half = window
            .iter()
            .copied()
            .filter(|e| matches!(e, ChangElem::Fin(i) | ChangElem::Cofin(i) if *i < n / 2));
        for a in half {
            let formula = window
                .iter()
                .all(|&c| !ix.contains(Chang.ominus(c, a)) || ix.contains(c));
            if formula != k.contains(a) {
                return Some(a);
            }
        }
        None
    }

    pub fn m_map(y: ChangPoint) -> Option<ChangPoint> {
        Self::in_y(y).then_some(ChangPoint::Omega)
    }

    /// `C_y = {x : I_x ⊕̄ I_y ⊆ I_x}` restricted to points with indices `<= n`.
    pub fn c_set_bounded(y: ChangPoint, n: u64) -> Vec<ChangPoint> {
        ChangPoint::bounded(n)
            .into_iter()
            .filter(|x| chang_oplus_bar(x.ideal(), y.ideal()) <= x.ideal())
            .collect()
    }

    /// `k⁻¹(↑y)` restricted to points with indices `<= n`.
    pub fn fiber_bounded(y: ChangPoint, n: u64) -> Vec<ChangPoint> {
        ChangPoint::bounded(n)
            .into_iter()
            .filter(|&x| Self::k_map(x) >= y)
            .collect()
    }

    /// `𝔬_{I_ω} = I₀ ∩ I_ω = {0}`.
    pub fn germinal_ideal(z: ChangPoint) -> Option<ChangIdeal> {
        Self::in_z(z).then_some(ChangIdeal::Zero)
    }

    pub fn report(n: u64) -> ChangReport {
        let points = ChangPoint::bounded(n);
        ChangReport {
            algebra: "Chang".into(),
            bound: n,
            points: points
                .iter()
                .map(|&x| ChangPointReport {
                    point: x,
                    ideal: x.ideal(),
                    involution: Self::involution(x),
                    in_y: Self::in_y(x),
                    in_z: Self::in_z(x),
                    k: Self::k_map(x),
                    m: Self::m_map(x),
                })
                .collect(),
            y: points.iter().copied().filter(|&x| Self::in_y(x)).collect(),
            z: points.iter().copied().filter(|&x| Self::in_z(x)).collect(),
            germinal: ChangIdeal::Zero,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ChangPointReport {
    pub point: ChangPoint,
    pub ideal: ChangIdeal,
    pub involution: ChangPoint,
    pub in_y: bool,
    pub in_z: bool,
    pub k: ChangPoint,
    pub m: Option<ChangPoint>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChangReport {
    pub algebra: String,
    pub bound: u64,
    pub points: Vec<ChangPointReport>,
    pub y: Vec<ChangPoint>,
    pub z: Vec<ChangPoint>,
    pub germinal: ChangIdeal,
}
