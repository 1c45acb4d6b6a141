//! Sheaf representations of a finite MV-algebra over its prime and maximal
//! MV-spectra, the patching property, and the Chinese remainder theorem.
//!
//! The base carries the co-topology used for sections: upsets of `Y` for
//! the prime base, the discrete topology on `Z` for the maximal base. A
//! global section is an assignment of stalk elements that agrees with some
//! `s_a` on the minimal open neighbourhood of every base point.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::bitset::BitSet;
use crate::mv::{FiniteMv, MvOps, Quotient};
use crate::spectrum::MvDualSpace;

pub const DEFAULT_SECTION_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Base {
    /// `Y` with `q = k` and stalks `A/I_y`.
    Prime,
    /// `Z` with `q = m∘k` and stalks `A/𝔬_z`.
    Maximal,
}

impl std::fmt::Display for Base {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Base::Prime => "prime",
            Base::Maximal => "maximal",
        })
    }
}

#[derive(Debug, Clone)]
pub struct Stalk {
    /// The base point, as a point of `X`.
    pub point: usize,
    pub ideal: BitSet,
    pub quotient: Quotient,
}

impl Stalk {
    pub fn size(&self) -> usize {
        self.quotient.algebra.size()
    }

    pub fn germ(&self, a: usize) -> usize {
        self.quotient.projection[a]
    }
}

#[derive(Debug, Clone)]
pub struct EtaleInstance {
    space: MvDualSpace,
    base: Base,
    /// Base points as points of `X`, increasing.
    points: Vec<usize>,
    q: Vec<usize>,
    stalks: Vec<Stalk>,
    /// Minimal open neighbourhood of each base point, as positions in `points`.
    nbhd: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SheafError {
    #[error("product of stalk sizes {product} exceeds the cap {cap}")]
    SectionCap { product: u64, cap: u64 },
}

impl EtaleInstance {
    pub fn new(space: &MvDualSpace, base: Base) -> Self {
        let n = space.len();
        let (points, q): (Vec<usize>, Vec<usize>) = match base {
            Base::Prime => (space.y().to_vec(), (0..n).map(|x| space.k_map(x)).collect()),
            Base::Maximal => (space.z().to_vec(), (0..n).map(|x| space.mk(x)).collect()),
        };
        let stalks = points
            .iter()
            .map(|&p| {
                let ideal = match base {
                    Base::Prime => space.ideal(p).clone(),
                    Base::Maximal => space.germinal_ideal(p),
                };
                let quotient = space.algebra().quotient(&ideal).expect("proper MV-ideal");
                Stalk { point: p, ideal, quotient }
            })
            .collect();
        let nbhd = points
            .iter()
            .map(|&p| match base {
                Base::Prime => (0..points.len()).filter(|&j| space.leq(p, points[j])).collect(),
                Base::Maximal => vec![points.iter().position(|&r| r == p).unwrap()],
            })
            .collect();
        EtaleInstance {
            space: space.clone(),
            base,
            points,
            q,
            stalks,
            nbhd,
        }
    }

    pub fn space(&self) -> &MvDualSpace {
        &self.space
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn q(&self, x: usize) -> usize {
        self.q[x]
    }

    pub fn stalks(&self) -> &[Stalk] {
        &self.stalks
    }

    /// The base points as a subset of `X`.
    pub fn base_set(&self) -> BitSet {
        BitSet::from_elems(self.space.len(), self.points.iter().copied())
    }

    /// `q⁻¹(U)` for `U` a set of base points given as points of `X`.
    pub fn preimage(&self, u: &BitSet) -> BitSet {
        BitSet::from_elems(self.space.len(), (0..self.space.len()).filter(|&x| u.contains(self.q[x])))
    }

    /// Surjective, and monotone for `τ↓` on `X` and the base order.
    pub fn q_is_continuous(&self) -> bool {
        let n = self.space.len();
        let onto = self.points.iter().all(|p| self.q.contains(p));
        let monotone = (0..n).all(|x| {
            (0..n)
                .filter(|&x2| self.space.leq(x, x2))
                .all(|x2| self.space.leq(self.q[x], self.q[x2]))
        });
        onto && self.q.iter().all(|p| self.points.contains(p)) && monotone
    }

    /// First stalk that is trivial or, on the prime base, not a chain.
    pub fn stalk_shape_violation(&self) -> Option<usize> {
        self.stalks.iter().position(|s| {
            s.size() < 2 || (self.base == Base::Prime && !s.quotient.algebra.is_chain())
        })
    }

    /// The stalk family with one base point removed; a negative control for
    /// [`EtaleInstance::eta_check`].
    pub fn without_base_point(&self, pos: usize) -> Self {
        let mut out = self.clone();
        out.points.remove(pos);
        out.stalks.remove(pos);
        out.nbhd.remove(pos);
        for nb in &mut out.nbhd {
            nb.retain(|&j| j != pos);
            for j in nb.iter_mut() {
                if *j > pos {
                    *j -= 1;
                }
            }
        }
        out
    }

    /// `s_a`: the germs of `a` at every base point.
    pub fn germs(&self, a: usize) -> Vec<usize> {
        self.stalks.iter().map(|s| s.germ(a)).collect()
    }

    fn local_tables(&self) -> Vec<HashMap<Vec<usize>, usize>> {
        let size = self.space.algebra().size();
        self.nbhd
            .iter()
            .map(|nb| {
                let mut table = HashMap::new();
                for a in 0..size {
                    let key: Vec<usize> = nb.iter().map(|&j| self.stalks[j].germ(a)).collect();
                    table.entry(key).or_insert(a);
                }
                table
            })
            .collect()
    }

    /// Every locally representable assignment, in lexicographic order of
    /// stalk indices (first base point most significant).
    pub fn global_sections(&self, cap: u64) -> Result<Vec<Section>, SheafError> {
        let sizes: Vec<usize> = self.stalks.iter().map(Stalk::size).collect();
        let product = sizes
            .iter()
            .try_fold(1u64, |acc, &s| acc.checked_mul(s as u64))
            .unwrap_or(u64::MAX);
        if product > cap {
            return Err(SheafError::SectionCap { product, cap });
        }
        let tables = self.local_tables();
        let n_x = self.space.len();
        let mut out = Vec::new();
        let mut digits = vec![0usize; sizes.len()];
        loop {
            let witnesses: Option<Vec<Witness>> = (0..digits.len())
                .map(|p| {
                    let key: Vec<usize> = self.nbhd[p].iter().map(|&j| digits[j]).collect();
                    tables[p].get(&key).map(|&a| Witness {
                        element: a,
                        neighbourhood: BitSet::from_elems(n_x, self.nbhd[p].iter().map(|&j| self.points[j])),
                    })
                })
                .collect();
            if let Some(witnesses) = witnesses {
                out.push(Section {
                    assignment: digits.clone(),
                    witnesses,
                });
            }
            let mut i = digits.len();
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < sizes[i] {
                    break;
                }
                digits[i] = 0;
            }
        }
    }

    /// Checks that `a ↦ s_a` is an injective MV-homomorphism onto the
    /// global sections.
    pub fn eta_check(&self, cap: u64) -> Result<EtaReport, SheafError> {
        let alg = self.space.algebra();
        let germs: Vec<Vec<usize>> = alg.elements().map(|a| self.germs(a)).collect();
        let failure = self.eta_failure(alg, &germs, cap)?;
        let sections = match &failure {
            None => alg.size(),
            Some(_) => self.global_sections(cap).map(|s| s.len()).unwrap_or(0),
        };
        Ok(EtaReport {
            base: self.base,
            stalks: self
                .stalks
                .iter()
                .map(|s| StalkReport {
                    point: s.point,
                    ideal: s.ideal.iter().map(|a| alg.format_elem(a)).collect(),
                    size: s.size(),
                    chain: s.quotient.algebra.is_chain(),
                })
                .collect(),
            sections,
            isomorphism: failure.is_none(),
            witness: failure,
        })
    }

    fn eta_failure(
        &self,
        alg: &FiniteMv,
        germs: &[Vec<usize>],
        cap: u64,
    ) -> Result<Option<EtaFailure>, SheafError> {
        let mut seen: HashMap<&[usize], usize> = HashMap::new();
        for (a, g) in germs.iter().enumerate() {
            if let Some(&b) = seen.get(g.as_slice()) {
                return Ok(Some(EtaFailure::NotInjective { a: b, b: a }));
            }
            seen.insert(g, a);
        }
        for a in alg.elements() {
            let neg_ok = self
                .stalks
                .iter()
                .enumerate()
                .all(|(p, s)| s.quotient.algebra.neg(germs[a][p]) == germs[alg.neg(a)][p]);
            if !neg_ok {
                return Ok(Some(EtaFailure::NotHomomorphism { a, b: a }));
            }
            for b in alg.elements() {
                let sum = alg.oplus(a, b);
                let ok = self
                    .stalks
                    .iter()
                    .enumerate()
                    .all(|(p, s)| s.quotient.algebra.oplus(germs[a][p], germs[b][p]) == germs[sum][p]);
                if !ok {
                    return Ok(Some(EtaFailure::NotHomomorphism { a, b }));
                }
            }
        }
        let sections = self.global_sections(cap)?;
        let as_sections: std::collections::HashSet<&[usize]> =
            sections.iter().map(|s| s.assignment.as_slice()).collect();
        if let Some(a) = alg.elements().find(|&a| !as_sections.contains(germs[a].as_slice())) {
            return Ok(Some(EtaFailure::NotSection { a }));
        }
        if let Some(orphan) = sections.iter().find(|s| !seen.contains_key(s.assignment.as_slice())) {
            return Ok(Some(EtaFailure::NotSurjective {
                section: orphan.assignment.clone(),
            }));
        }
        Ok(None)
    }

    /// Patches the downsets `K_l = â_l` over the cover `U_l` into
    /// `⋃ (K_l ∩ q⁻¹(U_l))` and finds the element realizing it.
    pub fn check_property_p(&self, cover: &[BitSet], ks: &[BitSet]) -> Result<Patch, PatchError> {
        let n = self.space.len();
        if cover.len() != ks.len() || cover.is_empty() {
            return Err(PatchError::Shape);
        }
        let base = self.base_set();
        for (l, u) in cover.iter().enumerate() {
            let open = u.is_subset(&base)
                && match self.base {
                    Base::Prime => u
                        .iter()
                        .all(|y| self.points.iter().all(|&y2| !self.space.leq(y, y2) || u.contains(y2))),
                    Base::Maximal => true,
                };
            if !open {
                return Err(PatchError::NotOpen { index: l });
            }
        }
        let mut covered = BitSet::new(n);
        for u in cover {
            covered.union_with(u);
        }
        if let Some(missing) = base.difference(&covered).first() {
            return Err(PatchError::NotCover { missing });
        }
        for (l, k) in ks.iter().enumerate() {
            if self.element_of_stone_set(k).is_none() {
                return Err(PatchError::NotStoneSet { index: l });
            }
        }
        let pre: Vec<BitSet> = cover.iter().map(|u| self.preimage(u)).collect();
        for l in 0..ks.len() {
            for m in l + 1..ks.len() {
                let overlap = pre[l].intersection(&pre[m]);
                let lhs = ks[l].intersection(&overlap);
                let rhs = ks[m].intersection(&overlap);
                if lhs != rhs {
                    let point = lhs.union(&rhs).difference(&lhs.intersection(&rhs)).first().unwrap();
                    return Err(PatchError::Hypothesis { l, m, point });
                }
            }
        }
        let mut set = BitSet::new(n);
        for (k, p) in ks.iter().zip(&pre) {
            set.union_with(&k.intersection(p));
        }
        let element = self
            .element_of_stone_set(&set)
            .ok_or_else(|| PatchError::NotRealizable { set: set.clone() })?;
        Ok(Patch { set, element })
    }

    fn element_of_stone_set(&self, s: &BitSet) -> Option<usize> {
        self.space.algebra().elements().find(|&a| self.space.hat(a) == s)
    }

    /// Rebuilds a section from its local witnesses by patching; returns the
    /// patched element when it reproduces the section.
    pub fn patch_section(&self, section: &Section) -> Result<usize, PatchError> {
        let cover: Vec<BitSet> = section.witnesses.iter().map(|w| w.neighbourhood.clone()).collect();
        let ks: Vec<BitSet> = section
            .witnesses
            .iter()
            .map(|w| self.space.hat(w.element).clone())
            .collect();
        let patch = self.check_property_p(&cover, &ks)?;
        if self.germs(patch.element) == section.assignment {
            Ok(patch.element)
        } else {
            Err(PatchError::Mismatch { element: patch.element })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub element: usize,
    /// Base points (as points of `X`) on which the section equals `s_element`.
    pub neighbourhood: BitSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Section {
    /// Stalk element (class index) at each base point.
    pub assignment: Vec<usize>,
    pub witnesses: Vec<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EtaFailure {
    NotInjective { a: usize, b: usize },
    NotHomomorphism { a: usize, b: usize },
    NotSection { a: usize },
    NotSurjective { section: Vec<usize> },
}

#[derive(Debug, Clone, Serialize)]
pub struct StalkReport {
    pub point: usize,
    pub ideal: Vec<String>,
    pub size: usize,
    pub chain: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EtaReport {
    pub base: Base,
    pub stalks: Vec<StalkReport>,
    pub sections: usize,
    pub isomorphism: bool,
    pub witness: Option<EtaFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Patch {
    pub set: BitSet,
    pub element: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PatchError {
    #[error("cover and K families differ in length or are empty")]
    Shape,
    #[error("cover member {index} is not open in the base")]
    NotOpen { index: usize },
    #[error("base point {missing} is not covered")]
    NotCover { missing: usize },
    #[error("K_{index} is not of the form â")]
    NotStoneSet { index: usize },
    #[error("K_{l} and K_{m} disagree over the overlap at point {point}")]
    Hypothesis { l: usize, m: usize, point: usize },
    #[error("patched set is not of the form b̂")]
    NotRealizable { set: BitSet },
    #[error("patched element {element} does not reproduce the section")]
    Mismatch { element: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CrtError {
    #[error("no congruences given, or lengths differ")]
    Shape,
    #[error("ideal {index} is not an MV-ideal")]
    NotMvIdeal { index: usize },
    #[error("the ideals do not intersect in {{0}}")]
    NonzeroIntersection,
    #[error("a_{i} and a_{j} are not congruent modulo the join of their ideals")]
    Incompatible { i: usize, j: usize },
    #[error("no element satisfies every congruence")]
    NoSolution,
    #[error("elements {first} and {second} both satisfy every congruence")]
    NotUnique { first: usize, second: usize },
    #[error("point {point} of Y lies in no û_iᶜ")]
    NotCover { point: usize },
    #[error("a_{i} and a_{j} differ at point {point} of Y")]
    IncompatibleAt { i: usize, j: usize, point: usize },
    #[error("no t up to the carrier size yields a solution")]
    NoTerm,
}

/// The unique `b` with `b ≡ a_l` modulo `I_l` for every `l`, by scan.
pub fn crt_solve(alg: &FiniteMv, ideals: &[BitSet], a: &[usize]) -> Result<usize, CrtError> {
    if ideals.is_empty() || ideals.len() != a.len() {
        return Err(CrtError::Shape);
    }
    if let Some(index) = ideals.iter().position(|i| !alg.is_mv_ideal(i)) {
        return Err(CrtError::NotMvIdeal { index });
    }
    let mut meet = BitSet::full(alg.size());
    for i in ideals {
        meet.intersect_with(i);
    }
    if meet.len() != 1 {
        return Err(CrtError::NonzeroIntersection);
    }
    for i in 0..ideals.len() {
        for j in i + 1..ideals.len() {
            let joined = alg.ideal_generated(&ideals[i].union(&ideals[j]));
            if !alg.congruent_mod(&joined, a[i], a[j]) {
                return Err(CrtError::Incompatible { i, j });
            }
        }
    }
    let mut hits = alg
        .elements()
        .filter(|&b| ideals.iter().zip(a).all(|(i, &al)| alg.congruent_mod(i, b, al)));
    let first = hits.next().ok_or(CrtError::NoSolution)?;
    match hits.next() {
        Some(second) => Err(CrtError::NotUnique { first, second }),
        None => Ok(first),
    }
}

/// `⋁ (a_i ⊖ t·u_i)`.
pub fn term_value(alg: &FiniteMv, u: &[usize], a: &[usize], t: u64) -> usize {
    u.iter()
        .zip(a)
        .map(|(&ui, &ai)| alg.ominus(ai, alg.nmul(t, ui)))
        .fold(alg.zero(), |acc, v| alg.join(acc, v))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CrtTerm {
    pub t: u64,
    pub b: usize,
}

/// The least `t` for which `b = ⋁ (a_i ⊖ t·u_i)` has `[b]_y = [a_i]_y` at
/// every `y ∈ û_iᶜ ∩ Y`.
pub fn crt_term(space: &MvDualSpace, u: &[usize], a: &[usize]) -> Result<CrtTerm, CrtError> {
    let alg = space.algebra();
    if u.is_empty() || u.len() != a.len() {
        return Err(CrtError::Shape);
    }
    let patches: Vec<Vec<usize>> = u
        .iter()
        .map(|&ui| space.y().iter().filter(|&y| space.ideal(y).contains(ui)).collect())
        .collect();
    if let Some(point) = space.y().iter().find(|&y| patches.iter().all(|p| !p.contains(&y))) {
        return Err(CrtError::NotCover { point });
    }
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            if let Some(&point) = patches[i]
                .iter()
                .find(|&&y| patches[j].contains(&y) && !alg.congruent_mod(space.ideal(y), a[i], a[j]))
            {
                return Err(CrtError::IncompatibleAt { i, j, point });
            }
        }
    }
    for t in 0..=alg.size() as u64 {
        let b = term_value(alg, u, a, t);
        let valid = patches
            .iter()
            .zip(a)
            .all(|(patch, &ai)| patch.iter().all(|&y| alg.congruent_mod(space.ideal(y), b, ai)));
        if valid {
            return Ok(CrtTerm { t, b });
        }
    }
    Err(CrtError::NoTerm)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrtInstance {
    pub ideals: Vec<BitSet>,
    /// Idempotent generator of each ideal.
    pub generators: Vec<usize>,
    pub a: Vec<usize>,
    /// The element every congruence was drawn around.
    pub expected: usize,
}

/// A valid instance: random idempotent generators, closed off by the
/// complement of their meet so the ideals intersect in `{0}`, and residues
/// drawn from the classes of a random element.
pub fn random_crt_instance<R: Rng>(alg: &FiniteMv, rng: &mut R) -> CrtInstance {
    let idempotents = alg.idempotents();
    let count = rng.gen_range(1..=4);
    let mut generators: Vec<usize> = (0..count).map(|_| *idempotents.choose(rng).unwrap()).collect();
    let meet = generators.iter().fold(alg.one(), |acc, &e| alg.meet(acc, e));
    if meet != alg.zero() {
        generators.push(alg.neg(meet));
    }
    let expected = rng.gen_range(0..alg.size());
    let ideals: Vec<BitSet> = generators
        .iter()
        .map(|&e| alg.lattice().order().down_set(e).clone())
        .collect();
    let a = ideals
        .iter()
        .map(|i| {
            let class: Vec<usize> = alg.elements().filter(|&c| alg.congruent_mod(i, c, expected)).collect();
            *class.choose(rng).unwrap()
        })
        .collect();
    CrtInstance {
        ideals,
        generators,
        a,
        expected,
    }
}

/// Least `m` from which `a ⊖ m·u` is constant, after checking the sequence
/// is nonincreasing; `None` if it is not.
pub fn stabilization_index(alg: &FiniteMv, a: usize, u: usize) -> Option<usize> {
    let n = alg.size();
    let seq: Vec<usize> = (0..=n as u64).map(|m| alg.ominus(a, alg.nmul(m, u))).collect();
    if seq.windows(2).any(|w| !alg.leq(w[1], w[0])) {
        return None;
    }
    let last = seq[n];
    Some(seq.iter().rposition(|&v| v != last).map_or(0, |i| i + 1))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SandwichFailure {
    pub a: usize,
    pub u: usize,
    pub point: usize,
    /// `"lower"` when `â ∩ k⁻¹(ûᶜ) ⊄ ŝ`, `"upper"` when `ŝ ⊄ â ∩ ↓k⁻¹(ûᶜ)`.
    pub side: &'static str,
}

/// `â ∩ k⁻¹(ûᶜ) ⊆ (a ⊖ M·u)^ ⊆ â ∩ ↓k⁻¹(ûᶜ)` with `M·u` the stabilized multiple.
pub fn sandwich_check(space: &MvDualSpace, a: usize, u: usize) -> Result<(), SandwichFailure> {
    let alg = space.algebra();
    let n = space.len();
    let stable = alg.ominus(a, alg.nmul(alg.size() as u64, u));
    let s_hat = space.hat(stable);
    let a_hat = space.hat(a);
    let k_pre = BitSet::from_elems(n, (0..n).filter(|&x| space.ideal(space.k_map(x)).contains(u)));
    let lower = a_hat.intersection(&k_pre);
    let upper = a_hat.intersection(&space.spectrum().order().down_closure(&k_pre));
    if let Some(point) = lower.difference(s_hat).first() {
        return Err(SandwichFailure { a, u, point, side: "lower" });
    }
    if let Some(point) = s_hat.difference(&upper).first() {
        return Err(SandwichFailure { a, u, point, side: "upper" });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal_arith::oplus_bar;
    use crate::mv::DEFAULT_CARRIER_CAP;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn l(n: usize) -> FiniteMv {
        FiniteMv::lukasiewicz(n).unwrap()
    }

    fn prod(f: &[usize]) -> FiniteMv {
        FiniteMv::product(&f.iter().map(|&n| l(n)).collect::<Vec<_>>(), DEFAULT_CARRIER_CAP).unwrap()
    }

    #[test]
    fn eta_is_isomorphism_on_both_bases() {
        for a in [l(1), l(2), l(4), prod(&[2, 3]), prod(&[1, 2, 1])] {
            let s = MvDualSpace::build(&a);
            for base in [Base::Prime, Base::Maximal] {
                let inst = EtaleInstance::new(&s, base);
                assert!(inst.q_is_continuous());
                assert_eq!(inst.stalk_shape_violation(), None);
                let r = inst.eta_check(DEFAULT_SECTION_CAP).unwrap();
                assert!(r.isomorphism, "{} {base}: {:?}", a.label(), r.witness);
                assert_eq!(r.sections, a.size());
            }
        }
    }

    #[test]
    fn single_stalk_of_l2_is_the_algebra() {
        let s = MvDualSpace::build(&l(2));
        let inst = EtaleInstance::new(&s, Base::Prime);
        assert_eq!(inst.stalks().len(), 1);
        assert_eq!(inst.stalks()[0].size(), 3);
        assert_eq!(inst.global_sections(DEFAULT_SECTION_CAP).unwrap().len(), 3);
    }

    #[test]
    fn dropped_base_point_breaks_injectivity() {
        let a = prod(&[2, 3]);
        let s = MvDualSpace::build(&a);
        let inst = EtaleInstance::new(&s, Base::Prime).without_base_point(0);
        let r = inst.eta_check(DEFAULT_SECTION_CAP).unwrap();
        assert!(!r.isomorphism);
        let Some(EtaFailure::NotInjective { a: x, b: y }) = r.witness else {
            panic!("{:?}", r.witness)
        };
        assert_eq!(a.coords(x)[1], a.coords(y)[1]);
        assert_ne!(a.coords(x)[0], a.coords(y)[0]);
    }

    #[test]
    fn section_cap() {
        let s = MvDualSpace::build(&prod(&[2, 3]));
        let inst = EtaleInstance::new(&s, Base::Prime);
        assert_eq!(
            inst.global_sections(5),
            Err(SheafError::SectionCap { product: 12, cap: 5 })
        );
    }

    #[test]
    fn patching() {
        let a = prod(&[2, 3]);
        let s = MvDualSpace::build(&a);
        let inst = EtaleInstance::new(&s, Base::Prime);
        let n = s.len();
        let y = inst.points().to_vec();
        let whole = inst.base_set();
        let e = a.from_coords(&[1, 2]);
        assert_eq!(
            inst.check_property_p(std::slice::from_ref(&whole), &[s.hat(e).clone()]).map(|p| p.element),
            Ok(e)
        );
        // Two projections, compatible trivially: patch (2,0) and (0,3).
        let (a1, a2) = (a.from_coords(&[2, 0]), a.from_coords(&[0, 3]));
        let cover = [BitSet::singleton(n, y[0]), BitSet::singleton(n, y[1])];
        let ks = [s.hat(a1).clone(), s.hat(a2).clone()];
        let patch = inst.check_property_p(&cover, &ks).unwrap();
        assert_eq!(inst.germs(patch.element), vec![inst.germs(a1)[0], inst.germs(a2)[1]]);
        assert_eq!(*s.hat(patch.element), patch.set);
        // Overlapping cover with different elements.
        let err = inst
            .check_property_p(&[whole.clone(), whole.clone()], &[s.hat(a1).clone(), s.hat(a2).clone()])
            .unwrap_err();
        assert!(matches!(err, PatchError::Hypothesis { l: 0, m: 1, .. }));
        assert_eq!(
            inst.check_property_p(&[cover[0].clone()], &[s.hat(a1).clone()]),
            Err(PatchError::NotCover { missing: y[1] })
        );
        // A point with something strictly below it is not a downset on its own.
        let upper = (0..n).find(|&x| (0..n).any(|w| w != x && s.leq(w, x))).unwrap();
        assert_eq!(
            inst.check_property_p(&[whole], &[BitSet::singleton(n, upper)]),
            Err(PatchError::NotStoneSet { index: 0 })
        );
    }

    #[test]
    fn sections_patch_back() {
        for a in [l(3), prod(&[2, 3]), prod(&[1, 1, 2])] {
            let s = MvDualSpace::build(&a);
            for base in [Base::Prime, Base::Maximal] {
                let inst = EtaleInstance::new(&s, base);
                for sec in inst.global_sections(DEFAULT_SECTION_CAP).unwrap() {
                    let b = inst.patch_section(&sec).unwrap();
                    assert_eq!(inst.germs(b), sec.assignment);
                }
            }
        }
    }

    #[test]
    fn crt_examples() {
        let a = prod(&[2, 3]);
        let zero = BitSet::singleton(a.size(), 0);
        assert_eq!(crt_solve(&a, &[zero], &[7]), Ok(7));
        let k1 = a.lattice().order().down_set(a.from_coords(&[0, 3])).clone();
        let k2 = a.lattice().order().down_set(a.from_coords(&[2, 0])).clone();
        let (a1, a2) = (a.from_coords(&[2, 0]), a.from_coords(&[0, 3]));
        let b = crt_solve(&a, &[k1.clone(), k2.clone()], &[a1, a2]).unwrap();
        assert_eq!(a.coords(b), vec![2, 3]);
        // Same ideal twice with different residues.
        assert_eq!(
            crt_solve(&a, &[k1.clone(), k1.clone(), k2.clone()], &[a1, a.from_coords(&[1, 0]), a2]),
            Err(CrtError::Incompatible { i: 0, j: 1 })
        );
        assert_eq!(crt_solve(&a, std::slice::from_ref(&k1), &[a1]), Err(CrtError::NonzeroIntersection));
        let s = MvDualSpace::build(&a);
        let u = [a.from_coords(&[0, 3]), a.from_coords(&[2, 0])];
        let term = crt_term(&s, &u, &[a1, a2]).unwrap();
        assert_eq!(term.b, b);
        assert_eq!(term_value(&a, &u, &[a1, a2], term.t), b);
        let single = crt_term(&s, &[0], &[5]).unwrap();
        assert_eq!(single, CrtTerm { t: 0, b: 5 });
        assert_eq!(crt_term(&s, &[a.one()], &[5]), Err(CrtError::NotCover { point: s.y().first().unwrap() }));
    }

    #[test]
    fn random_crt_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for a in [l(3), prod(&[2, 3]), prod(&[1, 2, 1])] {
            let s = MvDualSpace::build(&a);
            for _ in 0..50 {
                let inst = random_crt_instance(&a, &mut rng);
                for i in 0..inst.ideals.len() {
                    for j in 0..inst.ideals.len() {
                        let gen = a.ideal_generated(&inst.ideals[i].union(&inst.ideals[j]));
                        let bar = oplus_bar(&a, &inst.ideals[i], &inst.ideals[j]).unwrap();
                        assert_eq!(&gen, bar.members());
                    }
                }
                let b = crt_solve(&a, &inst.ideals, &inst.a).unwrap();
                assert_eq!(b, inst.expected);
                let term = crt_term(&s, &inst.generators, &inst.a).unwrap();
                assert_eq!(term.b, b);
            }
        }
    }

    #[test]
    fn sandwich_and_stabilization() {
        for a in [l(4), prod(&[2, 3]), prod(&[1, 1, 1])] {
            let s = MvDualSpace::build(&a);
            for x in a.elements() {
                for u in a.elements() {
                    assert_eq!(sandwich_check(&s, x, u), Ok(()));
                    assert!(stabilization_index(&a, x, u).unwrap() <= a.size());
                }
            }
        }
        assert_eq!(stabilization_index(&l(4), 4, 1), Some(4));
        assert_eq!(stabilization_index(&l(4), 4, 0), Some(0));
    }
}
