//! Lifted operations on ideals and filters:
//! `I ⊕̄ J = {c : c ≤ a ⊕ b, a ∈ I, b ∈ J}` and
//! `F ⊖̄ I = {c : c ≥ a ⊖ b, a ∈ F, b ∈ I}`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::bitset::BitSet;
use crate::lattice::{FilterSet, IdealSet};
use crate::mv::{ChangElem, ChangFilter, ChangIdeal, FiniteMv, MvOps};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("operand is not a lattice ideal")]
    NotIdeal,
    #[error("operand is not a lattice filter")]
    NotFilter,
}

fn ideal_of(alg: &FiniteMv, s: &BitSet) -> Result<(), ArithError> {
    if alg.lattice().is_ideal(s) {
        Ok(())
    } else {
        Err(ArithError::NotIdeal)
    }
}

fn filter_of(alg: &FiniteMv, s: &BitSet) -> Result<(), ArithError> {
    if alg.lattice().is_filter(s) {
        Ok(())
    } else {
        Err(ArithError::NotFilter)
    }
}

/// `I ⊕̄ J` by direct comprehension.
pub fn oplus_bar(alg: &FiniteMv, i: &BitSet, j: &BitSet) -> Result<IdealSet, ArithError> {
    ideal_of(alg, i)?;
    ideal_of(alg, j)?;
    let mut sums = BitSet::new(alg.size());
    for a in i.iter() {
        for b in j.iter() {
            sums.insert(alg.oplus(a, b));
        }
    }
    Ok(IdealSet(alg.lattice().order().down_closure(&sums)))
}

/// The lattice ideal generated by `{a ⊕ b : a ∈ I, b ∈ J}`; agrees with
/// [`oplus_bar`].
pub fn oplus_bar_generated(alg: &FiniteMv, i: &BitSet, j: &BitSet) -> Result<IdealSet, ArithError> {
    ideal_of(alg, i)?;
    ideal_of(alg, j)?;
    let sums = BitSet::from_elems(
        alg.size(),
        i.iter().flat_map(|a| j.iter().map(move |b| alg.oplus(a, b))),
    );
    Ok(alg.lattice().ideal_generated(&sums))
}

/// `F ⊖̄ I` by direct comprehension.
pub fn ominus_bar(alg: &FiniteMv, f: &BitSet, i: &BitSet) -> Result<FilterSet, ArithError> {
    filter_of(alg, f)?;
    ideal_of(alg, i)?;
    let mut diffs = BitSet::new(alg.size());
    for a in f.iter() {
        for b in i.iter() {
            diffs.insert(alg.ominus(a, b));
        }
    }
    Ok(FilterSet(alg.lattice().order().up_closure(&diffs)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AdjunctionMode {
    Exhaustive,
    Sampled { seed: u64, count: usize },
}

impl AdjunctionMode {
    pub const EXHAUSTIVE_LIMIT: usize = 12;

    /// Exhaustive up to 12 elements, seeded sampling above.
    pub fn auto(size: usize, seed: u64) -> Self {
        if size <= Self::EXHAUSTIVE_LIMIT {
            AdjunctionMode::Exhaustive
        } else {
            AdjunctionMode::Sampled { seed, count: 2_000 }
        }
    }
}

/// A triple `(F, I, J)` of generators: `F = ↑f`, `I = ↓i`, `J = ↓j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AdjunctionTriple {
    pub filter: usize,
    pub ideal: usize,
    pub other: usize,
}

/// Checks `F ⊖̄ I ⊆ Jᶜ ⟺ F ⊆ (J ⊕̄ I)ᶜ`. Every filter and ideal of a finite
/// lattice is principal, so triples are indexed by their generators.
/// Returns the number of triples checked.
pub fn check_adjunction(alg: &FiniteMv, mode: AdjunctionMode) -> Result<usize, AdjunctionTriple> {
    let lat = alg.lattice();
    let n = alg.size();
    let check = |t: AdjunctionTriple| {
        let f = lat.principal_filter(t.filter).0;
        let i = lat.principal_ideal(t.ideal).0;
        let j = lat.principal_ideal(t.other).0;
        let lhs = ominus_bar(alg, &f, &i).expect("principal filter").0.is_disjoint(&j);
        let rhs = f.is_disjoint(&oplus_bar(alg, &j, &i).expect("principal ideal").0);
        lhs == rhs
    };
    match mode {
        AdjunctionMode::Exhaustive => {
            for filter in 0..n {
                for ideal in 0..n {
                    for other in 0..n {
                        let t = AdjunctionTriple { filter, ideal, other };
                        if !check(t) {
                            return Err(t);
                        }
                    }
                }
            }
            Ok(n * n * n)
        }
        AdjunctionMode::Sampled { seed, count } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..count {
                let t = AdjunctionTriple {
                    filter: rng.gen_range(0..n),
                    ideal: rng.gen_range(0..n),
                    other: rng.gen_range(0..n),
                };
                if !check(t) {
                    return Err(t);
                }
            }
            Ok(count)
        }
    }
}

/// `⊕̄` on Chang's lattice ideals. Each arm is the supremum of `a ⊕ b` over
/// the two families.
pub fn chang_oplus_bar(i: ChangIdeal, j: ChangIdeal) -> ChangIdeal {
    use ChangIdeal::*;
    match (i, j) {
        (Zero, x) | (x, Zero) => x,
        // fin(a) ⊕ fin(b) = fin(a + b)
        (Truncation(a), Truncation(b)) => Truncation(a + b),
        // sums of infinitesimals stay infinitesimal and reach every fin(n)
        (Truncation(_), Radical) | (Radical, Truncation(_)) | (Radical, Radical) => Radical,
        // fin(a) ⊕ cofin(m) = cofin(m − a), or 1 once a >= m
        (Truncation(a), CoFinite(m)) | (CoFinite(m), Truncation(a)) => {
            if a >= m {
                CoFinite(0)
            } else {
                CoFinite(m - a)
            }
        }
        // fin(m) ⊕ cofin(m) = 1
        (Radical, CoFinite(_)) | (CoFinite(_), Radical) => CoFinite(0),
        // cofin ⊕ cofin = 1
        (CoFinite(_), CoFinite(_)) => CoFinite(0),
    }
}

/// `⊖̄` of a Chang filter by a Chang ideal; each arm is the infimum of
/// `a ⊖ b` over the two families.
pub fn chang_ominus_bar(f: ChangFilter, i: ChangIdeal) -> ChangFilter {
    use ChangElem::{Cofin, Fin};
    use ChangFilter::{CoRadical, Principal};
    use ChangIdeal::*;
    match (f, i) {
        (f, Zero) => f,
        // fin(p) ⊖ fin(q) = fin(p − q) truncated at 0
        (Principal(Fin(p)), Truncation(q)) => Principal(Fin(p.saturating_sub(q))),
        // b can reach above a
        (Principal(Fin(_)), Radical | CoFinite(_)) => ChangFilter::whole(),
        // cofin(p) ⊖ fin(q) = cofin(p + q): the co-infinitesimals, never below
        (CoRadical, Truncation(_) | Radical) => CoRadical,
        // b = cofin(m') with m' >= p gives 0
        (CoRadical, CoFinite(_)) => ChangFilter::whole(),
        (Principal(Cofin(p)), Truncation(q)) => Principal(Cofin(p + q)),
        (Principal(Cofin(_)), Radical) => CoRadical,
        // cofin(p) ⊖ cofin(m) = fin(m − p) when m > p, else 0
        (Principal(Cofin(p)), CoFinite(m)) => {
            if m > p {
                Principal(Fin(m - p))
            } else {
                ChangFilter::whole()
            }
        }
    }
}
