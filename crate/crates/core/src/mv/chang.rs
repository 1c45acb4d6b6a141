//! Chang's algebra in its integer lexicographic model: infinitesimals
//! `n·c` and co-infinitesimals `1 − n·c`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use super::{check_laws, MvOps, Violation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChangElem {
    /// `n·c`.
    Fin(u64),
    /// `1 − n·c`.
    Cofin(u64),
}

use ChangElem::{Cofin, Fin};

impl Ord for ChangElem {
    fn cmp(&self, other: &Self) -> Ordering {
        match (*self, *other) {
            (Fin(a), Fin(b)) => a.cmp(&b),
            (Cofin(a), Cofin(b)) => b.cmp(&a),
            (Fin(_), Cofin(_)) => Ordering::Less,
            (Cofin(_), Fin(_)) => Ordering::Greater,
        }
    }
}

impl PartialOrd for ChangElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ChangElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fin(n) => write!(f, "fin({n})"),
            Cofin(n) => write!(f, "cofin({n})"),
        }
    }
}

impl Serialize for ChangElem {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Chang's algebra. Operations are closed-form case analyses on the tags.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Chang;

impl MvOps for Chang {
    type Elem = ChangElem;

    fn zero(&self) -> ChangElem {
        Fin(0)
    }

    fn neg(&self, a: ChangElem) -> ChangElem {
        match a {
            Fin(n) => Cofin(n),
            Cofin(n) => Fin(n),
        }
    }

    fn oplus(&self, a: ChangElem, b: ChangElem) -> ChangElem {
        match (a, b) {
            (Fin(p), Fin(q)) => Fin(p.saturating_add(q)),
            (Fin(p), Cofin(q)) | (Cofin(q), Fin(p)) => {
                if p >= q {
                    Cofin(0)
                } else {
                    Cofin(q - p)
                }
            }
            (Cofin(_), Cofin(_)) => Cofin(0),
        }
    }
}

impl Chang {
    /// `fin(0..=n)` followed by `cofin(n..=0)`, in increasing order.
    pub fn bounded_elements(n: u64) -> Vec<ChangElem> {
        (0..=n).map(Fin).chain((0..=n).rev().map(Cofin)).collect()
    }

    /// Axiom scan restricted to indices `<= n`. Operations are evaluated
    /// symbolically, so results may leave the window.
    pub fn check_axioms_bounded(n: u64) -> Result<(), Violation<ChangElem>> {
        check_laws(&Chang, &Self::bounded_elements(n))
    }

    /// The MV-ideals: zero, the radical, and the whole algebra.
    pub fn mv_ideals() -> Vec<ChangIdeal> {
        vec![ChangIdeal::Zero, ChangIdeal::Radical, ChangIdeal::CoFinite(0)]
    }

    /// The MV-spectrum: `{0}` and the radical.
    pub fn prime_mv_ideals() -> Vec<ChangIdeal> {
        vec![ChangIdeal::Zero, ChangIdeal::Radical]
    }

    pub fn maximal_mv_ideals() -> Vec<ChangIdeal> {
        vec![ChangIdeal::Radical]
    }

    /// Least MV-ideal containing `elems`.
    pub fn ideal_generated(elems: &[ChangElem]) -> ChangIdeal {
        if elems.iter().any(|e| matches!(e, Cofin(_))) {
            // cofin(p) ⊕ cofin(p) = 1
            ChangIdeal::CoFinite(0)
        } else if elems.iter().any(|&e| e != Fin(0)) {
            ChangIdeal::Radical
        } else {
            ChangIdeal::Zero
        }
    }
}

/// Lattice ideals of Chang's algebra. Since the carrier is a chain these are
/// exactly the downsets containing 0: the four families below.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChangIdeal {
    Zero,
    /// `↓fin(n)`, `n >= 1`.
    Truncation(u64),
    /// All infinitesimals.
    Radical,
    /// `↓cofin(m)`; `CoFinite(0)` is the whole algebra.
    CoFinite(u64),
}

impl ChangIdeal {
    pub fn principal(e: ChangElem) -> Self {
        match e {
            Fin(0) => ChangIdeal::Zero,
            Fin(n) => ChangIdeal::Truncation(n),
            Cofin(m) => ChangIdeal::CoFinite(m),
        }
    }

    pub fn contains(&self, e: ChangElem) -> bool {
        match (*self, e) {
            (ChangIdeal::Zero, e) => e == Fin(0),
            (ChangIdeal::Truncation(n), Fin(k)) => k <= n,
            (ChangIdeal::Truncation(_), Cofin(_)) => false,
            (ChangIdeal::Radical, e) => matches!(e, Fin(_)),
            (ChangIdeal::CoFinite(_), Fin(_)) => true,
            (ChangIdeal::CoFinite(m), Cofin(k)) => k >= m,
        }
    }

    pub fn is_proper(&self) -> bool {
        *self != ChangIdeal::CoFinite(0)
    }

    pub fn is_mv_ideal(&self) -> bool {
        matches!(self, ChangIdeal::Zero | ChangIdeal::Radical | ChangIdeal::CoFinite(0))
    }

    /// Every proper lattice ideal of a chain is prime.
    pub fn is_prime(&self) -> bool {
        self.is_proper()
    }

    pub fn is_prime_mv_ideal(&self) -> bool {
        matches!(self, ChangIdeal::Zero | ChangIdeal::Radical)
    }

    pub fn is_maximal_mv_ideal(&self) -> bool {
        *self == ChangIdeal::Radical
    }

    /// The complementary filter of a proper ideal.
    pub fn complement(&self) -> Option<ChangFilter> {
        match *self {
            ChangIdeal::Zero => Some(ChangFilter::Principal(Fin(1))),
            ChangIdeal::Truncation(n) => Some(ChangFilter::Principal(Fin(n + 1))),
            ChangIdeal::Radical => Some(ChangFilter::CoRadical),
            ChangIdeal::CoFinite(0) => None,
            ChangIdeal::CoFinite(m) => Some(ChangFilter::Principal(Cofin(m - 1))),
        }
    }

    fn rank(&self) -> (u8, i128) {
        match *self {
            ChangIdeal::Zero => (0, 0),
            ChangIdeal::Truncation(n) => (0, n as i128),
            ChangIdeal::Radical => (1, 0),
            ChangIdeal::CoFinite(m) => (2, -(m as i128)),
        }
    }
}

/// Inclusion order; ideals of a chain form a chain.
impl Ord for ChangIdeal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank().cmp(&other.rank())
    }
}

impl PartialOrd for ChangIdeal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ChangIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChangIdeal::Zero => write!(f, "zero"),
            ChangIdeal::Truncation(n) => write!(f, "truncation({n})"),
            ChangIdeal::Radical => write!(f, "radical"),
            ChangIdeal::CoFinite(m) => write!(f, "cofinite({m})"),
        }
    }
}

impl Serialize for ChangIdeal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Lattice filters of Chang's algebra: principal upsets, and the
/// co-radical (all co-infinitesimals), which has no least element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChangFilter {
    Principal(ChangElem),
    CoRadical,
}

impl ChangFilter {
    pub fn contains(&self, e: ChangElem) -> bool {
        match self {
            ChangFilter::Principal(p) => e >= *p,
            ChangFilter::CoRadical => matches!(e, Cofin(_)),
        }
    }

    pub fn whole() -> Self {
        ChangFilter::Principal(Fin(0))
    }

    /// `¬F = {¬a : a ∈ F}`, as an ideal.
    pub fn negate(&self) -> ChangIdeal {
        match *self {
            ChangFilter::Principal(p) => ChangIdeal::principal(Chang.neg(p)),
            ChangFilter::CoRadical => ChangIdeal::Radical,
        }
    }
}

impl fmt::Display for ChangFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChangFilter::Principal(p) => write!(f, "up({p})"),
            ChangFilter::CoRadical => write!(f, "coradical"),
        }
    }
}

impl Serialize for ChangFilter {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_arithmetic() {
        assert_eq!(Chang.ominus(Cofin(2), Fin(3)), Cofin(5));
        assert_eq!(Chang.oplus(Fin(2), Fin(3)), Fin(5));
        assert_eq!(Chang.oplus(Fin(3), Cofin(2)), Cofin(0));
        assert_eq!(Chang.oplus(Fin(1), Cofin(3)), Cofin(2));
        assert_eq!(Chang.ominus(Cofin(1), Cofin(4)), Fin(3));
        assert_eq!(Chang.ominus(Fin(5), Fin(7)), Fin(0));
        assert!(Fin(1_000) < Cofin(1_000));
        assert!(Cofin(3) < Cofin(2));
    }

    #[test]
    fn join_agrees_with_the_chain_order() {
        let elems = Chang::bounded_elements(6);
        for &a in &elems {
            for &b in &elems {
                assert_eq!(Chang.join(a, b), a.max(b));
                assert_eq!(Chang.meet(a, b), a.min(b));
                // leq via the default formula agrees with the tag order
                assert_eq!(Chang.oplus(Chang.neg(a), b) == Cofin(0), a <= b);
            }
        }
    }

    #[test]
    fn bounded_axiom_scan() {
        for n in [0, 1, 4, 12, 32] {
            assert_eq!(Chang::check_axioms_bounded(n), Ok(()));
        }
    }

    /// Ideal families with parameters `<= n`, every member listed once.
    fn families(n: u64) -> Vec<ChangIdeal> {
        let mut out = vec![ChangIdeal::Zero, ChangIdeal::Radical];
        out.extend((1..=n).map(ChangIdeal::Truncation));
        out.extend((0..=n).map(ChangIdeal::CoFinite));
        out.sort();
        out
    }

    #[test]
    fn family_taxonomy_is_complete_up_to_bound() {
        let n = 32;
        let window = Chang::bounded_elements(n);
        let half: Vec<ChangElem> = window
            .iter()
            .copied()
            .filter(|e| matches!(e, Fin(k) | Cofin(k) if *k <= n / 2))
            .collect();
        for ideal in families(n / 2) {
            // downward closed within the window
            for &a in &window {
                for &b in &window {
                    if b <= a && ideal.contains(a) {
                        assert!(ideal.contains(b));
                    }
                }
            }
            // bounded ⊕-closure decides the MV-ideal families
            let closed = half.iter().all(|&a| {
                half.iter()
                    .all(|&b| !(ideal.contains(a) && ideal.contains(b)) || ideal.contains(Chang.oplus(a, b)))
            });
            assert_eq!(closed, ideal.is_mv_ideal(), "{ideal}");
        }
        // every downset of the window is the trace of some family member
        for cut in 1..=window.len() {
            let prefix = &window[..cut];
            let hit = families(n)
                .into_iter()
                .any(|i| window.iter().all(|&e| i.contains(e) == prefix.contains(&e)));
            assert!(hit, "prefix of length {cut}");
        }
    }

    #[test]
    fn ideal_generation_and_complements() {
        assert_eq!(Chang::ideal_generated(&[]), ChangIdeal::Zero);
        assert_eq!(Chang::ideal_generated(&[Fin(3)]), ChangIdeal::Radical);
        assert_eq!(Chang::ideal_generated(&[Fin(3), Cofin(9)]), ChangIdeal::CoFinite(0));
        for ideal in families(8) {
            if let Some(f) = ideal.complement() {
                for e in Chang::bounded_elements(10) {
                    assert_ne!(ideal.contains(e), f.contains(e), "{ideal} at {e}");
                }
            }
        }
        assert_eq!(Chang::prime_mv_ideals().len(), 2);
        assert_eq!(Chang::maximal_mv_ideals(), vec![ChangIdeal::Radical]);
    }
}
