//! MV-algebras: the operation trait with its derived operations, the
//! axiom scanner, finite table-backed algebras, and Chang's algebra.

mod chang;
mod finite;
mod spec;

use std::fmt::{self, Debug};

use serde::Serialize;
use thiserror::Error;

pub use chang::{Chang, ChangElem, ChangFilter, ChangIdeal};
pub use finite::{FiniteMv, Quotient, DEFAULT_CARRIER_CAP};
pub use spec::{Algebra, AlgebraSpec};

/// The primitive signature `(⊕, ¬, 0)`; everything else is derived.
pub trait MvOps {
    type Elem: Copy + Eq + Ord + Debug;

    fn zero(&self) -> Self::Elem;
    fn neg(&self, a: Self::Elem) -> Self::Elem;
    fn oplus(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;

    fn one(&self) -> Self::Elem {
        self.neg(self.zero())
    }

    /// `a ⊖ b = ¬(¬a ⊕ b)`.
    fn ominus(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem {
        self.neg(self.oplus(self.neg(a), b))
    }

    /// `a ∨ b = (a ⊖ b) ⊕ b`.
    fn join(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem {
        self.oplus(self.ominus(a, b), b)
    }

    fn meet(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem {
        self.neg(self.join(self.neg(a), self.neg(b)))
    }

    /// `a ⊙ b = ¬(¬a ⊕ ¬b)`.
    fn odot(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem {
        self.neg(self.oplus(self.neg(a), self.neg(b)))
    }

    /// `m·a = a ⊕ ⋯ ⊕ a` (`m` times), with `0·a = 0`. Stops as soon as the
    /// partial sums stabilize.
    fn nmul(&self, m: u64, a: Self::Elem) -> Self::Elem {
        let mut acc = self.zero();
        for _ in 0..m {
            let next = self.oplus(acc, a);
            if next == acc {
                break;
            }
            acc = next;
        }
        acc
    }

    fn leq(&self, a: Self::Elem, b: Self::Elem) -> bool {
        self.oplus(self.neg(a), b) == self.one()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Law {
    Involution,
    Commutativity,
    Associativity,
    Neutral,
    Characteristic,
    Absorbing,
    OrderReflexive,
    OrderAntisymmetric,
    OrderTransitive,
    JoinIsLub,
    MeetIsGlb,
    Distributivity,
}

impl Law {
    pub fn equation(self) -> &'static str {
        match self {
            Law::Involution => "¬¬x = x",
            Law::Commutativity => "x ⊕ y = y ⊕ x",
            Law::Associativity => "x ⊕ (y ⊕ z) = (x ⊕ y) ⊕ z",
            Law::Neutral => "x ⊕ 0 = x",
            Law::Characteristic => "¬(¬x ⊕ y) ⊕ y = ¬(¬y ⊕ x) ⊕ x",
            Law::Absorbing => "x ⊕ 1 = 1",
            Law::OrderReflexive => "x ≤ x",
            Law::OrderAntisymmetric => "x ≤ y ≤ x ⇒ x = y",
            Law::OrderTransitive => "x ≤ y ≤ z ⇒ x ≤ z",
            Law::JoinIsLub => "x ∨ y is the least upper bound",
            Law::MeetIsGlb => "x ∧ y is the greatest lower bound",
            Law::Distributivity => "x ∧ (y ∨ z) = (x ∧ y) ∨ (x ∧ z)",
        }
    }
}

/// A violated law with the lexicographically least witnessing tuple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation<E> {
    pub law: Law,
    pub witness: Vec<E>,
}

impl<E: Debug> fmt::Display for Violation<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails at {:?}", self.law.equation(), self.witness)
    }
}

pub type AxiomViolation = Violation<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MvError {
    #[error("empty carrier")]
    Empty,
    #[error("one-element algebras are excluded")]
    Trivial,
    #[error("Łukasiewicz chain needs n >= 1")]
    ZeroChain,
    #[error("table shape mismatch: expected {expected} entries")]
    Shape { expected: usize },
    #[error("table entry {value} outside the carrier 0..{size}")]
    Range { value: usize, size: usize },
    #[error("no neutral element for ⊕")]
    NoNeutral,
    #[error("axiom violated: {0}")]
    Axiom(AxiomViolation),
    #[error("carrier size {size} exceeds the cap {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("subset is not an MV-ideal")]
    NotMvIdeal,
    #[error("operation needs a finite algebra")]
    NotFinite,
    #[error("product needs at least one factor")]
    EmptyProduct,
}

/// Scans every law over `elems` in a fixed order: involution, the monoid
/// laws, the characteristic law, `x ⊕ 1 = 1`, then the derived lattice.
/// Within a law tuples are visited lexicographically by position in `elems`.
pub fn check_laws<M: MvOps>(alg: &M, elems: &[M::Elem]) -> Result<(), Violation<M::Elem>> {
    let fail = |law, witness: Vec<M::Elem>| Err(Violation { law, witness });
    let zero = alg.zero();
    let one = alg.one();
    for &x in elems {
        if alg.neg(alg.neg(x)) != x {
            return fail(Law::Involution, vec![x]);
        }
    }
    for &x in elems {
        for &y in elems {
            if alg.oplus(x, y) != alg.oplus(y, x) {
                return fail(Law::Commutativity, vec![x, y]);
            }
        }
    }
    for &x in elems {
        for &y in elems {
            let xy = alg.oplus(x, y);
            for &z in elems {
                if alg.oplus(x, alg.oplus(y, z)) != alg.oplus(xy, z) {
                    return fail(Law::Associativity, vec![x, y, z]);
                }
            }
        }
    }
    for &x in elems {
        if alg.oplus(x, zero) != x {
            return fail(Law::Neutral, vec![x]);
        }
    }
    for &x in elems {
        for &y in elems {
            let lhs = alg.oplus(alg.neg(alg.oplus(alg.neg(x), y)), y);
            let rhs = alg.oplus(alg.neg(alg.oplus(alg.neg(y), x)), x);
            if lhs != rhs {
                return fail(Law::Characteristic, vec![x, y]);
            }
        }
    }
    for &x in elems {
        if alg.oplus(x, one) != one {
            return fail(Law::Absorbing, vec![x]);
        }
    }
    for &x in elems {
        if !alg.leq(x, x) {
            return fail(Law::OrderReflexive, vec![x]);
        }
    }
    for &x in elems {
        for &y in elems {
            if x != y && alg.leq(x, y) && alg.leq(y, x) {
                return fail(Law::OrderAntisymmetric, vec![x, y]);
            }
        }
    }
    for &x in elems {
        for &y in elems.iter().filter(|&&y| alg.leq(x, y)) {
            for &z in elems {
                if alg.leq(y, z) && !alg.leq(x, z) {
                    return fail(Law::OrderTransitive, vec![x, y, z]);
                }
            }
        }
    }
    for &x in elems {
        for &y in elems {
            let j = alg.join(x, y);
            let m = alg.meet(x, y);
            if !alg.leq(x, j) || !alg.leq(y, j) {
                return fail(Law::JoinIsLub, vec![x, y]);
            }
            if !alg.leq(m, x) || !alg.leq(m, y) {
                return fail(Law::MeetIsGlb, vec![x, y]);
            }
            for &z in elems {
                if alg.leq(x, z) && alg.leq(y, z) && !alg.leq(j, z) {
                    return fail(Law::JoinIsLub, vec![x, y, z]);
                }
                if alg.leq(z, x) && alg.leq(z, y) && !alg.leq(z, m) {
                    return fail(Law::MeetIsGlb, vec![x, y, z]);
                }
            }
        }
    }
    for &x in elems {
        for &y in elems {
            for &z in elems {
                let lhs = alg.meet(x, alg.join(y, z));
                let rhs = alg.join(alg.meet(x, y), alg.meet(x, z));
                if lhs != rhs {
                    return fail(Law::Distributivity, vec![x, y, z]);
                }
            }
        }
    }
    Ok(())
}
