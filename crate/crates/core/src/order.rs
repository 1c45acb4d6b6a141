//! Finite partial orders.
//!
//! A [`FinitePoset`] on `0..size` keeps both the up-row and the down-row of
//! every element as bit sets, so closure operators and downset tests are
//! word-parallel.

use std::fmt::Write as _;

use thiserror::Error;

use crate::bitset::BitSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("element {elem} is outside the carrier 0..{size}")]
    OutOfRange { elem: usize, size: usize },
    #[error("relation is not reflexive at {0}")]
    NotReflexive(usize),
    #[error("relation is not antisymmetric: {a} <= {b} and {b} <= {a}")]
    NotAntisymmetric { a: usize, b: usize },
    #[error("relation is not transitive: {a} <= {b} <= {c} but not {a} <= {c}")]
    NotTransitive { a: usize, b: usize, c: usize },
    #[error("relation matrix has {got} rows, expected {expected}")]
    Shape { expected: usize, got: usize },
}

#[derive(Clone, PartialEq, Eq)]
pub struct FinitePoset {
    size: usize,
    up: Vec<BitSet>,
    down: Vec<BitSet>,
}

impl std::fmt::Debug for FinitePoset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FinitePoset")
            .field("size", &self.size)
            .field("covers", &self.covers())
            .finish()
    }
}

impl FinitePoset {
    /// Builds a poset from up-rows (`up[a]` is the set of `b` with `a <= b`),
    /// checking all three order axioms.
    pub fn from_up_rows(up: Vec<BitSet>) -> Result<Self, OrderError> {
        let size = up.len();
        for (a, row) in up.iter().enumerate() {
            if row.domain() != size {
                return Err(OrderError::Shape {
                    expected: size,
                    got: row.domain(),
                });
            }
            if !row.contains(a) {
                return Err(OrderError::NotReflexive(a));
            }
        }
        for a in 0..size {
            for b in up[a].iter() {
                if b != a && up[b].contains(a) {
                    return Err(OrderError::NotAntisymmetric { a: a.min(b), b: a.max(b) });
                }
                if !up[b].is_subset(&up[a]) {
                    let c = up[b].difference(&up[a]).first().unwrap();
                    return Err(OrderError::NotTransitive { a, b, c });
                }
            }
        }
        Ok(Self::from_up_rows_unchecked(up))
    }

    pub(crate) fn from_up_rows_unchecked(up: Vec<BitSet>) -> Self {
        let size = up.len();
        let mut down = vec![BitSet::new(size); size];
        for (a, row) in up.iter().enumerate() {
            for b in row {
                down[b].insert(a);
            }
        }
        FinitePoset { size, up, down }
    }

    /// The reflexive-transitive closure of `pairs` (each `(a, b)` read as
    /// `a <= b`); fails if the closure is not antisymmetric.
    pub fn from_pairs(size: usize, pairs: &[(usize, usize)]) -> Result<Self, OrderError> {
        let mut up: Vec<BitSet> = (0..size).map(|a| BitSet::singleton(size, a)).collect();
        for &(a, b) in pairs {
            for e in [a, b] {
                if e >= size {
                    return Err(OrderError::OutOfRange { elem: e, size });
                }
            }
            up[a].insert(b);
        }
        // Warshall on rows.
        for k in 0..size {
            let row_k = up[k].clone();
            for row in up.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        Self::from_up_rows(up)
    }

    pub fn antichain(size: usize) -> Self {
        Self::from_up_rows_unchecked((0..size).map(|a| BitSet::singleton(size, a)).collect())
    }

    pub fn chain(size: usize) -> Self {
        Self::from_up_rows_unchecked(
            (0..size)
                .map(|a| BitSet::from_elems(size, a..size))
                .collect(),
        )
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    pub fn up_set(&self, a: usize) -> &BitSet {
        &self.up[a]
    }

    pub fn down_set(&self, a: usize) -> &BitSet {
        &self.down[a]
    }

    pub fn is_downset(&self, s: &BitSet) -> bool {
        s.iter().all(|a| self.down[a].is_subset(s))
    }

    pub fn is_upset(&self, s: &BitSet) -> bool {
        s.iter().all(|a| self.up[a].is_subset(s))
    }

    pub fn down_closure(&self, s: &BitSet) -> BitSet {
        let mut out = BitSet::new(self.size);
        for a in s {
            out.union_with(&self.down[a]);
        }
        out
    }

    pub fn up_closure(&self, s: &BitSet) -> BitSet {
        let mut out = BitSet::new(self.size);
        for a in s {
            out.union_with(&self.up[a]);
        }
        out
    }

    pub fn is_chain(&self, s: &BitSet) -> bool {
        let elems = s.to_vec();
        elems.iter().enumerate().all(|(i, &a)| {
            elems[i + 1..]
                .iter()
                .all(|&b| self.leq(a, b) || self.leq(b, a))
        })
    }

    pub fn maximal_elements(&self, s: &BitSet) -> BitSet {
        BitSet::from_elems(
            self.size,
            s.iter().filter(|&a| self.up[a].intersection(s).len() == 1),
        )
    }

    /// Covering pairs `(a, b)`: `a < b` with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.size {
            for b in self.up[a].iter().filter(|&b| b != a) {
                let between = self.up[a].intersection(&self.down[b]);
                if between.len() == 2 {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// A linear extension: every element appears after everything below it.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.size).collect();
        order.sort_by_key(|&a| (self.down[a].len(), a));
        order
    }

    /// Connected components of the comparability graph, each as a set,
    /// listed by least member.
    pub fn components(&self) -> Vec<BitSet> {
        let mut seen = BitSet::new(self.size);
        let mut out = Vec::new();
        for start in 0..self.size {
            if seen.contains(start) {
                continue;
            }
            let mut comp = BitSet::singleton(self.size, start);
            loop {
                let grown = self.up_closure(&comp).union(&self.down_closure(&comp));
                if grown == comp {
                    break;
                }
                comp = grown;
            }
            seen.union_with(&comp);
            out.push(comp);
        }
        out
    }

    /// Visits every downset exactly once. Stops early if `visit` returns
    /// `false`; the return value reports whether the walk completed.
    pub fn for_each_downset<F: FnMut(&BitSet) -> bool>(&self, mut visit: F) -> bool {
        let ext = self.linear_extension();
        let mut current = BitSet::new(self.size);
        self.downset_rec(&ext, 0, &mut current, &mut visit)
    }

    fn downset_rec<F: FnMut(&BitSet) -> bool>(
        &self,
        ext: &[usize],
        pos: usize,
        current: &mut BitSet,
        visit: &mut F,
    ) -> bool {
        if pos == ext.len() {
            return visit(current);
        }
        let a = ext[pos];
        if !self.downset_rec(ext, pos + 1, current, visit) {
            return false;
        }
        let mut below = self.down[a].clone();
        below.remove(a);
        if below.is_subset(current) {
            current.insert(a);
            let done = self.downset_rec(ext, pos + 1, current, visit);
            current.remove(a);
            if !done {
                return false;
            }
        }
        true
    }

    /// All downsets in subset-lexicographic order.
    pub fn downsets(&self) -> Vec<BitSet> {
        let mut out = Vec::new();
        self.for_each_downset(|d| {
            out.push(d.clone());
            true
        });
        out.sort();
        out
    }

    /// DOT rendering of the covering relation, edges pointing upward.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph {name} {{");
        let _ = writeln!(s, "  rankdir=BT;");
        for a in 0..self.size {
            let _ = writeln!(s, "  {a} [label=\"{a}\"];");
        }
        for (a, b) in self.covers() {
            let _ = writeln!(s, "  {a} -> {b};");
        }
        s.push_str("}\n");
        s
    }
}
