//! Finite topological spaces through their specialization preorders.
//!
//! Every finite space here carries the topology whose opens are the
//! downsets of a preorder (the spectral topology of a prime spectrum is of
//! this kind). Continuity is monotonicity, a homeomorphism is a bijection
//! that preserves and reflects the preorder, subspaces restrict the
//! preorder, and quotients take the transitive closure of the image.

use crate::bitset::BitSet;
use crate::order::FinitePoset;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSpace {
    /// `up[a]`: every `b` with `a ≤ b` (reflexive and transitive).
    up: Vec<BitSet>,
}

impl FiniteSpace {
    pub fn from_poset(order: &FinitePoset) -> Self {
        FiniteSpace {
            up: (0..order.size()).map(|a| order.up_set(a).clone()).collect(),
        }
    }

    /// Discrete space on `n` points.
    pub fn discrete(n: usize) -> Self {
        FiniteSpace {
            up: (0..n).map(|a| BitSet::singleton(n, a)).collect(),
        }
    }

    /// Reflexive-transitive closure of arbitrary rows.
    pub fn from_relation(mut up: Vec<BitSet>) -> Self {
        let n = up.len();
        for (a, row) in up.iter_mut().enumerate() {
            row.insert(a);
        }
        for k in 0..n {
            let row_k = up[k].clone();
            for row in up.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        FiniteSpace { up }
    }

    pub fn size(&self) -> usize {
        self.up.len()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    pub fn rows(&self) -> &[BitSet] {
        &self.up
    }

    pub fn is_open(&self, s: &BitSet) -> bool {
        (0..self.size()).all(|a| !s.contains(a) || (0..self.size()).all(|b| !self.leq(b, a) || s.contains(b)))
    }

    pub fn is_closed(&self, s: &BitSet) -> bool {
        s.iter().all(|a| self.up[a].is_subset(s))
    }

    /// The subspace on `points`, renumbered in increasing order.
    pub fn subspace(&self, points: &BitSet) -> FiniteSpace {
        let idx = points.to_vec();
        let n = idx.len();
        FiniteSpace {
            up: idx
                .iter()
                .map(|&a| BitSet::from_elems(n, (0..n).filter(|&j| self.leq(a, idx[j]))))
                .collect(),
        }
    }

    /// Quotient by a partition, classes numbered as given.
    pub fn quotient(&self, classes: &[BitSet]) -> FiniteSpace {
        let mut class_of = vec![0; self.size()];
        for (c, class) in classes.iter().enumerate() {
            for x in class.iter() {
                class_of[x] = c;
            }
        }
        let m = classes.len();
        let rows = classes
            .iter()
            .map(|class| {
                let mut row = BitSet::new(m);
                for x in class.iter() {
                    for y in self.up[x].iter() {
                        row.insert(class_of[y]);
                    }
                }
                row
            })
            .collect();
        Self::from_relation(rows)
    }

    /// Preimages of opens are open.
    pub fn is_continuous(&self, target: &FiniteSpace, f: &[usize]) -> bool {
        (0..self.size()).all(|a| self.up[a].iter().all(|b| target.leq(f[a], f[b])))
    }

    pub fn is_homeomorphism(&self, target: &FiniteSpace, f: &[usize]) -> bool {
        if f.len() != self.size() || target.size() != self.size() {
            return false;
        }
        let mut seen = BitSet::new(target.size());
        if !f.iter().all(|&y| y < target.size() && seen.insert(y)) {
            return false;
        }
        (0..self.size()).all(|a| (0..self.size()).all(|b| self.leq(a, b) == target.leq(f[a], f[b])))
    }

    pub fn find_homeomorphism(&self, target: &FiniteSpace, budget: u64) -> IsoSearch {
        find_order_isomorphism(&self.up, &target.up, budget)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoSearch {
    Found(Vec<usize>),
    NotIsomorphic,
    /// The step budget ran out before the search was decided.
    Timeout,
}

/// Backtracking search for a bijection preserving and reflecting two
/// preorders. Elements are matched only against elements with the same
/// profile (down-set size, up-set size, number of lower covers).
pub fn find_order_isomorphism(a: &[BitSet], b: &[BitSet], budget: u64) -> IsoSearch {
    let n = a.len();
    if b.len() != n {
        return IsoSearch::NotIsomorphic;
    }
    let pa = profiles(a);
    let pb = profiles(b);
    let mut sa = pa.clone();
    let mut sb = pb.clone();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return IsoSearch::NotIsomorphic;
    }
    let mut visit: Vec<usize> = (0..n).collect();
    visit.sort_by_key(|&x| (pa[x], x));
    let mut search = Search {
        a,
        b,
        pa: &pa,
        pb: &pb,
        visit: &visit,
        map: vec![usize::MAX; n],
        used: BitSet::new(n),
        budget,
    };
    match search.step(0) {
        Some(true) => IsoSearch::Found(search.map),
        Some(false) => IsoSearch::NotIsomorphic,
        None => IsoSearch::Timeout,
    }
}

type Profile = (usize, usize, usize);

fn profiles(rows: &[BitSet]) -> Vec<Profile> {
    let n = rows.len();
    let down: Vec<BitSet> = (0..n)
        .map(|x| BitSet::from_elems(n, (0..n).filter(|&y| rows[y].contains(x))))
        .collect();
    (0..n)
        .map(|x| {
            let strictly_below = down[x].difference(&rows[x]);
            let covers = strictly_below
                .iter()
                .filter(|&y| rows[y].intersection(&strictly_below).len() == down[y].intersection(&rows[y]).len())
                .count();
            (down[x].len(), rows[x].len(), covers)
        })
        .collect()
}

struct Search<'a> {
    a: &'a [BitSet],
    b: &'a [BitSet],
    pa: &'a [Profile],
    pb: &'a [Profile],
    visit: &'a [usize],
    map: Vec<usize>,
    used: BitSet,
    budget: u64,
}

impl Search<'_> {
    /// `Some(found)` when decided, `None` on timeout.
    fn step(&mut self, depth: usize) -> Option<bool> {
        if depth == self.visit.len() {
            return Some(true);
        }
        let x = self.visit[depth];
        for y in 0..self.b.len() {
            if self.used.contains(y) || self.pb[y] != self.pa[x] {
                continue;
            }
            if self.budget == 0 {
                return None;
            }
            self.budget -= 1;
            let consistent = self.visit[..depth].iter().all(|&w| {
                let fw = self.map[w];
                self.a[w].contains(x) == self.b[fw].contains(y) && self.a[x].contains(w) == self.b[y].contains(fw)
            });
            if !consistent {
                continue;
            }
            self.map[x] = y;
            self.used.insert(y);
            match self.step(depth + 1) {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {}
            }
            self.used.remove(y);
            self.map[x] = usize::MAX;
        }
        Some(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(n: usize, pairs: &[(usize, usize)]) -> FiniteSpace {
        FiniteSpace::from_poset(&FinitePoset::from_pairs(n, pairs).unwrap())
    }

    #[test]
    fn opens_are_downsets() {
        let s = space(3, &[(0, 1), (1, 2)]);
        assert!(s.is_open(&BitSet::from_elems(3, [0, 1])));
        assert!(!s.is_open(&BitSet::from_elems(3, [1])));
        assert!(s.is_closed(&BitSet::from_elems(3, [1, 2])));
    }

    #[test]
    fn quotient_and_subspace() {
        let s = space(4, &[(0, 1), (2, 3)]);
        let q = s.quotient(&[BitSet::from_elems(4, [0, 1]), BitSet::from_elems(4, [2, 3])]);
        assert_eq!(q, FiniteSpace::discrete(2));
        let sub = s.subspace(&BitSet::from_elems(4, [1, 2, 3]));
        assert!(sub.leq(1, 2) && !sub.leq(0, 1));
        // Collapsing the middle of a chain keeps the order.
        let c = space(3, &[(0, 1), (1, 2)]);
        let q = c.quotient(&[BitSet::from_elems(3, [0]), BitSet::from_elems(3, [1, 2])]);
        assert!(q.leq(0, 1) && !q.leq(1, 0));
    }

    #[test]
    fn homeomorphism_search() {
        let v = space(3, &[(0, 2), (1, 2)]);
        let v2 = space(3, &[(2, 0), (1, 0)]);
        let lambda = space(3, &[(0, 1), (0, 2)]);
        match v.find_homeomorphism(&v2, 1_000) {
            IsoSearch::Found(f) => assert!(v.is_homeomorphism(&v2, &f)),
            other => panic!("{other:?}"),
        }
        assert_eq!(v.find_homeomorphism(&lambda, 1_000), IsoSearch::NotIsomorphic);
        let big = FiniteSpace::discrete(9);
        assert_eq!(big.find_homeomorphism(&big, 3), IsoSearch::Timeout);
        assert!(v.is_continuous(&FiniteSpace::discrete(1), &[0, 0, 0]));
        assert!(!v.is_continuous(&FiniteSpace::discrete(2), &[0, 0, 1]));
    }
}
