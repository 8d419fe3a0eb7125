use super::subspace::Rows;
use super::{key_axpy, space_size, Subspace};

/// Streams every `k`-subspace of `F_p^d` once, ascending in the canonical
/// order.
///
/// Basis rows are chosen depth-first, each level trying candidate rows in
/// ascending key order. A candidate for level `j` has its leading entry 1
/// at a column past the previous pivot where all earlier rows vanish, and
/// leaves enough such free columns for the remaining levels.
pub struct SubspaceIter {
    d: u32,
    k: usize,
    p: u64,
    limit: u64,
    rows: Rows,
    state: IterState,
}

enum IterState {
    Fresh,
    Running,
    Done,
}

/// The `k`-subspaces of `F_p^d`, ascending.
pub fn enumerate_subspaces(d: u32, k: u32, p: u64) -> SubspaceIter {
    SubspaceIter {
        d,
        k: k as usize,
        p,
        limit: space_size(d, p),
        rows: Rows::from_elem(0, k as usize),
        state: if k > d { IterState::Done } else { IterState::Fresh },
    }
}

impl SubspaceIter {
    #[inline]
    fn digit(&self, key: u64, pos: u32) -> u64 {
        if self.p == 2 {
            (key >> pos) & 1
        } else {
            (key / self.p.pow(pos)) % self.p
        }
    }

    fn leading(&self, key: u64) -> (u32, u64) {
        if self.p == 2 {
            return (key.trailing_zeros(), 1);
        }
        let mut pos = 0;
        let mut k = key;
        while k % self.p == 0 {
            k /= self.p;
            pos += 1;
        }
        (pos, k % self.p)
    }

    fn valid_at(&self, level: usize, cand: u64) -> bool {
        let (c, lead) = self.leading(cand);
        if lead != 1 {
            return false;
        }
        if level > 0 {
            let prev = self.leading(self.rows[level - 1]).0;
            if c <= prev {
                return false;
            }
        }
        let earlier = &self.rows[..level];
        if earlier.iter().any(|&r| self.digit(r, c) != 0) {
            return false;
        }
        let needed = self.k - level - 1;
        let free = (c + 1..self.d)
            .filter(|&pos| self.digit(cand, pos) == 0 && earlier.iter().all(|&r| self.digit(r, pos) == 0))
            .count();
        free >= needed
    }

    /// Sets `rows[level]` to the least valid candidate `>= start` and fills
    /// deeper levels with their least candidates.
    fn settle(&mut self, level: usize, start: u64) -> bool {
        let mut cand = start;
        loop {
            if cand >= self.limit {
                return false;
            }
            if self.valid_at(level, cand) {
                break;
            }
            cand += 1;
        }
        self.rows[level] = cand;
        for deeper in level + 1..self.k {
            let mut c = 1;
            while !self.valid_at(deeper, c) {
                c += 1;
                debug_assert!(c < self.limit, "feasibility check guarantees a candidate");
            }
            self.rows[deeper] = c;
        }
        true
    }

    fn current(&self) -> Subspace {
        Subspace::from_canonical(self.rows.clone(), self.d, self.p)
    }
}

impl Iterator for SubspaceIter {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        match self.state {
            IterState::Done => None,
            IterState::Fresh => {
                if self.k == 0 {
                    self.state = IterState::Done;
                    return Some(self.current());
                }
                if self.settle(0, 1) {
                    self.state = IterState::Running;
                    Some(self.current())
                } else {
                    self.state = IterState::Done;
                    None
                }
            }
            IterState::Running => {
                let mut level = self.k;
                while level > 0 {
                    level -= 1;
                    let start = self.rows[level] + 1;
                    if self.settle(level, start) {
                        return Some(self.current());
                    }
                }
                self.state = IterState::Done;
                None
            }
        }
    }
}

/// Every `t`-subspace of `s`, as subspaces of the ambient space.
pub fn subspaces_of(s: &Subspace, t: u32) -> impl Iterator<Item = Subspace> + '_ {
    let (d, p) = (s.ambient_dim(), s.modulus());
    let basis = s.keys();
    enumerate_subspaces(s.dim(), t, p).map(move |coords| {
        let rows: Vec<u64> = coords
            .keys()
            .iter()
            .map(|&c| {
                if p == 2 {
                    let mut v = 0;
                    let mut bits = c;
                    while bits != 0 {
                        v ^= basis[bits.trailing_zeros() as usize];
                        bits &= bits - 1;
                    }
                    v
                } else {
                    let mut v = 0;
                    let mut c = c;
                    for &b in basis {
                        v = key_axpy(v, (c % p) as u8, b, d, p);
                        c /= p;
                    }
                    v
                }
            })
            .collect();
        Subspace::from_keys(&rows, d, p)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gflinalg::{contains, lex_compare, Mat};
    use crate::qarith::gaussian_binomial;
    use num_bigint::BigUint;
    use std::cmp::Ordering;
    use std::collections::HashSet;

    fn count(d: u32, k: u32, p: u64) -> usize {
        enumerate_subspaces(d, k, p).count()
    }

    #[test]
    fn counts_match_gaussian() {
        for p in [2u64, 3] {
            let max_d = if p == 2 { 7 } else { 5 };
            for d in 0..=max_d {
                for k in 0..=d {
                    assert_eq!(
                        BigUint::from(count(d, k, p)),
                        gaussian_binomial(d, k, p),
                        "d={d} k={k} p={p}"
                    );
                }
            }
        }
        assert_eq!(count(6, 3, 2), 1395);
        assert_eq!(count(7, 3, 2), 11811);
        assert_eq!(count(3, 4, 2), 0);
    }

    #[test]
    fn stream_is_strictly_ascending_and_canonical() {
        for (d, k, p) in [(4u32, 2u32, 2u64), (6, 3, 2), (4, 2, 3), (5, 3, 3)] {
            let all: Vec<Subspace> = enumerate_subspaces(d, k, p).collect();
            for w in all.windows(2) {
                assert_eq!(lex_compare(&w[0], &w[1]).unwrap(), Ordering::Less);
            }
            for s in &all {
                assert_eq!(&Subspace::from_keys(s.keys(), d, p), s);
                assert_eq!(s.dim(), k);
            }
        }
    }

    #[test]
    fn full_dimension_and_zero() {
        let v: Vec<_> = enumerate_subspaces(5, 5, 2).collect();
        assert_eq!(v, vec![Subspace::full(5, 2)]);
        let z: Vec<_> = enumerate_subspaces(5, 0, 3).collect();
        assert_eq!(z, vec![Subspace::zero(5, 3)]);
    }

    #[test]
    fn subspaces_of_five_space() {
        let rows: Vec<Vec<i64>> = vec![
            vec![1, 0, 0, 1, 0, 0, 1],
            vec![0, 1, 0, 0, 1, 0, 0],
            vec![0, 0, 1, 1, 0, 0, 0],
            vec![0, 0, 0, 0, 0, 1, 1],
            vec![1, 1, 1, 1, 1, 1, 0],
        ];
        let s = Subspace::from_rows(&Mat::from_rows(&rows, 7, 2).unwrap()).unwrap();
        assert_eq!(s.dim(), 5);
        let lines: HashSet<Subspace> = subspaces_of(&s, 2).collect();
        assert_eq!(lines.len(), 155);
        assert!(lines.iter().all(|l| l.dim() == 2 && contains(&s, l).unwrap()));
        let top: Vec<_> = subspaces_of(&s, 5).collect();
        assert_eq!(top, vec![s.clone()]);
        let bottom: Vec<_> = subspaces_of(&s, 0).collect();
        assert_eq!(bottom, vec![Subspace::zero(7, 2)]);
    }

    #[test]
    fn subspaces_of_over_f3() {
        let s = Subspace::from_rows(&Mat::from_rows(&[[1, 2, 0, 1], [0, 0, 1, 2]], 4, 3).unwrap()).unwrap();
        let pts: HashSet<Subspace> = subspaces_of(&s, 1).collect();
        assert_eq!(pts.len(), 4);
        assert!(pts.iter().all(|l| contains(&s, l).unwrap()));
    }
}
