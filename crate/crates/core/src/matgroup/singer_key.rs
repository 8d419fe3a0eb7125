use num_bigint::BigUint;

use super::GroupElement;
use crate::gflinalg::Subspace;

/// Discrete logarithms with respect to a Singer cycle `S`.
///
/// `log(v) = i` iff `v = e_1·S^i`. The group `⟨S, F⟩` acts on logarithms
/// by `i ↦ a·i + c (mod n)` with `n = p^d - 1` and `a` ranging over the
/// powers of `p`, so a subspace's orbit is determined by its log set up to
/// translation and those multipliers. Only valid for the group generated by
/// the Singer cycle it was built from and a field automorphism.
#[derive(Clone)]
pub struct SingerLogTable {
    d: u32,
    p: u64,
    n: u32,
    log: Vec<u32>,
    exp: Vec<u64>,
    multipliers: Vec<u32>,
}

/// Tables are kept below this many entries.
const MAX_TABLE: u64 = 1 << 24;

impl SingerLogTable {
    /// `None` when the field is too large to tabulate or `s` does not act
    /// regularly on nonzero vectors.
    pub fn new(s: &GroupElement) -> Option<Self> {
        let (d, p) = (s.dim(), s.modulus());
        let size = p.checked_pow(d)?;
        if size > MAX_TABLE {
            return None;
        }
        let n = (size - 1) as u32;
        let mut log = vec![u32::MAX; size as usize];
        let mut exp = Vec::with_capacity(n as usize);
        let mut v = 1u64;
        for i in 0..n {
            if log[v as usize] != u32::MAX || v == 0 {
                return None;
            }
            log[v as usize] = i;
            exp.push(v);
            v = s.apply(v);
        }
        if v != 1 {
            return None;
        }
        let mut multipliers = Vec::new();
        let mut a = 1u64 % n as u64;
        for _ in 0..d {
            if !multipliers.contains(&(a as u32)) {
                multipliers.push(a as u32);
            }
            a = a * p % n as u64;
        }
        if n == 1 {
            multipliers = vec![1];
        }
        Some(SingerLogTable { d, p, n, log, exp, multipliers })
    }

    /// Order of `⟨S, F⟩`.
    pub fn group_order(&self) -> u64 {
        self.multipliers.len() as u64 * self.n as u64
    }

    pub fn log(&self, v: u64) -> u32 {
        self.log[v as usize]
    }

    pub fn exp(&self, i: u32) -> u64 {
        self.exp[(i % self.n) as usize]
    }

    pub fn matches(&self, s: &Subspace) -> bool {
        s.ambient_dim() == self.d && s.modulus() == self.p
    }

    fn logs(&self, s: &Subspace) -> Vec<u32> {
        s.nonzero_vectors().into_iter().map(|v| self.log[v as usize]).collect()
    }

    fn scaled_sorted(&self, logs: &[u32], a: u32) -> Vec<u32> {
        let n = self.n as u64;
        let mut v: Vec<u32> = logs.iter().map(|&l| (l as u64 * a as u64 % n) as u32).collect();
        v.sort_unstable();
        v
    }

    /// Cyclic gap sequence of a sorted log set, rotated to its least form.
    fn canonical_gaps(&self, sorted: &[u32]) -> Vec<u32> {
        if sorted.is_empty() {
            return Vec::new();
        }
        let m = sorted.len();
        let gaps: Vec<u32> = (0..m)
            .map(|i| if i + 1 < m { sorted[i + 1] - sorted[i] } else { sorted[0] + self.n - sorted[m - 1] })
            .collect();
        let r = least_rotation(&gaps);
        gaps[r..].iter().chain(&gaps[..r]).copied().collect()
    }

    /// Complete orbit invariant: equal keys iff same `⟨S, F⟩`-orbit.
    pub fn key(&self, s: &Subspace) -> Box<[u32]> {
        let logs = self.logs(s);
        self.multipliers
            .iter()
            .map(|&a| self.canonical_gaps(&self.scaled_sorted(&logs, a)))
            .min()
            .unwrap_or_default()
            .into_boxed_slice()
    }

    /// Number of group elements fixing `s`.
    pub fn stabilizer_order(&self, s: &Subspace) -> u64 {
        let logs = self.logs(s);
        if logs.is_empty() {
            return self.group_order();
        }
        let base = self.canonical_gaps(&self.scaled_sorted(&logs, 1));
        let matching = self
            .multipliers
            .iter()
            .filter(|&&a| self.canonical_gaps(&self.scaled_sorted(&logs, a)) == base)
            .count() as u64;
        let m = base.len();
        let period = (1..=m)
            .find(|&r| m % r == 0 && (0..m).all(|i| base[i] == base[(i + r) % m]))
            .unwrap_or(m);
        matching * (m / period) as u64
    }

    pub fn orbit_size(&self, s: &Subspace) -> BigUint {
        BigUint::from(self.group_order() / self.stabilizer_order(s))
    }

    /// The least member of the orbit of `s`. Its first basis row is `e_1`,
    /// so only images of `s` containing `e_1` are compared.
    pub fn orbit_min(&self, s: &Subspace) -> Subspace {
        if s.dim() == 0 {
            return s.clone();
        }
        let n = self.n as u64;
        let basis_logs: Vec<u64> = s.keys().iter().map(|&v| self.log[v as usize] as u64).collect();
        let logs = self.logs(s);
        let mut best: Option<Subspace> = None;
        let mut rows = vec![0u64; basis_logs.len()];
        for &a in &self.multipliers {
            let a = a as u64;
            for &l in &logs {
                let shift = n - (l as u64 * a % n);
                for (row, &b) in rows.iter_mut().zip(&basis_logs) {
                    *row = self.exp[((a * b + shift) % n) as usize];
                }
                let cand = Subspace::from_keys(&rows, self.d, self.p);
                if best.as_ref().map_or(true, |b| cand < *b) {
                    best = Some(cand);
                }
            }
        }
        best.expect("nonempty log set")
    }
}

/// Start index of the lexicographically least rotation.
fn least_rotation(s: &[u32]) -> usize {
    let n = s.len();
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        let (a, b) = (s[(i + k) % n], s[(j + k) % n]);
        if a == b {
            k += 1;
            continue;
        }
        if a > b {
            i += k + 1;
        } else {
            j += k + 1;
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    i.min(j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgroup::{default_poly, gamma_l1, singer_element};
    use proptest::prelude::*;

    fn naive_least_rotation(s: &[u32]) -> Vec<u32> {
        (0..s.len().max(1))
            .map(|r| s[r.min(s.len())..].iter().chain(&s[..r.min(s.len())]).copied().collect::<Vec<_>>())
            .min()
            .unwrap()
    }

    proptest! {
        #[test]
        fn least_rotation_is_least(s in proptest::collection::vec(0u32..3, 1..12)) {
            let r = least_rotation(&s);
            let rotated: Vec<u32> = s[r..].iter().chain(&s[..r]).copied().collect();
            prop_assert_eq!(rotated, naive_least_rotation(&s));
        }
    }

    #[test]
    fn logs_invert_powers() {
        for (p, d) in [(2u64, 7u32), (3, 4), (5, 2)] {
            let s = singer_element(&default_poly(p, d).unwrap()).unwrap();
            let t = SingerLogTable::new(&s).unwrap();
            for i in 0..(p.pow(d) - 1) as u32 {
                assert_eq!(t.log(t.exp(i)), i);
            }
        }
    }

    #[test]
    fn key_and_min_agree_with_explicit_orbits() {
        for (p, d, k) in [(2u64, 6u32, 3u32), (2, 7, 2), (3, 4, 2), (2, 4, 2)] {
            let mut g = gamma_l1(&default_poly(p, d).unwrap()).unwrap();
            let table = g.singer.take().unwrap();
            let all: Vec<Subspace> = crate::gflinalg::enumerate_subspaces(d, k, p).collect();
            for s in all.iter().step_by(7) {
                let orbit = g.orbit(s, 1 << 20).unwrap();
                let min = orbit.iter().min().unwrap();
                assert_eq!(&table.orbit_min(s), min);
                assert_eq!(table.orbit_size(s), BigUint::from(orbit.len()));
                let key = table.key(s);
                for t in &all {
                    assert_eq!(table.key(t) == key, orbit.contains(t), "{s} vs {t}");
                }
            }
        }
    }
}
