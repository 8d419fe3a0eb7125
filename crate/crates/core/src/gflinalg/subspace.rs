use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use super::{
    check_field, key_axpy, key_to_msb_int, msb_int_to_key, rref, space_size, GfError, Mat,
    Result,
};

/// Version tag of the canonical order, embedded in census files and reports.
///
/// Rows are compared through their keys `Σ x_i p^i` (coordinate 0 least
/// significant), first row first. Under this order the span of the first
/// standard basis vector is the least 1-space and `⟨e_1, …, e_k⟩` the least
/// k-space.
pub const LEX_ORDER_TAG: &str = "rowkey-lsb0-v1";

pub(crate) type Rows = SmallVec<[u64; 6]>;

/// A subspace of `F_p^d`, held as the row keys of its reduced row echelon
/// basis. Two values are equal iff they span the same space.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    p: u64,
    d: u32,
    rows: Rows,
}

impl Subspace {
    pub fn zero(d: u32, p: u64) -> Self {
        Subspace { p, d, rows: Rows::new() }
    }

    pub fn full(d: u32, p: u64) -> Self {
        let mut rows = Rows::new();
        let mut place = 1u64;
        for _ in 0..d {
            rows.push(place);
            place *= p;
        }
        Subspace { p, d, rows }
    }

    /// Canonical subspace spanned by the rows of `m`.
    pub fn from_rows(m: &Mat) -> Result<Self> {
        check_field(m.cols() as u32, m.modulus())?;
        Ok(Self::from_keys(&m.row_keys(), m.cols() as u32, m.modulus()))
    }

    /// Canonical subspace spanned by arbitrary row keys.
    pub fn from_keys(keys: &[u64], d: u32, p: u64) -> Self {
        if p == 2 {
            let mut rows: Rows = keys.iter().copied().collect();
            let rank = rref_bits(&mut rows);
            rows.truncate(rank);
            return Subspace { p, d, rows };
        }
        let (red, rank) = rref(&Mat::from_keys(keys, d as usize, p));
        let rows = (0..rank).map(|i| red.row_key(i)).collect();
        Subspace { p, d, rows }
    }

    /// Wraps keys already known to be a reduced row echelon basis.
    pub(crate) fn from_canonical(rows: Rows, d: u32, p: u64) -> Self {
        Subspace { p, d, rows }
    }

    pub fn dim(&self) -> u32 {
        self.rows.len() as u32
    }

    pub fn ambient_dim(&self) -> u32 {
        self.d
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Row keys of the canonical basis.
    pub fn keys(&self) -> &[u64] {
        &self.rows
    }

    pub fn basis(&self) -> Mat {
        Mat::from_keys(&self.rows, self.d as usize, self.p)
    }

    /// Pivot column of each basis row.
    pub fn pivots(&self) -> impl Iterator<Item = u32> + '_ {
        self.rows.iter().map(move |&r| lowest_digit_pos(r, self.p))
    }

    pub fn contains_vector(&self, v: u64) -> bool {
        self.reduce(v) == 0
    }

    /// Residue of `v` after clearing every pivot coordinate.
    fn reduce(&self, mut v: u64) -> u64 {
        if self.p == 2 {
            for &r in &self.rows {
                let low = r & r.wrapping_neg();
                if v & low != 0 {
                    v ^= r;
                }
            }
            return v;
        }
        for &r in &self.rows {
            let c = lowest_digit_pos(r, self.p);
            let x = (v / self.p.pow(c)) % self.p;
            if x != 0 {
                v = key_axpy(v, (self.p - x) as u8, r, self.d, self.p);
            }
        }
        v
    }

    /// Every nonzero vector of the subspace, as row keys.
    pub fn nonzero_vectors(&self) -> Vec<u64> {
        let k = self.rows.len();
        if self.p == 2 {
            // gray code walk over the 2^k - 1 nonzero combinations
            let mut out = Vec::with_capacity((1usize << k) - 1);
            let mut v = 0u64;
            for i in 1u64..(1u64 << k) {
                v ^= self.rows[i.trailing_zeros() as usize];
                out.push(v);
            }
            return out;
        }
        let mut out = vec![0u64];
        for &r in &self.rows {
            let mut next = Vec::with_capacity(out.len() * self.p as usize);
            for &v in &out {
                for c in 0..self.p {
                    next.push(key_axpy(v, c as u8, r, self.d, self.p));
                }
            }
            out = next;
        }
        out.retain(|&v| v != 0);
        out
    }

    fn same_ambient(&self, other: &Subspace) -> Result<()> {
        if self.d != other.d || self.p != other.p {
            return Err(GfError::AmbientMismatch(format!(
                "F_{}^{} vs F_{}^{}",
                self.p, self.d, other.p, other.d
            )));
        }
        Ok(())
    }
}

impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.p, self.d, self.rows.len())
            .cmp(&(other.p, other.d, other.rows.len()))
            .then_with(|| self.rows.as_slice().cmp(other.rows.as_slice()))
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(F_{}^{}, <{}>)", self.p, self.d, encode(self))
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", encode(self))
    }
}

#[inline]
fn lowest_digit_pos(key: u64, p: u64) -> u32 {
    if p == 2 {
        return key.trailing_zeros();
    }
    let mut c = 0;
    let mut k = key;
    while k % p == 0 {
        k /= p;
        c += 1;
    }
    c
}

/// In-place reduced row echelon form of bit-packed rows over `F_2`; returns
/// the rank. The first `rank` entries hold the canonical basis, pivots
/// ascending.
#[inline]
pub(crate) fn rref_bits(rows: &mut [u64]) -> usize {
    let n = rows.len();
    let mut rank = 0;
    while rank < n {
        let mut best = usize::MAX;
        let mut best_low = 0u64;
        for (i, &r) in rows.iter().enumerate().skip(rank) {
            if r != 0 {
                let low = r & r.wrapping_neg();
                if best == usize::MAX || low < best_low {
                    best = i;
                    best_low = low;
                }
            }
        }
        if best == usize::MAX {
            break;
        }
        rows.swap(rank, best);
        let pivot = rows[rank];
        for (i, r) in rows.iter_mut().enumerate() {
            if i != rank && *r & best_low != 0 {
                *r ^= pivot;
            }
        }
        rank += 1;
    }
    for r in rows.iter_mut().skip(rank) {
        *r = 0;
    }
    rank
}

/// Whether `sub ⊆ sup`.
pub fn contains(sup: &Subspace, sub: &Subspace) -> Result<bool> {
    sup.same_ambient(sub)?;
    if sub.dim() > sup.dim() {
        return Ok(false);
    }
    Ok(sub.rows.iter().all(|&r| sup.contains_vector(r)))
}

/// Total order on subspaces of equal dimension in a common ambient space.
pub fn lex_compare(a: &Subspace, b: &Subspace) -> Result<Ordering> {
    a.same_ambient(b)?;
    if a.dim() != b.dim() {
        return Err(GfError::AmbientMismatch(format!("dimensions {} vs {}", a.dim(), b.dim())));
    }
    Ok(a.rows.as_slice().cmp(b.rows.as_slice()))
}

/// Space-separated lowercase hex, one token per basis row, each the row
/// integer with coordinate 0 as the most significant digit.
pub fn encode(s: &Subspace) -> String {
    let tokens: Vec<String> =
        s.rows.iter().map(|&r| format!("{:x}", key_to_msb_int(r, s.d, s.p))).collect();
    tokens.join(" ")
}

/// Inverse of [`encode`]; rejects anything that is not already canonical.
pub fn decode(text: &str, d: u32, k: u32, p: u64) -> Result<Subspace> {
    check_field(d, p)?;
    if k > d {
        return Err(GfError::MalformedEncoding(format!("dimension {k} exceeds ambient {d}")));
    }
    let tokens: Vec<&str> = if text.is_empty() { Vec::new() } else { text.split(' ').collect() };
    if tokens.len() != k as usize {
        return Err(GfError::MalformedEncoding(format!(
            "expected {k} row tokens, found {}",
            tokens.len()
        )));
    }
    let limit = space_size(d, p);
    let mut keys = Rows::new();
    for tok in tokens {
        let valid = !tok.is_empty()
            && tok.bytes().all(|b| b.is_ascii_digit() || (b'a'..=b'f').contains(&b))
            && (tok == "0" || !tok.starts_with('0'));
        if !valid {
            return Err(GfError::MalformedEncoding(format!("bad hex token {tok:?}")));
        }
        let v = u64::from_str_radix(tok, 16)
            .map_err(|e| GfError::MalformedEncoding(format!("{tok:?}: {e}")))?;
        if v >= limit {
            return Err(GfError::MalformedEncoding(format!("row {tok} exceeds {p}^{d}")));
        }
        keys.push(msb_int_to_key(v, d, p));
    }
    let canon = Subspace::from_keys(&keys, d, p);
    if canon.dim() < k {
        return Err(GfError::NotCanonical(format!("rank {} < {k}", canon.dim())));
    }
    if canon.rows != keys {
        return Err(GfError::NotCanonical("rows are not in reduced row echelon form".into()));
    }
    Ok(canon)
}

/// `U^⊥` under the standard dot product `Σ u_i v_i`.
pub fn orthogonal_complement(s: &Subspace) -> Subspace {
    let (d, p) = (s.d, s.p);
    let basis = s.basis();
    let pivots: Vec<u32> = s.pivots().collect();
    let mut rows = Vec::new();
    for f in (0..d).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u8; d as usize];
        v[f as usize] = 1;
        for (j, &c) in pivots.iter().enumerate() {
            let a = basis.get(j, f as usize) as u64;
            v[c as usize] = ((p - a) % p) as u8;
        }
        rows.push(super::digits_to_key(&v, p));
    }
    Subspace::from_keys(&rows, d, p)
}
