use std::fmt;

use num_bigint::BigUint;

use super::{digits_to_key, inv_mod, key_to_digits, GfError, Result};

/// Dense matrix over `F_p` with entries reduced mod `p`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    p: u64,
    data: Vec<u8>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize, p: u64) -> Self {
        Mat { rows, cols, p, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize, p: u64) -> Self {
        let mut m = Self::zeros(n, n, p);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from integer rows, reducing every entry mod `p`.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R], cols: usize, p: u64) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), cols, p);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(GfError::AmbientMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, x.rem_euclid(p as i64) as u8);
            }
        }
        Ok(m)
    }

    /// One row per key; see the module docs for the key convention.
    pub fn from_keys(keys: &[u64], cols: usize, p: u64) -> Self {
        let mut m = Self::zeros(keys.len(), cols, p);
        for (i, &k) in keys.iter().enumerate() {
            let digits = key_to_digits(k, cols as u32, p);
            m.data[i * cols..(i + 1) * cols].copy_from_slice(&digits);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u8) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_key(&self, i: usize) -> u64 {
        digits_to_key(self.row(i), self.p)
    }

    pub fn row_keys(&self) -> Vec<u64> {
        (0..self.rows).map(|i| self.row_key(i)).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == (i == j) as u8))
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows, self.p);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Result<Mat> {
        if self.cols != other.rows || self.p != other.p {
            return Err(GfError::AmbientMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let p = self.p;
        let mut out = Mat::zeros(self.rows, other.cols, p);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l) as u64;
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    out.data[idx] = ((out.data[idx] as u64 + a * other.get(l, j) as u64) % p) as u8;
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, exp: &BigUint) -> Result<Mat> {
        if self.rows != self.cols {
            return Err(GfError::AmbientMismatch("power of a non-square matrix".into()));
        }
        let mut acc = Mat::identity(self.rows, self.p);
        for i in (0..exp.bits()).rev() {
            acc = acc.mul(&acc)?;
            if exp.bit(i) {
                acc = acc.mul(self)?;
            }
        }
        Ok(acc)
    }

    pub fn rank(&self) -> usize {
        rref(self).1
    }

    pub fn determinant(&self) -> Result<u8> {
        if self.rows != self.cols {
            return Err(GfError::AmbientMismatch("determinant of a non-square matrix".into()));
        }
        let p = self.p;
        let mut m = self.clone();
        let n = self.rows;
        let mut det = 1u64;
        for c in 0..n {
            let Some(piv) = (c..n).find(|&r| m.get(r, c) != 0) else {
                return Ok(0);
            };
            if piv != c {
                m.swap_rows(piv, c);
                det = (p - det) % p;
            }
            let pv = m.get(c, c);
            det = det * pv as u64 % p;
            let inv = inv_mod(pv, p);
            for r in c + 1..n {
                let f = m.get(r, c);
                if f != 0 {
                    let factor = (p - f as u64 * inv as u64 % p) % p;
                    m.add_row_multiple(r, c, factor as u8);
                }
            }
        }
        Ok(det as u8)
    }

    pub fn inverse(&self) -> Result<Mat> {
        let n = self.rows;
        if n != self.cols {
            return Err(GfError::AmbientMismatch("inverse of a non-square matrix".into()));
        }
        let mut aug = Mat::zeros(n, 2 * n, self.p);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let (red, _) = rref(&aug);
        for i in 0..n {
            for j in 0..n {
                if red.get(i, j) != (i == j) as u8 {
                    return Err(GfError::NotCanonical("matrix is singular".into()));
                }
            }
        }
        let mut inv = Mat::zeros(n, n, self.p);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, red.get(i, n + j));
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// row[dst] += factor * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, factor: u8) {
        let p = self.p;
        for j in 0..self.cols {
            let v = (self.get(dst, j) as u64 + factor as u64 * self.get(src, j) as u64) % p;
            self.set(dst, j, v as u8);
        }
    }

    fn scale_row(&mut self, r: usize, factor: u8) {
        let p = self.p;
        for j in 0..self.cols {
            let v = self.get(r, j) as u64 * factor as u64 % p;
            self.set(r, j, v as u8);
        }
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} over F_{}", self.rows, self.cols, self.p)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Reduced row echelon form and rank. Zero rows are kept at the bottom so
/// the shape is preserved.
pub fn rref(m: &Mat) -> (Mat, usize) {
    let p = m.p;
    let mut r = m.clone();
    let mut rank = 0;
    for c in 0..r.cols {
        if rank == r.rows {
            break;
        }
        let Some(piv) = (rank..r.rows).find(|&i| r.get(i, c) != 0) else {
            continue;
        };
        r.swap_rows(piv, rank);
        let inv = inv_mod(r.get(rank, c), p);
        r.scale_row(rank, inv);
        for i in 0..r.rows {
            if i != rank {
                let f = r.get(i, c);
                if f != 0 {
                    r.add_row_multiple(i, rank, (p - f as u64) as u8);
                }
            }
        }
        rank += 1;
    }
    (r, rank)
}
