use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use super::{MatGroupError, Result};
use crate::gflinalg::{check_field, key_axpy, Mat, Subspace};
use crate::qarith::factor_u64;

/// An invertible `d×d` matrix over `F_p`, acting on row vectors from the
/// right: `v ↦ v·g`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    mat: Mat,
    /// Row keys of the matrix rows, i.e. the images of the standard basis.
    images: Vec<u64>,
}

impl GroupElement {
    pub fn new(mat: Mat) -> Result<Self> {
        if mat.rows() != mat.cols() {
            return Err(MatGroupError::NotInvertible("matrix is not square".into()));
        }
        check_field(mat.cols() as u32, mat.modulus())?;
        if mat.determinant()? == 0 {
            return Err(MatGroupError::NotInvertible("determinant is zero".into()));
        }
        let images = mat.row_keys();
        Ok(GroupElement { mat, images })
    }

    pub fn identity(d: u32, p: u64) -> Self {
        let mat = Mat::identity(d as usize, p);
        let images = mat.row_keys();
        GroupElement { mat, images }
    }

    /// From basis images already known to be independent.
    pub(crate) fn from_images(images: Vec<u64>, d: u32, p: u64) -> Self {
        let mat = Mat::from_keys(&images, d as usize, p);
        GroupElement { mat, images }
    }

    pub fn dim(&self) -> u32 {
        self.mat.rows() as u32
    }

    pub fn modulus(&self) -> u64 {
        self.mat.modulus()
    }

    pub fn matrix(&self) -> &Mat {
        &self.mat
    }

    pub(crate) fn images(&self) -> &[u64] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.mat.is_identity()
    }

    /// `self · other`: apply `self` first, then `other`.
    pub fn mul(&self, other: &GroupElement) -> Result<GroupElement> {
        let mat = self.mat.mul(&other.mat)?;
        let images = mat.row_keys();
        Ok(GroupElement { mat, images })
    }

    pub fn inverse(&self) -> GroupElement {
        let mat = self.mat.inverse().expect("group elements are invertible");
        let images = mat.row_keys();
        GroupElement { mat, images }
    }

    pub fn pow(&self, exp: &BigUint) -> GroupElement {
        let mat = self.mat.pow(exp).expect("square matrix");
        let images = mat.row_keys();
        GroupElement { mat, images }
    }

    /// `v·g` for a row key `v`.
    #[inline]
    pub fn apply(&self, v: u64) -> u64 {
        apply_images(&self.images, v, self.dim(), self.modulus())
    }

    /// Least `n >= 1` with `g^n = 1`.
    pub fn order(&self) -> BigUint {
        let (d, p) = (self.dim(), self.modulus());
        // the order divides |GL_d(p)| = p^(d(d-1)/2) · ∏ (p^i - 1)
        let mut primes: Vec<(u64, u32)> = vec![(p, d * (d.saturating_sub(1)) / 2)];
        for i in 1..=d {
            for (r, e) in factor_u64(p.pow(i) - 1) {
                match primes.iter_mut().find(|(q, _)| *q == r) {
                    Some(entry) => entry.1 += e,
                    None => primes.push((r, e)),
                }
            }
        }
        let mut n = BigUint::one();
        for &(r, e) in &primes {
            n *= BigUint::from(r).pow(e);
        }
        debug_assert!(self.pow(&n).is_identity());
        for (r, e) in primes {
            for _ in 0..e {
                let candidate = &n / r;
                if self.pow(&candidate).is_identity() {
                    n = candidate;
                } else {
                    break;
                }
            }
        }
        n
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupElement({:?})", self.mat)
    }
}

#[inline]
pub(crate) fn apply_images(images: &[u64], v: u64, d: u32, p: u64) -> u64 {
    if p == 2 {
        let mut acc = 0u64;
        let mut bits = v;
        while bits != 0 {
            acc ^= images[bits.trailing_zeros() as usize];
            bits &= bits - 1;
        }
        return acc;
    }
    let mut acc = 0u64;
    let mut rest = v;
    for &img in images {
        let c = (rest % p) as u8;
        if c != 0 {
            acc = key_axpy(acc, c, img, d, p);
        }
        rest /= p;
    }
    acc
}

/// The canonical subspace spanned by `(basis of s)·g`.
pub fn act(s: &Subspace, g: &GroupElement) -> Result<Subspace> {
    let (d, p) = (s.ambient_dim(), s.modulus());
    if g.dim() != d || g.modulus() != p {
        return Err(MatGroupError::AmbientMismatch(format!(
            "element of GL_{}({}) on F_{p}^{d}",
            g.dim(),
            g.modulus()
        )));
    }
    let rows: Vec<u64> = s.keys().iter().map(|&v| g.apply(v)).collect();
    Ok(Subspace::from_keys(&rows, d, p))
}

/// The order of an element; free-function form of [`GroupElement::order`].
pub fn element_order(g: &GroupElement) -> BigUint {
    g.order()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_order() {
        assert!(GroupElement::identity(5, 3).order().is_one());
    }

    #[test]
    fn singular_rejected() {
        let m = Mat::from_rows(&[[1, 1], [1, 1]], 2, 2).unwrap();
        assert!(matches!(GroupElement::new(m), Err(MatGroupError::NotInvertible(_))));
    }

    #[test]
    fn orders_by_iteration() {
        // compare against naive iteration on a few matrices
        let mats = [
            Mat::from_rows(&[[0, 1, 0], [0, 0, 1], [1, 1, 0]], 3, 2).unwrap(),
            Mat::from_rows(&[[1, 1, 0], [0, 1, 1], [0, 0, 1]], 3, 3).unwrap(),
            Mat::from_rows(&[[2, 0], [0, 1]], 2, 5).unwrap(),
        ];
        for m in mats {
            let g = GroupElement::new(m).unwrap();
            let mut x = g.clone();
            let mut n = 1u32;
            while !x.is_identity() {
                x = x.mul(&g).unwrap();
                n += 1;
            }
            assert_eq!(g.order(), BigUint::from(n));
        }
    }

    #[test]
    fn apply_matches_matrix_product() {
        let m = Mat::from_rows(&[[1, 2, 0], [0, 1, 1], [2, 0, 1]], 3, 3).unwrap();
        let g = GroupElement::new(m.clone()).unwrap();
        for v in 0..27u64 {
            let row = Mat::from_keys(&[v], 3, 3);
            let expect = row.mul(&m).unwrap().row_key(0);
            assert_eq!(g.apply(v), expect);
        }
    }
}
