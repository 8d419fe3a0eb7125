//! Linear algebra over prime fields and canonical subspaces of `F_p^d`.
//!
//! Vectors are stored as *row keys*: the integer `Σ x_i p^i`, so coordinate
//! 0 is the least significant digit. Over `F_2` a row key is simply a bit
//! mask with bit `i` holding coordinate `i`. Subspaces keep the row keys of
//! their reduced row echelon basis, which makes equality and hashing
//! structural and the canonical order a plain comparison of key sequences.

mod enumerate;
mod mat;
mod subspace;

pub use enumerate::{enumerate_subspaces, subspaces_of, SubspaceIter};
pub use mat::{rref, Mat};
pub(crate) use subspace::rref_bits;
pub use subspace::{
    contains, decode, encode, lex_compare, orthogonal_complement, Subspace, LEX_ORDER_TAG,
};

use smallvec::SmallVec;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),
    #[error("malformed encoding: {0}")]
    MalformedEncoding(String),
    #[error("not canonical: {0}")]
    NotCanonical(String),
    #[error("unsupported field or dimension: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, GfError>;

/// Digits of one vector, coordinate 0 first.
pub type Digits = SmallVec<[u8; 32]>;

/// Checks that `p` is a prime below 256 and that `p^d` fits in a row key.
pub fn check_field(d: u32, p: u64) -> Result<()> {
    if !(2..256).contains(&p) || !crate::qarith::is_prime_u64(p) {
        return Err(GfError::Unsupported(format!("p = {p} must be a prime below 256")));
    }
    match p.checked_pow(d) {
        Some(v) if v <= 1 << 62 => Ok(()),
        _ => Err(GfError::Unsupported(format!("{p}^{d} does not fit a 62-bit row key"))),
    }
}

/// Number of vectors in `F_p^d`.
pub fn space_size(d: u32, p: u64) -> u64 {
    p.pow(d)
}

pub fn key_to_digits(mut key: u64, d: u32, p: u64) -> Digits {
    let mut out = Digits::with_capacity(d as usize);
    for _ in 0..d {
        out.push((key % p) as u8);
        key /= p;
    }
    out
}

pub fn digits_to_key(digits: &[u8], p: u64) -> u64 {
    digits.iter().rev().fold(0u64, |acc, &x| acc * p + x as u64)
}

/// `a + c·b` on row keys.
#[inline]
pub fn key_axpy(a: u64, c: u8, b: u64, d: u32, p: u64) -> u64 {
    if p == 2 {
        return if c & 1 == 1 { a ^ b } else { a };
    }
    let (mut a, mut b) = (a, b);
    let (mut out, mut place) = (0u64, 1u64);
    for _ in 0..d {
        let x = (a % p + c as u64 * (b % p)) % p;
        out += x * place;
        place *= p;
        a /= p;
        b /= p;
    }
    out
}

/// `c·a` on row keys.
pub fn key_scale(a: u64, c: u8, d: u32, p: u64) -> u64 {
    key_axpy(0, c, a, d, p)
}

/// Multiplicative inverse in `F_p`, `a != 0`.
pub fn inv_mod(a: u8, p: u64) -> u8 {
    let (a, p) = (a as i64, p as i64);
    let (mut r0, mut r1, mut s0, mut s1) = (p, a % p, 0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1, "{a} not invertible mod {p}");
    s0.rem_euclid(p) as u8
}

/// Row integer with coordinate 0 as the most significant base-`p` digit.
pub fn key_to_msb_int(key: u64, d: u32, p: u64) -> u64 {
    if p == 2 {
        return if d == 0 { 0 } else { key.reverse_bits() >> (64 - d) };
    }
    let digits = key_to_digits(key, d, p);
    digits.iter().fold(0u64, |acc, &x| acc * p + x as u64)
}

pub fn msb_int_to_key(mut v: u64, d: u32, p: u64) -> u64 {
    if p == 2 {
        return if d == 0 { 0 } else { v.reverse_bits() >> (64 - d) };
    }
    let mut digits = Digits::from_elem(0, d as usize);
    for i in (0..d as usize).rev() {
        digits[i] = (v % p) as u8;
        v /= p;
    }
    digits_to_key(&digits, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverses() {
        for p in [2u64, 3, 5, 7, 251] {
            for a in 1..p {
                assert_eq!((a * inv_mod(a as u8, p) as u64) % p, 1);
            }
        }
    }

    #[test]
    fn msb_rendering_round_trip() {
        // coordinate 0 set, d = 4: 1000 in msb-first form
        assert_eq!(key_to_msb_int(1, 4, 2), 8);
        assert_eq!(msb_int_to_key(8, 4, 2), 1);
        for p in [2u64, 3, 5] {
            for key in 0..p.pow(4) {
                assert_eq!(msb_int_to_key(key_to_msb_int(key, 4, p), 4, p), key);
            }
        }
        // (1,2,0) over F_3: msb value 1*9 + 2*3 + 0 = 15, key 1 + 2*3 = 7
        assert_eq!(key_to_msb_int(7, 3, 3), 15);
    }

    #[test]
    fn axpy_matches_digits() {
        let (d, p) = (5, 3);
        for a in (0..243).step_by(7) {
            for b in (0..243).step_by(11) {
                let da = key_to_digits(a, d, p);
                let db = key_to_digits(b, d, p);
                let expect: Digits = da.iter().zip(&db).map(|(x, y)| ((x + 2 * y) % 3) as u8).collect();
                assert_eq!(key_axpy(a, 2, b, d, p), digits_to_key(&expect, p));
            }
        }
    }

    #[test]
    fn field_checks() {
        assert!(check_field(11, 2).is_ok());
        assert!(check_field(62, 2).is_ok());
        assert!(check_field(63, 2).is_err());
        assert!(check_field(4, 4).is_err());
        assert!(check_field(4, 257).is_err());
    }
}
