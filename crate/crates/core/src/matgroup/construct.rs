//! The concrete groups: Singer cycles and their normalisers, `SL_m(p)`, and
//! the stabiliser of a hyperplane.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;

use super::{GroupElement, MatGroup, MatGroupError, Result, SingerLogTable};
use crate::gflinalg::{check_field, Mat};
use crate::qarith::is_prime_u64;

/// A monic polynomial over `F_p`, coefficients lowest degree first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    p: u64,
    coeffs: Vec<u8>,
}

impl Poly {
    pub fn new(p: u64, coeffs: Vec<u8>) -> Result<Self> {
        if !is_prime_u64(p) || p > 255 {
            return Err(MatGroupError::BadPolynomial(format!("p = {p} is not a supported prime")));
        }
        if coeffs.len() < 2 {
            return Err(MatGroupError::BadPolynomial("degree must be at least 1".into()));
        }
        if coeffs.iter().any(|&c| c as u64 >= p) {
            return Err(MatGroupError::BadPolynomial("coefficient out of range".into()));
        }
        if *coeffs.last().unwrap() != 1 {
            return Err(MatGroupError::BadPolynomial("polynomial must be monic".into()));
        }
        Ok(Poly { p, coeffs })
    }

    /// Parses forms such as `x^11+x^2+1` or `x^7+2x+1` (also `2*x`).
    pub fn parse(text: &str, p: u64) -> Result<Self> {
        let bad = |why: &str| MatGroupError::BadPolynomial(format!("{text:?}: {why}"));
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(bad("empty"));
        }
        let mut coeffs: Vec<u64> = Vec::new();
        for term in cleaned.split('+') {
            let (coef, exp) = match term.find('x') {
                None => (term.parse::<u64>().map_err(|_| bad("bad constant"))?, 0usize),
                Some(pos) => {
                    let c = term[..pos].trim_end_matches('*');
                    let c = if c.is_empty() { 1 } else { c.parse::<u64>().map_err(|_| bad("bad coefficient"))? };
                    let rest = &term[pos + 1..];
                    let e = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^')
                            .ok_or_else(|| bad("expected ^"))?
                            .parse::<usize>()
                            .map_err(|_| bad("bad exponent"))?
                    };
                    (c, e)
                }
            };
            if coeffs.len() <= exp {
                coeffs.resize(exp + 1, 0);
            }
            coeffs[exp] = (coeffs[exp] + coef) % p;
        }
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0 {
            coeffs.pop();
        }
        Poly::new(p, coeffs.into_iter().map(|c| c as u8).collect())
    }

    pub fn degree(&self) -> u32 {
        (self.coeffs.len() - 1) as u32
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u8] {
        &self.coeffs
    }

    /// Coefficients of `x^e mod self`, lowest degree first.
    fn x_power_mod(&self, e: usize) -> Vec<u8> {
        let d = self.degree() as usize;
        let p = self.p;
        let mut cur = vec![0u8; d];
        if d == 1 {
            // x ≡ -c_0
            let root = ((p - self.coeffs[0] as u64) % p) as u64;
            let mut v = 1u64;
            for _ in 0..e {
                v = v * root % p;
            }
            cur[0] = v as u8;
            return cur;
        }
        cur[0] = 1;
        for _ in 0..e {
            // multiply by x, then reduce the overflow x^d
            let top = cur[d - 1] as u64;
            for i in (1..d).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for (i, c) in cur.iter_mut().enumerate() {
                    let sub = top * self.coeffs[i] as u64 % p;
                    *c = ((*c as u64 + p - sub) % p) as u8;
                }
            }
        }
        cur
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (e, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coef = if c == 1 && e > 0 { String::new() } else { c.to_string() };
            terms.push(match e {
                0 => coef,
                1 => format!("{coef}x"),
                _ => format!("{coef}x^{e}"),
            });
        }
        write!(f, "{}", terms.join("+"))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self} over F_{})", self.p)
    }
}

impl FromStr for Poly {
    type Err = MatGroupError;

    /// `<poly>` over F_2, or `<poly>@<p>`.
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once('@') {
            Some((poly, p)) => {
                let p = p.parse().map_err(|_| MatGroupError::BadPolynomial(format!("bad prime in {s:?}")))?;
                Poly::parse(poly, p)
            }
            None => Poly::parse(s, 2),
        }
    }
}

/// Default primitive polynomials, coefficients highest degree first. Each
/// is the least primitive polynomial when the coefficient vector
/// `(c_{d-1}, …, c_0)` is read as a base-`p` number with `c_0` least
/// significant; every use re-verifies primitivity.
const DEFAULT_POLYS: &[(u64, &[u8])] = &[
    (2, &[1, 1]),
    (2, &[1, 1, 1]),
    (2, &[1, 0, 1, 1]),
    (2, &[1, 0, 0, 1, 1]),
    (2, &[1, 0, 0, 1, 0, 1]),
    (2, &[1, 0, 0, 0, 0, 1, 1]),
    (2, &[1, 0, 0, 0, 0, 0, 1, 1]),
    (2, &[1, 0, 0, 0, 1, 1, 1, 0, 1]),
    (2, &[1, 0, 0, 0, 0, 1, 0, 0, 0, 1]),
    (2, &[1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1]),
    (2, &[1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1]),
    (2, &[1, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 1, 1]),
    (2, &[1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 1, 1]),
    (2, &[1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 1, 1]),
    (2, &[1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1]),
    (2, &[1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 1, 0, 1]),
    (3, &[1, 1]),
    (3, &[1, 1, 2]),
    (3, &[1, 0, 2, 1]),
    (3, &[1, 0, 0, 1, 2]),
    (3, &[1, 0, 0, 0, 2, 1]),
    (3, &[1, 0, 0, 0, 0, 1, 2]),
    (3, &[1, 0, 0, 0, 0, 1, 2, 1]),
    (3, &[1, 0, 0, 0, 0, 1, 0, 0, 2]),
    (5, &[1, 2]),
    (5, &[1, 1, 2]),
    (5, &[1, 0, 3, 2]),
    (5, &[1, 0, 1, 2, 2]),
    (5, &[1, 0, 0, 0, 4, 2]),
    (5, &[1, 0, 0, 0, 0, 1, 2]),
    (5, &[1, 0, 0, 0, 0, 0, 3, 2]),
    (7, &[1, 2]),
    (7, &[1, 1, 3]),
    (7, &[1, 0, 3, 2]),
    (7, &[1, 0, 1, 3, 5]),
    (7, &[1, 0, 0, 0, 1, 4]),
];

/// The configured primitive polynomial of degree `d` over `F_p`, if any.
pub fn default_poly(p: u64, d: u32) -> Option<Poly> {
    DEFAULT_POLYS
        .iter()
        .find(|(q, c)| *q == p && c.len() == d as usize + 1)
        .map(|(_, c)| Poly::new(p, c.iter().rev().copied().collect()).expect("table entries are monic"))
}

fn mat_from_fn(d: usize, p: u64, f: impl Fn(usize, usize) -> u8) -> Mat {
    let mut m = Mat::zeros(d, d, p);
    for i in 0..d {
        for j in 0..d {
            m.set(i, j, f(i, j));
        }
    }
    m
}

/// Companion matrix of `poly`: ones on the subdiagonal, last column
/// `-c_0, …, -c_{d-1}`. Fails unless its order is `p^d - 1`.
pub fn singer_element(poly: &Poly) -> Result<GroupElement> {
    let (p, d) = (poly.p, poly.degree() as usize);
    check_field(d as u32, p)?;
    let c = &poly.coeffs;
    let m = mat_from_fn(d, p, |i, j| {
        if j == d - 1 {
            ((p - c[i] as u64) % p) as u8
        } else {
            (i == j + 1) as u8
        }
    });
    let g = GroupElement::new(m).map_err(|_| MatGroupError::NotPrimitive(poly.to_string()))?;
    let expected = BigUint::from(p.pow(d as u32) - 1);
    if g.order() != expected {
        return Err(MatGroupError::NotPrimitive(format!("{poly} (order {} != {expected})", g.order())));
    }
    Ok(g)
}

/// Matrix of `x ↦ x^p` on `F_p[x]/(poly)` in the power basis, columns
/// holding images; satisfies `F·S·F⁻¹ = S^p` with `S` from
/// [`singer_element`].
pub fn frobenius_element(poly: &Poly) -> Result<GroupElement> {
    let (p, d) = (poly.p, poly.degree() as usize);
    check_field(d as u32, p)?;
    let columns: Vec<Vec<u8>> = (0..d).map(|j| poly.x_power_mod(j * p as usize)).collect();
    let m = mat_from_fn(d, p, |i, j| columns[j][i]);
    GroupElement::new(m).map_err(|_| MatGroupError::BadPolynomial(format!("{poly} is not irreducible")))
}

/// `ΓL_1(p^d)`, generated by the Singer cycle and the Frobenius map.
pub fn gamma_l1(poly: &Poly) -> Result<MatGroup> {
    let (p, d) = (poly.p, poly.degree());
    let s = singer_element(poly)?;
    let f = frobenius_element(poly)?;
    let order = BigUint::from(d) * BigUint::from(p.pow(d) - 1);
    let table = SingerLogTable::new(&s);
    let name = format!("gamma-l1:p={p},d={d},poly={poly}");
    let mut group = MatGroup::new(name, d, p, vec![s, f])?;
    group.set_known_order(order);
    group.singer = table;
    Ok(group)
}

/// `|SL_m(p)| = p^(m(m-1)/2) · ∏_{i=2}^m (p^i - 1)`.
pub fn sl_order(m: u32, p: u64) -> BigUint {
    let mut n = BigUint::from(p).pow(m * (m - 1) / 2);
    for i in 2..=m {
        n *= BigUint::from(p).pow(i) - BigUint::one();
    }
    n
}

/// Two generators of `SL_m(p)`: the transvection `I + E_{0,1}` and a signed
/// `m`-cycle `e_i ↦ e_{i+1}`, `e_{m-1} ↦ (-1)^(m-1) e_0`.
pub fn sl_generators(m: u32, p: u64) -> Result<Vec<GroupElement>> {
    if m < 2 {
        return Err(MatGroupError::InvalidArgument("SL_m needs m >= 2".into()));
    }
    let m = m as usize;
    let transvection = mat_from_fn(m, p, |i, j| (i == j || (i == 0 && j == 1)) as u8);
    let sign = if m % 2 == 1 { 1 } else { (p - 1) as u8 };
    let cycle = mat_from_fn(m, p, |i, j| {
        if i + 1 < m {
            (j == i + 1) as u8
        } else if j == 0 {
            sign
        } else {
            0
        }
    });
    Ok(vec![GroupElement::new(transvection)?, GroupElement::new(cycle)?])
}

/// `SL_m(p)` as a group with known order.
pub fn special_linear(m: u32, p: u64) -> Result<MatGroup> {
    let mut g = MatGroup::new(format!("sl:m={m},p={p}"), m, p, sl_generators(m, p)?)?;
    g.set_known_order(sl_order(m, p));
    Ok(g)
}

/// The stabiliser of `W = ⟨e_2, …, e_dd⟩` inside `SL_dd(p)` and its Levi
/// factor: `K = diag(1, SL_{dd-1}(p))` and `H = N ⋊ K`, where `N` is
/// generated under `K` by the transvection `e_1 ↦ e_1 + e_2`.
pub fn hyperplane_levi(dd: u32, p: u64) -> Result<(MatGroup, MatGroup)> {
    if dd < 3 {
        return Err(MatGroupError::InvalidArgument("hyperplane_levi needs dd >= 3".into()));
    }
    let n = dd as usize;
    let embed = |a: &GroupElement| {
        let am = a.matrix();
        GroupElement::new(mat_from_fn(n, p, |i, j| match (i, j) {
            (0, 0) => 1,
            (0, _) | (_, 0) => 0,
            _ => am.get(i - 1, j - 1),
        }))
    };
    let k_gens: Vec<GroupElement> =
        sl_generators(dd - 1, p)?.iter().map(embed).collect::<Result<_>>()?;
    let eta = GroupElement::new(mat_from_fn(n, p, |i, j| (i == j || (i == 0 && j == 1)) as u8))?;
    let k_order = sl_order(dd - 1, p);
    let mut k = MatGroup::new(format!("hyperplane-levi:K:d={dd},p={p}"), dd, p, k_gens.clone())?;
    k.set_known_order(k_order.clone());
    let mut h_gens = k_gens;
    h_gens.push(eta);
    let mut h = MatGroup::new(format!("hyperplane-levi:H:d={dd},p={p}"), dd, p, h_gens)?;
    h.set_known_order(k_order * BigUint::from(p).pow(dd - 1));
    Ok((k, h))
}
