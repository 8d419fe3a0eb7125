//! Exact integer arithmetic for subspace-design parameters.
//!
//! Everything here is a pure function of its inputs and works over
//! arbitrary-precision integers. Non-integral quotients are reported as
//! [`QArithError::NonIntegral`] values so that scans can collect failures
//! instead of aborting.

mod factor;
mod params;
mod report;

pub use factor::{factor_u64, is_prime_u64};
pub use params::{DesignParams, PrimePower};
pub use report::{admissibility_report, AdmissibilityVerdict, FilterOutcome};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QArithError {
    /// The formula value `numerator / denominator` is not an integer.
    #[error("non-integral quotient {numerator}/{denominator}")]
    NonIntegral { numerator: BigUint, denominator: BigUint },
    #[error("invalid design parameters: {0}")]
    InvalidParams(String),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
}

pub type Result<T> = std::result::Result<T, QArithError>;

/// `q^e - 1` as a big integer.
pub fn q_power_minus_one(q: u64, e: u32) -> BigUint {
    BigUint::from(q).pow(e) - BigUint::one()
}

/// Number of `k`-dimensional subspaces of `F_q^d`.
///
/// Returns zero when `k > d`. Requires `q >= 2`.
pub fn gaussian_binomial(d: u32, k: u32, q: u64) -> BigUint {
    assert!(q >= 2, "gaussian_binomial needs q >= 2");
    if k > d {
        return BigUint::zero();
    }
    // use the smaller of k and d-k for fewer factors
    let k = k.min(d - k);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= q_power_minus_one(q, d - i);
        den *= q_power_minus_one(q, k - i);
    }
    let (quot, rem) = num.div_rem(&den);
    debug_assert!(rem.is_zero());
    quot
}

/// Exact quotient or a `NonIntegral` witness carrying the raw fraction.
pub(crate) fn exact_div(numerator: BigUint, denominator: BigUint) -> Result<BigUint> {
    let (quot, rem) = numerator.div_rem(&denominator);
    if rem.is_zero() {
        Ok(quot)
    } else {
        Err(QArithError::NonIntegral { numerator, denominator })
    }
}

/// `|B| = λ · ∏_{i<t} (q^{d-i} - 1) / (q^{k-i} - 1)`.
pub fn block_count(params: &DesignParams) -> Result<BigUint> {
    let q = params.q.value();
    let mut num = params.lambda.clone();
    let mut den = BigUint::one();
    for i in 0..params.t {
        num *= q_power_minus_one(q, params.d - i);
        den *= q_power_minus_one(q, params.k - i);
    }
    exact_div(num, den)
}

/// `λ₂`, the index of the design viewed as a 2-design.
pub fn lambda_two(params: &DesignParams) -> Result<BigUint> {
    if params.t < 2 {
        return Err(QArithError::InvalidParams(format!(
            "lambda_two needs t >= 2, got t = {}",
            params.t
        )));
    }
    let q = params.q.value();
    let num = &params.lambda * gaussian_binomial(params.d - 2, params.t - 2, q);
    let den = gaussian_binomial(params.k - 2, params.t - 2, q);
    exact_div(num, den)
}

/// Parameters `(t, d, d-k, λ')` of the dual design.
pub fn dual_params(params: &DesignParams) -> Result<DesignParams> {
    let q = params.q.value();
    let (t, d, k) = (params.t, params.d, params.k);
    let num = &params.lambda * gaussian_binomial(d - t, k, q);
    let den = gaussian_binomial(d - t, k - t, q);
    let lambda = exact_div(num, den)?;
    DesignParams::new(t, d, d - k, lambda, params.q)
}

/// Parameters `(t-1, d-1, k-1, λ)` of the derived design at a point.
pub fn derived_params(params: &DesignParams) -> Result<DesignParams> {
    if params.t < 2 {
        return Err(QArithError::InvalidParams(format!(
            "derived design needs t >= 2, got t = {}",
            params.t
        )));
    }
    DesignParams::new(
        params.t - 1,
        params.d - 1,
        params.k - 1,
        params.lambda.clone(),
        params.q,
    )
}

/// Largest divisor of `q^e - 1` coprime to every `q^i - 1` with `i < e`.
pub fn primitive_part(q: u64, e: u32) -> BigUint {
    assert!(q >= 2 && e >= 1, "primitive_part needs q >= 2 and e >= 1");
    let mut m = q_power_minus_one(q, e);
    for i in 1..e {
        let other = q_power_minus_one(q, i);
        loop {
            let g = m.gcd(&other);
            if g.is_one() {
                break;
            }
            m /= g;
        }
    }
    m
}

/// Whether `Φ*_d(q) · Φ*_{d-1}(q)` divides `2 · group_order`.
///
/// Only meaningful for `t = 2` and `2 < k <= d/2`; callers reduce other
/// parameter sets first.
pub fn divisibility_filter(params: &DesignParams, group_order: &BigUint) -> bool {
    let q = params.q.value();
    let needed = primitive_part(q, params.d) * primitive_part(q, params.d - 1);
    (group_order * 2u32).is_multiple_of(&needed)
}

/// Values of `d(p^k-1)(p^{k-1}-1) / ((p^{d-1}-1)(p-1))` that are positive
/// integers, for `3 <= k <= d/2`.
pub fn singer_feasibility_scan(p: u64, d: u32) -> Vec<(u32, BigUint)> {
    let mut hits = Vec::new();
    for k in 3..=d / 2 {
        let num = BigUint::from(d) * q_power_minus_one(p, k) * q_power_minus_one(p, k - 1);
        let den = q_power_minus_one(p, d - 1) * BigUint::from(p - 1);
        if let Ok(e) = exact_div(num, den) {
            if !e.is_zero() {
                hits.push((k, e));
            }
        }
    }
    hits
}

/// A `1-(d,k,1)_q` spread can only exist when `k | d`.
pub fn spread_admissible(d: u32, k: u32) -> bool {
    k != 0 && d % k == 0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(t: u32, d: u32, k: u32, lambda: u64, q: u64) -> DesignParams {
        DesignParams::new(t, d, k, BigUint::from(lambda), PrimePower::new(q).unwrap()).unwrap()
    }

    /// Count RREF k×d matrices of rank k over F_2 by brute force over all
    /// bit matrices; independent of the product formula.
    fn count_rref_f2(d: u32, k: u32) -> u64 {
        let mut count = 0;
        let rows_total = 1u64 << d;
        let mut rows = vec![0u64; k as usize];
        fn rec(level: usize, rows: &mut Vec<u64>, total: u64, d: u32, count: &mut u64) {
            if level == rows.len() {
                // check RREF: leading bit (msb-first by column 0) and pivot columns clean
                let lead = |r: u64| if r == 0 { None } else { Some(d - 1 - (63 - r.leading_zeros())) };
                let mut last: Option<u32> = None;
                for &r in rows.iter() {
                    let Some(c) = lead(r) else { return };
                    if let Some(l) = last {
                        if c <= l {
                            return;
                        }
                    }
                    last = Some(c);
                    let bit = 1u64 << (d - 1 - c);
                    if rows.iter().filter(|&&o| o & bit != 0).count() != 1 {
                        return;
                    }
                }
                *count += 1;
                return;
            }
            for r in 1..total {
                rows[level] = r;
                rec(level + 1, rows, total, d, count);
            }
        }
        rec(0, &mut rows, rows_total, d, &mut count);
        count
    }

    #[test]
    fn gaussian_matches_rref_enumeration() {
        // frozen from the brute-force count above
        assert_eq!(count_rref_f2(4, 2), 35);
        assert_eq!(gaussian_binomial(4, 2, 2), BigUint::from(35u32));
        assert_eq!(count_rref_f2(6, 3), 1395);
        assert_eq!(gaussian_binomial(6, 3, 2), BigUint::from(1395u32));
    }

    #[test]
    fn gaussian_known_values() {
        assert_eq!(gaussian_binomial(11, 5, 2), BigUint::from(3_548_836_819u64));
        assert_eq!(gaussian_binomial(7, 3, 2), BigUint::from(11811u32));
        assert_eq!(gaussian_binomial(5, 2, 2), BigUint::from(155u32));
        for d in 0..8 {
            assert!(gaussian_binomial(d, 0, 3).is_one());
            assert!(gaussian_binomial(d, d, 3).is_one());
        }
        assert!(gaussian_binomial(3, 4, 2).is_zero());
    }

    #[test]
    fn q_pascal_and_symmetry() {
        for q in [2u64, 3, 4, 5] {
            for d in 1..=12u32 {
                for k in 0..=d {
                    let g = gaussian_binomial(d, k, q);
                    assert_eq!(g, gaussian_binomial(d, d - k, q));
                    if k >= 1 {
                        let rhs = gaussian_binomial(d - 1, k - 1, q)
                            + BigUint::from(q).pow(k) * gaussian_binomial(d - 1, k, q);
                        assert_eq!(g, rhs, "pascal d={d} k={k} q={q}");
                    }
                }
            }
        }
    }

    #[test]
    fn gaussian_dominates_binomial() {
        for d in 0..=12u32 {
            let mut binom = BigUint::one();
            for k in 0..=d {
                assert!(gaussian_binomial(d, k, 2) >= binom);
                binom = binom * (d - k) / (k + 1);
            }
        }
    }

    #[test]
    fn double_counting_identity() {
        for q in [2u64, 3] {
            for d in 2..=10u32 {
                for k in 1..=d {
                    for t in 0..=k {
                        let lhs = gaussian_binomial(d, k, q) * gaussian_binomial(k, t, q);
                        let rhs = gaussian_binomial(d, t, q) * gaussian_binomial(d - t, k - t, q);
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn block_counts() {
        assert_eq!(block_count(&params(2, 6, 3, 1, 2)).unwrap(), BigUint::from(93u32));
        assert_eq!(block_count(&params(2, 7, 3, 1, 2)).unwrap(), BigUint::from(381u32));
        assert_eq!(block_count(&params(2, 11, 5, 5, 2)).unwrap(), BigUint::from(22517u32));
        match block_count(&params(2, 11, 5, 1, 2)) {
            Err(QArithError::NonIntegral { numerator, denominator }) => {
                assert_eq!(numerator, BigUint::from(2_094_081u32));
                assert_eq!(denominator, BigUint::from(465u32));
            }
            other => panic!("expected NonIntegral, got {other:?}"),
        }
    }

    #[test]
    fn lambda_two_values() {
        assert_eq!(lambda_two(&params(2, 9, 4, 7, 3)).unwrap(), BigUint::from(7u32));
        assert_eq!(lambda_two(&params(3, 8, 4, 1, 2)).unwrap(), BigUint::from(21u32));
        let trivial = params(2, 6, 3, 15, 2);
        assert_eq!(lambda_two(&trivial).unwrap(), BigUint::from(15u32));
        assert_eq!(block_count(&trivial).unwrap(), gaussian_binomial(6, 3, 2));
        assert!(lambda_two(&params(1, 6, 3, 1, 2)).is_err());
    }

    #[test]
    fn dual_params_values() {
        let d = dual_params(&params(2, 6, 3, 4, 2)).unwrap();
        assert_eq!((d.t, d.d, d.k), (2, 6, 3));
        assert_eq!(d.lambda, BigUint::from(4u32));
        let d = dual_params(&params(2, 7, 3, 1, 2)).unwrap();
        assert_eq!(d.k, 4);
        assert_eq!(d.lambda, BigUint::from(5u32));
        // dual would have k' = t
        assert!(dual_params(&params(2, 6, 4, 1, 2)).is_err());
    }

    #[test]
    fn primitive_parts() {
        assert!(primitive_part(2, 6).is_one());
        assert_eq!(primitive_part(2, 11), BigUint::from(2047u32));
        assert_eq!(primitive_part(2, 4), BigUint::from(5u32));
        assert_eq!(primitive_part(2, 10), BigUint::from(11u32));
        for q in [2u64, 3, 7, 9] {
            assert_eq!(primitive_part(q, 1), BigUint::from(q - 1));
        }
    }

    #[test]
    fn primitive_part_definition() {
        for q in [2u64, 3, 5] {
            for e in 1..=20u32 {
                let pp = primitive_part(q, e);
                assert!(q_power_minus_one(q, e).is_multiple_of(&pp));
                for i in 1..e {
                    assert!(pp.gcd(&q_power_minus_one(q, i)).is_one());
                }
                // maximality: the cofactor has no prime that is primitive
                let cof = q_power_minus_one(q, e) / &pp;
                let mut rest = cof.clone();
                for i in 1..e {
                    loop {
                        let g = rest.gcd(&q_power_minus_one(q, i));
                        if g.is_one() {
                            break;
                        }
                        rest /= g;
                    }
                }
                assert!(rest.is_one(), "cofactor of q={q} e={e} not fully shared");
                if e >= 2 {
                    assert!(pp.is_odd(), "q={q} e={e}");
                }
            }
        }
    }

    #[test]
    fn divisibility_filter_cases() {
        assert!(divisibility_filter(&params(2, 11, 5, 5, 2), &BigUint::from(22517u32)));
        // Φ*_6(2) = 1, Φ*_5(2) = 31, and 31 does not divide 2
        assert!(!divisibility_filter(&params(2, 6, 3, 1, 2), &BigUint::one()));
        // |GL_d(q)| is always a multiple
        for (d, k, q) in [(6u32, 3u32, 2u64), (7, 3, 2), (8, 3, 3), (9, 4, 2)] {
            let mut gl = BigUint::one();
            for i in 0..d {
                gl *= BigUint::from(q).pow(d) - BigUint::from(q).pow(i);
            }
            assert!(divisibility_filter(&params(2, d, k, 1, q), &gl));
        }
    }

    #[test]
    fn singer_scan() {
        assert_eq!(singer_feasibility_scan(2, 11), vec![(5, BigUint::from(5u32))]);
        assert_eq!(singer_feasibility_scan(3, 7), vec![(3, BigUint::one())]);
        assert!(singer_feasibility_scan(2, 13).is_empty());
        assert!(singer_feasibility_scan(2, 19).is_empty());
        assert!(singer_feasibility_scan(5, 7).is_empty());
    }

    #[test]
    fn spreads_and_derived() {
        assert!(!spread_admissible(10, 4));
        assert!(spread_admissible(12, 4));
        assert!(spread_admissible(7, 7));
        let der = derived_params(&params(2, 11, 5, 1, 2)).unwrap();
        assert_eq!((der.t, der.d, der.k), (1, 10, 4));
        assert_eq!(der.lambda, BigUint::one());
        assert!(!spread_admissible(der.d, der.k));
        let der = derived_params(&params(2, 7, 3, 1, 2)).unwrap();
        assert_eq!((der.t, der.d, der.k), (1, 6, 2));
    }
}
