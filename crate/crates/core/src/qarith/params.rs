use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use super::{factor_u64, QArithError, Result};

/// `q = p^f` with `p` prime and `f >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PrimePower {
    p: u64,
    f: u32,
}

impl PrimePower {
    pub fn new(q: u64) -> Result<Self> {
        if q < 2 {
            return Err(QArithError::NotPrimePower(q));
        }
        let factors = factor_u64(q);
        match factors.as_slice() {
            [(p, f)] => Ok(PrimePower { p: *p, f: *f }),
            _ => Err(QArithError::NotPrimePower(q)),
        }
    }

    pub fn prime(p: u64) -> Result<Self> {
        let pp = Self::new(p)?;
        if pp.f != 1 {
            return Err(QArithError::NotPrimePower(p));
        }
        Ok(pp)
    }

    pub fn base(&self) -> u64 {
        self.p
    }

    pub fn exponent(&self) -> u32 {
        self.f
    }

    pub fn value(&self) -> u64 {
        self.p.pow(self.f)
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// A parameter tuple `t-(d,k,λ)_q`, satisfying `1 <= t < k <= d-1`, `λ >= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DesignParams {
    pub t: u32,
    pub d: u32,
    pub k: u32,
    pub lambda: BigUint,
    pub q: PrimePower,
}

impl DesignParams {
    pub fn new(t: u32, d: u32, k: u32, lambda: BigUint, q: PrimePower) -> Result<Self> {
        if !(1 <= t && t < k && k < d) {
            return Err(QArithError::InvalidParams(format!(
                "need 1 <= t < k <= d-1, got t={t} d={d} k={k}"
            )));
        }
        if lambda.is_zero() {
            return Err(QArithError::InvalidParams("lambda must be positive".into()));
        }
        Ok(DesignParams { t, d, k, lambda, q })
    }
}

impl fmt::Display for DesignParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-({},{},{})_{}", self.t, self.d, self.k, self.lambda, self.q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_powers() {
        let q = PrimePower::new(9).unwrap();
        assert_eq!((q.base(), q.exponent(), q.value()), (3, 2, 9));
        assert!(PrimePower::new(6).is_err());
        assert!(PrimePower::new(1).is_err());
        assert!(PrimePower::prime(4).is_err());
        assert_eq!(PrimePower::prime(2).unwrap().value(), 2);
    }

    #[test]
    fn param_bounds() {
        let q = PrimePower::new(2).unwrap();
        assert!(DesignParams::new(2, 6, 3, BigUint::from(1u32), q).is_ok());
        assert!(DesignParams::new(2, 6, 6, BigUint::from(1u32), q).is_err());
        assert!(DesignParams::new(3, 6, 3, BigUint::from(1u32), q).is_err());
        assert!(DesignParams::new(0, 6, 3, BigUint::from(1u32), q).is_err());
        assert!(DesignParams::new(2, 6, 3, BigUint::zero(), q).is_err());
    }
}
