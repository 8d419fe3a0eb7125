use std::collections::HashMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use super::blocks::{ser_big, ser_subspace};
use super::{DesignError, Result, Witness};
use crate::gflinalg::{subspaces_of, Subspace};
use crate::matgroup::{MatGroup, OrbitCensus, OrbitKey};
use crate::qarith::{block_count, gaussian_binomial, DesignParams, PrimePower};

/// Explicit member tables are built for `t`-Grassmannians up to this size
/// when the group has no fast orbit key.
const MEMBER_TABLE_LIMIT: u64 = 2_000_000;

/// One `t`-orbit column of a Kramer-Mesner row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KMColumn {
    #[serde(serialize_with = "ser_subspace")]
    pub rep: Subspace,
    #[serde(serialize_with = "ser_big")]
    pub orbit_size: BigUint,
    /// Blocks of the block orbit containing any fixed member of this
    /// `t`-orbit.
    #[serde(serialize_with = "ser_big")]
    pub count: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KMProfile {
    #[serde(serialize_with = "ser_subspace")]
    pub block_rep: Subspace,
    #[serde(serialize_with = "ser_big")]
    pub block_orbit_size: BigUint,
    pub t: u32,
    pub columns: Vec<KMColumn>,
}

impl KMProfile {
    /// `Σ c_i·|T_i| = |block orbit|·[k t]_p`.
    pub fn incidence_conserved(&self) -> bool {
        let k = self.block_rep.dim();
        let p = self.block_rep.modulus();
        let lhs: BigUint = self.columns.iter().map(|c| &c.count * &c.orbit_size).sum();
        lhs == &self.block_orbit_size * gaussian_binomial(k, self.t, p)
    }

    /// The common count when all columns agree.
    pub fn constant(&self) -> Option<&BigUint> {
        let first = &self.columns.first()?.count;
        self.columns.iter().all(|c| &c.count == first).then_some(first)
    }

    /// Two columns with distinct counts, if any.
    pub fn witness(&self) -> Option<Witness> {
        let first = self.columns.first()?;
        let other = self.columns.iter().find(|c| c.count != first.count)?;
        Some(Witness {
            first: first.rep.clone(),
            first_count: first.count.clone(),
            second: other.rep.clone(),
            second_count: other.count.clone(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitVerdict {
    Design,
    /// The orbit size is not the block count the parameters require
    /// (`required` is `None` when no integral block count exists).
    SizeMismatch { required: Option<BigUint>, actual: BigUint },
    NotDesign(Witness),
    /// Constant counts, but a different λ.
    OtherLambda(BigUint),
}

impl OrbitVerdict {
    pub fn is_design(&self) -> bool {
        matches!(self, OrbitVerdict::Design)
    }
}

enum Lookup {
    Keys(HashMap<OrbitKey, usize>),
    Members(HashMap<Subspace, usize>),
}

/// Resolves `t`-subspaces to their column in a complete `t`-orbit census.
pub struct KMIndex<'a> {
    group: &'a MatGroup,
    census: &'a OrbitCensus,
    reps: Vec<(&'a Subspace, &'a BigUint)>,
    lookup: Lookup,
    cap: u64,
}

impl<'a> KMIndex<'a> {
    pub fn new(group: &'a MatGroup, t_census: &'a OrbitCensus, cap: u64) -> Result<Self> {
        if !t_census.is_complete() {
            return Err(DesignError::IncompleteCensus(format!(
                "certificate {} of {}",
                t_census.certificate(),
                t_census.expected()
            )));
        }
        let (d, _, p) = t_census.dims();
        if t_census.group() != group.name() || d != group.dim() || p != group.modulus() {
            return Err(DesignError::Inconsistent(format!(
                "census of {} used with group {}",
                t_census.group(),
                group.name()
            )));
        }
        let reps: Vec<_> = t_census.entries().collect();
        let lookup = if !group.has_fast_key() && *t_census.expected() <= BigUint::from(MEMBER_TABLE_LIMIT) {
            let mut members = HashMap::new();
            for (i, (rep, _)) in reps.iter().enumerate() {
                for m in group.orbit(rep, cap)? {
                    members.insert(m, i);
                }
            }
            Lookup::Members(members)
        } else {
            let mut keys = HashMap::new();
            for (i, (rep, _)) in reps.iter().enumerate() {
                keys.insert(group.orbit_key(rep, cap)?, i);
            }
            Lookup::Keys(keys)
        };
        Ok(KMIndex { group, census: t_census, reps, lookup, cap })
    }

    pub fn t(&self) -> u32 {
        self.census.dims().1
    }

    pub fn column_of(&self, s: &Subspace) -> Result<usize> {
        let found = match &self.lookup {
            Lookup::Members(m) => m.get(s).copied(),
            Lookup::Keys(m) => m.get(&self.group.orbit_key(s, self.cap)?).copied(),
        };
        found.ok_or_else(|| DesignError::Inconsistent(format!("{s} is in no orbit of the census")))
    }

    /// `c_i = |block orbit|·n_i / |T_i|`, where `n_i` counts the
    /// `t`-subspaces of the representative lying in the `i`-th `t`-orbit.
    pub fn profile(&self, block_rep: &Subspace, block_orbit_size: &BigUint) -> Result<KMProfile> {
        let t = self.t();
        if block_rep.dim() <= t {
            return Err(DesignError::InvalidArgument(format!(
                "block dimension {} must exceed t = {t}",
                block_rep.dim()
            )));
        }
        let mut tally = vec![0u64; self.reps.len()];
        for sub in subspaces_of(block_rep, t) {
            tally[self.column_of(&sub)?] += 1;
        }
        let mut columns = Vec::with_capacity(self.reps.len());
        for ((rep, size), n) in self.reps.iter().zip(tally) {
            let (count, rem) = (block_orbit_size * n).div_rem(size);
            if !rem.is_zero() {
                return Err(DesignError::Inconsistent(format!(
                    "non-integral incidence count {block_orbit_size}·{n}/{size} at {rep}"
                )));
            }
            columns.push(KMColumn { rep: (*rep).clone(), orbit_size: (*size).clone(), count });
        }
        Ok(KMProfile { block_rep: block_rep.clone(), block_orbit_size: block_orbit_size.clone(), t, columns })
    }

    /// Size pre-filter, then the constancy test on the profile.
    pub fn orbit_is_design(&self, block_rep: &Subspace, block_orbit_size: &BigUint, lambda: &BigUint) -> Result<OrbitVerdict> {
        let (d, k, p) = (block_rep.ambient_dim(), block_rep.dim(), block_rep.modulus());
        let params = DesignParams::new(self.t(), d, k, lambda.clone(), PrimePower::prime(p)?)?;
        let required = block_count(&params).ok();
        if required.as_ref() != Some(block_orbit_size) {
            return Ok(OrbitVerdict::SizeMismatch { required, actual: block_orbit_size.clone() });
        }
        let profile = self.profile(block_rep, block_orbit_size)?;
        Ok(match (profile.constant(), profile.witness()) {
            (Some(c), _) if c == lambda => OrbitVerdict::Design,
            (Some(c), _) => OrbitVerdict::OtherLambda(c.clone()),
            (None, Some(w)) => OrbitVerdict::NotDesign(w),
            (None, None) => unreachable!("a non-constant profile has two distinct columns"),
        })
    }

    /// Profiles of every orbit in `blocks`, split across `parallelism`
    /// threads; order follows the census.
    pub fn profiles(&self, blocks: &OrbitCensus, parallelism: usize) -> Result<Vec<KMProfile>> {
        let rows: Vec<_> = blocks.entries().collect();
        let chunk = rows.len().div_ceil(parallelism.max(1)).max(1);
        std::thread::scope(|scope| {
            let handles: Vec<_> = rows
                .chunks(chunk)
                .map(|part| scope.spawn(move || part.iter().map(|(r, s)| self.profile(r, s)).collect::<Result<Vec<_>>>()))
                .collect();
            let mut out = Vec::with_capacity(rows.len());
            for h in handles {
                out.extend(h.join().expect("profile worker panicked")?);
            }
            Ok(out)
        })
    }
}

pub fn km_profile(
    group: &MatGroup,
    block_rep: &Subspace,
    block_orbit_size: &BigUint,
    t_census: &OrbitCensus,
) -> Result<KMProfile> {
    KMIndex::new(group, t_census, u64::MAX)?.profile(block_rep, block_orbit_size)
}

pub fn orbit_is_design(
    group: &MatGroup,
    block_rep: &Subspace,
    block_orbit_size: &BigUint,
    t_census: &OrbitCensus,
    lambda: &BigUint,
) -> Result<OrbitVerdict> {
    KMIndex::new(group, t_census, u64::MAX)?.orbit_is_design(block_rep, block_orbit_size, lambda)
}
