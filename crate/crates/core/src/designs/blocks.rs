use std::collections::{BTreeSet, HashMap};

use num_bigint::BigUint;
use serde::Serialize;

use super::{DesignError, Result};
use crate::gflinalg::{encode, enumerate_subspaces, orthogonal_complement, subspaces_of, Subspace};
use crate::matgroup::MatGroup;
use crate::qarith::gaussian_binomial;

/// A set of `k`-subspaces of `F_p^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSet {
    d: u32,
    k: u32,
    p: u64,
    blocks: BTreeSet<Subspace>,
}

impl BlockSet {
    pub fn new(d: u32, k: u32, p: u64) -> Self {
        BlockSet { d, k, p, blocks: BTreeSet::new() }
    }

    pub fn from_blocks(d: u32, k: u32, p: u64, blocks: impl IntoIterator<Item = Subspace>) -> Result<Self> {
        let mut set = BlockSet::new(d, k, p);
        for b in blocks {
            set.insert(b)?;
        }
        Ok(set)
    }

    /// Every `k`-subspace: the trivial design.
    pub fn complete(d: u32, k: u32, p: u64) -> Self {
        BlockSet { d, k, p, blocks: enumerate_subspaces(d, k, p).collect() }
    }

    /// The orbit of `rep` under `group`, materialised.
    pub fn from_orbit(group: &MatGroup, rep: &Subspace, cap: u64) -> Result<Self> {
        let orbit = group.orbit(rep, cap)?;
        BlockSet::from_blocks(rep.ambient_dim(), rep.dim(), rep.modulus(), orbit)
    }

    /// Adds a block; false if already present.
    pub fn insert(&mut self, b: Subspace) -> Result<bool> {
        if b.ambient_dim() != self.d || b.modulus() != self.p || b.dim() != self.k {
            return Err(DesignError::InvalidArgument(format!(
                "block {b} in a set of {}-subspaces of F_{}^{}",
                self.k, self.p, self.d
            )));
        }
        Ok(self.blocks.insert(b))
    }

    pub fn dims(&self) -> (u32, u32, u64) {
        (self.d, self.k, self.p)
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Subspace> {
        self.blocks.iter()
    }

    pub fn contains(&self, b: &Subspace) -> bool {
        self.blocks.contains(b)
    }
}

/// Two `t`-subspaces lying in different numbers of blocks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    #[serde(serialize_with = "ser_subspace")]
    pub first: Subspace,
    #[serde(serialize_with = "ser_big")]
    pub first_count: BigUint,
    #[serde(serialize_with = "ser_subspace")]
    pub second: Subspace,
    #[serde(serialize_with = "ser_big")]
    pub second_count: BigUint,
}

pub(crate) fn ser_subspace<S: serde::Serializer>(s: &Subspace, ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.serialize_str(&encode(s))
}

pub(crate) fn ser_big<S: serde::Serializer>(n: &BigUint, ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.serialize_str(&n.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DesignVerdict {
    Design { lambda: BigUint },
    NotDesign(Witness),
}

impl DesignVerdict {
    pub fn lambda(&self) -> Option<&BigUint> {
        match self {
            DesignVerdict::Design { lambda } => Some(lambda),
            DesignVerdict::NotDesign(_) => None,
        }
    }
}

/// Counts, for every `t`-subspace, the blocks containing it. `budget`
/// bounds the number of `t`-subspaces of the ambient space.
pub fn verify_design(blocks: &BlockSet, t: u32, budget: u64) -> Result<DesignVerdict> {
    let (d, k, p) = blocks.dims();
    if t >= k {
        return Err(DesignError::InvalidArgument(format!("t = {t} must be below k = {k}")));
    }
    if gaussian_binomial(d, t, p) > BigUint::from(budget) {
        return Err(DesignError::BudgetExceeded(format!(
            "{} {t}-subspaces of F_{p}^{d} exceed the budget of {budget}",
            gaussian_binomial(d, t, p)
        )));
    }
    let mut counts: HashMap<Subspace, u64> = HashMap::new();
    for b in blocks.iter() {
        for sub in subspaces_of(b, t) {
            *counts.entry(sub).or_default() += 1;
        }
    }
    let mut first: Option<(Subspace, u64)> = None;
    for s in enumerate_subspaces(d, t, p) {
        let c = counts.get(&s).copied().unwrap_or(0);
        match &first {
            None => first = Some((s, c)),
            Some((f, fc)) if *fc != c => {
                return Ok(DesignVerdict::NotDesign(Witness {
                    first: f.clone(),
                    first_count: BigUint::from(*fc),
                    second: s,
                    second_count: BigUint::from(c),
                }))
            }
            Some(_) => {}
        }
    }
    let lambda = first.map_or(0, |(_, c)| c);
    Ok(DesignVerdict::Design { lambda: BigUint::from(lambda) })
}

/// `U ↦ U^⊥` under the standard dot product.
pub fn dual_blocks(blocks: &BlockSet) -> BlockSet {
    let (d, k, p) = blocks.dims();
    BlockSet { d, k: d - k, p, blocks: blocks.iter().map(orthogonal_complement).collect() }
}
