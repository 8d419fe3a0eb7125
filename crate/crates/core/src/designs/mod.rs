//! Subspace designs: brute-force verification, duality, and the
//! orbit-based (Kramer-Mesner) test for designs invariant under a group.

mod blocks;
mod km;
mod search;

pub use blocks::{dual_blocks, verify_design, BlockSet, DesignVerdict, Witness};
pub use km::{km_profile, orbit_is_design, KMColumn, KMIndex, KMProfile, OrbitVerdict};
pub use search::{km_search, km_search_profiles, SearchOptions};

use crate::matgroup::MatGroupError;
use crate::qarith::QArithError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DesignError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("incomplete census: {0}")]
    IncompleteCensus(String),
    #[error("inconsistent orbit data: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Group(#[from] MatGroupError),
    #[error(transparent)]
    Arith(#[from] QArithError),
}

pub type Result<T> = std::result::Result<T, DesignError>;
