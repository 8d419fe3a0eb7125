//! Explicit matrix groups over prime fields and their orbits on the
//! Grassmannian of `k`-subspaces.
//!
//! Elements act on row vectors from the right, `v ↦ v·g`, so
//! `act(act(s, g), h) = act(s, g·h)`.

mod census;
mod construct;
mod element;
mod group;
mod singer_key;

pub use census::{orbit_census, run_census, CensusOptions, OrbitCensus, Strategy};
pub use construct::{
    default_poly, frobenius_element, gamma_l1, hyperplane_levi, singer_element, sl_generators, sl_order,
    special_linear, Poly,
};
pub use element::{act, element_order, GroupElement};
pub use group::{MatGroup, OrbitKey};
pub use singer_key::SingerLogTable;

pub(crate) use element::apply_images;

use crate::gflinalg::GfError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatGroupError {
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),
    #[error("polynomial is not primitive: {0}")]
    NotPrimitive(String),
    #[error("bad polynomial: {0}")]
    BadPolynomial(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("orbit exceeds the cap of {0} subspaces")]
    OrbitBudgetExceeded(u64),
    #[error("group order mismatch: known {known}, enumerated {found}")]
    GroupOrderMismatch { known: String, found: String },
    #[error("group order required: {0}")]
    UnknownOrder(String),
    #[error(transparent)]
    Field(#[from] GfError),
}

pub type Result<T> = std::result::Result<T, MatGroupError>;
