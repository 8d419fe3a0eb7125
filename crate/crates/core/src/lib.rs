//! Computation with subspace designs over finite fields.
//!
//! - [`qarith`]: exact design-parameter arithmetic and necessary conditions.
//! - [`gflinalg`]: prime-field linear algebra and canonical subspaces.
//! - [`matgroup`]: explicit matrix groups and their orbits on Grassmannians.
//! - [`designs`]: brute-force and orbit-based (Kramer-Mesner) verification.

pub mod designs;
pub mod gflinalg;
pub mod matgroup;
pub mod qarith;

pub use gflinalg::{Mat, Subspace};
pub use matgroup::{GroupElement, MatGroup, OrbitCensus};
pub use qarith::{DesignParams, PrimePower};
