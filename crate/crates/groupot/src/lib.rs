//! Exact optimal transport with coefficients in normed abelian groups.
//!
//! Masses live in an abelian group `G` carrying a norm rather than in the
//! nonnegative reals, so transport plans are antisymmetric `G`-valued
//! matrices and cancellation between opposite flows is possible. This crate
//! solves such problems exactly over the rationals and analyzes the
//! structural properties that decide when cheap local certificates
//! (normed balancedness, collinear zero-sum triples, tree calibrations)
//! exist.

pub mod error;
pub mod scalar;
pub mod linear;
pub mod group;
pub mod metric;
pub mod plan;
pub mod solver;
pub mod report;
pub mod sampled;
pub mod structure;
pub mod nbp;
pub mod polytope;
pub mod calib;
pub mod chain;
pub mod classify;
pub mod czt;
pub mod feasibility;

pub use error::{Error, ErrorCategory, Result};
pub use scalar::Scalar;
