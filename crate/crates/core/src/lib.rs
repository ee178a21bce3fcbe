//! Invariants of semihomogeneous hypersurface singularities `f = h + F` in
//! `n` variables, with `h` homogeneous of degree `d`, attached to the
//! contact order `m`.
//!
//! The crate computes the minimal m-separating resolution chain, the
//! compactly supported cohomology of the restricted contact locus, the two
//! `E_1` pages that compute it and Floer cohomology of the monodromy
//! iterates, the dlt / contact / essential m-valuations, and a finite-field
//! jet count that checks the geometric predictions independently.

mod bigint_serde;

pub mod arith;
pub mod contact;
pub mod error;
pub mod group;
pub mod nash;
pub mod oracle;
pub mod resolution;
pub mod spectral;
pub mod topology;

pub use arith::CoprimePair;
pub use error::{Error, Result};
pub use group::{FgAbGroup, GradedGroup};
