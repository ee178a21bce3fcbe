//! Independent checks by brute force: point counts of contact loci over
//! small prime fields, and Milnor numbers by linear algebra on the Jacobian
//! ideal. The counts test the affine-bundle structure of the order
//! stratification; they do not by themselves determine cohomology.

mod jets;
mod milnor;
mod poly;

pub use jets::{
    check_smooth_reduction, count_base, count_contact_jets, count_contact_jets_naive, is_prime,
    verify_stratification, BaseCounts, JetCountReport, DEFAULT_BUDGET,
};
pub use milnor::{milnor_algebra_dims, milnor_number_oracle};
pub use poly::{SparseIntPoly, Term};
