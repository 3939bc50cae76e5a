//! Isotone convex analysis at desk scale.
//!
//! * [`capacity`]: capacities on finite ground sets, distorted probabilities,
//!   exhaustive submodularity checks.
//! * [`choquet`]: exact discrete Choquet integration and its property suites.
//! * [`bkc`]: the Bernstein-Kantorovich-Choquet operator on `C([0, 1])`.
//! * [`matrix_order`]: the Löwner order on symmetric matrices, the largest
//!   eigenvalue operator and its subgradients, matrix powers.
//! * [`isotone_certify`]: LP-backed isotonicity certificates for max-affine
//!   convex maps.
//! * [`demo`]: positive linear minorants of vector Choquet functionals and the
//!   symmetric-matrix walkthrough used by the command-line tool.

pub mod bkc;
pub mod capacity;
pub mod choquet;
pub mod demo;
pub mod isotone_certify;
pub mod lp;
pub mod matrix_order;
pub mod report;
pub mod rng;

pub use capacity::{Capacity, CapacityError, DistortionFn, SubsetMask};
pub use choquet::{choquet_discrete, DiscreteFunction};
pub use report::{PropertyOutcome, PropertyReport};
