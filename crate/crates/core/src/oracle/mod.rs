//! Brute-force verification layer.
//!
//! Nothing in here calls the closed-form eigenvalue or perturbative code; the
//! checks in [`crate::verify`] and the test suites compare the two sides.

mod evolve;
mod fit;
mod jacobi;
mod partial_trace;
mod truncated;

pub use evolve::{
    evolve_ramped, smoothstep, suggested_step, RampOrdering, RampOutcome, RampProfile,
    MAX_NORM_DRIFT, MAX_STEP_PRODUCT,
};
pub use fit::{polynomial_fit, PolyFit, MAX_CONDITION};
pub use jacobi::{dense_block_eigen, symmetric_eigen, BlockEigen, SymmetricEigen};
pub use partial_trace::{partial_trace, BasisAmplitudes};
pub use truncated::{
    build_truncated_hamiltonian, AtomLevel, BasisState, CouplingKind, TruncatedHamiltonian,
    DEFAULT_DIMENSION_CAP,
};
