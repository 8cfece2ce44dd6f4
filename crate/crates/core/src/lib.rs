//! Adiabatic electromagnetically induced transparency (EIT) of a three-level
//! Λ atom driven by two quantized laser modes.
//!
//! The crate is organised bottom-up:
//!
//! * [`hamiltonian`] builds the 3×3 invariant blocks of the interaction-picture
//!   Hamiltonian and solves them in closed form (trigonometric Cardano).
//! * [`dressed`] holds the first-order-in-detuning eigenvalues and dressed-state
//!   coefficients, including the dark state.
//! * [`field`] and [`state`] construct the adiabatically prepared state, the
//!   reduced atomic density matrix and the optical coherences.
//! * [`optics`] and [`nonlinear`] turn coherences into susceptibilities, group
//!   velocities, index changes and the nonlinear index series.
//! * [`oracle`] is an independent brute-force layer (truncated Fock-space
//!   Hamiltonian, Jacobi eigensolver, RK4 ramped evolution, least-squares fits)
//!   that never calls the closed-form code it checks.
//! * [`verify`] bundles the oracle comparisons into reproducible suites.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constants;
pub mod dressed;
pub mod error;
pub mod field;
pub mod hamiltonian;
pub mod nonlinear;
pub mod optics;
pub mod oracle;
pub mod params;
pub mod presets;
pub mod state;
pub mod summation;
pub mod verify;

pub use num_complex::Complex64;

pub use dressed::{DressedTriple, RabiPair};
pub use error::{EitError, Result};
pub use field::{FieldAmplitudes, FieldKind, FieldSpec, JointAmplitudes};
pub use hamiltonian::{Branch, CubicIntermediates, EigenTriple, Mat3};
pub use nonlinear::{ChiSeries, CoefficientRatios, NonlinearCoefficients, SeriesAudit};
pub use optics::{OpticalResponse, RabiInterpretation};
pub use params::{FockBlock, SystemParams};
pub use presets::ExperimentPreset;
pub use state::{AdiabaticState, AtomDensityMatrix};
