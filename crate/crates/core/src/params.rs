use serde::{Deserialize, Serialize};

use crate::error::{EitError, Result};

/// Physical inputs of the atom + two-mode field system.
///
/// Energies are angular frequencies (the Hamiltonian divided by ħ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Probe coupling constant g₁, rad/s.
    pub g1: f64,
    /// Coupling-mode coupling constant g₂, rad/s.
    pub g2: f64,
    /// Probe detuning Δ₁, rad/s.
    pub delta1: f64,
    /// Coupling detuning Δ₂, rad/s.
    pub delta2: f64,
    /// Probe angular frequency ω₁, rad/s.
    pub omega1: f64,
    /// Coupling angular frequency ω₂, rad/s.
    pub omega2: f64,
    /// Dipole element μ₁₂, C·m.
    pub mu12: f64,
    /// Dipole element μ₃₂, C·m.
    pub mu32: f64,
    /// Atom number density N, m⁻³.
    pub atom_density: f64,
    /// Quantization volume V, m³.
    pub mode_volume: f64,
}

impl SystemParams {
    /// Parameters for block-level work where only couplings and detunings
    /// matter; every other field is set to 1.
    pub fn dimensionless(g1: f64, g2: f64, delta1: f64, delta2: f64) -> Self {
        Self {
            g1,
            g2,
            delta1,
            delta2,
            omega1: 1.0,
            omega2: 1.0,
            mu12: 1.0,
            mu32: 1.0,
            atom_density: 1.0,
            mode_volume: 1.0,
        }
    }

    pub fn with_detunings(mut self, delta1: f64, delta2: f64) -> Self {
        self.delta1 = delta1;
        self.delta2 = delta2;
        self
    }

    /// Two-photon detuning Δ₁ − Δ₂.
    pub fn two_photon_detuning(&self) -> f64 {
        self.delta1 - self.delta2
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("g1", self.g1),
            ("g2", self.g2),
            ("omega1", self.omega1),
            ("omega2", self.omega2),
            ("mu12", self.mu12),
            ("mu32", self.mu32),
            ("atom_density", self.atom_density),
            ("mode_volume", self.mode_volume),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(EitError::InvalidParameter {
                    name,
                    value,
                    reason: "must be finite and > 0",
                });
            }
        }
        for (name, value) in [("delta1", self.delta1), ("delta2", self.delta2)] {
            if !value.is_finite() {
                return Err(EitError::InvalidParameter {
                    name,
                    value,
                    reason: "must be finite",
                });
            }
        }
        Ok(())
    }
}

/// A three-dimensional invariant subspace anchored at |1, n₁, n₂⟩.
///
/// Basis order: |1,n₁,n₂⟩, |2,n₁−1,n₂⟩, |3,n₁−1,n₂+1⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FockBlock {
    n1: u32,
    n2: u32,
}

impl FockBlock {
    pub fn new(n1: u32, n2: u32) -> Result<Self> {
        if n1 == 0 {
            return Err(EitError::UncoupledBlock);
        }
        Ok(Self { n1, n2 })
    }

    pub fn n1(&self) -> u32 {
        self.n1
    }

    pub fn n2(&self) -> u32 {
        self.n2
    }
}
