//! Ramped Schrödinger evolution on the truncated basis.
//!
//! The couplings are switched on one after the other with a quintic
//! smoothstep. The run starts from |1⟩ ⊗ field and the result is compared
//! with the dark-state superposition at full coupling, with each block
//! carrying the phase ∫E⁰ dt accumulated along the ramp (the interaction-frame
//! Hamiltonian has no free photon energies).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dressed::{perturbative_eigenvalues_for, DressedTriple, RabiPair};
use crate::error::{EitError, Result};
use crate::field::FieldSpec;
use crate::oracle::partial_trace::BasisAmplitudes;
use crate::oracle::truncated::{AtomLevel, BasisState, TruncatedHamiltonian, DEFAULT_DIMENSION_CAP};
use crate::params::SystemParams;
use crate::state::{AdiabaticState, DarkTerm};

/// Largest admissible max-frequency × step.
pub const MAX_STEP_PRODUCT: f64 = 0.05;
/// Largest admissible relative norm drift.
pub const MAX_NORM_DRIFT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RampOrdering {
    /// g₂ first, then g₁.
    CouplingFirst,
    /// g₁ first, then g₂ (diagnostic).
    ProbeFirst,
}

/// Two sequential smoothstep ramps, each of length `ramp_duration`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RampProfile {
    pub total_time: f64,
    pub t_on_g1: f64,
    pub t_on_g2: f64,
    pub ramp_duration: f64,
}

/// C² quintic smoothstep 10s³ − 15s⁴ + 6s⁵ clamped to [0, 1].
pub fn smoothstep(s: f64) -> f64 {
    let s = s.clamp(0.0, 1.0);
    s * s * s * (10.0 + s * (-15.0 + 6.0 * s))
}

impl RampProfile {
    /// First field over [0, T/2], second over [T/2, T].
    pub fn sequential(total_time: f64, ordering: RampOrdering) -> Self {
        let half = total_time / 2.0;
        let (t_on_g2, t_on_g1) = match ordering {
            RampOrdering::CouplingFirst => (0.0, half),
            RampOrdering::ProbeFirst => (half, 0.0),
        };
        Self {
            total_time,
            t_on_g1,
            t_on_g2,
            ramp_duration: half,
        }
    }

    pub fn ordering(&self) -> RampOrdering {
        if self.t_on_g2 <= self.t_on_g1 {
            RampOrdering::CouplingFirst
        } else {
            RampOrdering::ProbeFirst
        }
    }

    /// (scale_g1, scale_g2) at time t.
    pub fn scales(&self, t: f64) -> (f64, f64) {
        (
            smoothstep((t - self.t_on_g1) / self.ramp_duration),
            smoothstep((t - self.t_on_g2) / self.ramp_duration),
        )
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("total_time", self.total_time),
            ("ramp_duration", self.ramp_duration),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(EitError::InvalidParameter {
                    name,
                    value: v,
                    reason: "must be positive and finite",
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RampOutcome {
    /// |⟨Ψ_adiabatic|ψ(T)⟩|² / (‖Ψ_adiabatic‖² ‖ψ(T)‖²).
    pub fidelity: f64,
    /// |‖ψ(T)‖² − ‖ψ(0)‖²| / ‖ψ(0)‖².
    pub norm_drift: f64,
    pub steps: usize,
    pub dt: f64,
    pub dim: usize,
    pub basis: Vec<BasisState>,
    pub final_state: Vec<Complex64>,
}

/// Step size that keeps max-frequency × dt at `fraction` of the bound.
pub fn suggested_step(params: &SystemParams, field: &FieldSpec, fraction: f64) -> Result<f64> {
    let h = TruncatedHamiltonian::build(
        params,
        field.trunc1,
        field.trunc2,
        1.0,
        1.0,
        DEFAULT_DIMENSION_CAP,
    )?;
    Ok(fraction * MAX_STEP_PRODUCT / h.max_frequency())
}

fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum()
}

pub fn evolve_ramped(
    params: &SystemParams,
    field: &FieldSpec,
    ramp: &RampProfile,
    dt: f64,
) -> Result<RampOutcome> {
    ramp.validate()?;
    let amps = field.amplitudes();
    let h = TruncatedHamiltonian::build(
        params,
        amps.trunc1(),
        amps.trunc2(),
        1.0,
        1.0,
        DEFAULT_DIMENSION_CAP,
    )?;
    let product = h.max_frequency() * dt;
    if !(dt > 0.0) || product >= MAX_STEP_PRODUCT {
        return Err(EitError::StepTooLarge { product });
    }

    let dim = h.dim();
    let mut psi = vec![Complex64::new(0.0, 0.0); dim];
    let mut blocks = Vec::new();
    for n1 in 0..=amps.trunc1() {
        for n2 in 0..=amps.trunc2() {
            let c = amps.get(n1, n2);
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            let i = h
                .index_of(BasisState::new(AtomLevel::One, n1, n2))
                .expect("anchor present by construction");
            psi[i] = c;
            blocks.push((n1, n2, c));
        }
    }
    let initial_norm = norm_sqr(&psi);

    let rabi_full: Vec<RabiPair> = blocks
        .iter()
        .map(|&(n1, n2, _)| {
            RabiPair::from_photon_numbers(params.g1, params.g2, f64::from(n1), f64::from(n2))
        })
        .collect();
    let dark_energy = |rabi: &RabiPair, s: (f64, f64)| -> f64 {
        let scaled = RabiPair::new(rabi.omega1 * s.0, rabi.omega2 * s.1);
        if scaled.omega_total == 0.0 {
            return 0.0;
        }
        perturbative_eigenvalues_for(&scaled, params.delta1, params.delta2).zero
    };

    let steps = (ramp.total_time / dt).ceil() as usize;
    let step = ramp.total_time / steps as f64;
    let mut phases = vec![0.0f64; blocks.len()];
    let mut k = [
        vec![Complex64::new(0.0, 0.0); dim],
        vec![Complex64::new(0.0, 0.0); dim],
        vec![Complex64::new(0.0, 0.0); dim],
        vec![Complex64::new(0.0, 0.0); dim],
    ];
    let mut tmp = vec![Complex64::new(0.0, 0.0); dim];

    for n in 0..steps {
        let t = n as f64 * step;
        let s0 = ramp.scales(t);
        let sm = ramp.scales(t + 0.5 * step);
        let s1 = ramp.scales(t + step);

        h.apply_minus_i(s0.0, s0.1, &psi, &mut k[0]);
        for ((o, p), d) in tmp.iter_mut().zip(&psi).zip(&k[0]) {
            *o = p + d * (0.5 * step);
        }
        h.apply_minus_i(sm.0, sm.1, &tmp, &mut k[1]);
        for ((o, p), d) in tmp.iter_mut().zip(&psi).zip(&k[1]) {
            *o = p + d * (0.5 * step);
        }
        h.apply_minus_i(sm.0, sm.1, &tmp, &mut k[2]);
        for ((o, p), d) in tmp.iter_mut().zip(&psi).zip(&k[2]) {
            *o = p + d * step;
        }
        h.apply_minus_i(s1.0, s1.1, &tmp, &mut k[3]);
        for (i, p) in psi.iter_mut().enumerate() {
            *p += (k[0][i] + k[1][i] * 2.0 + k[2][i] * 2.0 + k[3][i]) * (step / 6.0);
        }

        // Simpson on the same nodes
        for (phase, rabi) in phases.iter_mut().zip(&rabi_full) {
            *phase += step / 6.0
                * (dark_energy(rabi, s0) + 4.0 * dark_energy(rabi, sm) + dark_energy(rabi, s1));
        }
    }

    let final_norm = norm_sqr(&psi);
    let norm_drift = (final_norm - initial_norm).abs() / initial_norm;
    if norm_drift > MAX_NORM_DRIFT {
        return Err(EitError::NormDrift { drift: norm_drift });
    }

    let target = AdiabaticState {
        time: ramp.total_time,
        terms: blocks
            .iter()
            .zip(&rabi_full)
            .zip(&phases)
            .map(|((&(n1, n2, c), rabi), &phase)| DarkTerm {
                n1,
                n2,
                amplitude: c * Complex64::from_polar(1.0, -phase),
                triple: DressedTriple::dark(rabi, params.delta1, params.delta2),
            })
            .collect(),
    };
    let target = BasisAmplitudes::from_state(&target);
    let mut overlap = Complex64::new(0.0, 0.0);
    for (s, v) in &target.amplitudes {
        if let Some(i) = h.index_of(*s) {
            overlap += v.conj() * psi[i];
        }
    }
    let fidelity = overlap.norm_sqr() / (target.norm_sqr() * final_norm);

    Ok(RampOutcome {
        fidelity,
        norm_drift,
        steps,
        dt: step,
        dim,
        basis: h.basis().to_vec(),
        final_state: psi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smoothstep_shape() {
        assert_eq!(smoothstep(-1.0), 0.0);
        assert_eq!(smoothstep(0.0), 0.0);
        assert_eq!(smoothstep(0.5), 0.5);
        assert_eq!(smoothstep(1.0), 1.0);
        assert_eq!(smoothstep(3.0), 1.0);
        let mut prev = 0.0;
        for i in 1..=100 {
            let v = smoothstep(f64::from(i) / 100.0);
            assert!(v >= prev);
            prev = v;
        }
        // zero slope at both ends
        let h = 1e-6;
        assert!(smoothstep(h) / h < 1e-9);
        assert!((1.0 - smoothstep(1.0 - h)) / h < 1e-9);
    }

    #[test]
    fn orderings() {
        let r = RampProfile::sequential(10.0, RampOrdering::CouplingFirst);
        assert!(r.t_on_g2 < r.t_on_g1);
        assert_eq!(r.scales(0.0), (0.0, 0.0));
        assert_eq!(r.scales(5.0), (0.0, 1.0));
        assert_eq!(r.scales(10.0), (1.0, 1.0));
        let r = RampProfile::sequential(10.0, RampOrdering::ProbeFirst);
        assert_eq!(r.ordering(), RampOrdering::ProbeFirst);
        assert_eq!(r.scales(5.0), (1.0, 0.0));
    }

    #[test]
    fn step_bound_enforced() {
        let p = SystemParams::dimensionless(1.0, 1.0, 0.0, 0.0);
        let f = FieldSpec::fock(1, 0);
        let r = RampProfile::sequential(1.0, RampOrdering::CouplingFirst);
        assert!(matches!(
            evolve_ramped(&p, &f, &r, 0.5),
            Err(EitError::StepTooLarge { .. })
        ));
    }

    #[test]
    fn single_block_slow_ramp_tracks_dark_state() {
        let p = SystemParams::dimensionless(1.0, 1.0, 0.0, 0.0);
        let f = FieldSpec::fock(1, 0);
        let omega = RabiPair::from_photon_numbers(1.0, 1.0, 1.0, 0.0).omega_total;
        let r = RampProfile::sequential(200.0 / omega, RampOrdering::CouplingFirst);
        let dt = suggested_step(&p, &f, 0.5).unwrap();
        let out = evolve_ramped(&p, &f, &r, dt).unwrap();
        assert!(out.fidelity > 0.999, "{}", out.fidelity);
        assert!(out.norm_drift < 1e-8);
    }
}
