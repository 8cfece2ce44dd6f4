//! Experiment presets and their calibration into model parameters.
//!
//! A preset states what an experiment reports (intensities, detunings,
//! wavelengths, observed probe group velocity, dipole ratio). Calibration picks
//! Ω̄₁, Ω̄₂ from the intensities and the atom density N from the observed
//! velocity, so the probe group velocity reproduces the observation exactly.
//!
//! The absolute dipole μ₃₂ and the mode volume V are not reported; nominal
//! values are stored with the preset. No velocity, index change or nonlinear
//! coefficient depends on them.

use serde::{Deserialize, Serialize};

use crate::constants::{angular_frequency_from_wavelength, EPSILON_0, HBAR, SPEED_OF_LIGHT};
use crate::dressed::RabiPair;
use crate::error::{EitError, Result};
use crate::optics::{rabi_squared_from_intensity, RabiInterpretation};
use crate::params::SystemParams;

const BUILTIN: &str = include_str!("../presets/presets.json");

/// Values quoted alongside the experiment, kept for comparison only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportedValues {
    pub dn_probe: f64,
    pub dn_coupling: f64,
    /// m/s.
    pub v_coupling_group: f64,
    /// m²/V².
    pub n2: f64,
    /// m⁴/V⁴.
    pub n4: f64,
    /// m⁶/V⁶.
    pub n6: f64,
    /// cm²/W.
    pub n2_intensity: f64,
    /// cm⁴/W².
    pub n4_intensity: f64,
    /// cm⁶/W³.
    pub n6_intensity: f64,
    /// W/cm².
    pub n2_over_n4_intensity_order: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPreset {
    pub name: String,
    pub description: String,
    /// I₁, W/m².
    pub intensity_probe: f64,
    /// I₂, W/m².
    pub intensity_coupling: f64,
    /// rad/s.
    pub delta1: f64,
    /// rad/s.
    pub delta2: f64,
    /// m.
    pub lambda1: f64,
    /// m.
    pub lambda2: f64,
    /// m/s.
    pub v_probe_group_observed: f64,
    /// μ₁₂/μ₃₂.
    pub dipole_ratio: f64,
    /// C·m.
    pub mu32_nominal: f64,
    /// m³.
    pub mode_volume_nominal: f64,
    pub reported: Option<ReportedValues>,
}

/// A preset resolved into model inputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub interpretation: RabiInterpretation,
    pub params: SystemParams,
    pub rabi: RabiPair,
    /// n̄_α = I₁V/(ħω₁c).
    pub nbar_probe: f64,
    /// n̄_β = I₂V/(ħω₂c).
    pub nbar_coupling: f64,
    /// Ω̄₁ → 0 probe group velocity implied by the observed velocity, m/s.
    pub v0_probe: f64,
}

pub fn builtin_presets() -> Vec<ExperimentPreset> {
    serde_json::from_str(BUILTIN).expect("bundled preset table is valid JSON")
}

pub fn preset(name: &str) -> Result<ExperimentPreset> {
    builtin_presets()
        .into_iter()
        .find(|p| p.name == name)
        .ok_or_else(|| EitError::UnknownPreset(name.to_string()))
}

impl ExperimentPreset {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("intensity_probe", self.intensity_probe),
            ("intensity_coupling", self.intensity_coupling),
            ("lambda1", self.lambda1),
            ("lambda2", self.lambda2),
            ("v_probe_group_observed", self.v_probe_group_observed),
            ("dipole_ratio", self.dipole_ratio),
            ("mu32_nominal", self.mu32_nominal),
            ("mode_volume_nominal", self.mode_volume_nominal),
        ];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(EitError::InvalidParameter {
                    name,
                    value,
                    reason: "must be positive and finite",
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

    pub fn omega1(&self) -> f64 {
        angular_frequency_from_wavelength(self.lambda1)
    }

    pub fn omega2(&self) -> f64 {
        angular_frequency_from_wavelength(self.lambda2)
    }

    pub fn mu12(&self) -> f64 {
        self.dipole_ratio * self.mu32_nominal
    }

    /// Mean-field Rabi pair (Ω̄₁, Ω̄₂) under the chosen conversion.
    pub fn rabi(&self, interpretation: RabiInterpretation) -> RabiPair {
        let o2_sqr = rabi_squared_from_intensity(self.mu32_nominal, self.intensity_coupling);
        let o1_sqr = match interpretation {
            RabiInterpretation::IntensityRatio => o2_sqr * self.intensity_probe / self.intensity_coupling,
            RabiInterpretation::Strict => {
                rabi_squared_from_intensity(self.mu12(), self.intensity_probe)
            }
        };
        RabiPair::new(o1_sqr.sqrt(), o2_sqr.sqrt())
    }

    pub fn calibrate(&self, interpretation: RabiInterpretation) -> Result<Calibration> {
        self.validate()?;
        let rabi = self.rabi(interpretation);
        let (omega1, omega2) = (self.omega1(), self.omega2());
        let mu12 = self.mu12();

        // invert v = v⁰(1 + r)² for v⁰, then v⁰ = ħcε₀Ω̄₂²/(2ω₁μ₁₂²N) for N
        let v0_probe = self.v_probe_group_observed / (1.0 + rabi.ratio_sqr()).powi(2);
        let atom_density = HBAR * SPEED_OF_LIGHT * EPSILON_0 * rabi.omega2.powi(2)
            / (2.0 * omega1 * mu12 * mu12 * v0_probe);

        let v = self.mode_volume_nominal;
        let nbar_probe = self.intensity_probe * v / (HBAR * omega1 * SPEED_OF_LIGHT);
        let nbar_coupling = self.intensity_coupling * v / (HBAR * omega2 * SPEED_OF_LIGHT);

        let params = SystemParams {
            g1: rabi.omega1 / (2.0 * nbar_probe.sqrt()),
            g2: rabi.omega2 / (2.0 * (nbar_coupling + 1.0).sqrt()),
            delta1: self.delta1,
            delta2: self.delta2,
            omega1,
            omega2,
            mu12,
            mu32: self.mu32_nominal,
            atom_density,
            mode_volume: v,
        };
        Ok(Calibration {
            interpretation,
            params,
            rabi,
            nbar_probe,
            nbar_coupling,
            v0_probe,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optics::group_velocity_probe;

    #[test]
    fn hau1999_values_exact() {
        let p = preset("hau1999").unwrap();
        assert_eq!(p.intensity_probe, 10.0);
        assert_eq!(p.intensity_coupling, 400.0);
        assert_eq!(p.delta1, 1.3e6);
        assert_eq!(p.delta2, 0.0);
        assert_eq!(p.lambda1, 589e-9);
        assert_eq!(p.lambda2, 589e-9);
        assert_eq!(p.v_probe_group_observed, 17.0);
        assert_eq!(p.dipole_ratio, 1.22);
    }

    #[test]
    fn unknown_preset() {
        assert_eq!(
            preset("nope"),
            Err(EitError::UnknownPreset("nope".to_string()))
        );
    }

    #[test]
    fn calibration_reproduces_observed_velocity() {
        let p = preset("hau1999").unwrap();
        for interp in [RabiInterpretation::IntensityRatio, RabiInterpretation::Strict] {
            let c = p.calibrate(interp).unwrap();
            let v = group_velocity_probe(&c.params, &c.rabi).unwrap();
            assert!((v.velocity - 17.0).abs() < 1e-12);
            assert!((v.base - c.v0_probe).abs() < 1e-12);
            let r = RabiPair::from_photon_numbers(
                c.params.g1,
                c.params.g2,
                c.nbar_probe,
                c.nbar_coupling,
            );
            assert!(((r.omega1 - c.rabi.omega1) / c.rabi.omega1).abs() < 1e-14);
            assert!(((r.omega2 - c.rabi.omega2) / c.rabi.omega2).abs() < 1e-14);
        }
    }

    #[test]
    fn rabi_ratio_per_interpretation() {
        let p = preset("hau1999").unwrap();
        let ratio_form = p.rabi(RabiInterpretation::IntensityRatio).ratio_sqr();
        let strict = p.rabi(RabiInterpretation::Strict).ratio_sqr();
        assert!((ratio_form - 1.0 / 40.0).abs() < 1e-15);
        assert!((strict - 1.4884 / 40.0).abs() < 1e-14);
    }

    #[test]
    fn strict_intensity_matches_mode_intensity() {
        // I = 2ε₀c𝓔²n̄ with 𝓔 = √(ħω/(2ε₀V))
        let p = preset("hau1999").unwrap();
        let c = p.calibrate(RabiInterpretation::Strict).unwrap();
        let e = crate::optics::field_per_photon(c.params.omega1, c.params.mode_volume);
        let i = 2.0 * EPSILON_0 * SPEED_OF_LIGHT * e * e * c.nbar_probe;
        assert!((i - p.intensity_probe).abs() < 1e-12);
        let g = c.params.mu12 * e / HBAR;
        assert!(((g - c.params.g1) / g).abs() < 1e-12);
    }
}
