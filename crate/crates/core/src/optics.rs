//! Macroscopic linear response: polarization, susceptibilities, group
//! velocities and index changes.
//!
//! Rabi frequencies here are the mean-field values Ω̄₁ = 2g₁√n̄_α and
//! Ω̄₂ = 2g₂√(n̄_β+1), passed as a [`RabiPair`].
//!
//! Detunings follow Δ₁ = ω₂₁ − ω₁, so a derivative in ω₁ at fixed atomic
//! frequencies is −∂/∂Δ₁.

use serde::{Deserialize, Serialize};

use crate::constants::{EPSILON_0, HBAR, SPEED_OF_LIGHT};
use crate::dressed::RabiPair;
use crate::error::{EitError, Result};
use crate::params::SystemParams;

/// How intensities are turned into Rabi frequencies for the experiment presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RabiInterpretation {
    /// Ω̄₁²/Ω̄₂² = I₁/I₂, dipole ratio left out of the Rabi ratio.
    #[serde(rename = "paper")]
    IntensityRatio,
    /// Ω̄ᵢ² = 2μᵢ²Iᵢ/(ε₀cħ²) for each mode.
    Strict,
}

impl RabiInterpretation {
    pub fn label(&self) -> &'static str {
        match self {
            RabiInterpretation::IntensityRatio => "paper",
            RabiInterpretation::Strict => "strict",
        }
    }
}

impl std::str::FromStr for RabiInterpretation {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "paper" => Ok(Self::IntensityRatio),
            "strict" => Ok(Self::Strict),
            other => Err(format!("expected `paper` or `strict`, got `{other}`")),
        }
    }
}

/// Ω² = 2μ²I/(ε₀cħ²) in rad²/s².
pub fn rabi_squared_from_intensity(mu: f64, intensity: f64) -> f64 {
    2.0 * mu * mu * intensity / (EPSILON_0 * SPEED_OF_LIGHT * HBAR * HBAR)
}

/// Real polarization N(μ₁₂ρ₂₁ + μ₃₂ρ₂₃) + c.c., C/m².
pub fn polarization(
    params: &SystemParams,
    rho21: num_complex::Complex64,
    rho23: num_complex::Complex64,
) -> f64 {
    2.0 * params.atom_density * (params.mu12 * rho21 + params.mu32 * rho23).re
}

/// Single-photon field amplitude √(ħω/(2ε₀V)), V/m.
pub fn field_per_photon(omega: f64, mode_volume: f64) -> f64 {
    (HBAR * omega / (2.0 * EPSILON_0 * mode_volume)).sqrt()
}

/// Mean-field Fourier components (𝓔₁α, 𝓔₂β), V/m.
pub fn field_fourier(alpha: f64, beta: f64, params: &SystemParams) -> (f64, f64) {
    (
        field_per_photon(params.omega1, params.mode_volume) * alpha,
        field_per_photon(params.omega2, params.mode_volume) * beta,
    )
}

/// χ(ω₁) = Nμ₁₂ρ₂₁(ω₁)/(ε₀E(ω₁)) from a probe coherence and field amplitude.
pub fn susceptibility_from_coherence(params: &SystemParams, rho21: f64, field: f64) -> f64 {
    params.atom_density * params.mu12 * rho21 / (EPSILON_0 * field)
}

fn check_rabi(rabi: &RabiPair) -> Result<()> {
    if !(rabi.omega2 > 0.0) {
        return Err(EitError::InvalidParameter {
            name: "omega2_bar",
            value: rabi.omega2,
            reason: "coupling Rabi frequency must be > 0",
        });
    }
    if !(rabi.omega1 >= 0.0) {
        return Err(EitError::InvalidParameter {
            name: "omega1_bar",
            value: rabi.omega1,
            reason: "probe Rabi frequency must be >= 0",
        });
    }
    Ok(())
}

/// χ(ω₁) = −4Nμ₁₂²Ω̄₂²(Δ₁−Δ₂)/(ħε₀Ω̄⁴), real at first order in the detunings.
pub fn susceptibility_probe(params: &SystemParams, rabi: &RabiPair) -> Result<f64> {
    check_rabi(rabi)?;
    let o2 = rabi.omega_total.powi(2);
    Ok(-4.0 * params.atom_density * params.mu12.powi(2) * rabi.omega2.powi(2)
        * params.two_photon_detuning()
        / (HBAR * EPSILON_0 * o2 * o2))
}

/// Lowest order in Ω̄₁/Ω̄₂ together with its ω₁ derivatives at resonance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearSusceptibility {
    pub chi: f64,
    /// dχ/dω₁, s/rad.
    pub slope: f64,
    /// d²χ/dω₁², s²/rad².
    pub curvature: f64,
}

/// χ⁽¹⁾(ω₁) = −4Nμ₁₂²(Δ₁−Δ₂)/(ħε₀Ω̄₂²).
pub fn susceptibility_probe_linear(
    params: &SystemParams,
    rabi: &RabiPair,
) -> Result<LinearSusceptibility> {
    check_rabi(rabi)?;
    let slope = 4.0 * params.mu12.powi(2) * params.atom_density
        / (HBAR * EPSILON_0 * rabi.omega2.powi(2));
    Ok(LinearSusceptibility {
        chi: -slope * params.two_photon_detuning(),
        slope,
        curvature: 0.0,
    })
}

/// χ(ω₂) = +4Nμ₃₂²Ω̄₁²(Δ₁−Δ₂)/(ħε₀Ω̄⁴).
pub fn susceptibility_coupling(params: &SystemParams, rabi: &RabiPair) -> Result<f64> {
    check_rabi(rabi)?;
    let o2 = rabi.omega_total.powi(2);
    Ok(4.0 * params.atom_density * params.mu32.powi(2) * rabi.omega1.powi(2)
        * params.two_photon_detuning()
        / (HBAR * EPSILON_0 * o2 * o2))
}

/// χ⁽¹⁾(ω₂) = 4Nμ₃₂²Ω̄₁²(Δ₁−Δ₂)/(ħε₀Ω̄₂⁴).
pub fn susceptibility_coupling_linear(params: &SystemParams, rabi: &RabiPair) -> Result<f64> {
    check_rabi(rabi)?;
    Ok(4.0 * params.atom_density * params.mu32.powi(2) * rabi.omega1.powi(2)
        * params.two_photon_detuning()
        / (HBAR * EPSILON_0 * rabi.omega2.powi(4)))
}

fn detuning_step(params: &SystemParams, rabi: &RabiPair) -> f64 {
    1e-6 * rabi.omega_total.max(params.delta1.abs()).max(1.0)
}

/// dχ(ω₁)/dω₁ = −∂χ/∂Δ₁ by central differences.
pub fn dchi_domega1(params: &SystemParams, rabi: &RabiPair) -> Result<f64> {
    let h = detuning_step(params, rabi);
    let up = susceptibility_probe(&params.with_detunings(params.delta1 + h, params.delta2), rabi)?;
    let down =
        susceptibility_probe(&params.with_detunings(params.delta1 - h, params.delta2), rabi)?;
    Ok(-(up - down) / (2.0 * h))
}

/// ∂χ(ω₁)/∂Δ₁ by central differences.
pub fn dchi_probe_ddelta1(params: &SystemParams, rabi: &RabiPair) -> Result<f64> {
    Ok(-dchi_domega1(params, rabi)?)
}

/// ∂χ(ω₂)/∂Δ₁ by central differences.
pub fn dchi_coupling_ddelta1(params: &SystemParams, rabi: &RabiPair) -> Result<f64> {
    let h = detuning_step(params, rabi);
    let up =
        susceptibility_coupling(&params.with_detunings(params.delta1 + h, params.delta2), rabi)?;
    let down =
        susceptibility_coupling(&params.with_detunings(params.delta1 - h, params.delta2), rabi)?;
    Ok((up - down) / (2.0 * h))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupVelocity {
    /// m/s.
    pub velocity: f64,
    /// Ω̄₁ → 0 value, m/s.
    pub base: f64,
}

/// v = v⁰(Ω̄₁²+Ω̄₂²)²/Ω̄₂⁴ with v⁰ = ħcε₀Ω̄₂²/(2ω₁μ₁₂²N).
pub fn group_velocity_probe(params: &SystemParams, rabi: &RabiPair) -> Result<GroupVelocity> {
    check_rabi(rabi)?;
    let base = HBAR * SPEED_OF_LIGHT * EPSILON_0 * rabi.omega2.powi(2)
        / (2.0 * params.omega1 * params.mu12.powi(2) * params.atom_density);
    Ok(GroupVelocity {
        velocity: base * (rabi.omega_total.powi(2) / rabi.omega2.powi(2)).powi(2),
        base,
    })
}

/// c/(1 + (ω₁/2)·dχ/dω₁) with the derivative taken numerically.
pub fn group_velocity_from_dispersion(params: &SystemParams, rabi: &RabiPair) -> Result<f64> {
    let d = dchi_domega1(params, rabi)?;
    Ok(SPEED_OF_LIGHT / (1.0 + 0.5 * params.omega1 * d))
}

/// v = v⁰(Ω̄₁²+Ω̄₂²)²/Ω̄₁⁴ with v⁰ = ħcε₀Ω̄₁²/(2ω₂μ₃₂²N).
pub fn group_velocity_coupling(params: &SystemParams, rabi: &RabiPair) -> Result<GroupVelocity> {
    check_rabi(rabi)?;
    if rabi.omega1 == 0.0 {
        return Err(EitError::NoCouplingGroupDelay);
    }
    let base = HBAR * SPEED_OF_LIGHT * EPSILON_0 * rabi.omega1.powi(2)
        / (2.0 * params.omega2 * params.mu32.powi(2) * params.atom_density);
    Ok(GroupVelocity {
        velocity: base * (rabi.omega_total.powi(2) / rabi.omega1.powi(2)).powi(2),
        base,
    })
}

/// v⁰_cg = v⁰_pg·ω₁I₁μ₁₂²/(ω₂I₂μ₃₂²).
pub fn coupling_base_velocity_from_intensities(
    v0_probe: f64,
    omega1: f64,
    omega2: f64,
    intensity1: f64,
    intensity2: f64,
    dipole_ratio: f64,
) -> f64 {
    v0_probe * omega1 * intensity1 * dipole_ratio.powi(2) / (omega2 * intensity2)
}

/// Δn = (λ/2π)(Δ₁−Δ₂)/v_g.
pub fn index_change(wavelength: f64, two_photon_detuning: f64, group_velocity: f64) -> Result<f64> {
    if !(group_velocity > 0.0) {
        return Err(EitError::InvalidParameter {
            name: "group_velocity",
            value: group_velocity,
            reason: "must be > 0",
        });
    }
    Ok(wavelength / (2.0 * std::f64::consts::PI) * two_photon_detuning / group_velocity)
}

pub fn index_change_probe(params: &SystemParams, v_probe: f64) -> Result<f64> {
    index_change(
        crate::constants::wavelength_from_angular_frequency(params.omega1),
        params.two_photon_detuning(),
        v_probe,
    )
}

pub fn index_change_coupling(params: &SystemParams, v_coupling: f64) -> Result<f64> {
    index_change(
        crate::constants::wavelength_from_angular_frequency(params.omega2),
        params.two_photon_detuning(),
        v_coupling,
    )
}

/// Δn(ω₂) = 2Nμ₃₂²Ω̄₁²(Δ₁−Δ₂)/(ħε₀Ω̄⁴).
pub fn index_change_coupling_explicit(params: &SystemParams, rabi: &RabiPair) -> Result<f64> {
    Ok(susceptibility_coupling(params, rabi)? / 2.0)
}

/// Everything the linear theory says about one parameter set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpticalResponse {
    pub chi_probe: f64,
    pub chi_coupling: f64,
    pub chi_probe_linear: f64,
    pub chi_coupling_linear: f64,
    /// s/rad.
    pub dchi_domega1: f64,
    pub v_probe_group: f64,
    pub v_probe_group_base: f64,
    /// `None` when Ω̄₁ = 0.
    pub v_coupling_group: Option<f64>,
    pub v_coupling_group_base: Option<f64>,
    pub dn_probe: f64,
    pub dn_coupling: Option<f64>,
    pub dn_coupling_explicit: f64,
}

impl OpticalResponse {
    /// χ = 0 in both modes.
    pub fn is_transparent(&self) -> bool {
        self.chi_probe == 0.0 && self.chi_coupling == 0.0
    }
}

pub fn optical_response(params: &SystemParams, rabi: &RabiPair) -> Result<OpticalResponse> {
    let probe = group_velocity_probe(params, rabi)?;
    let coupling = match group_velocity_coupling(params, rabi) {
        Ok(v) => Some(v),
        Err(EitError::NoCouplingGroupDelay) => None,
        Err(e) => return Err(e),
    };
    Ok(OpticalResponse {
        chi_probe: susceptibility_probe(params, rabi)?,
        chi_coupling: susceptibility_coupling(params, rabi)?,
        chi_probe_linear: susceptibility_probe_linear(params, rabi)?.chi,
        chi_coupling_linear: susceptibility_coupling_linear(params, rabi)?,
        dchi_domega1: dchi_domega1(params, rabi)?,
        v_probe_group: probe.velocity,
        v_probe_group_base: probe.base,
        v_coupling_group: coupling.map(|v| v.velocity),
        v_coupling_group_base: coupling.map(|v| v.base),
        dn_probe: index_change_probe(params, probe.velocity)?,
        dn_coupling: coupling
            .map(|v| index_change_coupling(params, v.velocity))
            .transpose()?,
        dn_coupling_explicit: index_change_coupling_explicit(params, rabi)?,
    })
}

/// Linear response of a calibrated preset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PresetResponse {
    pub calibration: crate::presets::Calibration,
    pub response: OpticalResponse,
    /// v⁰_cg from the intensity form v⁰_pg·ω₁I₁μ₁₂²/(ω₂I₂μ₃₂²), m/s.
    pub v_coupling_group_base_intensity_form: f64,
}

pub fn preset_response(
    preset: &crate::presets::ExperimentPreset,
    interpretation: RabiInterpretation,
) -> Result<PresetResponse> {
    let calibration = preset.calibrate(interpretation)?;
    let response = optical_response(&calibration.params, &calibration.rabi)?;
    Ok(PresetResponse {
        calibration,
        response,
        v_coupling_group_base_intensity_form: coupling_base_velocity_from_intensities(
            calibration.v0_probe,
            calibration.params.omega1,
            calibration.params.omega2,
            preset.intensity_probe,
            preset.intensity_coupling,
            preset.dipole_ratio,
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn params(d1: f64, d2: f64) -> SystemParams {
        SystemParams {
            g1: 1.0,
            g2: 1.0,
            delta1: d1,
            delta2: d2,
            omega1: 3.2e15,
            omega2: 3.2e15,
            mu12: 1.22e-29,
            mu32: 1e-29,
            atom_density: 3e18,
            mode_volume: 1e-6,
        }
    }

    fn rabi() -> RabiPair {
        RabiPair::new(1e6, 5e7)
    }

    #[test]
    fn resonance_is_transparent() {
        let r = optical_response(&params(0.0, 0.0), &rabi()).unwrap();
        assert!(r.is_transparent());
        assert_eq!(r.dn_probe, 0.0);
        assert_eq!(r.dn_coupling, Some(0.0));
        assert!(r.dchi_domega1 > 0.0);
        let lin = susceptibility_probe_linear(&params(0.0, 0.0), &rabi()).unwrap();
        assert_eq!(lin.chi, 0.0);
        assert!(lin.slope > 0.0);
        assert_eq!(lin.curvature, 0.0);
    }

    #[test]
    fn vanishes_on_equal_detuning_line() {
        for d in [-3e5, 1.0, 7e6] {
            let p = params(d, d);
            for r in [RabiPair::new(1.0, 2.0), RabiPair::new(4e7, 1e6)] {
                assert_eq!(susceptibility_probe(&p, &r).unwrap(), 0.0);
                assert_eq!(susceptibility_coupling(&p, &r).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn probe_and_coupling_have_opposite_sign() {
        let p = params(1e6, 0.0);
        assert!(susceptibility_probe(&p, &rabi()).unwrap() < 0.0);
        assert!(susceptibility_coupling(&p, &rabi()).unwrap() > 0.0);
        assert!(dchi_coupling_ddelta1(&p, &rabi()).unwrap() > 0.0);
    }

    #[test]
    fn linear_forms_agree_at_weak_probe() {
        let p = params(1e6, 0.0);
        let r = RabiPair::new(0.05 * 5e7, 5e7);
        let x = r.ratio_sqr();
        let full = susceptibility_probe(&p, &r).unwrap();
        let lin = susceptibility_probe_linear(&p, &r).unwrap().chi;
        assert!(((full - lin) / lin).abs() <= 2.0 * x * 1.01);
        let full = susceptibility_coupling(&p, &r).unwrap();
        let lin = susceptibility_coupling_linear(&p, &r).unwrap();
        assert!(((full - lin) / lin).abs() <= 2.0 * x * 1.01);
    }

    #[test]
    fn linear_slope_matches_finite_difference_at_weak_probe() {
        let p = params(0.0, 0.0);
        let r = RabiPair::new(1e-3, 5e7);
        let slope = susceptibility_probe_linear(&p, &r).unwrap().slope;
        let fd = dchi_domega1(&p, &r).unwrap();
        assert!(((fd - slope) / slope).abs() < 1e-6);
        let r2 = RabiPair::new(1e-3, 1e8);
        let slope2 = susceptibility_probe_linear(&p, &r2).unwrap().slope;
        assert!((slope / slope2 - 4.0).abs() < 1e-12);
    }

    #[test]
    fn group_velocity_limits() {
        let p = params(1e6, 0.0);
        let v = group_velocity_probe(&p, &RabiPair::new(0.0, 5e7)).unwrap();
        assert_eq!(v.velocity, v.base);
        let v = group_velocity_probe(&p, &RabiPair::new(5e7, 5e7)).unwrap();
        assert!((v.velocity / v.base - 4.0).abs() < 1e-12);
        assert_eq!(
            group_velocity_coupling(&p, &RabiPair::new(0.0, 5e7)),
            Err(EitError::NoCouplingGroupDelay)
        );
    }

    #[test]
    fn dispersion_relation_reproduces_closed_form() {
        let p = params(1e6, 0.0);
        let v = group_velocity_probe(&p, &rabi()).unwrap().velocity;
        let from_d = group_velocity_from_dispersion(&p, &rabi()).unwrap();
        assert!(((from_d - v) / v).abs() < 1e-6);
    }

    #[test]
    fn symmetric_roles_give_equal_velocities() {
        let mut p = params(1e6, 0.0);
        p.mu32 = p.mu12;
        let r = RabiPair::new(3e7, 3e7);
        let vp = group_velocity_probe(&p, &r).unwrap();
        let vc = group_velocity_coupling(&p, &r).unwrap();
        assert!(((vp.velocity - vc.velocity) / vp.velocity).abs() < 1e-14);
    }

    #[test]
    fn role_swap_maps_probe_to_minus_coupling() {
        let p = params(1e6, 0.0);
        let r = RabiPair::new(2e7, 5e7);
        let mut swapped = p;
        swapped.mu12 = p.mu32;
        swapped.mu32 = p.mu12;
        swapped.omega1 = p.omega2;
        swapped.omega2 = p.omega1;
        let rs = RabiPair::new(r.omega2, r.omega1);
        let a = susceptibility_probe(&p, &r).unwrap();
        let b = susceptibility_coupling(&swapped, &rs).unwrap();
        assert!(((a + b) / a).abs() < 1e-14);
        let vp = group_velocity_probe(&p, &r).unwrap().velocity;
        let vc = group_velocity_coupling(&swapped, &rs).unwrap().velocity;
        assert!(((vp - vc) / vp).abs() < 1e-14);
    }

    #[test]
    fn coupling_index_forms_agree() {
        let p = params(1.3e6, 0.0);
        let r = rabi();
        let v = group_velocity_coupling(&p, &r).unwrap().velocity;
        let a = index_change_coupling(&p, v).unwrap();
        let b = index_change_coupling_explicit(&p, &r).unwrap();
        assert!(((a - b) / b).abs() < 1e-12);
    }

    #[test]
    fn polarization_is_real_sum() {
        let p = params(0.0, 0.0);
        assert_eq!(polarization(&p, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)), 0.0);
        assert_eq!(polarization(&p, Complex64::new(0.0, 0.3), Complex64::new(0.0, -2.0)), 0.0);
        let v = polarization(&p, Complex64::new(0.5, 0.3), Complex64::new(0.0, 0.0));
        assert!((v - 2.0 * 3e18 * 1.22e-29 * 0.5).abs() < 1e-20);
    }

    #[test]
    fn coherence_route_matches_closed_susceptibility() {
        let mut p = params(1e5, 0.0);
        let (na, nb): (f64, f64) = (4e6, 9e6);
        let (e1, _) = field_fourier(na.sqrt(), nb.sqrt(), &p);
        p.g1 = p.mu12 * field_per_photon(p.omega1, p.mode_volume) / HBAR;
        p.g2 = 2.5 * p.g1;
        let (rho21, _) = crate::state::large_n_coherences(&p, na, nb);
        let r = RabiPair::from_photon_numbers(p.g1, p.g2, na, nb);
        let chi = susceptibility_probe(&p, &r).unwrap();
        let via = susceptibility_from_coherence(&p, rho21, e1);
        assert!(((via - chi) / chi).abs() < 1e-12);
    }

    #[test]
    fn intensity_conversion_consistent_with_mode_quantities() {
        let p = params(0.0, 0.0);
        let n = 1e5;
        let e = field_per_photon(p.omega1, p.mode_volume);
        let intensity = 2.0 * EPSILON_0 * SPEED_OF_LIGHT * e * e * n;
        let g = p.mu12 * e / HBAR;
        let omega_sqr = 4.0 * g * g * n;
        let conv = rabi_squared_from_intensity(p.mu12, intensity);
        assert!(((conv - omega_sqr) / omega_sqr).abs() < 1e-12);
    }
}
