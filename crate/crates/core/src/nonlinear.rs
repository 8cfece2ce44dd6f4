//! Nonlinear susceptibility series and nonlinear refractive-index coefficients.
//!
//! Expanding the probe susceptibility in powers of the probe field,
//!
//! ```text
//! χ(ω₁) = χ⁽¹⁾ + χ⁽³⁾|E|² + χ⁽⁵⁾|E|⁴ + χ⁽⁷⁾|E|⁶ + …
//! n     = n₀ + n₂|E|² + n₄|E|⁴ + n₆|E|⁶ + …
//! ```
//!
//! with |E|² = (𝓔₁α)², so that Ω̄₁²/Ω̄₂² = k|E|², k = 2ε₀cμ₁₂²/(μ₃₂²I₂).

use serde::{Deserialize, Serialize};

use crate::constants::{intensity_per_field_sqr, EPSILON_0, HBAR, SPEED_OF_LIGHT};
use crate::dressed::RabiPair;
use crate::error::{EitError, Result};
use crate::optics::{rabi_squared_from_intensity, susceptibility_probe, susceptibility_probe_linear};
use crate::oracle::polynomial_fit;
use crate::params::SystemParams;
use crate::presets::ExperimentPreset;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiSeries {
    pub chi1: f64,
    /// m²/V².
    pub chi3: f64,
    /// m⁴/V⁴.
    pub chi5: f64,
    /// m⁶/V⁶.
    pub chi7: f64,
}

impl ChiSeries {
    pub fn as_array(&self) -> [f64; 4] {
        [self.chi1, self.chi3, self.chi5, self.chi7]
    }

    /// Consecutive terms have opposite signs.
    pub fn alternates(&self) -> bool {
        self.chi1 * self.chi3 < 0.0 && self.chi3 * self.chi5 < 0.0 && self.chi5 * self.chi7 < 0.0
    }

    pub fn eval(&self, e_sqr: f64) -> f64 {
        self.chi1 + e_sqr * (self.chi3 + e_sqr * (self.chi5 + e_sqr * self.chi7))
    }
}

fn check_intensity(intensity_coupling: f64) -> Result<()> {
    if !(intensity_coupling > 0.0 && intensity_coupling.is_finite()) {
        return Err(EitError::InvalidParameter {
            name: "intensity_coupling",
            value: intensity_coupling,
            reason: "must be positive and finite",
        });
    }
    Ok(())
}

/// Ω̄₂ from I₂ with the coupling dipole.
fn coupling_rabi(params: &SystemParams, intensity_coupling: f64) -> f64 {
    rabi_squared_from_intensity(params.mu32, intensity_coupling).sqrt()
}

/// k in Ω̄₁²/Ω̄₂² = k|E|², m²/V².
pub fn field_to_rabi_ratio(params: &SystemParams, intensity_coupling: f64) -> f64 {
    intensity_per_field_sqr() * (params.mu12 / params.mu32).powi(2) / intensity_coupling
}

/// Closed forms of the series coefficients:
///
/// ```text
/// χ⁽³⁾ =  8ħε₀c²μ₁₂⁴N(Δ₁−Δ₂)/(μ₃₂⁴I₂²)
/// χ⁽⁵⁾ = −24ħε₀²c³μ₁₂⁶N(Δ₁−Δ₂)/(μ₃₂⁶I₂³)
/// χ⁽⁷⁾ = (192/3)ħε₀³c⁴μ₁₂⁸N(Δ₁−Δ₂)/(μ₃₂⁸I₂⁴)
/// ```
///
/// and χ⁽¹⁾ the weak-probe susceptibility at Ω̄₂ set by I₂.
pub fn chi_series_closed(params: &SystemParams, intensity_coupling: f64) -> Result<ChiSeries> {
    check_intensity(intensity_coupling)?;
    let rabi = RabiPair::new(0.0, coupling_rabi(params, intensity_coupling));
    let chi1 = susceptibility_probe_linear(params, &rabi)?.chi;
    let d = params.two_photon_detuning();
    let n = params.atom_density;
    let (e, c, i) = (EPSILON_0, SPEED_OF_LIGHT, intensity_coupling);
    let m = params.mu12 / params.mu32;
    Ok(ChiSeries {
        chi1,
        chi3: 8.0 * HBAR * e * c.powi(2) * m.powi(4) * n * d / (i * i),
        chi5: -24.0 * HBAR * e.powi(2) * c.powi(3) * m.powi(6) * n * d / i.powi(3),
        chi7: 192.0 / 3.0 * HBAR * e.powi(3) * c.powi(4) * m.powi(8) * n * d / i.powi(4),
    })
}

/// Coefficients of χ⁽¹⁾/(1 + k|E|²)² = χ⁽¹⁾(1 − 2k|E|² + 3k²|E|⁴ − 4k³|E|⁶ + …).
pub fn chi_series_expansion(params: &SystemParams, intensity_coupling: f64) -> Result<ChiSeries> {
    check_intensity(intensity_coupling)?;
    let rabi = RabiPair::new(0.0, coupling_rabi(params, intensity_coupling));
    let chi1 = susceptibility_probe_linear(params, &rabi)?.chi;
    let k = field_to_rabi_ratio(params, intensity_coupling);
    Ok(ChiSeries {
        chi1,
        chi3: -2.0 * k * chi1,
        chi5: 3.0 * k * k * chi1,
        chi7: -4.0 * k.powi(3) * chi1,
    })
}

/// n₂/n₄ and n₄/n₆ in field and intensity units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientRatios {
    /// V²/m².
    pub n2_over_n4: f64,
    /// W/cm².
    pub n2_over_n4_intensity: f64,
    /// V²/m².
    pub n4_over_n6: f64,
    /// W/cm².
    pub n4_over_n6_intensity: f64,
}

/// Field-unit ratio (V²/m²) to intensity-unit ratio (W/cm²).
fn ratio_to_intensity(field_ratio: f64) -> f64 {
    field_ratio * intensity_per_field_sqr() * 1e-4
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonlinearCoefficients {
    pub n0: f64,
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
    pub ratios: CoefficientRatios,
}

impl NonlinearCoefficients {
    fn assemble(n0: f64, n2: f64, n4: f64, n6: f64) -> Self {
        let convert = |nk, k| unit_convert_intensity(nk, k).expect("orders 2, 4, 6 are supported");
        Self {
            n0,
            n2,
            n4,
            n6,
            n2_intensity: convert(n2, 2),
            n4_intensity: convert(n4, 4),
            n6_intensity: convert(n6, 6),
            ratios: CoefficientRatios {
                n2_over_n4: n2 / n4,
                n2_over_n4_intensity: ratio_to_intensity(n2 / n4),
                n4_over_n6: n4 / n6,
                n4_over_n6_intensity: ratio_to_intensity(n4 / n6),
            },
        }
    }
}

/// Taylor coefficients of √(n₀² + χ⁽³⁾u + χ⁽⁵⁾u² + χ⁽⁷⁾u³) for a given n₀.
pub fn n_coefficients_with_n0(chi: &ChiSeries, n0: f64) -> NonlinearCoefficients {
    let (c3, c5, c7) = (chi.chi3, chi.chi5, chi.chi7);
    let n2 = c3 / (2.0 * n0);
    let n4 = c5 / (2.0 * n0) - c3 * c3 / (8.0 * n0.powi(3));
    let n6 = c7 / (2.0 * n0) - c3 * c5 / (4.0 * n0.powi(3)) + c3.powi(3) / (16.0 * n0.powi(5));
    NonlinearCoefficients::assemble(n0, n2, n4, n6)
}

/// n-coefficients with n₀ = 1 + χ⁽¹⁾.
pub fn n_coefficients_from_chi(chi: &ChiSeries) -> Result<NonlinearCoefficients> {
    if !(chi.chi1.abs() < 0.5) {
        return Err(EitError::InvalidParameter {
            name: "chi1",
            value: chi.chi1,
            reason: "|chi1| must be < 0.5",
        });
    }
    Ok(n_coefficients_with_n0(chi, 1.0 + chi.chi1))
}

/// Closed forms in terms of the experiment:
///
/// ```text
/// n₂ = 2ε₀c(Δ₁−Δ₂)λ₁/(πI₂v⁰)    n₄ = −3ε₀c·n₂/I₂    n₆ = −8ε₀c·n₄/(3I₂)
/// ```
///
/// n₀ = 1 + χ⁽¹⁾ with χ⁽¹⁾ = −I₂n₂/(2ε₀c).
pub fn n_coefficients_closed(
    preset: &ExperimentPreset,
    v0_probe: f64,
) -> Result<NonlinearCoefficients> {
    preset.validate()?;
    if !(v0_probe > 0.0) {
        return Err(EitError::InvalidParameter {
            name: "v0_probe",
            value: v0_probe,
            reason: "must be > 0",
        });
    }
    let (e, c, i) = (EPSILON_0, SPEED_OF_LIGHT, preset.intensity_coupling);
    let d = preset.delta1 - preset.delta2;
    let n2 = 2.0 * e * c * d * preset.lambda1 / (std::f64::consts::PI * i * v0_probe);
    let n4 = -3.0 * e * c * n2 / i;
    let n6 = -8.0 * e * c * n4 / (3.0 * i);
    let chi1 = -i * n2 / (2.0 * e * c);
    Ok(NonlinearCoefficients::assemble(1.0 + chi1, n2, n4, n6))
}

/// nₖ in field units to intensity units: divide by (2ε₀c)^(k/2), then m → cm.
pub fn unit_convert_intensity(nk: f64, order: u32) -> Result<f64> {
    let half = match order {
        2 => 1,
        4 => 2,
        6 => 3,
        other => return Err(EitError::UnsupportedOrder(other)),
    };
    Ok(nk / intensity_per_field_sqr().powi(half) * 1e4f64.powi(half))
}

/// n₂/n₄ = −I₂/(3ε₀c) and n₄/n₆ = −3I₂/(8ε₀c).
pub fn coefficient_ratios(preset: &ExperimentPreset) -> Result<CoefficientRatios> {
    check_intensity(preset.intensity_coupling)?;
    let ec = EPSILON_0 * SPEED_OF_LIGHT;
    let n2_over_n4 = -preset.intensity_coupling / (3.0 * ec);
    let n4_over_n6 = -3.0 * preset.intensity_coupling / (8.0 * ec);
    Ok(CoefficientRatios {
        n2_over_n4,
        n2_over_n4_intensity: ratio_to_intensity(n2_over_n4),
        n4_over_n6,
        n4_over_n6_intensity: ratio_to_intensity(n4_over_n6),
    })
}

/// Fit window for [`series_audit`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuditConfig {
    /// Largest Ω̄₁²/Ω̄₂² on the grid.
    pub x_max: f64,
    pub points: usize,
}

impl Default for AuditConfig {
    fn default() -> Self {
        Self {
            x_max: 2e-3,
            points: 16,
        }
    }
}

/// Numerical check of the series coefficients against the full susceptibility.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesAudit {
    pub config: AuditConfig,
    pub fitted: ChiSeries,
    pub closed_form: ChiSeries,
    pub expansion: ChiSeries,
    /// closed_form / fitted for χ⁽³⁾, χ⁽⁵⁾, χ⁽⁷⁾.
    pub ratio_chi3: f64,
    pub ratio_chi5: f64,
    pub ratio_chi7: f64,
    /// Relative change of the fitted χ⁽³⁾, χ⁽⁵⁾, χ⁽⁷⁾ when x_max is halved.
    pub halving_drift: [f64; 3],
    pub condition: f64,
    /// 1 + χ⁽¹⁾.
    pub n0_linear: f64,
    /// √(1 + χ⁽¹⁾).
    pub n0_sqrt: f64,
}

fn fit_window(params: &SystemParams, intensity_coupling: f64, cfg: AuditConfig) -> Result<(ChiSeries, f64)> {
    let omega2 = coupling_rabi(params, intensity_coupling);
    let k = field_to_rabi_ratio(params, intensity_coupling);
    let mut e_sqr = Vec::with_capacity(cfg.points);
    let mut chi = Vec::with_capacity(cfg.points);
    for i in 0..cfg.points {
        let x = cfg.x_max * i as f64 / (cfg.points - 1) as f64;
        e_sqr.push(x / k);
        chi.push(susceptibility_probe(params, &RabiPair::new(omega2 * x.sqrt(), omega2))?);
    }
    let fit = polynomial_fit(&e_sqr, &chi, 3)?;
    if fit.ill_conditioned {
        return Err(EitError::IllConditioned {
            condition: fit.condition,
        });
    }
    let c = &fit.coefficients;
    Ok((
        ChiSeries {
            chi1: c[0],
            chi3: c[1],
            chi5: c[2],
            chi7: c[3],
        },
        fit.condition,
    ))
}

pub fn series_audit(
    params: &SystemParams,
    intensity_coupling: f64,
    config: AuditConfig,
) -> Result<SeriesAudit> {
    check_intensity(intensity_coupling)?;
    if !(config.x_max > 0.0 && config.x_max <= 0.05) {
        return Err(EitError::InvalidParameter {
            name: "x_max",
            value: config.x_max,
            reason: "fit window must satisfy 0 < x_max <= 0.05",
        });
    }
    if config.points < 8 {
        return Err(EitError::InvalidParameter {
            name: "fit_points",
            value: config.points as f64,
            reason: "need at least 8 sample points",
        });
    }
    let (fitted, condition) = fit_window(params, intensity_coupling, config)?;
    let half = AuditConfig {
        x_max: config.x_max / 2.0,
        ..config
    };
    let (fitted_half, _) = fit_window(params, intensity_coupling, half)?;
    let closed_form = chi_series_closed(params, intensity_coupling)?;
    let expansion = chi_series_expansion(params, intensity_coupling)?;
    let drift = |a: f64, b: f64| ((b - a) / a).abs();
    Ok(SeriesAudit {
        config,
        fitted,
        closed_form,
        expansion,
        ratio_chi3: closed_form.chi3 / fitted.chi3,
        ratio_chi5: closed_form.chi5 / fitted.chi5,
        ratio_chi7: closed_form.chi7 / fitted.chi7,
        halving_drift: [
            drift(fitted.chi3, fitted_half.chi3),
            drift(fitted.chi5, fitted_half.chi5),
            drift(fitted.chi7, fitted_half.chi7),
        ],
        condition,
        n0_linear: 1.0 + closed_form.chi1,
        n0_sqrt: (1.0 + closed_form.chi1).sqrt(),
    })
}

/// Everything the nonlinear layer reports for one preset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonlinearReport {
    /// Closed forms evaluated with v⁰ = observed probe group velocity.
    pub closed: NonlinearCoefficients,
    /// Composition of the series coefficients with n₀ = 1 + χ⁽¹⁾.
    pub via_chi: NonlinearCoefficients,
    pub closed_form: ChiSeries,
    pub ratios: CoefficientRatios,
    pub audit: SeriesAudit,
    /// m/s.
    pub v0_probe_used: f64,
}

/// The closed forms take v⁰ as the observed velocity: the series is built for
/// Ω̄₁ ≪ Ω̄₂, where the probe group velocity and v⁰ coincide.
pub fn nonlinear_report(
    preset: &ExperimentPreset,
    interpretation: crate::optics::RabiInterpretation,
    audit: AuditConfig,
) -> Result<NonlinearReport> {
    let cal = preset.calibrate(interpretation)?;
    let v0 = preset.v_probe_group_observed;
    let closed_form = chi_series_closed(&cal.params, preset.intensity_coupling)?;
    Ok(NonlinearReport {
        closed: n_coefficients_closed(preset, v0)?,
        via_chi: n_coefficients_from_chi(&closed_form)?,
        closed_form,
        ratios: coefficient_ratios(preset)?,
        audit: series_audit(&cal.params, preset.intensity_coupling, audit)?,
        v0_probe_used: v0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optics::RabiInterpretation;
    use crate::presets::preset;

    fn hau() -> (ExperimentPreset, SystemParams) {
        let p = preset("hau1999").unwrap();
        let c = p.calibrate(RabiInterpretation::IntensityRatio).unwrap();
        (p, c.params)
    }

    /// Power series of √P(u) by the recurrence s₀² = p₀, 2s₀sₖ = pₖ − Σ sⱼsₖ₋ⱼ.
    fn sqrt_series(p: &[f64]) -> Vec<f64> {
        let mut s = vec![p[0].sqrt()];
        for k in 1..p.len() {
            let cross: f64 = (1..k).map(|j| s[j] * s[k - j]).sum();
            s.push((p[k] - cross) / (2.0 * s[0]));
        }
        s
    }

    #[test]
    fn zero_detuning_gives_zero_series() {
        let (_, params) = hau();
        let s = chi_series_closed(&params.with_detunings(0.0, 0.0), 400.0).unwrap();
        assert_eq!(s.as_array(), [0.0; 4]);
        let n = n_coefficients_from_chi(&s).unwrap();
        assert_eq!((n.n2, n.n4, n.n6), (0.0, 0.0, 0.0));
    }

    #[test]
    fn intensity_power_laws() {
        let (_, params) = hau();
        let a = chi_series_closed(&params, 400.0).unwrap();
        let b = chi_series_closed(&params, 800.0).unwrap();
        assert!((b.chi3 / a.chi3 - 0.25).abs() < 1e-14);
        assert!((b.chi5 / a.chi5 - 0.125).abs() < 1e-14);
        assert!((b.chi7 / a.chi7 - 0.0625).abs() < 1e-14);
    }

    #[test]
    fn series_alternates() {
        let (_, params) = hau();
        for d in [1.3e6, -2e5] {
            let s = chi_series_closed(&params.with_detunings(d, 0.0), 400.0).unwrap();
            assert!(s.alternates());
            assert_eq!(s.chi1.signum(), -d.signum());
        }
    }

    #[test]
    fn kerr_from_square_only() {
        let s = ChiSeries {
            chi1: 0.0,
            chi3: 3e-6,
            chi5: 0.0,
            chi7: 0.0,
        };
        let n = n_coefficients_from_chi(&s).unwrap();
        assert_eq!(n.n0, 1.0);
        assert!((n.n4 + 3e-6f64.powi(2) / 8.0).abs() < 1e-25);
    }

    #[test]
    fn coefficients_equal_sqrt_series() {
        for chi in [
            ChiSeries {
                chi1: 0.0,
                chi3: 0.3,
                chi5: -0.2,
                chi7: 0.05,
            },
            ChiSeries {
                chi1: -0.012,
                chi3: 1.7,
                chi5: 0.4,
                chi7: -2.2,
            },
        ] {
            let n0 = (1.0 + chi.chi1).sqrt();
            let s = sqrt_series(&[1.0 + chi.chi1, chi.chi3, chi.chi5, chi.chi7]);
            let n = n_coefficients_with_n0(&chi, n0);
            for (got, want) in [n.n2, n.n4, n.n6].iter().zip(&s[1..]) {
                assert!((got - want).abs() <= 1e-10 * want.abs().max(1e-3));
            }
        }
    }

    #[test]
    fn unit_conversion_orders() {
        let f = intensity_per_field_sqr();
        assert!((unit_convert_intensity(f, 2).unwrap() - 1e4).abs() < 1e-9);
        assert_eq!(unit_convert_intensity(1.0, 3), Err(EitError::UnsupportedOrder(3)));
    }

    #[test]
    fn ratios_independent_of_detuning() {
        let (p, _) = hau();
        let a = coefficient_ratios(&p).unwrap();
        let n = n_coefficients_closed(&p, 17.0).unwrap();
        assert!(((n.ratios.n2_over_n4 - a.n2_over_n4) / a.n2_over_n4).abs() < 1e-12);
        assert!(((n.ratios.n4_over_n6 - a.n4_over_n6) / a.n4_over_n6).abs() < 1e-12);
        let mut q = p.clone();
        q.delta1 = -4e5;
        let m = n_coefficients_closed(&q, 17.0).unwrap();
        assert!(((m.ratios.n2_over_n4 - a.n2_over_n4) / a.n2_over_n4).abs() < 1e-12);
    }

    #[test]
    fn kerr_sign_follows_detuning() {
        let (p, _) = hau();
        let a = n_coefficients_closed(&p, 17.0).unwrap();
        let mut q = p.clone();
        q.delta1 = -p.delta1;
        let b = n_coefficients_closed(&q, 17.0).unwrap();
        assert!(a.n2 > 0.0 && b.n2 < 0.0);
        assert_eq!(a.n2, -b.n2);
        assert_eq!(a.n4, -b.n4);
    }

    #[test]
    fn two_kerr_constructions_differ_by_dipole_ratio() {
        let mut p = preset("hau1999").unwrap();
        // dilute enough that n₀ = 1 to well below the tolerance
        p.delta1 = 1.0;
        let c = p.calibrate(RabiInterpretation::Strict).unwrap();
        let mut params = c.params;
        params.atom_density *= 1e-3;
        let v0 = crate::optics::group_velocity_probe(&params, &RabiPair::new(0.0, c.rabi.omega2))
            .unwrap()
            .base;
        let via_chi = n_coefficients_from_chi(&chi_series_closed(&params, p.intensity_coupling).unwrap())
            .unwrap();
        let closed = n_coefficients_closed(&p, v0).unwrap();
        assert!((via_chi.n2 / closed.n2 - 1.4884).abs() < 1e-6);

        p.dipole_ratio = 1.0;
        let c = p.calibrate(RabiInterpretation::Strict).unwrap();
        let mut params = c.params;
        params.atom_density *= 1e-3;
        let v0 = crate::optics::group_velocity_probe(&params, &RabiPair::new(0.0, c.rabi.omega2))
            .unwrap()
            .base;
        let via_chi = n_coefficients_from_chi(&chi_series_closed(&params, p.intensity_coupling).unwrap())
            .unwrap();
        let closed = n_coefficients_closed(&p, v0).unwrap();
        assert!((via_chi.n2 / closed.n2 - 1.0).abs() < 1e-6);
    }

    #[test]
    fn audit_window_checks() {
        let (_, params) = hau();
        let bad = AuditConfig {
            x_max: 0.1,
            points: 16,
        };
        assert!(series_audit(&params, 400.0, bad).is_err());
        let few = AuditConfig {
            x_max: 0.01,
            points: 5,
        };
        assert!(series_audit(&params, 400.0, few).is_err());
    }

    #[test]
    fn audit_against_expansion() {
        let (_, params) = hau();
        let a = series_audit(&params, 400.0, AuditConfig::default()).unwrap();
        let rel = |x: f64, y: f64| ((x - y) / y).abs();
        assert!(rel(a.fitted.chi1, a.expansion.chi1) < 1e-9);
        assert!(rel(a.fitted.chi3, a.expansion.chi3) < 1e-3);
        assert!(rel(a.fitted.chi5, a.expansion.chi5) < 1e-2);
        assert!(rel(a.fitted.chi7, a.expansion.chi7) < 2e-2);
        assert!(rel(a.closed_form.chi3, a.expansion.chi3) < 1e-12);
        assert!(rel(a.closed_form.chi7, a.expansion.chi7) < 1e-12);
        assert!(a.halving_drift.iter().all(|d| *d < 5e-3));
    }
}
