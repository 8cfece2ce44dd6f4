//! Adiabatically prepared state, reduced atomic density matrix and optical
//! coherences.
//!
//! Starting from |1⟩ ⊗ Σ C(n₁,n₂)|n₁,n₂⟩ with the couplings switched on slowly
//! (coupling mode first), every block follows its dark state:
//!
//! ```text
//! |Ψ(t)⟩ = Σ C(n₁,n₂) exp(−i e⁰(n₁,n₂) t) |φ⁰(n₁,n₂)⟩,   e⁰ = ω₁n₁ + ω₂n₂ + E⁰(n₁,n₂)
//! ```
//!
//! The ground-state offset is set to zero (global phase). For n₁ = 0 the dark
//! state degenerates to −|1,0,n₂⟩, which is what the closed-form coefficients
//! give at Ω₁ = 0.
//!
//! Every double sum runs n₁ ascending, then n₂ ascending, through compensated
//! accumulators.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dressed::{perturbative_eigenvalues_for, DressedTriple, RabiPair};
use crate::error::{EitError, Result};
use crate::field::{default_truncation, poisson_weights, FieldAmplitudes, FieldSpec};
use crate::params::SystemParams;
use crate::summation::ComplexNeumaierSum;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Dark-state data of block (n₁, n₂), valid for n₁ = 0 as well.
fn dark_block(params: &SystemParams, n1: u32, n2: u32) -> (DressedTriple, f64) {
    let rabi = RabiPair::from_photon_numbers(params.g1, params.g2, f64::from(n1), f64::from(n2));
    let triple = DressedTriple::dark(&rabi, params.delta1, params.delta2);
    let e0 = perturbative_eigenvalues_for(&rabi, params.delta1, params.delta2).zero;
    (triple, e0)
}

/// e⁰(n₁,n₂) = ω₁n₁ + ω₂n₂ + E⁰(n₁,n₂), rad/s.
pub fn dark_energy(params: &SystemParams, n1: u32, n2: u32) -> f64 {
    params.omega1 * f64::from(n1) + params.omega2 * f64::from(n2) + dark_block(params, n1, n2).1
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DarkTerm {
    pub n1: u32,
    pub n2: u32,
    /// C(n₁,n₂)·exp(−i e⁰ t).
    pub amplitude: Complex64,
    pub triple: DressedTriple,
}

/// |Ψ(t)⟩ as amplitudes over the dark states of every block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdiabaticState {
    pub time: f64,
    pub terms: Vec<DarkTerm>,
}

impl AdiabaticState {
    pub fn norm_sqr(&self) -> f64 {
        let mut acc = crate::summation::NeumaierSum::new();
        for term in &self.terms {
            acc.add(term.amplitude.norm_sqr() * term.triple.norm_sqr());
        }
        acc.value()
    }

    pub fn term(&self, n1: u32, n2: u32) -> Option<&DarkTerm> {
        self.terms.iter().find(|t| t.n1 == n1 && t.n2 == n2)
    }
}

pub fn adiabatic_state(params: &SystemParams, field: &FieldSpec, t: f64) -> AdiabaticState {
    let amps = field.amplitudes();
    let mut terms = Vec::new();
    for n1 in 0..=amps.trunc1() {
        for n2 in 0..=amps.trunc2() {
            let c = amps.get(n1, n2);
            if c == ZERO {
                continue;
            }
            let (triple, e0) = dark_block(params, n1, n2);
            let e = params.omega1 * f64::from(n1) + params.omega2 * f64::from(n2) + e0;
            terms.push(DarkTerm {
                n1,
                n2,
                amplitude: c * Complex64::from_polar(1.0, -e * t),
                triple,
            });
        }
    }
    AdiabaticState { time: t, terms }
}

/// D₁, D₂, D₃ of one block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DCoefficients {
    pub d1: Complex64,
    pub d2: Complex64,
    pub d3: Complex64,
}

impl DCoefficients {
    const ZERO: Self = Self {
        d1: ZERO,
        d2: ZERO,
        d3: ZERO,
    };
}

pub fn d_coefficients(
    params: &SystemParams,
    amps: &FieldAmplitudes,
    t: f64,
    n1: u32,
    n2: u32,
) -> DCoefficients {
    let c = amps.get(n1, n2);
    if c == ZERO {
        return DCoefficients::ZERO;
    }
    let (triple, e0) = dark_block(params, n1, n2);
    let e = params.omega1 * f64::from(n1) + params.omega2 * f64::from(n2) + e0;
    let w = c * Complex64::from_polar(1.0, -e * t);
    DCoefficients {
        d1: w * triple.a,
        d2: w * triple.b,
        d3: w * triple.c,
    }
}

/// Reduced atomic density matrix ρᴬ; `rho[i][j]` is ⟨i+1|ρ|j+1⟩.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomDensityMatrix {
    pub rho: [[Complex64; 3]; 3],
}

impl AtomDensityMatrix {
    /// 1-based element ρᵢⱼ.
    pub fn element(&self, i: usize, j: usize) -> Complex64 {
        self.rho[i - 1][j - 1]
    }

    pub fn trace(&self) -> f64 {
        self.rho[0][0].re + self.rho[1][1].re + self.rho[2][2].re
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max((self.rho[i][j] - self.rho[j][i].conj()).norm());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &[[Complex64; 3]; 3]) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max((self.rho[i][j] - other[i][j]).norm());
            }
        }
        worst
    }
}

/// Assembles ρᴬ from the D-coefficients:
///
/// ```text
/// ρ₁₁ = Σ|D₁(n₁,n₂)|²        ρ₁₂ = Σ D₁(n₁,n₂) D₂*(n₁+1,n₂)
/// ρ₂₂ = Σ|D₂(n₁+1,n₂)|²      ρ₁₃ = Σ D₁(n₁,n₂) D₃*(n₁+1,n₂−1)
/// ρ₃₃ = Σ|D₃(n₁+1,n₂−1)|²    ρ₂₃ = Σ D₂(n₁+1,n₂) D₃*(n₁+1,n₂−1)
/// ```
pub fn reduced_density_matrix(
    params: &SystemParams,
    field: &FieldSpec,
    t: f64,
) -> AtomDensityMatrix {
    let amps = field.amplitudes();
    let (t1, t2) = (amps.trunc1(), amps.trunc2());

    // n₂ runs one past the truncation: |3, n₁, t₂+1⟩ belongs to block (n₁+1, t₂)
    let mut acc = [[ComplexNeumaierSum::new(); 3]; 3];
    for n1 in 0..=t1 {
        for n2 in 0..=t2 + 1 {
            let here = d_coefficients(params, &amps, t, n1, n2);
            let up = d_coefficients(params, &amps, t, n1 + 1, n2);
            let diag = if n2 >= 1 {
                d_coefficients(params, &amps, t, n1 + 1, n2 - 1)
            } else {
                DCoefficients::ZERO
            };

            acc[0][0] += Complex64::new(here.d1.norm_sqr(), 0.0);
            acc[1][1] += Complex64::new(up.d2.norm_sqr(), 0.0);
            acc[2][2] += Complex64::new(diag.d3.norm_sqr(), 0.0);
            acc[0][1] += here.d1 * up.d2.conj();
            acc[0][2] += here.d1 * diag.d3.conj();
            acc[1][2] += up.d2 * diag.d3.conj();
        }
    }

    let mut rho = [[ZERO; 3]; 3];
    for i in 0..3 {
        for j in i..3 {
            rho[i][j] = acc[i][j].value();
            rho[j][i] = rho[i][j].conj();
        }
        rho[i][i] = Complex64::new(rho[i][i].re, 0.0);
    }
    AtomDensityMatrix { rho }
}

/// ρ₂₁(t) and ρ₂₃(t) for a coherent field |α,β⟩ from the Poisson-weighted sums
///
/// ```text
/// ρ₂₁ = Σ P(n₁,n₂) a₀(n₁,n₂) b₀(n₁+1,n₂) α/√(n₁+1) e^{i[e⁰(n₁,n₂) − e⁰(n₁+1,n₂)]t}
/// ρ₂₃ = Σ P(n₁,n₂) b₀(n₁+1,n₂) c₀(n₁+1,n₂−1) √n₂ α²/((n₁+1)β) e^{i[e⁰(n₁+1,n₂−1) − e⁰(n₁+1,n₂)]t}
/// ```
///
/// Truncations follow [`default_truncation`].
pub fn coherences_timeseries(
    params: &SystemParams,
    alpha: f64,
    beta: f64,
    t: f64,
) -> Result<(Complex64, Complex64)> {
    if beta == 0.0 {
        return Err(EitError::CouplingVacuum);
    }
    let (na, nb) = (alpha * alpha, beta * beta);
    let (t1, t2) = (default_truncation(na), default_truncation(nb));
    let p1 = poisson_weights(na, t1);
    let p2 = poisson_weights(nb, t2);

    let mut r21 = ComplexNeumaierSum::new();
    let mut r23 = ComplexNeumaierSum::new();
    for n1 in 0..=t1 {
        let x1 = f64::from(n1) + 1.0;
        for n2 in 0..=t2 {
            let w = p1[n1 as usize] * p2[n2 as usize];
            if w == 0.0 {
                continue;
            }
            let (here, e_here) = dark_block(params, n1, n2);
            let (up, e_up) = dark_block(params, n1 + 1, n2);
            let e_here = e_here + params.omega1 * f64::from(n1) + params.omega2 * f64::from(n2);
            let e_up = e_up + params.omega1 * x1 + params.omega2 * f64::from(n2);

            let phase = Complex64::from_polar(1.0, (e_here - e_up) * t);
            r21 += phase * (w * here.a * up.b * alpha / x1.sqrt());

            if n2 >= 1 {
                let (diag, e_diag) = dark_block(params, n1 + 1, n2 - 1);
                let e_diag = e_diag + params.omega1 * x1 + params.omega2 * f64::from(n2 - 1);
                let phase = Complex64::from_polar(1.0, (e_diag - e_up) * t);
                let pref = f64::from(n2).sqrt() * alpha * alpha / (x1 * beta);
                r23 += phase * (w * up.b * diag.c * pref);
            }
        }
    }
    Ok((r21.value(), r23.value()))
}

/// Large-n̄ Fourier amplitudes (ā₀b̄₀, c̄₀b̄₀) at Ω̄₁ = 2g₁√n̄_α, Ω̄₂ = 2g₂√(n̄_β+1).
pub fn large_n_coherences(params: &SystemParams, nbar_alpha: f64, nbar_beta: f64) -> (f64, f64) {
    let rabi = RabiPair::from_photon_numbers(params.g1, params.g2, nbar_alpha, nbar_beta);
    let d = DressedTriple::dark(&rabi, params.delta1, params.delta2);
    (d.a * d.b, d.c * d.b)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RabiSpread {
    /// Relative photon-number spread 1/√n̄.
    pub relative_spread: f64,
    /// Scale of the second-order Rabi-frequency correction, 1/(8n̄).
    pub second_order: f64,
}

pub fn rabi_spread_estimate(nbar: f64) -> Result<RabiSpread> {
    if !(nbar > 0.0) {
        return Err(EitError::InvalidParameter {
            name: "nbar",
            value: nbar,
            reason: "mean photon number must be > 0",
        });
    }
    Ok(RabiSpread {
        relative_spread: 1.0 / nbar.sqrt(),
        second_order: 1.0 / (8.0 * nbar),
    })
}

/// ρ₂₁(ω₁) = Σ C(n₁+1) C*(n₁) |C(n₂)|² a₀(n₁,n₂) b₀(n₁,n₂) for a product-form field.
///
/// Vanishes identically when the probe has no adjacent photon-number coherence.
pub fn nonclassical_coherence(params: &SystemParams, field: &FieldSpec) -> Result<Complex64> {
    let (probe, coupling) = match field.amplitudes() {
        FieldAmplitudes::Product { probe, coupling } => (probe, coupling),
        FieldAmplitudes::Joint(_) => return Err(EitError::NotProductField),
    };
    let mut acc = ComplexNeumaierSum::new();
    for n1 in 0..probe.len().saturating_sub(1) {
        let adjacent = probe[n1 + 1] * probe[n1].conj();
        for (n2, c2) in coupling.iter().enumerate() {
            let (d, _) = dark_block(params, n1 as u32, n2 as u32);
            acc += adjacent * (c2.norm_sqr() * d.a * d.b);
        }
    }
    Ok(acc.value())
}
