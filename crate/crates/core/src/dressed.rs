//! First-order dressed states of one block.
//!
//! With Ω₁ = 2g₁√n₁, Ω₂ = 2g₂√(n₂+1) and Ω = √(Ω₁²+Ω₂²), the block eigenvalues to
//! first order in the detunings are
//!
//! ```text
//! E± = (Ω₁²+2Ω₂²)/(2Ω²)·Δ₁ − Ω₂²/(2Ω²)·Δ₂ ± Ω/2
//! E⁰ = Ω₁²/Ω²·(Δ₁−Δ₂)
//! ```
//!
//! and the dark state (branch 0) is (a₀, b₀, c₀) = (−Ω₂/Ω, 2Ω₁Ω₂(Δ₁−Δ₂)/Ω³, Ω₁/Ω).
//!
//! Coefficients are real and carry no rephasing.

use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_1_SQRT_2;

use crate::hamiltonian::{block_matrix, Branch, EigenTriple};
use crate::params::{FockBlock, SystemParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RabiPair {
    pub omega1: f64,
    pub omega2: f64,
    pub omega_total: f64,
}

impl RabiPair {
    pub fn new(omega1: f64, omega2: f64) -> Self {
        Self {
            omega1,
            omega2,
            omega_total: omega1.hypot(omega2),
        }
    }

    /// Rabi frequencies for (possibly non-integer) photon numbers; n₁ = 0 gives Ω₁ = 0.
    pub fn from_photon_numbers(g1: f64, g2: f64, n1: f64, n2: f64) -> Self {
        Self::new(2.0 * g1 * n1.sqrt(), 2.0 * g2 * (n2 + 1.0).sqrt())
    }

    /// Ω₁²/Ω₂².
    pub fn ratio_sqr(&self) -> f64 {
        (self.omega1 / self.omega2).powi(2)
    }
}

pub fn rabi_frequencies(params: &SystemParams, block: FockBlock) -> RabiPair {
    RabiPair::from_photon_numbers(
        params.g1,
        params.g2,
        f64::from(block.n1()),
        f64::from(block.n2()),
    )
}

pub fn perturbative_eigenvalues(params: &SystemParams, block: FockBlock) -> EigenTriple {
    perturbative_eigenvalues_for(&rabi_frequencies(params, block), params.delta1, params.delta2)
}

pub fn perturbative_eigenvalues_for(rabi: &RabiPair, delta1: f64, delta2: f64) -> EigenTriple {
    let o1 = rabi.omega1 * rabi.omega1;
    let o2 = rabi.omega2 * rabi.omega2;
    let o = o1 + o2;
    let shift = (o1 + 2.0 * o2) / (2.0 * o) * delta1 - o2 / (2.0 * o) * delta2;
    let half = rabi.omega_total / 2.0;
    EigenTriple {
        plus: shift + half,
        minus: shift - half,
        zero: o1 / o * (delta1 - delta2),
    }
}

/// Amplitudes of one dressed state on (|1,n₁,n₂⟩, |2,n₁−1,n₂⟩, |3,n₁−1,n₂+1⟩).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DressedTriple {
    pub branch: Branch,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl DressedTriple {
    pub fn as_array(&self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.a * self.a + self.b * self.b + self.c * self.c
    }

    /// Dark state (branch 0). Valid down to Ω₁ = 0, where it reduces to −|1,n₁,n₂⟩.
    pub fn dark(rabi: &RabiPair, delta1: f64, delta2: f64) -> Self {
        let RabiPair {
            omega1: o1,
            omega2: o2,
            omega_total: o,
        } = *rabi;
        Self {
            branch: Branch::Zero,
            a: -o2 / o,
            b: 2.0 * o1 * o2 * (delta1 - delta2) / (o * o * o),
            c: o1 / o,
        }
    }

    /// Bright states (branches ±) to first order in the detunings.
    ///
    /// The b± correction is (Ω₁²Δ₁ + Ω₂²Δ₂)/(2Ω³) and the Δ₂ term of c± carries
    /// (4Ω₁²+Ω₂²); both follow from first-order perturbation theory about the
    /// resonant eigenbasis. [`DressedTriple::bright_alternative`] keeps the
    /// alternative (4Ω₁²+3Ω₂²) coefficient, which is not normalized to first order.
    pub fn bright(rabi: &RabiPair, delta1: f64, delta2: f64, sign: f64) -> Self {
        Self::bright_with(rabi, delta1, delta2, sign, 1.0)
    }

    pub fn bright_alternative(rabi: &RabiPair, delta1: f64, delta2: f64, sign: f64) -> Self {
        Self::bright_with(rabi, delta1, delta2, sign, 3.0)
    }

    fn bright_with(rabi: &RabiPair, d1: f64, d2: f64, s: f64, c_weight: f64) -> Self {
        let RabiPair {
            omega1: o1,
            omega2: o2,
            omega_total: o,
        } = *rabi;
        let (q1, q2) = (o1 * o1, o2 * o2);
        let den = 2.0 * o * o * o;
        let a = -o1 / o
            * FRAC_1_SQRT_2
            * (1.0 - s * (q1 + 4.0 * q2) / den * d1 + s * 3.0 * q2 / den * d2);
        let b = s * FRAC_1_SQRT_2 * (1.0 + s * q1 / den * d1 + s * q2 / den * d2);
        let c = -o2 / o
            * FRAC_1_SQRT_2
            * (1.0 + s * 3.0 * q1 / den * d1 - s * (4.0 * q1 + c_weight * q2) / den * d2);
        Self {
            branch: if s > 0.0 { Branch::Plus } else { Branch::Minus },
            a,
            b,
            c,
        }
    }

    pub fn for_branch(rabi: &RabiPair, delta1: f64, delta2: f64, branch: Branch) -> Self {
        match branch {
            Branch::Zero => Self::dark(rabi, delta1, delta2),
            Branch::Plus => Self::bright(rabi, delta1, delta2, 1.0),
            Branch::Minus => Self::bright(rabi, delta1, delta2, -1.0),
        }
    }
}

pub fn dressed_coefficients(
    params: &SystemParams,
    block: FockBlock,
    branch: Branch,
) -> DressedTriple {
    DressedTriple::for_branch(
        &rabi_frequencies(params, block),
        params.delta1,
        params.delta2,
        branch,
    )
}

/// Same as [`dressed_coefficients`] but with the alternative c± coefficient.
pub fn dressed_coefficients_alternative(
    params: &SystemParams,
    block: FockBlock,
    branch: Branch,
) -> DressedTriple {
    let rabi = rabi_frequencies(params, block);
    match branch {
        Branch::Zero => DressedTriple::dark(&rabi, params.delta1, params.delta2),
        Branch::Plus => DressedTriple::bright_alternative(&rabi, params.delta1, params.delta2, 1.0),
        Branch::Minus => {
            DressedTriple::bright_alternative(&rabi, params.delta1, params.delta2, -1.0)
        }
    }
}

/// ‖H v − E v‖₂ for a triple and a trial eigenvalue.
pub fn eigen_residual(m: &crate::hamiltonian::Mat3, v: [f64; 3], e: f64) -> f64 {
    (0..3)
        .map(|i| {
            let hv: f64 = (0..3).map(|j| m[i][j] * v[j]).sum();
            (hv - e * v[i]).powi(2)
        })
        .sum::<f64>()
        .sqrt()
}

/// ‖H v₀ − E⁰ v₀‖₂ for the first-order dark state; rad/s.
pub fn dark_state_residual(params: &SystemParams, block: FockBlock) -> f64 {
    let m = block_matrix(params, block);
    let v = dressed_coefficients(params, block, Branch::Zero);
    let e = perturbative_eigenvalues(params, block).zero;
    eigen_residual(&m, v.as_array(), e)
}

/// Gram matrix of the three first-order triples of a block.
pub fn gram_matrix(params: &SystemParams, block: FockBlock) -> crate::hamiltonian::Mat3 {
    let triples = Branch::ALL.map(|b| dressed_coefficients(params, block, b).as_array());
    let mut g = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            g[i][j] = (0..3).map(|k| triples[i][k] * triples[j][k]).sum();
        }
    }
    g
}

/// max |G − I| over the Gram matrix.
pub fn gram_defect(g: &crate::hamiltonian::Mat3) -> f64 {
    let mut worst = 0.0f64;
    for (i, row) in g.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((v - target).abs());
        }
    }
    worst
}
