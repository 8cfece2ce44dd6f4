//! Initial two-mode photon states as truncated amplitude arrays.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{EitError, Result};
use crate::summation::NeumaierSum;

/// Tail mass above which [`JointAmplitudes::truncation_warning`] is raised.
pub const TAIL_WARNING: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FieldKind {
    /// |α, β⟩ with real amplitudes.
    Coherent { alpha: f64, beta: f64 },
    /// Σ C(n₁)C(n₂)|n₁,n₂⟩ with separately normalized mode arrays.
    ProductGeneral {
        probe: Vec<Complex64>,
        coupling: Vec<Complex64>,
    },
    /// Arbitrary joint amplitudes.
    JointGeneral(JointAmplitudes),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub kind: FieldKind,
    pub trunc1: u32,
    pub trunc2: u32,
}

/// Row-major amplitudes C(n₁, n₂) for n₁ ≤ trunc1, n₂ ≤ trunc2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointAmplitudes {
    pub trunc1: u32,
    pub trunc2: u32,
    data: Vec<Complex64>,
    /// 1 − Σ|C|² of the untruncated state (0 when unknown).
    pub tail_mass: f64,
}

impl JointAmplitudes {
    pub fn from_fn(trunc1: u32, trunc2: u32, f: impl Fn(u32, u32) -> Complex64) -> Self {
        let mut data = Vec::with_capacity((trunc1 as usize + 1) * (trunc2 as usize + 1));
        for n1 in 0..=trunc1 {
            for n2 in 0..=trunc2 {
                data.push(f(n1, n2));
            }
        }
        Self {
            trunc1,
            trunc2,
            data,
            tail_mass: 0.0,
        }
    }

    pub fn get(&self, n1: u32, n2: u32) -> Complex64 {
        if n1 > self.trunc1 || n2 > self.trunc2 {
            return Complex64::new(0.0, 0.0);
        }
        self.data[n1 as usize * (self.trunc2 as usize + 1) + n2 as usize]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).collect::<NeumaierSum>().value()
    }

    pub fn truncation_warning(&self) -> bool {
        self.tail_mass > TAIL_WARNING
    }
}

/// Amplitudes ready for summation; product form is kept factored.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldAmplitudes {
    Product {
        probe: Vec<Complex64>,
        coupling: Vec<Complex64>,
    },
    Joint(JointAmplitudes),
}

impl FieldAmplitudes {
    pub fn get(&self, n1: u32, n2: u32) -> Complex64 {
        match self {
            FieldAmplitudes::Product { probe, coupling } => {
                match (probe.get(n1 as usize), coupling.get(n2 as usize)) {
                    (Some(a), Some(b)) => a * b,
                    _ => Complex64::new(0.0, 0.0),
                }
            }
            FieldAmplitudes::Joint(j) => j.get(n1, n2),
        }
    }

    pub fn trunc1(&self) -> u32 {
        match self {
            FieldAmplitudes::Product { probe, .. } => probe.len().saturating_sub(1) as u32,
            FieldAmplitudes::Joint(j) => j.trunc1,
        }
    }

    pub fn trunc2(&self) -> u32 {
        match self {
            FieldAmplitudes::Product { coupling, .. } => coupling.len().saturating_sub(1) as u32,
            FieldAmplitudes::Joint(j) => j.trunc2,
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        match self {
            FieldAmplitudes::Product { probe, coupling } => {
                mode_norm_sqr(probe) * mode_norm_sqr(coupling)
            }
            FieldAmplitudes::Joint(j) => j.norm_sqr(),
        }
    }
}

fn mode_norm_sqr(c: &[Complex64]) -> f64 {
    c.iter().map(|x| x.norm_sqr()).collect::<NeumaierSum>().value()
}

impl FieldSpec {
    /// Coherent state with default truncations ⌈n̄ + 10√(n̄+1)⌉.
    pub fn coherent(alpha: f64, beta: f64) -> Self {
        Self {
            kind: FieldKind::Coherent { alpha, beta },
            trunc1: default_truncation(alpha * alpha),
            trunc2: default_truncation(beta * beta),
        }
    }

    pub fn coherent_truncated(alpha: f64, beta: f64, trunc1: u32, trunc2: u32) -> Self {
        Self {
            kind: FieldKind::Coherent { alpha, beta },
            trunc1,
            trunc2,
        }
    }

    pub fn product(probe: Vec<Complex64>, coupling: Vec<Complex64>) -> Self {
        let trunc1 = probe.len().saturating_sub(1) as u32;
        let trunc2 = coupling.len().saturating_sub(1) as u32;
        Self {
            kind: FieldKind::ProductGeneral { probe, coupling },
            trunc1,
            trunc2,
        }
    }

    /// Fock state |n₁⟩ ⊗ |n₂⟩.
    pub fn fock(n1: u32, n2: u32) -> Self {
        let mode = |n: u32| {
            let mut v = vec![Complex64::new(0.0, 0.0); n as usize + 1];
            v[n as usize] = Complex64::new(1.0, 0.0);
            v
        };
        Self::product(mode(n1), mode(n2))
    }

    pub fn joint(amplitudes: JointAmplitudes) -> Self {
        Self {
            trunc1: amplitudes.trunc1,
            trunc2: amplitudes.trunc2,
            kind: FieldKind::JointGeneral(amplitudes),
        }
    }

    pub fn amplitudes(&self) -> FieldAmplitudes {
        match &self.kind {
            FieldKind::Coherent { alpha, beta } => FieldAmplitudes::Product {
                probe: coherent_mode(*alpha, self.trunc1)
                    .into_iter()
                    .map(|x| Complex64::new(x, 0.0))
                    .collect(),
                coupling: coherent_mode(*beta, self.trunc2)
                    .into_iter()
                    .map(|x| Complex64::new(x, 0.0))
                    .collect(),
            },
            FieldKind::ProductGeneral { probe, coupling } => FieldAmplitudes::Product {
                probe: probe.iter().take(self.trunc1 as usize + 1).copied().collect(),
                coupling: coupling.iter().take(self.trunc2 as usize + 1).copied().collect(),
            },
            FieldKind::JointGeneral(j) => FieldAmplitudes::Joint(j.clone()),
        }
    }

    /// 1 − Σ|C|² over the truncated support.
    pub fn tail_mass(&self) -> f64 {
        (1.0 - self.amplitudes().norm_sqr()).max(0.0)
    }

    /// Rejects amplitude sets whose norm deviates from 1 by more than `tol`.
    pub fn check_normalized(&self, tol: f64) -> Result<()> {
        let n = self.amplitudes().norm_sqr();
        if (n - 1.0).abs() > tol {
            return Err(EitError::Unnormalized { norm_sqr: n });
        }
        Ok(())
    }
}

/// ⌈n̄ + 10√(n̄+1)⌉.
pub fn default_truncation(nbar: f64) -> u32 {
    (nbar + 10.0 * (nbar + 1.0).sqrt()).ceil() as u32
}

/// ln n! for n = 0..=n_max by running sums of ln k.
pub fn ln_factorials(n_max: u32) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max as usize + 1);
    let mut acc = NeumaierSum::new();
    out.push(0.0);
    for k in 1..=n_max {
        acc.add(f64::from(k).ln());
        out.push(acc.value());
    }
    out
}

/// Single-mode coherent amplitudes e^{−α²/2} αⁿ/√n!, evaluated in log space.
pub fn coherent_mode(alpha: f64, trunc: u32) -> Vec<f64> {
    if alpha == 0.0 {
        let mut v = vec![0.0; trunc as usize + 1];
        v[0] = 1.0;
        return v;
    }
    let lnf = ln_factorials(trunc);
    let ln_a = alpha.abs().ln();
    (0..=trunc)
        .map(|n| {
            let mag = (-alpha * alpha / 2.0 + f64::from(n) * ln_a - 0.5 * lnf[n as usize]).exp();
            if alpha < 0.0 && n % 2 == 1 {
                -mag
            } else {
                mag
            }
        })
        .collect()
}

/// Poisson weights P(n) = n̄ⁿ e^{−n̄}/n! for n = 0..=trunc.
pub fn poisson_weights(nbar: f64, trunc: u32) -> Vec<f64> {
    if nbar == 0.0 {
        let mut v = vec![0.0; trunc as usize + 1];
        v[0] = 1.0;
        return v;
    }
    let lnf = ln_factorials(trunc);
    let ln_n = nbar.ln();
    (0..=trunc)
        .map(|n| (f64::from(n) * ln_n - nbar - lnf[n as usize]).exp())
        .collect()
}

/// Materialized coherent amplitudes C(n₁,n₂) with the truncation tail recorded.
pub fn coherent_amplitudes(alpha: f64, beta: f64, trunc1: u32, trunc2: u32) -> JointAmplitudes {
    let c1 = coherent_mode(alpha, trunc1);
    let c2 = coherent_mode(beta, trunc2);
    let mut j = JointAmplitudes::from_fn(trunc1, trunc2, |n1, n2| {
        Complex64::new(c1[n1 as usize] * c2[n2 as usize], 0.0)
    });
    let kept = c1.iter().map(|x| x * x).collect::<NeumaierSum>().value()
        * c2.iter().map(|x| x * x).collect::<NeumaierSum>().value();
    j.tail_mass = (1.0 - kept).max(0.0);
    j
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum() {
        let j = coherent_amplitudes(0.0, 0.0, 3, 3);
        assert_eq!(j.get(0, 0), Complex64::new(1.0, 0.0));
        let others: f64 = (0..=3)
            .flat_map(|a| (0..=3).map(move |b| (a, b)))
            .filter(|&(a, b)| (a, b) != (0, 0))
            .map(|(a, b)| j.get(a, b).norm())
            .sum();
        assert_eq!(others, 0.0);
        assert!(!j.truncation_warning());
    }

    #[test]
    fn normalization_with_generous_truncation() {
        let j = coherent_amplitudes(2.0, 3.0, 40, 50);
        let n = j.norm_sqr();
        assert!(n <= 1.0 + 1e-15 && n >= 1.0 - 1e-12, "{n}");
    }

    #[test]
    fn squared_amplitudes_equal_poisson_product() {
        let (a, b) = (1.7, 2.4);
        let j = coherent_amplitudes(a, b, 30, 30);
        let p1 = poisson_weights(a * a, 30);
        let p2 = poisson_weights(b * b, 30);
        for n1 in 0..=30 {
            for n2 in 0..=30 {
                let lhs = j.get(n1, n2).norm_sqr();
                let rhs = p1[n1 as usize] * p2[n2 as usize];
                assert!((lhs - rhs).abs() <= 1e-14 * rhs.max(1e-300) + 1e-300);
            }
        }
    }

    #[test]
    fn large_photon_numbers_do_not_overflow() {
        let nbar: f64 = 1e4;
        let t = default_truncation(nbar);
        let w = poisson_weights(nbar, t);
        let s: f64 = w.iter().sum();
        assert!((s - 1.0).abs() < 1e-10);
        let peak = w
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.total_cmp(y.1))
            .unwrap()
            .0;
        assert!(peak == 10_000 || peak == 9_999);
    }

    #[test]
    fn truncation_warning_on_tight_cut() {
        let j = coherent_amplitudes(3.0, 1.0, 5, 20);
        assert!(j.truncation_warning());
    }

    #[test]
    fn default_truncation_rule() {
        assert_eq!(default_truncation(100.0), (100.0 + 10.0 * 101f64.sqrt()).ceil() as u32);
        assert_eq!(default_truncation(0.0), 10);
    }

    #[test]
    fn fock_and_normalization_check() {
        let f = FieldSpec::fock(3, 2);
        assert!(f.check_normalized(1e-12).is_ok());
        assert_eq!(f.amplitudes().get(3, 2), Complex64::new(1.0, 0.0));
        let bad = FieldSpec::product(
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.1, 0.0)],
            vec![Complex64::new(1.0, 0.0)],
        );
        assert!(matches!(
            bad.check_normalized(1e-6),
            Err(EitError::Unnormalized { .. })
        ));
    }

    #[test]
    fn negative_alpha_sign_pattern() {
        let m = coherent_mode(-1.5, 5);
        let p = coherent_mode(1.5, 5);
        for n in 0..=5 {
            let s = if n % 2 == 1 { -1.0 } else { 1.0 };
            assert_eq!(m[n], s * p[n]);
        }
    }
}
