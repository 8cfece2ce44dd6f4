//! Invariant 3×3 blocks of the interaction-picture Hamiltonian
//!
//! ```text
//! H/ħ = Δ₁|2⟩⟨2| + (Δ₁−Δ₂)|3⟩⟨3| − (g₁ a₁|2⟩⟨1| + g₂ a₂|2⟩⟨3| + h.c.)
//! ```
//!
//! and their closed-form spectrum. The characteristic polynomial of a block is
//! λ³ + Aλ² + Bλ + C; its depressed form t³ + pt + q always has three real roots
//! for a Hermitian block, so the roots are taken from the trigonometric form of
//! Cardano's formula rather than complex cube roots.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{EitError, Result};
use crate::params::{FockBlock, SystemParams};

pub type Mat3 = [[f64; 3]; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    Plus,
    Minus,
    Zero,
}

impl Branch {
    pub const ALL: [Branch; 3] = [Branch::Plus, Branch::Minus, Branch::Zero];

    pub fn label(&self) -> &'static str {
        match self {
            Branch::Plus => "+",
            Branch::Minus => "-",
            Branch::Zero => "0",
        }
    }
}

/// Eigenvalues of one block labelled by branch, rad/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenTriple {
    pub plus: f64,
    pub minus: f64,
    pub zero: f64,
}

impl EigenTriple {
    pub fn get(&self, branch: Branch) -> f64 {
        match branch {
            Branch::Plus => self.plus,
            Branch::Minus => self.minus,
            Branch::Zero => self.zero,
        }
    }

    pub fn sum(&self) -> f64 {
        self.plus + self.minus + self.zero
    }

    /// Values in ascending order: (−, 0, +) whenever the labels are ordered.
    pub fn sorted(&self) -> [f64; 3] {
        let mut v = [self.minus, self.zero, self.plus];
        v.sort_by(f64::total_cmp);
        v
    }
}

/// Coefficients of λ³ + Aλ² + Bλ + C and the depressed-cubic parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicIntermediates {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub p: f64,
    pub q: f64,
}

impl CubicIntermediates {
    /// q²/4 + p³/27; negative when the three roots are real and distinct.
    pub fn discriminant(&self) -> f64 {
        self.q * self.q / 4.0 + self.p * self.p * self.p / 27.0
    }

    pub fn has_distinct_real_roots(&self) -> bool {
        reality_condition(self.p, self.q)
    }
}

pub fn block_matrix(params: &SystemParams, block: FockBlock) -> Mat3 {
    let k1 = -params.g1 * f64::from(block.n1()).sqrt();
    let k2 = -params.g2 * f64::from(block.n2() + 1).sqrt();
    [
        [0.0, k1, 0.0],
        [k1, params.delta1, k2],
        [0.0, k2, params.delta1 - params.delta2],
    ]
}

pub fn cubic_intermediates(params: &SystemParams, block: FockBlock) -> CubicIntermediates {
    let (d1, d2) = (params.delta1, params.delta2);
    let g1n = params.g1 * params.g1 * f64::from(block.n1());
    let g2n = params.g2 * params.g2 * f64::from(block.n2() + 1);

    let a = -2.0 * d1 + d2;
    let b = d1 * (d1 - d2) - g2n - g1n;
    let c = g1n * (d1 - d2);
    let p = b - a * a / 3.0;
    let q = c - a * b / 3.0 + 2.0 * a * a * a / 27.0;
    CubicIntermediates { a, b, c, p, q }
}

/// True iff q²/4 + p³/27 < 0 (three unequal real roots).
pub fn reality_condition(p: f64, q: f64) -> bool {
    q * q / 4.0 + p * p * p / 27.0 < 0.0
}

/// Exact block eigenvalues.
///
/// Roots come from λₖ = 2√(−p/3)·cos(θ/3 − 2πk/3) − A/3 with
/// θ = arccos((3q/2p)·√(−3/p)), followed by one Newton step on the
/// undepressed cubic. The largest root is labelled `+`, the middle `0` and the
/// smallest `−`: at resonance this is (+Ω/2, 0, −Ω/2), and since a block with
/// nonzero couplings is an unreduced tridiagonal matrix its eigenvalues never
/// cross, so the ordering is the continuous labelling.
pub fn exact_eigenvalues(params: &SystemParams, block: FockBlock) -> Result<EigenTriple> {
    let ci = cubic_intermediates(params, block);
    let [hi, mid, lo] = depressed_cubic_roots(&ci)?;
    Ok(EigenTriple {
        plus: hi,
        minus: lo,
        zero: mid,
    })
}

/// Roots of the block characteristic polynomial in descending order.
fn depressed_cubic_roots(ci: &CubicIntermediates) -> Result<[f64; 3]> {
    let CubicIntermediates { a, b, c, p, q } = *ci;
    let shift = -a / 3.0;

    let disc = ci.discriminant();
    let scale = (p.abs() / 3.0).powi(3).max(q * q / 4.0);
    if disc > 1e-12 * scale {
        return Err(EitError::ComplexRoots { discriminant: disc });
    }
    if p == 0.0 {
        // triple root; only reachable with q == 0 given the check above
        return Ok([shift; 3]);
    }

    let m = 2.0 * (-p / 3.0).sqrt();
    let arg = (3.0 * q / (2.0 * p) * (-3.0 / p).sqrt()).clamp(-1.0, 1.0);
    let theta = arg.acos();
    let mut roots = [0.0; 3];
    for (k, root) in roots.iter_mut().enumerate() {
        let t = m * (theta / 3.0 - 2.0 * PI * k as f64 / 3.0).cos();
        *root = polish(t + shift, a, b, c);
    }
    // k = 0, 1, 2 is already descending for θ ∈ [0, π]; keep it robust anyway
    roots.sort_by(|x, y| y.total_cmp(x));
    Ok(roots)
}

/// One Newton step on λ³ + Aλ² + Bλ + C, kept only if it reduces |f|.
fn polish(x: f64, a: f64, b: f64, c: f64) -> f64 {
    let f = |l: f64| ((l + a) * l + b) * l + c;
    let df = (3.0 * x + 2.0 * a) * x + b;
    if df == 0.0 {
        return x;
    }
    let y = x - f(x) / df;
    if f(y).abs() <= f(x).abs() {
        y
    } else {
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::dense_block_eigen;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn block(n1: u32, n2: u32) -> FockBlock {
        FockBlock::new(n1, n2).unwrap()
    }

    /// Characteristic polynomial coefficients from invariants of the matrix:
    /// λ³ − tr λ² + (Σ principal 2×2 minors) λ − det.
    fn charpoly(m: &Mat3) -> (f64, f64, f64) {
        let tr = m[0][0] + m[1][1] + m[2][2];
        let minors = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2]
            - m[0][2] * m[2][0]
            + m[1][1] * m[2][2]
            - m[1][2] * m[2][1];
        let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        (-tr, minors, -det)
    }

    #[test]
    fn resonant_symmetric_block() {
        let p = SystemParams::dimensionless(1.0, 1.0, 0.0, 0.0);
        let m = block_matrix(&p, block(1, 0));
        assert_eq!(m, [[0.0, -1.0, 0.0], [-1.0, 0.0, -1.0], [0.0, -1.0, 0.0]]);
    }

    #[test]
    fn trace_is_minus_a() {
        let p = SystemParams::dimensionless(2.0, 0.7, 0.3, -0.45);
        let m = block_matrix(&p, block(3, 8));
        let ci = cubic_intermediates(&p, block(3, 8));
        assert!((m[0][0] + m[1][1] + m[2][2] + ci.a).abs() < 1e-15);
    }

    #[test]
    fn characteristic_polynomial_matches_intermediates() {
        let p = SystemParams::dimensionless(2.0, 3.0, 0.1, -0.2);
        let b = block(4, 1);
        let (a, bb, c) = charpoly(&block_matrix(&p, b));
        let ci = cubic_intermediates(&p, b);
        assert!((a - ci.a).abs() < 1e-13);
        assert!((bb - ci.b).abs() < 1e-12);
        assert!((c - ci.c).abs() < 1e-12);
    }

    #[test]
    fn resonance_intermediates() {
        let p = SystemParams::dimensionless(1.0, 1.0, 0.0, 0.0);
        let ci = cubic_intermediates(&p, block(1, 0));
        assert_eq!((ci.a, ci.b, ci.c, ci.p, ci.q), (0.0, -2.0, 0.0, -2.0, 0.0));
        assert!((ci.discriminant() + 8.0 / 27.0).abs() < 1e-15);
    }

    #[test]
    fn reality_condition_examples() {
        assert!(reality_condition(-2.0, 0.0));
        assert!(!reality_condition(0.0, 1.0));
    }

    #[test]
    fn resonance_spectrum_is_plus_minus_half_omega() {
        let p = SystemParams::dimensionless(1.0, 1.0, 0.0, 0.0);
        let e = exact_eigenvalues(&p, block(1, 0)).unwrap();
        let s2 = 2f64.sqrt();
        assert!((e.plus - s2).abs() < 1e-15);
        assert!((e.minus + s2).abs() < 1e-15);
        assert!(e.zero.abs() < 1e-15);

        let p = SystemParams::dimensionless(0.7, 2.3, 0.0, 0.0);
        let b = block(9, 4);
        let omega = (4.0 * 0.49 * 9.0 + 4.0 * 2.3f64.powi(2) * 5.0).sqrt();
        let e = exact_eigenvalues(&p, b).unwrap();
        assert!((e.plus - omega / 2.0).abs() < 4.0 * f64::EPSILON * omega);
        assert!((e.minus + omega / 2.0).abs() < 4.0 * f64::EPSILON * omega);
        assert!(e.zero.abs() < 4.0 * f64::EPSILON * omega);
    }

    #[test]
    fn matches_dense_solver_on_example() {
        let p = SystemParams::dimensionless(1.0, 2.0, 0.05, 0.02);
        let b = block(3, 5);
        let e = exact_eigenvalues(&p, b).unwrap();
        let dense = dense_block_eigen(&block_matrix(&p, b)).unwrap();
        let scale = dense.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (x, y) in e.sorted().iter().zip(dense.values.iter()) {
            assert!((x - y).abs() / scale < 1e-12, "{x} vs {y}");
        }
        assert!((e.sum() - (2.0 * 0.05 - 0.02)).abs() < 1e-12 * scale);
    }

    #[test]
    fn hermitian_blocks_never_leave_real_regime() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let p = SystemParams::dimensionless(
                rng.random_range(0.1..10.0),
                rng.random_range(0.1..10.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            );
            let b = block(rng.random_range(1..=50), rng.random_range(0..=50));
            let ci = cubic_intermediates(&p, b);
            let scale = (ci.p.abs() / 3.0).powi(3);
            assert!(ci.has_distinct_real_roots() || ci.discriminant().abs() <= 1e-12 * scale);
            assert!(exact_eigenvalues(&p, b).is_ok());
        }
    }

    #[test]
    fn complex_regime_is_reported() {
        // x³ + x + 1 has one real root
        let ci = CubicIntermediates {
            a: 0.0,
            b: 1.0,
            c: 1.0,
            p: 1.0,
            q: 1.0,
        };
        assert!(matches!(
            depressed_cubic_roots(&ci),
            Err(EitError::ComplexRoots { .. })
        ));
    }

    #[test]
    fn repeated_root_boundary() {
        // (x − 1)²(x + 2) = x³ − 3x + 2: p = −3, q = 2, discriminant exactly 0
        let ci = CubicIntermediates {
            a: 0.0,
            b: -3.0,
            c: 2.0,
            p: -3.0,
            q: 2.0,
        };
        assert_eq!(ci.discriminant(), 0.0);
        let r = depressed_cubic_roots(&ci).unwrap();
        assert!((r[0] - 1.0).abs() < 1e-7 && (r[1] - 1.0).abs() < 1e-7);
        assert!((r[2] + 2.0).abs() < 1e-12);
    }

    #[test]
    fn labels_agree_with_nearest_perturbative_value_near_resonance() {
        use crate::dressed::perturbative_eigenvalues;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let g1 = rng.random_range(0.5..3.0);
            let g2 = rng.random_range(0.5..3.0);
            let p = SystemParams::dimensionless(
                g1,
                g2,
                rng.random_range(-0.05..0.05),
                rng.random_range(-0.05..0.05),
            );
            let b = block(rng.random_range(1..=20), rng.random_range(0..=20));
            let exact = exact_eigenvalues(&p, b).unwrap();
            let pert = perturbative_eigenvalues(&p, b);
            for branch in Branch::ALL {
                let nearest = Branch::ALL
                    .into_iter()
                    .min_by(|x, y| {
                        (pert.get(*x) - exact.get(branch))
                            .abs()
                            .total_cmp(&(pert.get(*y) - exact.get(branch)).abs())
                    })
                    .unwrap();
                assert_eq!(nearest, branch);
            }
        }
    }

    #[test]
    fn labels_continuous_along_detuning_path() {
        let base = SystemParams::dimensionless(0.8, 1.3, 0.9, -0.7);
        let b = block(2, 3);
        let steps = 2000;
        let mut prev = exact_eigenvalues(&base.with_detunings(0.0, 0.0), b).unwrap();
        for i in 1..=steps {
            let s = i as f64 / steps as f64;
            let p = base.with_detunings(s * base.delta1, s * base.delta2);
            let cur = exact_eigenvalues(&p, b).unwrap();
            // each label moves by far less than the gap to the other labels
            for branch in Branch::ALL {
                let jump = (cur.get(branch) - prev.get(branch)).abs();
                for other in Branch::ALL.into_iter().filter(|o| *o != branch) {
                    assert!(jump < 0.25 * (cur.get(branch) - prev.get(other)).abs());
                }
            }
            prev = cur;
        }
    }
}
