//! Seeded verification suites comparing the closed-form layer with the
//! brute-force oracles.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dressed::{dark_state_residual, perturbative_eigenvalues, RabiPair};
use crate::error::Result;
use crate::field::FieldSpec;
use crate::hamiltonian::{block_matrix, exact_eigenvalues, Branch};
use crate::oracle::{
    dense_block_eigen, evolve_ramped, partial_trace, BasisAmplitudes, RampOrdering, RampProfile,
};
use crate::params::{FockBlock, SystemParams};
use crate::state::{adiabatic_state, reduced_density_matrix};
use crate::Complex64;

pub const DEFAULT_SEED: u64 = 20_240_601;

pub const EIGEN_TOLERANCE: f64 = 1e-9;
pub const CONVERGENCE_MIN_SLOPE: f64 = 1.9;
pub const RAMP_MIN_FIDELITY: f64 = 0.99;
pub const PARTIAL_TRACE_TOLERANCE: f64 = 1e-12;
pub const DARK_RESIDUAL_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Eigen,
    Convergence,
    Ramp,
    PartialTrace,
}

impl Suite {
    pub const ALL: [Suite; 4] = [
        Suite::Eigen,
        Suite::Convergence,
        Suite::Ramp,
        Suite::PartialTrace,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            Suite::Eigen => "eigen",
            Suite::Convergence => "convergence",
            Suite::Ramp => "ramp",
            Suite::PartialTrace => "partial_trace",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.label() == s || (s == "partial-trace" && *x == Suite::PartialTrace))
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub observed: f64,
    pub threshold: f64,
    pub passed: bool,
    /// Reported but never counted as a failure.
    pub diagnostic: bool,
}

impl Check {
    fn below(suite: Suite, name: &str, observed: f64, threshold: f64) -> Self {
        Self {
            suite,
            name: name.to_string(),
            observed,
            threshold,
            passed: observed < threshold,
            diagnostic: false,
        }
    }

    fn at_least(suite: Suite, name: &str, observed: f64, threshold: f64) -> Self {
        Self {
            suite,
            name: name.to_string(),
            observed,
            threshold,
            passed: observed >= threshold,
            diagnostic: false,
        }
    }

    pub fn counts_as_failure(&self) -> bool {
        !self.passed && !self.diagnostic
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub seed: u64,
    pub trials: usize,
    pub ordering: RampOrdering,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            trials: 1000,
            ordering: RampOrdering::CouplingFirst,
        }
    }
}

/// Least-squares slope of ln y against ln x.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Closed-form eigenvalues against the Jacobi solver on random blocks; error
/// relative to the block's spectral radius.
pub fn eigen_suite(seed: u64, trials: usize) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let p = SystemParams::dimensionless(
            rng.random_range(0.1..10.0),
            rng.random_range(0.1..10.0),
            rng.random_range(-5.0..5.0),
            rng.random_range(-5.0..5.0),
        );
        let b = FockBlock::new(rng.random_range(1..=100), rng.random_range(0..=100))?;
        let exact = exact_eigenvalues(&p, b)?.sorted();
        let dense = dense_block_eigen(&block_matrix(&p, b))?.values;
        let scale = dense.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (x, y) in exact.iter().zip(&dense) {
            worst = worst.max((x - y).abs() / scale);
        }
    }

    let mut dark_worst = 0.0f64;
    for _ in 0..trials.min(200) {
        let p = SystemParams::dimensionless(
            rng.random_range(0.1..10.0),
            rng.random_range(0.1..10.0),
            0.0,
            0.0,
        );
        let b = FockBlock::new(rng.random_range(1..=100), rng.random_range(0..=100))?;
        let omega = RabiPair::from_photon_numbers(p.g1, p.g2, f64::from(b.n1()), f64::from(b.n2()))
            .omega_total;
        dark_worst = dark_worst.max(dark_state_residual(&p, b) / omega);
    }

    Ok(vec![
        Check::below(
            Suite::Eigen,
            "max_relative_eigenvalue_error",
            worst,
            EIGEN_TOLERANCE,
        ),
        Check::below(
            Suite::Eigen,
            "max_resonant_dark_residual_over_omega",
            dark_worst,
            DARK_RESIDUAL_TOLERANCE,
        ),
    ])
}

/// |E_pert − E_exact| over Δ = δ, 2δ, 4δ, 8δ for each branch; reports the
/// smallest log-log slope over the random draws.
pub fn convergence_suite(seed: u64, draws: usize) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut min_slope = [f64::INFINITY; 3];
    for _ in 0..draws.max(1) {
        let g1 = rng.random_range(0.5..3.0);
        let g2 = rng.random_range(0.5..3.0);
        let b = FockBlock::new(rng.random_range(1..=20), rng.random_range(0..=20))?;
        let dir1: f64 = rng.random_range(-1.0..1.0);
        let dir2: f64 = rng.random_range(-1.0..1.0);
        let omega = RabiPair::from_photon_numbers(g1, g2, f64::from(b.n1()), f64::from(b.n2()))
            .omega_total;
        let base = 1e-3 * omega;
        let mut pts = [Vec::new(), Vec::new(), Vec::new()];
        for k in 0..4 {
            let s = base * f64::from(1u32 << k);
            let p = SystemParams::dimensionless(g1, g2, s * dir1, s * dir2);
            let exact = exact_eigenvalues(&p, b)?;
            let pert = perturbative_eigenvalues(&p, b);
            for (i, br) in Branch::ALL.iter().enumerate() {
                pts[i].push((s, (exact.get(*br) - pert.get(*br)).abs()));
            }
        }
        for i in 0..3 {
            if pts[i].iter().all(|p| p.1 > 0.0) {
                min_slope[i] = min_slope[i].min(loglog_slope(&pts[i]));
            }
        }
    }
    Ok(Branch::ALL
        .iter()
        .zip(min_slope)
        .map(|(b, s)| {
            Check::at_least(
                Suite::Convergence,
                &format!("min_loglog_slope_branch_{}", b.label()),
                s,
                CONVERGENCE_MIN_SLOPE,
            )
        })
        .collect())
}

/// Outcome of the reference ramp: g = 1, Δ = 0, α = 1.5, β = 2, T = 200/Ω̄.
pub fn reference_ramp(ordering: RampOrdering, time_factor: f64) -> Result<crate::oracle::RampOutcome> {
    let (alpha, beta) = (1.5, 2.0);
    let p = SystemParams::dimensionless(1.0, 1.0, 0.0, 0.0);
    let field = FieldSpec::coherent(alpha, beta);
    let omega_bar =
        RabiPair::from_photon_numbers(p.g1, p.g2, alpha * alpha, beta * beta).omega_total;
    let ramp = RampProfile::sequential(time_factor / omega_bar, ordering);
    let dt = crate::oracle::suggested_step(&p, &field, 0.8)?;
    evolve_ramped(&p, &field, &ramp, dt)
}

pub fn ramp_suite(ordering: RampOrdering) -> Result<Vec<Check>> {
    let out = reference_ramp(ordering, 200.0)?;
    let mut fid = Check::at_least(Suite::Ramp, "fidelity", out.fidelity, RAMP_MIN_FIDELITY);
    if ordering == RampOrdering::ProbeFirst {
        fid.name = "fidelity_reversed_ordering".to_string();
        fid.diagnostic = true;
    }
    Ok(vec![
        fid,
        Check::below(Suite::Ramp, "norm_drift", out.norm_drift, 1e-8),
    ])
}

/// Field specs used by the partial-trace comparison.
pub fn partial_trace_fields() -> Vec<FieldSpec> {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    vec![
        FieldSpec::coherent(1.5, 2.0),
        FieldSpec::coherent(3.0, 0.5),
        FieldSpec::fock(4, 2),
        FieldSpec::product(
            vec![c(0.6, 0.0), c(0.0, 0.48), c(0.64, 0.0)],
            vec![c(0.8, 0.0), c(0.36, 0.48)],
        ),
        FieldSpec::joint(crate::field::JointAmplitudes::from_fn(3, 3, |n1, n2| {
            c(f64::from(n1 + 1), f64::from(n2) - 1.0) / 12.0
        })),
    ]
}

pub fn partial_trace_suite(seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7ace);
    let mut worst = 0.0f64;
    for field in partial_trace_fields() {
        for _ in 0..4 {
            let mut p = SystemParams::dimensionless(
                rng.random_range(0.2..2.0),
                rng.random_range(0.2..2.0),
                rng.random_range(-0.1..0.1),
                rng.random_range(-0.1..0.1),
            );
            p.omega1 = rng.random_range(1.0..50.0);
            p.omega2 = rng.random_range(1.0..50.0);
            let t = rng.random_range(0.0..10.0);
            let brute = partial_trace(&BasisAmplitudes::from_state(&adiabatic_state(&p, &field, t)));
            worst = worst.max(reduced_density_matrix(&p, &field, t).max_abs_diff(&brute));
        }
    }
    Ok(vec![Check::below(
        Suite::PartialTrace,
        "max_elementwise_difference",
        worst,
        PARTIAL_TRACE_TOLERANCE,
    )])
}

pub fn run_suite(suite: Suite, config: &VerifyConfig) -> Result<Vec<Check>> {
    match suite {
        Suite::Eigen => eigen_suite(config.seed, config.trials),
        Suite::Convergence => convergence_suite(config.seed, 50),
        Suite::Ramp => ramp_suite(config.ordering),
        Suite::PartialTrace => partial_trace_suite(config.seed),
    }
}
