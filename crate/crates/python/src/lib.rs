//! Python bindings: parameter and field types plus the main computations.
//!
//! Structured results (responses, reports, verification checks) come back as
//! plain dicts and lists.

use eit_core::dressed::{dark_state_residual, perturbative_eigenvalues, rabi_frequencies};
use eit_core::hamiltonian::exact_eigenvalues;
use eit_core::nonlinear::AuditConfig;
use eit_core::oracle::RampOrdering;
use eit_core::verify::{reference_ramp, run_suite, Suite, VerifyConfig, DEFAULT_SEED};
use eit_core::{
    Complex64, DressedTriple, EigenTriple, EitError, FieldSpec, FockBlock, RabiInterpretation,
    RabiPair, SystemParams,
};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

fn value_error(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn core<T>(r: Result<T, EitError>) -> PyResult<T> {
    r.map_err(value_error)
}

fn to_py<T: Serialize>(py: Python<'_>, v: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(v).map_err(value_error)?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn block(n1: u32, n2: u32) -> PyResult<FockBlock> {
    core(FockBlock::new(n1, n2))
}

fn interpretation(s: &str) -> PyResult<RabiInterpretation> {
    s.parse().map_err(value_error)
}

fn ordering(s: &str) -> PyResult<RampOrdering> {
    match s {
        "normal" => Ok(RampOrdering::CouplingFirst),
        "reversed" => Ok(RampOrdering::ProbeFirst),
        other => Err(value_error(format!("expected `normal` or `reversed`, got `{other}`"))),
    }
}

fn triple(t: EigenTriple) -> (f64, f64, f64) {
    (t.plus, t.zero, t.minus)
}

#[pyclass(name = "SystemParams", module = "quantum_eit", frozen)]
#[derive(Clone)]
struct PySystemParams {
    inner: SystemParams,
}

#[pymethods]
impl PySystemParams {
    #[new]
    #[pyo3(signature = (g1, g2, delta1=0.0, delta2=0.0, omega1=1.0, omega2=1.0, mu12=1.0, mu32=1.0, atom_density=1.0, mode_volume=1.0))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        g1: f64,
        g2: f64,
        delta1: f64,
        delta2: f64,
        omega1: f64,
        omega2: f64,
        mu12: f64,
        mu32: f64,
        atom_density: f64,
        mode_volume: f64,
    ) -> PyResult<Self> {
        let inner = SystemParams {
            g1,
            g2,
            delta1,
            delta2,
            omega1,
            omega2,
            mu12,
            mu32,
            atom_density,
            mode_volume,
        };
        core(inner.validate())?;
        Ok(Self { inner })
    }

    #[getter]
    fn g1(&self) -> f64 {
        self.inner.g1
    }

    #[getter]
    fn g2(&self) -> f64 {
        self.inner.g2
    }

    #[getter]
    fn delta1(&self) -> f64 {
        self.inner.delta1
    }

    #[getter]
    fn delta2(&self) -> f64 {
        self.inner.delta2
    }

    fn with_detunings(&self, delta1: f64, delta2: f64) -> Self {
        Self {
            inner: self.inner.with_detunings(delta1, delta2),
        }
    }

    fn to_dict(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &self.inner)
    }

    fn __repr__(&self) -> String {
        let p = &self.inner;
        format!(
            "SystemParams(g1={}, g2={}, delta1={}, delta2={})",
            p.g1, p.g2, p.delta1, p.delta2
        )
    }
}

#[pyclass(name = "FieldSpec", module = "quantum_eit", frozen)]
#[derive(Clone)]
struct PyFieldSpec {
    inner: FieldSpec,
}

#[pymethods]
impl PyFieldSpec {
    #[staticmethod]
    #[pyo3(signature = (alpha, beta, trunc1=None, trunc2=None))]
    fn coherent(alpha: f64, beta: f64, trunc1: Option<u32>, trunc2: Option<u32>) -> Self {
        let d = FieldSpec::coherent(alpha, beta);
        Self {
            inner: FieldSpec::coherent_truncated(
                alpha,
                beta,
                trunc1.unwrap_or(d.trunc1),
                trunc2.unwrap_or(d.trunc2),
            ),
        }
    }

    #[staticmethod]
    fn fock(n1: u32, n2: u32) -> Self {
        Self {
            inner: FieldSpec::fock(n1, n2),
        }
    }

    /// Product state from per-mode amplitude lists; rejects norms off by > 1e-6.
    #[staticmethod]
    fn product(probe: Vec<Complex64>, coupling: Vec<Complex64>) -> PyResult<Self> {
        if probe.is_empty() || coupling.is_empty() {
            return Err(value_error("probe and coupling amplitudes must be non-empty"));
        }
        let inner = FieldSpec::product(probe, coupling);
        core(inner.check_normalized(1e-6))?;
        Ok(Self { inner })
    }

    #[getter]
    fn trunc1(&self) -> u32 {
        self.inner.trunc1
    }

    #[getter]
    fn trunc2(&self) -> u32 {
        self.inner.trunc2
    }

    fn tail_mass(&self) -> f64 {
        self.inner.tail_mass()
    }
}

/// Exact block eigenvalues (plus, zero, minus).
#[pyfunction]
fn exact_eigenvalues_py(params: &PySystemParams, n1: u32, n2: u32) -> PyResult<(f64, f64, f64)> {
    Ok(triple(core(exact_eigenvalues(&params.inner, block(n1, n2)?))?))
}

/// First-order block eigenvalues (plus, zero, minus).
#[pyfunction]
fn perturbative_eigenvalues_py(
    params: &PySystemParams,
    n1: u32,
    n2: u32,
) -> PyResult<(f64, f64, f64)> {
    Ok(triple(perturbative_eigenvalues(&params.inner, block(n1, n2)?)))
}

/// Dark-state coefficients (a, b, c) of block (n1, n2).
#[pyfunction]
fn dark_state(params: &PySystemParams, n1: u32, n2: u32) -> PyResult<(f64, f64, f64)> {
    let p = &params.inner;
    let d = DressedTriple::dark(&rabi_frequencies(p, block(n1, n2)?), p.delta1, p.delta2);
    Ok((d.a, d.b, d.c))
}

#[pyfunction]
fn dark_residual(params: &PySystemParams, n1: u32, n2: u32) -> PyResult<f64> {
    Ok(dark_state_residual(&params.inner, block(n1, n2)?))
}

#[pyfunction]
fn adiabatic_state(
    py: Python<'_>,
    params: &PySystemParams,
    field: &PyFieldSpec,
    t: f64,
) -> PyResult<Py<PyAny>> {
    to_py(py, &eit_core::state::adiabatic_state(&params.inner, &field.inner, t))
}

/// 3×3 atomic density matrix as nested lists of complex numbers.
#[pyfunction]
fn reduced_density_matrix(
    params: &PySystemParams,
    field: &PyFieldSpec,
    t: f64,
) -> Vec<Vec<Complex64>> {
    eit_core::state::reduced_density_matrix(&params.inner, &field.inner, t)
        .rho
        .iter()
        .map(|row| row.to_vec())
        .collect()
}

/// Full-sum coherence amplitudes (rho21, rho23) for coherent inputs.
#[pyfunction]
fn coherences(
    params: &PySystemParams,
    alpha: f64,
    beta: f64,
    t: f64,
) -> PyResult<(Complex64, Complex64)> {
    core(eit_core::state::coherences_timeseries(&params.inner, alpha, beta, t))
}

#[pyfunction]
fn large_n_coherences(params: &PySystemParams, nbar_probe: f64, nbar_coupling: f64) -> (f64, f64) {
    eit_core::state::large_n_coherences(&params.inner, nbar_probe, nbar_coupling)
}

#[pyfunction]
fn nonclassical_coherence(params: &PySystemParams, field: &PyFieldSpec) -> PyResult<Complex64> {
    core(eit_core::state::nonclassical_coherence(&params.inner, &field.inner))
}

/// Linear response for explicit mean-field Rabi frequencies.
#[pyfunction]
fn optical_response(
    py: Python<'_>,
    params: &PySystemParams,
    rabi_probe: f64,
    rabi_coupling: f64,
) -> PyResult<Py<PyAny>> {
    let r = core(eit_core::optics::optical_response(
        &params.inner,
        &RabiPair::new(rabi_probe, rabi_coupling),
    ))?;
    to_py(py, &r)
}

#[pyfunction]
fn presets(py: Python<'_>) -> PyResult<Py<PyAny>> {
    to_py(py, &eit_core::presets::builtin_presets())
}

#[pyfunction]
#[pyo3(signature = (name, rabi_from_intensity="paper"))]
fn preset_response(py: Python<'_>, name: &str, rabi_from_intensity: &str) -> PyResult<Py<PyAny>> {
    let p = core(eit_core::presets::preset(name))?;
    let r = core(eit_core::optics::preset_response(&p, interpretation(rabi_from_intensity)?))?;
    to_py(py, &r)
}

#[pyfunction]
#[pyo3(signature = (name, rabi_from_intensity="paper", audit_x_max=2e-3, audit_points=16))]
fn nonlinear_report(
    py: Python<'_>,
    name: &str,
    rabi_from_intensity: &str,
    audit_x_max: f64,
    audit_points: usize,
) -> PyResult<Py<PyAny>> {
    let p = core(eit_core::presets::preset(name))?;
    let cfg = AuditConfig {
        x_max: audit_x_max,
        points: audit_points,
    };
    let r = core(eit_core::nonlinear::nonlinear_report(
        &p,
        interpretation(rabi_from_intensity)?,
        cfg,
    ))?;
    to_py(py, &r)
}

/// Reference ramp fidelity; `time_factor` is T·Ω̄.
#[pyfunction]
#[pyo3(signature = (time_factor=200.0, ordering="normal"))]
fn ramp_fidelity(py: Python<'_>, time_factor: f64, ordering: &str) -> PyResult<(f64, f64)> {
    let ord = self::ordering(ordering)?;
    let out = core(py.detach(|| reference_ramp(ord, time_factor)))?;
    Ok((out.fidelity, out.norm_drift))
}

/// Runs one oracle suite and returns its checks.
#[pyfunction]
#[pyo3(signature = (suite, seed=DEFAULT_SEED, trials=1000, ordering="normal"))]
fn verify(
    py: Python<'_>,
    suite: &str,
    seed: u64,
    trials: usize,
    ordering: &str,
) -> PyResult<Py<PyAny>> {
    let suite: Suite = suite.parse().map_err(value_error)?;
    let config = VerifyConfig {
        seed,
        trials,
        ordering: self::ordering(ordering)?,
    };
    let checks = core(py.detach(|| run_suite(suite, &config)))?;
    to_py(py, &checks)
}

#[pymodule]
fn quantum_eit(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySystemParams>()?;
    m.add_class::<PyFieldSpec>()?;
    m.add("exact_eigenvalues", wrap_pyfunction!(exact_eigenvalues_py, m)?)?;
    m.add(
        "perturbative_eigenvalues",
        wrap_pyfunction!(perturbative_eigenvalues_py, m)?,
    )?;
    m.add_function(wrap_pyfunction!(dark_state, m)?)?;
    m.add_function(wrap_pyfunction!(dark_residual, m)?)?;
    m.add_function(wrap_pyfunction!(adiabatic_state, m)?)?;
    m.add_function(wrap_pyfunction!(reduced_density_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(coherences, m)?)?;
    m.add_function(wrap_pyfunction!(large_n_coherences, m)?)?;
    m.add_function(wrap_pyfunction!(nonclassical_coherence, m)?)?;
    m.add_function(wrap_pyfunction!(optical_response, m)?)?;
    m.add_function(wrap_pyfunction!(presets, m)?)?;
    m.add_function(wrap_pyfunction!(preset_response, m)?)?;
    m.add_function(wrap_pyfunction!(nonlinear_report, m)?)?;
    m.add_function(wrap_pyfunction!(ramp_fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn option_strings_map_to_core_enums() {
        assert_eq!(ordering("normal").unwrap(), RampOrdering::CouplingFirst);
        assert_eq!(ordering("reversed").unwrap(), RampOrdering::ProbeFirst);
        assert_eq!(interpretation("strict").unwrap(), RabiInterpretation::Strict);
        assert_eq!(
            interpretation("paper").unwrap(),
            RabiInterpretation::IntensityRatio
        );
    }

    #[test]
    fn triple_order_is_plus_zero_minus() {
        let t = EigenTriple {
            plus: 1.0,
            zero: 0.0,
            minus: -1.0,
        };
        assert_eq!(triple(t), (1.0, 0.0, -1.0));
    }
}
