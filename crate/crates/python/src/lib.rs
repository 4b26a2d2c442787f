//! Python bindings: `import biqo`.

use biqo_core as core;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// All closed-form measures at one overlap.
#[pyclass(name = "MeasureReport", frozen, get_all)]
struct PyMeasureReport {
    x: f64,
    p_e: f64,
    c1: f64,
    c_inf: f64,
    q: f64,
    d_at_mi: f64,
    f_g: f64,
    f_l: f64,
}

#[pymethods]
impl PyMeasureReport {
    #[new]
    fn new(x: f64) -> PyResult<Self> {
        let r = core::MeasureReport::at(x).map_err(err)?;
        Ok(Self {
            x: r.x,
            p_e: r.p_e,
            c1: r.c1,
            c_inf: r.c_inf,
            q: r.q,
            d_at_mi: r.d_at_mi,
            f_g: r.f_g,
            f_l: r.f_l,
        })
    }

    fn __repr__(&self) -> String {
        format!(
            "MeasureReport(x={}, p_e={}, c1={}, c_inf={}, q={}, d_at_mi={}, f_g={}, f_l={})",
            self.x, self.p_e, self.c1, self.c_inf, self.q, self.d_at_mi, self.f_g, self.f_l
        )
    }
}

#[pyclass(name = "VerifyReport", frozen, get_all)]
struct PyVerifyReport {
    target: String,
    x: f64,
    closed: f64,
    oracle: f64,
    deviation: f64,
    tolerance: f64,
    passed: bool,
    auxiliary: Option<f64>,
    converged: bool,
}

#[pymethods]
impl PyVerifyReport {
    fn __repr__(&self) -> String {
        format!(
            "VerifyReport(target={:?}, x={}, closed={}, oracle={}, deviation={:e}, passed={})",
            self.target, self.x, self.closed, self.oracle, self.deviation, self.passed
        )
    }
}

/// Eve's optimised probe: disturbance, achieved error and convergence flag.
#[pyclass(name = "ProbeResult", frozen)]
struct PyProbeResult {
    inner: core::EavesdropResult,
}

#[pymethods]
impl PyProbeResult {
    #[getter]
    fn x(&self) -> f64 {
        self.inner.x
    }
    #[getter]
    fn d(&self) -> f64 {
        self.inner.d
    }
    #[getter]
    fn p_achieved(&self) -> f64 {
        self.inner.p_achieved
    }
    #[getter]
    fn converged(&self) -> bool {
        self.inner.converged
    }
    #[getter]
    fn probe_dim(&self) -> usize {
        self.inner.probe_dim
    }

    fn __repr__(&self) -> String {
        format!(
            "ProbeResult(x={}, d={}, p_achieved={}, converged={})",
            self.inner.x, self.inner.d, self.inner.p_achieved, self.inner.converged
        )
    }
}

#[pyclass(name = "CloneCandidate", frozen, get_all)]
struct PyCloneCandidate {
    x: f64,
    f_global: f64,
    f_local: f64,
    marginal_residual: f64,
    overlap_residual: f64,
    feasible: bool,
}

#[pymethods]
impl PyCloneCandidate {
    fn __repr__(&self) -> String {
        format!(
            "CloneCandidate(x={}, f_global={}, f_local={}, feasible={})",
            self.x, self.f_global, self.f_local, self.feasible
        )
    }
}

#[pyclass(name = "B92Stats", frozen, get_all)]
struct PyB92Stats {
    x: f64,
    rounds: u64,
    seed: u64,
    eve_present: bool,
    eve_errors: Option<u64>,
    eve_error_rate: Option<f64>,
    eve_error_se: Option<f64>,
    expected_eve_error: Option<f64>,
    detections: u64,
    disturbance_rate: f64,
    disturbance_se: f64,
    expected_disturbance: f64,
}

#[pyfunction]
fn helstrom_error(x: f64) -> PyResult<f64> {
    Ok(core::helstrom_error(&core::make_ensemble(x).map_err(err)?))
}

#[pyfunction]
fn c1(x: f64) -> PyResult<f64> {
    core::check_overlap(x).map_err(err).map(core::c1_closed)
}

#[pyfunction]
fn c_inf(x: f64) -> PyResult<f64> {
    core::check_overlap(x).map_err(err).map(core::c_inf_closed)
}

#[pyfunction]
fn quantumness_q(x: f64) -> PyResult<f64> {
    core::check_overlap(x).map_err(err).map(core::quantumness_q)
}

#[pyfunction]
fn d_at_max_info(x: f64) -> PyResult<f64> {
    core::check_overlap(x).map_err(err).map(core::d_at_max_info)
}

#[pyfunction]
fn disturbance(x: f64, p: f64) -> PyResult<f64> {
    core::disturbance_curve(x, p).map_err(err)
}

#[pyfunction]
fn global_fidelity(x: f64) -> PyResult<f64> {
    core::check_overlap(x)
        .map_err(err)
        .map(core::global_fidelity_closed)
}

#[pyfunction]
fn local_fidelity(x: f64) -> PyResult<f64> {
    core::check_overlap(x)
        .map_err(err)
        .map(core::local_fidelity_closed)
}

/// `(argmax, value)` of a most-quantum search: q, dmi, fg-deficit or fl-deficit.
#[pyfunction]
#[pyo3(signature = (measure, tol = 1e-8))]
fn maximize(measure: &str, tol: f64) -> PyResult<(f64, f64)> {
    let target: core::MaximizeTarget = measure.parse().map_err(err)?;
    let r = core::maximize(target, tol).map_err(err)?;
    Ok((r.search.argmax, r.search.value))
}

/// `[(x, value), ...]` on `steps + 1` overlaps from 0 to 1.
#[pyfunction]
fn curve(measure: &str, steps: usize) -> PyResult<Vec<(f64, f64)>> {
    let m: core::Measure = measure.parse().map_err(err)?;
    let rows = core::measure_curve(m, steps).map_err(err)?;
    Ok(rows.into_iter().map(|r| (r.x, r.value)).collect())
}

#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (target, x, restarts = 40, seed = 0, p_eve = None, angle_steps = 1000, prior_steps = 1000))]
fn verify(
    py: Python<'_>,
    target: &str,
    x: f64,
    restarts: usize,
    seed: u64,
    p_eve: Option<f64>,
    angle_steps: usize,
    prior_steps: usize,
) -> PyResult<PyVerifyReport> {
    let target: core::VerifyTarget = target.parse().map_err(err)?;
    let budget = core::VerifyBudget {
        angle_steps,
        prior_steps,
        restarts,
        seed,
        p_eve,
    };
    let r = py
        .detach(|| core::verify(target, x, &budget))
        .map_err(err)?;
    Ok(PyVerifyReport {
        target: r.target.name().to_string(),
        x: r.x,
        closed: r.closed,
        oracle: r.oracle,
        deviation: r.deviation,
        tolerance: r.tolerance,
        passed: r.pass,
        auxiliary: r.auxiliary,
        converged: r.converged,
    })
}

/// Optimise Eve's probe; `p_eve = None` means maximal information.
#[pyfunction]
#[pyo3(signature = (x, p_eve = None, restarts = 20, seed = 0))]
fn probe_oracle(
    py: Python<'_>,
    x: f64,
    p_eve: Option<f64>,
    restarts: usize,
    seed: u64,
) -> PyResult<PyProbeResult> {
    let mut cfg = match p_eve {
        Some(p) => core::EavesdropConfig::new(x, p),
        None => core::EavesdropConfig::at_max_info(x),
    }
    .map_err(err)?;
    cfg.restarts = restarts;
    cfg.seed = seed;
    let inner = py.detach(|| core::probe_oracle(&cfg)).map_err(err)?;
    Ok(PyProbeResult { inner })
}

/// Constrained cloning search; `objective` is "global" or "local".
#[pyfunction]
#[pyo3(signature = (x, objective, restarts = 40, seed = 0))]
fn cloning_oracle(
    py: Python<'_>,
    x: f64,
    objective: &str,
    restarts: usize,
    seed: u64,
) -> PyResult<PyCloneCandidate> {
    let objective = match objective {
        "global" => core::CloneObjective::Global,
        "local" => core::CloneObjective::Local,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown objective {other:?}"
            )))
        }
    };
    let c = py
        .detach(|| core::cloning_oracle(x, objective, restarts, seed))
        .map_err(err)?;
    Ok(PyCloneCandidate {
        x: c.x,
        f_global: c.f_global,
        f_local: c.f_local,
        marginal_residual: c.marginal_residual,
        overlap_residual: c.overlap_residual,
        feasible: c.feasible,
    })
}

#[pyfunction]
#[pyo3(signature = (x, rounds, probe = None, seed = 0))]
fn simulate_b92(
    x: f64,
    rounds: u64,
    probe: Option<&PyProbeResult>,
    seed: u64,
) -> PyResult<PyB92Stats> {
    let s = core::simulate_b92(x, rounds, probe.map(|p| &p.inner), seed).map_err(err)?;
    Ok(PyB92Stats {
        x: s.x,
        rounds: s.rounds,
        seed: s.seed,
        eve_present: s.eve_present,
        eve_errors: s.eve_errors,
        eve_error_rate: s.eve_error_rate,
        eve_error_se: s.eve_error_se,
        expected_eve_error: s.expected_eve_error,
        detections: s.detections,
        disturbance_rate: s.disturbance_rate,
        disturbance_se: s.disturbance_se,
        expected_disturbance: s.expected_disturbance,
    })
}

#[pymodule]
fn biqo(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMeasureReport>()?;
    m.add_class::<PyVerifyReport>()?;
    m.add_class::<PyProbeResult>()?;
    m.add_class::<PyCloneCandidate>()?;
    m.add_class::<PyB92Stats>()?;
    m.add_function(wrap_pyfunction!(helstrom_error, m)?)?;
    m.add_function(wrap_pyfunction!(c1, m)?)?;
    m.add_function(wrap_pyfunction!(c_inf, m)?)?;
    m.add_function(wrap_pyfunction!(quantumness_q, m)?)?;
    m.add_function(wrap_pyfunction!(d_at_max_info, m)?)?;
    m.add_function(wrap_pyfunction!(disturbance, m)?)?;
    m.add_function(wrap_pyfunction!(global_fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(local_fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(maximize, m)?)?;
    m.add_function(wrap_pyfunction!(curve, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(probe_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(cloning_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_b92, m)?)?;
    Ok(())
}
