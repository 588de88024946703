//! Python bindings: `import fraclead_py`.

use fraclead::experiment::run_experiment_with_jobs;
use fraclead::sampling::{GridVariant, SamplingScheme};
use fraclead::{Error, HurstParam};
use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io(_) => PyOSError::new_err(e.to_string()),
        Error::Numerical { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn hurst(h: f64) -> PyResult<HurstParam> {
    HurstParam::new(h).map_err(to_py)
}

#[pyfunction]
fn normalization_constant(h: f64) -> PyResult<f64> {
    Ok(fraclead::normalization_constant(hurst(h)?))
}

#[pyfunction]
fn volterra_kernel(h: f64, t: f64, s: f64) -> PyResult<f64> {
    Ok(fraclead::volterra_kernel(hurst(h)?, t, s))
}

#[pyfunction]
fn fbm_covariance(h: f64, t: f64, s: f64) -> PyResult<f64> {
    Ok(fraclead::fbm_covariance(hurst(h)?, t, s))
}

#[pyfunction]
fn cross_covariance(h1: f64, h2: f64, rho: f64, t: f64, s: f64) -> PyResult<f64> {
    fraclead::cross_covariance(hurst(h1)?, hurst(h2)?, rho, t, s).map_err(to_py)
}

/// Returns `(values1, values2)` of the correlated pair at the given times.
#[pyfunction]
#[pyo3(signature = (h1, h2, rho, horizon, times1, times2, seed, m=4096))]
#[allow(clippy::too_many_arguments)]
fn simulate_fbm_pair(
    h1: f64,
    h2: f64,
    rho: f64,
    horizon: f64,
    times1: Vec<f64>,
    times2: Vec<f64>,
    seed: u64,
    m: usize,
) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let spec =
        fraclead::CorrelatedFbmSpec::new(hurst(h1)?, hurst(h2)?, rho, horizon).map_err(to_py)?;
    let driver = fraclead::DriverGrid::new(m, horizon).map_err(to_py)?;
    let pair = fraclead::simulate_fbm_pair(spec, &times1, &times2, driver, seed).map_err(to_py)?;
    Ok((pair.values1, pair.values2))
}

#[pyfunction]
fn poisson_times(intensity: f64, horizon: f64, seed: u64) -> PyResult<Vec<f64>> {
    fraclead::generate_times(&SamplingScheme::poisson(intensity, horizon), seed).map_err(to_py)
}

#[pyfunction]
fn equidistant_times(n: usize, horizon: f64) -> PyResult<Vec<f64>> {
    fraclead::generate_times(&SamplingScheme::equidistant(n, horizon), 0).map_err(to_py)
}

#[pyfunction]
fn affine_grid(step: f64, delta: f64) -> PyResult<Vec<f64>> {
    Ok(fraclead::build_grid(&GridVariant::Affine { step }, delta)
        .map_err(to_py)?
        .points)
}

/// The lead-lag model with `dX^l = dB^l`.
#[pyclass(module = "fraclead_py")]
struct LeadLagModel {
    sim: fraclead::model::LatentSimulator,
}

#[pymethods]
impl LeadLagModel {
    #[new]
    #[pyo3(signature = (h1, h2, rho, theta, delta, t_end))]
    fn new(h1: f64, h2: f64, rho: f64, theta: f64, delta: f64, t_end: f64) -> PyResult<Self> {
        let model =
            fraclead::LeadLagModel::pure_fbm(hurst(h1)?, hurst(h2)?, rho, theta, delta, t_end)
                .map_err(to_py)?;
        let sim = fraclead::model::LatentSimulator::new(model).map_err(to_py)?;
        Ok(Self { sim })
    }

    #[getter]
    fn theta(&self) -> f64 {
        self.sim.model().theta
    }

    /// Latent values `(values1, values2)` at the given times in `[0, T+δ]`.
    fn simulate(
        &self,
        times1: Vec<f64>,
        times2: Vec<f64>,
        seed: u64,
    ) -> PyResult<(Vec<f64>, Vec<f64>)> {
        let p = self.sim.simulate(&times1, &times2, seed).map_err(to_py)?;
        Ok((p.values1, p.values2))
    }
}

#[pyclass(module = "fraclead_py")]
struct ObservationSet {
    inner: fraclead::ObservationSet,
}

#[pymethods]
impl ObservationSet {
    #[new]
    fn new(
        times1: Vec<f64>,
        values1: Vec<f64>,
        times2: Vec<f64>,
        values2: Vec<f64>,
        t_end: f64,
        delta: f64,
    ) -> PyResult<Self> {
        let inner = fraclead::ObservationSet::new(times1, values1, times2, values2, t_end, delta)
            .map_err(to_py)?;
        Ok(Self { inner })
    }

    fn __len__(&self) -> usize {
        self.inner.times1.len() + self.inner.times2.len()
    }

    fn contrast(&self, theta_tilde: f64) -> PyResult<f64> {
        fraclead::hy_contrast(&self.inner, theta_tilde).map_err(to_py)
    }

    fn estimate(&self, grid: Vec<f64>) -> PyResult<EstimateResult> {
        let grid = fraclead::GridSpec::from_points(grid, self.inner.delta).map_err(to_py)?;
        let inner = fraclead::estimate_leadlag(&self.inner, &grid).map_err(to_py)?;
        Ok(EstimateResult { inner })
    }

    /// Sampling diagnostics as a dict.
    #[pyo3(signature = (h1, h2, epsilon, mu, v_n))]
    fn diagnostics(
        &self,
        py: Python<'_>,
        h1: f64,
        h2: f64,
        epsilon: f64,
        mu: f64,
        v_n: f64,
    ) -> PyResult<Py<PyAny>> {
        let o = &self.inner;
        let d = fraclead::diagnostics(
            &o.times1,
            &o.times2,
            hurst(h1)?,
            hurst(h2)?,
            o.t_end,
            epsilon,
            mu,
            v_n,
        )
        .map_err(to_py)?;
        let dict = pyo3::types::PyDict::new(py);
        dict.set_item("b2_ratio_1", d.b2_ratio_1)?;
        dict.set_item("b2_ratio_2", d.b2_ratio_2)?;
        dict.set_item("b3_ratio_1", d.b3_ratio_1)?;
        dict.set_item("b3_ratio_2", d.b3_ratio_2)?;
        dict.set_item("b4_value", d.b4_value)?;
        dict.set_item("r_n", d.r_n)?;
        Ok(dict.into_any().unbind())
    }
}

#[pyclass(module = "fraclead_py")]
struct EstimateResult {
    inner: fraclead::EstimateResult,
}

#[pymethods]
impl EstimateResult {
    #[getter]
    fn theta_hat(&self) -> f64 {
        self.inner.theta_hat
    }

    #[getter]
    fn contrast_at_max(&self) -> f64 {
        self.inner.contrast_at_max
    }

    #[getter]
    fn argmax_count(&self) -> usize {
        self.inner.argmax_count
    }

    #[getter]
    fn grid(&self) -> Vec<f64> {
        self.inner.curve.grid_points.clone()
    }

    #[getter]
    fn values(&self) -> Vec<f64> {
        self.inner.curve.values.clone()
    }

    fn __repr__(&self) -> String {
        format!(
            "EstimateResult(theta_hat={}, contrast_at_max={}, argmax_count={})",
            self.inner.theta_hat, self.inner.contrast_at_max, self.inner.argmax_count
        )
    }
}

/// Run an experiment from a TOML config and return the report as JSON.
#[pyfunction]
#[pyo3(signature = (config_toml, jobs=1))]
fn run_experiment(py: Python<'_>, config_toml: &str, jobs: usize) -> PyResult<String> {
    let config: fraclead::ExperimentConfig =
        toml::from_str(config_toml).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let report = py
        .detach(|| run_experiment_with_jobs(&config, jobs.max(1)))
        .map_err(to_py)?;
    serde_json::to_string(&report).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

#[pymodule]
fn fraclead_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(normalization_constant, m)?)?;
    m.add_function(wrap_pyfunction!(volterra_kernel, m)?)?;
    m.add_function(wrap_pyfunction!(fbm_covariance, m)?)?;
    m.add_function(wrap_pyfunction!(cross_covariance, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_fbm_pair, m)?)?;
    m.add_function(wrap_pyfunction!(poisson_times, m)?)?;
    m.add_function(wrap_pyfunction!(equidistant_times, m)?)?;
    m.add_function(wrap_pyfunction!(affine_grid, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    m.add_class::<LeadLagModel>()?;
    m.add_class::<ObservationSet>()?;
    m.add_class::<EstimateResult>()?;
    Ok(())
}
