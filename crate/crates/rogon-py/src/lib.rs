//! Python bindings for the rogue-wave option-pricing toolkit.
//!
//! Exposes the model parameters, closed-form field evaluation, spectral PDE
//! certification, split-step propagation, the modulation-instability
//! scenario, and the Black-Scholes baseline. Input-validation failures
//! raise `ValueError`; failures of the numerics raise `RuntimeError`.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyBytes;

use rogon::config::Normalization;
use rogon::dynamics::{simulate, SimState, SimulationReport};
use rogon::grid::{SpaceTimeGrid, WaveField};
use rogon::rogons::SolutionKind;
use rogon::Error;

/// Maps library errors onto Python exceptions: numerical failures become
/// `RuntimeError`, rejected inputs become `ValueError`.
fn to_py(e: impl Into<Error>) -> PyErr {
    let e = e.into();
    if e.is_numerical() {
        PyRuntimeError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn parse_kind(kind: &str) -> PyResult<SolutionKind> {
    kind.parse::<SolutionKind>().map_err(PyValueError::new_err)
}

/// Model parameters of the focusing nonlinear pricing equation.
#[pyclass(name = "MarketParams", frozen, from_py_object)]
#[derive(Clone)]
struct PyMarketParams {
    inner: rogon::MarketParams,
}

#[pymethods]
impl PyMarketParams {
    #[new]
    #[pyo3(signature = (sigma, beta, alpha, k=0.0))]
    fn new(sigma: f64, beta: f64, alpha: f64, k: f64) -> PyResult<Self> {
        Ok(Self { inner: rogon::MarketParams::new(sigma, beta, alpha, k).map_err(to_py)? })
    }

    #[getter]
    fn sigma(&self) -> f64 {
        self.inner.sigma()
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.inner.beta()
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha()
    }

    #[getter]
    fn k(&self) -> f64 {
        self.inner.k()
    }

    /// Signed plane-wave background amplitude `alpha * sqrt(sigma / (2 beta))`.
    fn background_amplitude(&self) -> f64 {
        self.inner.background_amplitude()
    }

    fn __repr__(&self) -> String {
        format!(
            "MarketParams(sigma={}, beta={}, alpha={}, k={})",
            self.inner.sigma(),
            self.inner.beta(),
            self.inner.alpha(),
            self.inner.k()
        )
    }
}

/// A complex field sampled on a space-time grid (time-major).
#[pyclass(name = "Field", frozen)]
struct PyField {
    inner: WaveField,
}

#[pymethods]
impl PyField {
    #[getter]
    fn n_s(&self) -> usize {
        self.inner.grid().n_s()
    }

    #[getter]
    fn n_t(&self) -> usize {
        self.inner.grid().n_t()
    }

    #[getter]
    fn label(&self) -> String {
        self.inner.label().to_string()
    }

    /// Sample at time index `i`, space index `j`.
    fn at(&self, i: usize, j: usize) -> PyResult<Complex64> {
        self.check_indices(i, j)?;
        Ok(self.inner.at(i, j))
    }

    /// Intensity `|psi|^2` at time index `i`, space index `j`.
    fn intensity(&self, i: usize, j: usize) -> PyResult<f64> {
        self.check_indices(i, j)?;
        Ok(self.inner.intensity(i, j))
    }

    /// `(max intensity, S, t)` over the grid.
    fn peak(&self) -> (f64, f64, f64) {
        rogon::peak_statistics(&self.inner)
    }

    /// The field as CSV text (`S,t,re,im,intensity`).
    fn csv(&self) -> PyResult<String> {
        let mut buf = Vec::new();
        rogon::write_csv(&self.inner, &mut buf).map_err(to_py)?;
        Ok(String::from_utf8(buf).expect("CSV is ASCII"))
    }

    /// Binary P5 graymap of the intensity. With `lo`/`hi` omitted the
    /// field's own min/max intensity spans the gray scale.
    #[pyo3(signature = (lo=None, hi=None))]
    fn render_pgm<'py>(
        &self,
        py: Python<'py>,
        lo: Option<f64>,
        hi: Option<f64>,
    ) -> PyResult<Bound<'py, PyBytes>> {
        let norm = match (lo, hi) {
            (Some(lo), Some(hi)) => Normalization::Fixed { lo, hi },
            (None, None) => Normalization::GlobalMinMax,
            _ => return Err(PyValueError::new_err("pass both lo and hi, or neither")),
        };
        let bytes = rogon::render_heatmap(&self.inner, norm).map_err(to_py)?;
        Ok(PyBytes::new(py, &bytes))
    }

    fn __repr__(&self) -> String {
        format!(
            "Field(label={:?}, n_t={}, n_s={})",
            self.inner.label(),
            self.inner.grid().n_t(),
            self.inner.grid().n_s()
        )
    }
}

impl PyField {
    fn check_indices(&self, i: usize, j: usize) -> PyResult<()> {
        let g = self.inner.grid();
        if i >= g.n_t() || j >= g.n_s() {
            return Err(PyValueError::new_err(format!(
                "index ({i}, {j}) outside the {} x {} grid",
                g.n_t(),
                g.n_s()
            )));
        }
        Ok(())
    }
}

/// Norms of the PDE residual of a closed-form solution.
#[pyclass(name = "ResidualReport", frozen)]
struct PyResidualReport {
    #[pyo3(get)]
    linf: f64,
    #[pyo3(get)]
    l2: f64,
    #[pyo3(get)]
    boundary_mismatch: f64,
}

#[pymethods]
impl PyResidualReport {
    fn __repr__(&self) -> String {
        format!(
            "ResidualReport(linf={:e}, l2={:e}, boundary_mismatch={:e})",
            self.linf, self.l2, self.boundary_mismatch
        )
    }
}

/// Summary of a split-step propagation tracked against its analytic start.
#[pyclass(name = "SimReport", frozen)]
struct PySimReport {
    #[pyo3(get)]
    final_error: f64,
    #[pyo3(get)]
    mass_drift: f64,
    #[pyo3(get)]
    hamiltonian_drift: f64,
    #[pyo3(get)]
    n_records: usize,
}

#[pymethods]
impl PySimReport {
    fn __repr__(&self) -> String {
        format!(
            "SimReport(final_error={:e}, mass_drift={:e}, hamiltonian_drift={:e}, n_records={})",
            self.final_error, self.mass_drift, self.hamiltonian_drift, self.n_records
        )
    }
}

/// Summary of the modulation-instability scenario.
#[pyclass(name = "MiSummary", frozen)]
struct PyMiSummary {
    #[pyo3(get)]
    kappa: f64,
    #[pyo3(get)]
    theory_rate: f64,
    #[pyo3(get)]
    fitted_rate: Option<f64>,
    #[pyo3(get)]
    theory_peak_rate: f64,
    #[pyo3(get)]
    cutoff_kappa: f64,
    #[pyo3(get)]
    max_noncarrier_amplitude: f64,
    #[pyo3(get)]
    mass_drift: f64,
}

#[pymethods]
impl PyMiSummary {
    fn __repr__(&self) -> String {
        format!(
            "MiSummary(kappa={}, theory_rate={}, fitted_rate={:?}, cutoff_kappa={})",
            self.kappa, self.theory_rate, self.fitted_rate, self.cutoff_kappa
        )
    }
}

/// One closed-form sample `psi(S, t)`.
#[pyfunction]
fn sample(kind: &str, params: &PyMarketParams, s: f64, t: f64) -> PyResult<Complex64> {
    parse_kind(kind)?.sample(&params.inner, s, t).map_err(to_py)
}

/// Evaluates a closed-form solution on a grid. The space axis excludes
/// `s_max` (periodic convention); the time axis includes both endpoints.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
fn eval_field(
    kind: &str,
    params: &PyMarketParams,
    s_min: f64,
    s_max: f64,
    n_s: usize,
    t_min: f64,
    t_max: f64,
    n_t: usize,
) -> PyResult<PyField> {
    let g = SpaceTimeGrid::new(s_min, s_max, n_s, t_min, t_max, n_t).map_err(to_py)?;
    let f = rogon::eval_field(parse_kind(kind)?, &params.inner, &g).map_err(to_py)?;
    Ok(PyField { inner: f })
}

/// Spectral PDE residual of a closed-form solution over a grid.
#[pyfunction]
#[pyo3(signature = (kind, params, s_min, s_max, n_s, t_min, t_max, n_t, dt_probe=1e-3))]
#[allow(clippy::too_many_arguments)]
fn residual(
    kind: &str,
    params: &PyMarketParams,
    s_min: f64,
    s_max: f64,
    n_s: usize,
    t_min: f64,
    t_max: f64,
    n_t: usize,
    dt_probe: f64,
) -> PyResult<PyResidualReport> {
    let g = SpaceTimeGrid::new(s_min, s_max, n_s, t_min, t_max, n_t).map_err(to_py)?;
    let solution = parse_kind(kind)?;
    let report =
        rogon::residual_at(&solution.sampler(&params.inner), &params.inner, &g, dt_probe)
            .map_err(to_py)?;
    Ok(PyResidualReport {
        linf: report.linf,
        l2: report.l2,
        boundary_mismatch: report.boundary_mismatch,
    })
}

/// Propagates a closed-form solution from `t_start` to `t_end` with the
/// split-step integrator on the centered periodic domain of length `l`,
/// tracking the pointwise error against the analytic solution.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
fn simulate_solution(
    kind: &str,
    params: &PyMarketParams,
    l: f64,
    n_s: usize,
    t_start: f64,
    t_end: f64,
    dt: f64,
) -> PyResult<PySimReport> {
    let solution = parse_kind(kind)?;
    let sampler = solution.sampler(&params.inner);
    let state =
        SimState::from_sampler(&params.inner, l, n_s, t_start, &sampler).map_err(to_py)?;
    let report = simulate(&state, t_end, dt, Some(&sampler), &[]).map_err(to_py)?;
    Ok(PySimReport {
        final_error: *report
            .error_linf_vs_analytic
            .as_ref()
            .expect("reference designated")
            .last()
            .expect("at least one record"),
        mass_drift: SimulationReport::relative_drift(&report.mass_trace),
        hamiltonian_drift: SimulationReport::relative_drift(&report.hamiltonian_trace),
        n_records: report.times.len(),
    })
}

/// Runs the modulation-instability scenario and returns the growth-rate fit
/// for the seeded mode.
#[pyfunction]
#[pyo3(signature = (params, l, n_s, eps, m_pert, t_end, dt, rng_seed=0))]
#[allow(clippy::too_many_arguments)]
fn mi_scenario(
    params: &PyMarketParams,
    l: f64,
    n_s: usize,
    eps: f64,
    m_pert: usize,
    t_end: f64,
    dt: f64,
    rng_seed: u64,
) -> PyResult<PyMiSummary> {
    let report = rogon::mi_scenario(&params.inner, l, n_s, eps, m_pert, t_end, dt, rng_seed)
        .map_err(to_py)?;
    let fit = report.pert_fit();
    Ok(PyMiSummary {
        kappa: report.kappa,
        theory_rate: fit.theory,
        fitted_rate: fit.fitted,
        theory_peak_rate: report.theory_peak_rate,
        cutoff_kappa: report.cutoff_kappa,
        max_noncarrier_amplitude: report.max_noncarrier_amplitude(),
        mass_drift: SimulationReport::relative_drift(&report.sim.mass_trace),
    })
}

/// Linear-stability growth rate at wavenumber `kappa`.
#[pyfunction]
fn mi_growth_rate(params: &PyMarketParams, kappa: f64) -> f64 {
    rogon::mi_growth_rate(&params.inner, kappa)
}

fn bs_params(r: f64, sigma_bs: f64, strike: f64, maturity: f64) -> PyResult<rogon::BsParams> {
    rogon::BsParams::new(r, sigma_bs, strike, maturity).map_err(to_py)
}

/// European call price.
#[pyfunction]
fn bs_call(s: f64, r: f64, sigma_bs: f64, strike: f64, maturity: f64) -> PyResult<f64> {
    rogon::bs_call_price(s, &bs_params(r, sigma_bs, strike, maturity)?).map_err(to_py)
}

/// European put price.
#[pyfunction]
fn bs_put(s: f64, r: f64, sigma_bs: f64, strike: f64, maturity: f64) -> PyResult<f64> {
    rogon::bs_put_price(s, &bs_params(r, sigma_bs, strike, maturity)?).map_err(to_py)
}

/// `|C - P - (s - K e^{-r tau})|`.
#[pyfunction]
fn bs_parity_gap(s: f64, r: f64, sigma_bs: f64, strike: f64, maturity: f64) -> PyResult<f64> {
    rogon::put_call_parity_gap(s, &bs_params(r, sigma_bs, strike, maturity)?).map_err(to_py)
}

/// Max pricing-PDE residual of the closed form over `spots`.
#[pyfunction]
#[pyo3(signature = (spots, r, sigma_bs, strike, maturity, bump=1e-3))]
fn bs_residual(
    spots: Vec<f64>,
    r: f64,
    sigma_bs: f64,
    strike: f64,
    maturity: f64,
    bump: f64,
) -> PyResult<f64> {
    rogon::bs_closed_form_residual(&spots, &bs_params(r, sigma_bs, strike, maturity)?, bump)
        .map_err(to_py)
}

/// Max pricing-PDE residual of an arbitrary Python pricer `f(s, tau)` over
/// `spots` — for testing alternative pricers against the equation.
#[pyfunction]
#[pyo3(signature = (price_fn, spots, r, sigma_bs, strike, maturity, bump=1e-3))]
fn bs_residual_of(
    price_fn: Bound<'_, PyAny>,
    spots: Vec<f64>,
    r: f64,
    sigma_bs: f64,
    strike: f64,
    maturity: f64,
    bump: f64,
) -> PyResult<f64> {
    let bp = bs_params(r, sigma_bs, strike, maturity)?;
    let failure: std::cell::RefCell<Option<PyErr>> = std::cell::RefCell::new(None);
    let f = |s: f64, tau: f64| -> f64 {
        match price_fn.call1((s, tau)).and_then(|v| v.extract::<f64>()) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    };
    let result = rogon::bs_pde_residual(&f, &spots, &bp, bump);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    result.map_err(to_py)
}

/// Standard normal CDF.
#[pyfunction]
fn norm_cdf(x: f64) -> f64 {
    rogon::norm_cdf(x)
}

#[pymodule]
fn rogon_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMarketParams>()?;
    m.add_class::<PyField>()?;
    m.add_class::<PyResidualReport>()?;
    m.add_class::<PySimReport>()?;
    m.add_class::<PyMiSummary>()?;
    m.add_function(wrap_pyfunction!(sample, m)?)?;
    m.add_function(wrap_pyfunction!(eval_field, m)?)?;
    m.add_function(wrap_pyfunction!(residual, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_solution, m)?)?;
    m.add_function(wrap_pyfunction!(mi_scenario, m)?)?;
    m.add_function(wrap_pyfunction!(mi_growth_rate, m)?)?;
    m.add_function(wrap_pyfunction!(bs_call, m)?)?;
    m.add_function(wrap_pyfunction!(bs_put, m)?)?;
    m.add_function(wrap_pyfunction!(bs_parity_gap, m)?)?;
    m.add_function(wrap_pyfunction!(bs_residual, m)?)?;
    m.add_function(wrap_pyfunction!(bs_residual_of, m)?)?;
    m.add_function(wrap_pyfunction!(norm_cdf, m)?)?;
    Ok(())
}
