//! Python bindings for the `cayley-ising` crate.
//!
//! The module mirrors the Rust API with plain Python data: parameter and
//! state objects are thin wrappers, everything else comes back as floats,
//! lists, tuples, or dicts. Library errors surface as `ValueError`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use cayley_ising::model;
use cayley_ising::{channels, criteria, entropy, recursion, stability, sweep};

fn verr(err: cayley_ising::Error) -> PyErr {
    PyValueError::new_err(err.to_string())
}

fn matrix_rows(t: &channels::TransitionMatrix) -> Vec<Vec<f64>> {
    (0..t.rows()).map(|r| t.row(r).to_vec()).collect()
}

/// Validated model parameters `(s, k, phi)`.
#[pyclass(name = "ModelParams", frozen)]
#[derive(Clone)]
struct PyModelParams {
    inner: model::ModelParams,
}

#[pymethods]
impl PyModelParams {
    #[new]
    fn new(s: u32, k: u32, phi: f64) -> PyResult<Self> {
        let inner = model::ModelParams::new(s, k, phi).map_err(verr)?;
        Ok(PyModelParams { inner })
    }

    #[getter]
    fn s(&self) -> u32 {
        self.inner.s()
    }

    #[getter]
    fn k(&self) -> u32 {
        self.inner.k()
    }

    #[getter]
    fn phi(&self) -> f64 {
        self.inner.phi()
    }

    #[getter]
    fn beta_j(&self) -> f64 {
        self.inner.beta_j()
    }

    fn __repr__(&self) -> String {
        format!(
            "ModelParams(s={}, k={}, phi={})",
            self.inner.s(),
            self.inner.k(),
            self.inner.phi()
        )
    }
}

/// A translation-invariant boundary law `(X_{-s}, ..., X_s; Z)`.
#[pyclass(name = "FieldState", frozen)]
#[derive(Clone)]
struct PyFieldState {
    inner: model::FieldState,
}

#[pymethods]
impl PyFieldState {
    #[new]
    fn new(s: u32, x: Vec<f64>, z: f64) -> PyResult<Self> {
        let inner = model::FieldState::new(s, &x, z).map_err(verr)?;
        Ok(PyFieldState { inner })
    }

    #[getter]
    fn s(&self) -> u32 {
        self.inner.s()
    }

    #[getter]
    fn z(&self) -> f64 {
        self.inner.z()
    }

    /// Activity `X_i`; `i` must satisfy `|i| <= s`.
    fn x(&self, i: i32) -> PyResult<f64> {
        if i.unsigned_abs() > self.inner.s() {
            return Err(PyValueError::new_err(format!(
                "spin index {i} outside [-{0}, {0}]",
                self.inner.s()
            )));
        }
        Ok(self.inner.x(i))
    }

    /// The `2s` free activities, `X_0 = 1` omitted.
    fn free_activities(&self) -> Vec<f64> {
        self.inner.free_activities()
    }

    fn __repr__(&self) -> String {
        format!(
            "FieldState(s={}, z={}, x=[{}])",
            self.inner.s(),
            self.inner.z(),
            self.inner
                .free_activities()
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        )
    }
}

/// The symmetric boundary law with `X_i = cosh(beta J i / 2)^k`, `Z = 1`.
#[pyfunction]
fn symmetric_fixed_point(params: &PyModelParams) -> PyFieldState {
    PyFieldState {
        inner: model::symmetric_fixed_point(&params.inner),
    }
}

/// One application of the boundary-law consistency recursion.
#[pyfunction]
fn evaluate_recursion(params: &PyModelParams, state: &PyFieldState) -> PyResult<PyFieldState> {
    let inner = recursion::evaluate_recursion(&params.inner, &state.inner).map_err(verr)?;
    Ok(PyFieldState { inner })
}

/// The scalar consistency map `F(z)`.
#[pyfunction]
fn scalar_map(params: &PyModelParams, z: f64) -> PyResult<f64> {
    recursion::scalar_map(&params.inner, z).map_err(verr)
}

/// Derivative `F'(1)` of the scalar map at the symmetric point.
#[pyfunction]
fn scalar_map_derivative_at_one(params: &PyModelParams) -> f64 {
    recursion::scalar_map_derivative_at_one(&params.inner)
}

/// Census of scalar fixed points as dicts with keys
/// `z_star`, `derivative_abs`, `stability`.
#[pyfunction]
#[pyo3(signature = (params, z_min=None, z_max=None, grid_points=None))]
fn find_scalar_fixed_points<'py>(
    py: Python<'py>,
    params: &PyModelParams,
    z_min: Option<f64>,
    z_max: Option<f64>,
    grid_points: Option<usize>,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let roots = recursion::find_scalar_fixed_points(
        &params.inner,
        z_min.unwrap_or(recursion::DEFAULT_Z_MIN),
        z_max.unwrap_or(recursion::DEFAULT_Z_MAX),
        grid_points.unwrap_or(cayley_ising::tolerances::FIXED_POINT_SCAN_POINTS),
    )
    .map_err(verr)?;
    roots
        .iter()
        .map(|root| {
            let entry = PyDict::new(py);
            entry.set_item("z_star", root.z_star)?;
            entry.set_item("derivative_abs", root.derivative_abs)?;
            entry.set_item("stability", root.stability.to_string())?;
            Ok(entry)
        })
        .collect()
}

/// Lift a scalar fixed point to a full boundary law.
#[pyfunction]
fn lift_scalar_fixed_point(params: &PyModelParams, z_star: f64) -> PyResult<PyFieldState> {
    let inner = recursion::lift_scalar_fixed_point(&params.inner, z_star).map_err(verr)?;
    Ok(PyFieldState { inner })
}

/// Leading Jacobian eigenvalue at the symmetric law, from the closed form.
#[pyfunction]
fn lambda_max(params: &PyModelParams) -> f64 {
    stability::lambda_max_closed_form(&params.inner)
}

/// Dense `(2s+1) x (2s+1)` Jacobian at the symmetric law, row-major.
#[pyfunction]
fn jacobian(params: &PyModelParams) -> Vec<Vec<f64>> {
    let dense = stability::jacobian_at_symmetric_point(&params.inner).dense();
    (0..dense.nrows())
        .map(|r| (0..dense.ncols()).map(|c| dense[(r, c)]).collect())
        .collect()
}

/// Full Jacobian spectrum `[lambda, -lambda, 0, ...]` at the symmetric law.
#[pyfunction]
fn jacobian_spectrum(params: &PyModelParams) -> PyResult<Vec<f64>> {
    let j = stability::jacobian_at_symmetric_point(&params.inner);
    Ok(stability::jacobian_spectrum(&j).map_err(verr)?.eigenvalues)
}

/// Stability roots `(phi_low, phi_high)` of `lambda_max = 1`.
#[pyfunction]
fn stability_thresholds(s: u32, k: u32) -> PyResult<(f64, f64)> {
    stability::stability_thresholds(s, k).map_err(verr)
}

/// Integer-to-half-integer kernel `P` as a list of rows.
#[pyfunction]
fn build_p(params: &PyModelParams) -> Vec<Vec<f64>> {
    matrix_rows(&channels::build_p(&params.inner))
}

/// Half-integer-to-integer kernel `Q` as a list of rows.
#[pyfunction]
fn build_q(params: &PyModelParams) -> Vec<Vec<f64>> {
    matrix_rows(&channels::build_q(&params.inner))
}

/// Two-step chain `QP` on the half-integer sublattice.
#[pyfunction]
fn two_step_psi(params: &PyModelParams) -> Vec<Vec<f64>> {
    matrix_rows(&channels::two_step_psi(&params.inner))
}

/// Two-step chain `PQ` on the integer sublattice.
#[pyfunction]
fn two_step_phi(params: &PyModelParams) -> Vec<Vec<f64>> {
    matrix_rows(&channels::two_step_phi(&params.inner))
}

/// Second eigenvalue `2p - 1` of the half-integer two-step chain.
#[pyfunction]
fn second_eigenvalue_psi(params: &PyModelParams) -> f64 {
    channels::second_eigenvalue_psi(&params.inner)
}

/// Stationary distribution of the integer two-step chain.
#[pyfunction]
fn stationary_distribution(params: &PyModelParams) -> PyResult<Vec<f64>> {
    channels::stationary_distribution(&channels::two_step_phi(&params.inner)).map_err(verr)
}

/// Dobrushin coefficients `(tau_p, tau_q)`.
#[pyfunction]
fn tau_closed_forms(params: &PyModelParams) -> (f64, f64) {
    criteria::tau_closed_forms(&params.inner)
}

fn criterion_result<'py>(
    py: Python<'py>,
    result: criteria::CriterionResult,
) -> PyResult<Bound<'py, PyDict>> {
    let entry = PyDict::new(py);
    entry.set_item("criterion", result.criterion.to_string())?;
    entry.set_item("value", result.value)?;
    entry.set_item("verdict", result.verdict.to_string())?;
    Ok(entry)
}

/// Dobrushin extremality test as a dict with keys
/// `criterion`, `value`, `verdict`.
#[pyfunction]
fn dobrushin_test<'py>(py: Python<'py>, params: &PyModelParams) -> PyResult<Bound<'py, PyDict>> {
    criterion_result(py, criteria::dobrushin_test(&params.inner))
}

/// Kesten-Stigum non-extremality test, same shape as `dobrushin_test`.
#[pyfunction]
fn ks_test<'py>(py: Python<'py>, params: &PyModelParams) -> PyResult<Bound<'py, PyDict>> {
    criterion_result(py, criteria::ks_test(&params.inner))
}

/// Roots `(phi_low, phi_high)` of one criterion;
/// `criterion` is `"stability"`, `"dobrushin"`, or `"ks"`.
#[pyfunction]
fn criterion_thresholds(s: u32, k: u32, criterion: &str) -> PyResult<(f64, f64)> {
    let criterion: criteria::Criterion = criterion.parse().map_err(verr)?;
    criteria::criterion_thresholds(s, k, criterion).map_err(verr)
}

/// All six regime thresholds as a dict of `(phi_low, phi_high)` pairs.
#[pyfunction]
fn regime_thresholds<'py>(py: Python<'py>, s: u32, k: u32) -> PyResult<Bound<'py, PyDict>> {
    let t = criteria::regime_thresholds(s, k).map_err(verr)?;
    let entry = PyDict::new(py);
    entry.set_item("stability", t.stability)?;
    entry.set_item("dobrushin", t.dobrushin)?;
    entry.set_item("kesten_stigum", t.kesten_stigum)?;
    Ok(entry)
}

/// Regime label (`"F1"`..`"AF4"` or `"Boundary"`) at one point.
#[pyfunction]
fn classify_regime(s: u32, k: u32, phi: f64) -> PyResult<String> {
    Ok(criteria::classify_regime(s, k, phi).map_err(verr)?.to_string())
}

/// Binary entropy in nats.
#[pyfunction]
fn binary_entropy(x: f64) -> PyResult<f64> {
    entropy::binary_entropy(x).map_err(verr)
}

/// Entropy rates as a dict with keys `s`, `k`, `phi`, `h_psi`, `h_phi`.
#[pyfunction]
fn entropy_record<'py>(py: Python<'py>, params: &PyModelParams) -> PyResult<Bound<'py, PyDict>> {
    let record = entropy::entropy_record(&params.inner).map_err(verr)?;
    let entry = PyDict::new(py);
    entry.set_item("s", record.s)?;
    entry.set_item("k", record.k)?;
    entry.set_item("phi", record.phi)?;
    entry.set_item("h_psi", record.h_psi)?;
    entry.set_item("h_phi", record.h_phi)?;
    Ok(entry)
}

/// Mean conditional entropy along a schedule of thermal parameters.
#[pyfunction]
fn averaged_inhomogeneous_entropy(s: u32, k: u32, schedule: Vec<f64>) -> PyResult<f64> {
    entropy::averaged_inhomogeneous_entropy(s, k, &schedule).map_err(verr)
}

/// Everything the pipeline computes at one point, as a dict mirroring the
/// sweep CSV columns.
#[pyfunction]
fn sweep_record<'py>(py: Python<'py>, s: u32, k: u32, phi: f64) -> PyResult<Bound<'py, PyDict>> {
    let params = model::ModelParams::new(s, k, phi).map_err(verr)?;
    let record = sweep::sweep_record_standalone(&params).map_err(verr)?;
    let entry = PyDict::new(py);
    entry.set_item("s", record.s)?;
    entry.set_item("k", record.k)?;
    entry.set_item("phi", record.phi)?;
    entry.set_item("tau_p", record.tau_p)?;
    entry.set_item("tau_q", record.tau_q)?;
    entry.set_item("dobrushin", record.dobrushin)?;
    entry.set_item("lambda2", record.lambda2)?;
    entry.set_item("ks", record.ks)?;
    entry.set_item("lambda_max", record.lambda_max)?;
    entry.set_item("fprime1", record.fprime1)?;
    entry.set_item("h_psi", record.h_psi)?;
    entry.set_item("h_phi", record.h_phi)?;
    entry.set_item("regime", record.regime)?;
    Ok(entry)
}

/// Thermal parameter `phi = exp(J / (2 T))` from coupling and temperature.
#[pyfunction]
fn phi_from_temperature(j: f64, t: f64) -> PyResult<f64> {
    model::phi_from_temperature(j, t).map_err(verr)
}

/// Python module entry point.
#[pymodule]
#[pyo3(name = "cayley_ising")]
fn cayley_ising_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModelParams>()?;
    m.add_class::<PyFieldState>()?;
    m.add_function(wrap_pyfunction!(symmetric_fixed_point, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate_recursion, m)?)?;
    m.add_function(wrap_pyfunction!(scalar_map, m)?)?;
    m.add_function(wrap_pyfunction!(scalar_map_derivative_at_one, m)?)?;
    m.add_function(wrap_pyfunction!(find_scalar_fixed_points, m)?)?;
    m.add_function(wrap_pyfunction!(lift_scalar_fixed_point, m)?)?;
    m.add_function(wrap_pyfunction!(lambda_max, m)?)?;
    m.add_function(wrap_pyfunction!(jacobian, m)?)?;
    m.add_function(wrap_pyfunction!(jacobian_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(stability_thresholds, m)?)?;
    m.add_function(wrap_pyfunction!(build_p, m)?)?;
    m.add_function(wrap_pyfunction!(build_q, m)?)?;
    m.add_function(wrap_pyfunction!(two_step_psi, m)?)?;
    m.add_function(wrap_pyfunction!(two_step_phi, m)?)?;
    m.add_function(wrap_pyfunction!(second_eigenvalue_psi, m)?)?;
    m.add_function(wrap_pyfunction!(stationary_distribution, m)?)?;
    m.add_function(wrap_pyfunction!(tau_closed_forms, m)?)?;
    m.add_function(wrap_pyfunction!(dobrushin_test, m)?)?;
    m.add_function(wrap_pyfunction!(ks_test, m)?)?;
    m.add_function(wrap_pyfunction!(criterion_thresholds, m)?)?;
    m.add_function(wrap_pyfunction!(regime_thresholds, m)?)?;
    m.add_function(wrap_pyfunction!(classify_regime, m)?)?;
    m.add_function(wrap_pyfunction!(binary_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(entropy_record, m)?)?;
    m.add_function(wrap_pyfunction!(averaged_inhomogeneous_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_record, m)?)?;
    m.add_function(wrap_pyfunction!(phi_from_temperature, m)?)?;
    Ok(())
}
