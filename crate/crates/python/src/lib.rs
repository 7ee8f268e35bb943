//! Python bindings. Built as the `eigencond` extension module.

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;

use eigencond as ec;
use ec::conditioning::NormKind;
use ec::extremal::Exponent;
use ec::linalg::{ComplexMatrix, Tolerances};

/// Dense matrix as a list of rows.
type Rows = Vec<Vec<Complex64>>;

/// `(eigenvalue, kappa_lambda, kappa_x, max_shift_ratio, max_angle_ratio)`.
type PerturbationRow = (Complex64, f64, f64, f64, f64);

create_exception!(eigencond, IllPosedError, PyValueError, "Numerically ill-posed input.");

fn to_py(e: ec::Error) -> PyErr {
    if e.is_ill_posed() {
        return IllPosedError::new_err(e.to_string());
    }
    match e {
        ec::Error::Io(io) => PyOSError::new_err(io.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn exponent(p: f64) -> PyResult<Exponent> {
    Exponent::new(p).map_err(to_py)
}

fn matrix(rows: Rows) -> PyResult<ComplexMatrix> {
    ComplexMatrix::from_rows(&rows).map_err(to_py)
}

fn to_rows(m: &ComplexMatrix) -> Rows {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

fn norm_kind(name: &str) -> PyResult<NormKind> {
    name.parse().map_err(to_py)
}

/// An immutable point configuration in the complex plane.
#[pyclass(name = "Configuration", module = "eigencond", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyConfiguration {
    inner: ec::lattice::Configuration,
}

#[pymethods]
impl PyConfiguration {
    #[new]
    fn new(points: Vec<Complex64>) -> PyResult<Self> {
        Ok(PyConfiguration { inner: ec::lattice::Configuration::new(points).map_err(to_py)? })
    }

    #[getter]
    fn points(&self) -> Vec<Complex64> {
        self.inner.points().to_vec()
    }

    #[getter]
    fn min_separation(&self) -> Option<f64> {
        self.inner.min_separation()
    }

    fn centroid(&self) -> Complex64 {
        self.inner.centroid()
    }

    fn translate_to_centroid(&self) -> Self {
        PyConfiguration { inner: ec::lattice::translate_to_centroid(&self.inner) }
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Configuration(n={}, min_separation={:?})", self.inner.len(), self.inner.min_separation())
    }
}

#[pyclass(name = "EigenpairReport", module = "eigencond", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct PyEigenpairReport {
    eigenvalue: Complex64,
    x: Vec<Complex64>,
    y: Vec<Complex64>,
    kappa_lambda: f64,
    kappa_x: f64,
    residual_right: f64,
    residual_left: f64,
}

#[pymethods]
impl PyEigenpairReport {
    fn __repr__(&self) -> String {
        format!(
            "EigenpairReport(eigenvalue={}, kappa_lambda={}, kappa_x={})",
            self.eigenvalue, self.kappa_lambda, self.kappa_x
        )
    }
}

#[pyclass(name = "ConditionReport", module = "eigencond", frozen, get_all)]
struct PyConditionReport {
    eigenpairs: Vec<PyEigenpairReport>,
    kappa_max_frob: f64,
    kappa_max_op: f64,
    norm_frob: f64,
    norm_op: f64,
}

#[pymethods]
impl PyConditionReport {
    fn __repr__(&self) -> String {
        format!(
            "ConditionReport(n={}, kappa_max_frob={}, kappa_max_op={})",
            self.eigenpairs.len(),
            self.kappa_max_frob,
            self.kappa_max_op
        )
    }
}

impl From<ec::conditioning::ConditionReport> for PyConditionReport {
    fn from(r: ec::conditioning::ConditionReport) -> Self {
        PyConditionReport {
            eigenpairs: r
                .per_eigenpair
                .into_iter()
                .map(|e| PyEigenpairReport {
                    eigenvalue: e.lambda,
                    x: e.x.to_dense(),
                    y: e.y.to_dense(),
                    kappa_lambda: e.kappa_lambda,
                    kappa_x: e.kappa_x,
                    residual_right: e.residual_right,
                    residual_left: e.residual_left,
                })
                .collect(),
            kappa_max_frob: r.kappa_max_frob,
            kappa_max_op: r.kappa_max_op,
            norm_frob: r.norm_frob,
            norm_op: r.norm_op,
        }
    }
}

#[pyclass(name = "AsymptoticRow", module = "eigencond", frozen, get_all)]
struct PyAsymptoticRow {
    n: usize,
    raw: f64,
    scale: f64,
    ratio: f64,
    target: f64,
    margin: f64,
    relative_deviation: f64,
}

impl From<&ec::extremal::AsymptoticRow> for PyAsymptoticRow {
    fn from(r: &ec::extremal::AsymptoticRow) -> Self {
        PyAsymptoticRow {
            n: r.n,
            raw: r.raw,
            scale: r.scale,
            ratio: r.ratio,
            target: r.target,
            margin: r.margin(),
            relative_deviation: r.relative_deviation(),
        }
    }
}

#[pymethods]
impl PyAsymptoticRow {
    fn __repr__(&self) -> String {
        format!("AsymptoticRow(n={}, ratio={}, target={})", self.n, self.ratio, self.target)
    }
}

#[pyclass(name = "OptimizerResult", module = "eigencond", frozen, get_all)]
struct PyOptimizerResult {
    best: PyConfiguration,
    objective: f64,
    init_objective: f64,
    /// `(restart, stage, iteration, objective)` tuples.
    trace: Vec<(usize, usize, usize, f64)>,
    seed: u64,
}

#[pymethods]
impl PyOptimizerResult {
    fn __repr__(&self) -> String {
        format!("OptimizerResult(objective={}, init_objective={})", self.objective, self.init_objective)
    }
}

/// First `n` triangular-lattice points by increasing modulus.
#[pyfunction]
fn lattice_points(n: usize) -> PyResult<PyConfiguration> {
    Ok(PyConfiguration { inner: ec::lattice::first_n_lattice_points(n).map_err(to_py)? })
}

/// `(a, b, z)` for every lattice point in the disk of radius `r`.
#[pyfunction]
#[pyo3(signature = (r, closed = true))]
fn enumerate_lattice_in_disk(r: f64, closed: bool) -> PyResult<Vec<(i64, i64, Complex64)>> {
    Ok(ec::lattice::enumerate_lattice_in_disk(r, closed)
        .map_err(to_py)?
        .into_iter()
        .map(|p| (p.a, p.b, p.z))
        .collect())
}

#[pyfunction]
fn lattice_count(r: f64) -> PyResult<usize> {
    ec::lattice::lattice_count(r).map_err(to_py)
}

/// Complex Schur form `A = Q T Qᴴ`, returned as `(Q, T)`.
#[pyfunction]
fn schur(a: Rows) -> PyResult<(Rows, Rows)> {
    let s = ec::linalg::schur(&matrix(a)?).map_err(to_py)?;
    Ok((to_rows(&s.q), to_rows(&s.t)))
}

#[pyfunction]
#[pyo3(signature = (a, eigenvalue, tol_eig = 1e-8, tol_cluster = 1e-8, tol_block = 1e-8))]
fn kappa_lambda(a: Rows, eigenvalue: Complex64, tol_eig: f64, tol_cluster: f64, tol_block: f64) -> PyResult<f64> {
    let tol = Tolerances { eig: tol_eig, cluster: tol_cluster, block: tol_block };
    ec::conditioning::kappa_lambda(&matrix(a)?, eigenvalue, &tol).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (a, eigenvalue, tol_eig = 1e-8, tol_cluster = 1e-8, tol_block = 1e-8))]
fn kappa_x(a: Rows, eigenvalue: Complex64, tol_eig: f64, tol_cluster: f64, tol_block: f64) -> PyResult<f64> {
    let tol = Tolerances { eig: tol_eig, cluster: tol_cluster, block: tol_block };
    ec::conditioning::kappa_x(&matrix(a)?, eigenvalue, &tol).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (a, tol_eig = 1e-8, tol_cluster = 1e-8, tol_block = 1e-8))]
fn condition_report(py: Python<'_>, a: Rows, tol_eig: f64, tol_cluster: f64, tol_block: f64) -> PyResult<PyConditionReport> {
    let a = matrix(a)?;
    let tol = Tolerances { eig: tol_eig, cluster: tol_cluster, block: tol_block };
    let report = py.detach(|| ec::conditioning::condition_report(&a, &tol)).map_err(to_py)?;
    Ok(report.into())
}

#[pyfunction]
fn condition_report_diagonal(c: &PyConfiguration) -> PyResult<PyConditionReport> {
    Ok(ec::conditioning::condition_report_diagonal(&c.inner).map_err(to_py)?.into())
}

/// Worst shift and angle ratios per eigenpair, plus the valid and
/// excluded trial counts.
#[pyfunction]
#[pyo3(signature = (a, epsilon, trials = 100, norm = "frob", seed = 0))]
fn perturbation_experiment(
    py: Python<'_>,
    a: Rows,
    epsilon: f64,
    trials: usize,
    norm: &str,
    seed: u64,
) -> PyResult<(Vec<PerturbationRow>, usize, usize)> {
    let a = matrix(a)?;
    let cfg = ec::conditioning::PerturbationConfig { epsilon, trials, norm: norm_kind(norm)?, seed };
    let t = py
        .detach(|| ec::conditioning::perturbation_experiment(&a, &cfg, &Tolerances::default()))
        .map_err(to_py)?;
    let rows = t
        .rows
        .iter()
        .map(|r| (r.lambda, r.kappa_lambda, r.kappa_x, r.max_shift_ratio, r.max_angle_ratio))
        .collect();
    Ok((rows, t.valid_trials, t.excluded_trials))
}

/// `S_p`; pass `float('inf')` for the max-modulus case.
#[pyfunction]
fn separation_functional(c: &PyConfiguration, p: f64) -> PyResult<f64> {
    ec::extremal::separation_functional(&c.inner, exponent(p)?).map_err(to_py)
}

#[pyfunction]
fn proposition_constant(p: f64) -> PyResult<f64> {
    Ok(ec::extremal::proposition_constant(exponent(p)?))
}

/// `(value, bound, margin)`.
#[pyfunction]
fn lower_bound_certificate(c: &PyConfiguration, p: f64) -> PyResult<(f64, f64, f64)> {
    let cert = ec::extremal::lower_bound_certificate(&c.inner, exponent(p)?).map_err(to_py)?;
    Ok((cert.value, cert.bound, cert.margin))
}

#[pyfunction]
fn convergence_study(py: Python<'_>, p: f64, n_values: Vec<usize>) -> PyResult<Vec<PyAsymptoticRow>> {
    let p = exponent(p)?;
    let rows = py
        .detach(|| ec::extremal::convergence_study(p, &n_values, ec::extremal::lattice_generator))
        .map_err(to_py)?;
    Ok(rows.iter().map(Into::into).collect())
}

#[pyfunction]
fn soft_separation_functional(c: &PyConfiguration, p: f64, beta: f64) -> PyResult<f64> {
    ec::optimizer::soft_separation_functional(&c.inner, p, beta).map_err(to_py)
}

#[pyfunction]
fn gradient(c: &PyConfiguration, p: f64, beta: f64) -> PyResult<Vec<Complex64>> {
    ec::optimizer::gradient(&c.inner, p, beta).map_err(to_py)
}

/// Minimize `S_p` over `n`-point configurations. `init` is `"lattice"`,
/// `"random"` or a `Configuration`.
#[pyfunction]
#[pyo3(signature = (n, p = 2.0, restarts = 1, seed = 0, init = None, max_iters = None, polish_rounds = None, beta_schedule = None, step_schedule = None))]
#[allow(clippy::too_many_arguments)]
fn optimize(
    py: Python<'_>,
    n: usize,
    p: f64,
    restarts: usize,
    seed: u64,
    init: Option<&Bound<'_, PyAny>>,
    max_iters: Option<usize>,
    polish_rounds: Option<usize>,
    beta_schedule: Option<Vec<f64>>,
    step_schedule: Option<Vec<f64>>,
) -> PyResult<PyOptimizerResult> {
    let mut cfg = ec::optimizer::OptimizerConfig::new(n, exponent(p)?);
    cfg.restarts = restarts;
    cfg.seed = seed;
    cfg.init = match init {
        None => ec::optimizer::Init::Lattice,
        Some(obj) => {
            if let Ok(c) = obj.cast::<PyConfiguration>() {
                ec::optimizer::Init::Given(c.get().inner.clone())
            } else {
                match obj.extract::<String>()?.as_str() {
                    "lattice" => ec::optimizer::Init::Lattice,
                    "random" => ec::optimizer::Init::RandomDisk,
                    other => return Err(PyValueError::new_err(format!("unknown init {other:?}"))),
                }
            }
        }
    };
    if let Some(m) = max_iters {
        cfg.max_iters = m;
    }
    if let Some(r) = polish_rounds {
        cfg.polish_rounds = r;
    }
    if let Some(b) = beta_schedule {
        cfg.beta_schedule = b;
    }
    if let Some(s) = step_schedule {
        cfg.step_schedule = s;
    }
    let r = py.detach(|| ec::optimizer::optimize(&cfg)).map_err(to_py)?;
    Ok(PyOptimizerResult {
        best: PyConfiguration { inner: r.best },
        objective: r.objective,
        init_objective: r.init_objective,
        trace: r.trace.iter().map(|t| (t.restart, t.stage, t.iteration, t.objective)).collect(),
        seed: r.seed,
    })
}

/// Rows for `kappa_max_frob / n` and `kappa_max_op / √n` on the first `n`
/// lattice points.
#[pyfunction]
#[pyo3(signature = (n = 10_000))]
fn reproduce(py: Python<'_>, n: usize) -> PyResult<Vec<PyAsymptoticRow>> {
    let rows = py.detach(|| ec::reproduce::reproduce(n)).map_err(to_py)?;
    Ok(rows.iter().map(|r| (&r.row).into()).collect())
}

#[pymodule(name = "eigencond")]
pub fn eigencond_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("IllPosedError", m.py().get_type::<IllPosedError>())?;
    m.add_class::<PyConfiguration>()?;
    m.add_class::<PyEigenpairReport>()?;
    m.add_class::<PyConditionReport>()?;
    m.add_class::<PyAsymptoticRow>()?;
    m.add_class::<PyOptimizerResult>()?;
    m.add_function(wrap_pyfunction!(lattice_points, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_lattice_in_disk, m)?)?;
    m.add_function(wrap_pyfunction!(lattice_count, m)?)?;
    m.add_function(wrap_pyfunction!(schur, m)?)?;
    m.add_function(wrap_pyfunction!(kappa_lambda, m)?)?;
    m.add_function(wrap_pyfunction!(kappa_x, m)?)?;
    m.add_function(wrap_pyfunction!(condition_report, m)?)?;
    m.add_function(wrap_pyfunction!(condition_report_diagonal, m)?)?;
    m.add_function(wrap_pyfunction!(perturbation_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(separation_functional, m)?)?;
    m.add_function(wrap_pyfunction!(proposition_constant, m)?)?;
    m.add_function(wrap_pyfunction!(lower_bound_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(convergence_study, m)?)?;
    m.add_function(wrap_pyfunction!(soft_separation_functional, m)?)?;
    m.add_function(wrap_pyfunction!(gradient, m)?)?;
    m.add_function(wrap_pyfunction!(optimize, m)?)?;
    m.add_function(wrap_pyfunction!(reproduce, m)?)?;
    Ok(())
}
