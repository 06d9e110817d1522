//! Python bindings: the matrix type, factorizations, eigensolvers, the
//! transforms, interlacing checks, seeded generators and the suite runner.
//!
//! Matrices cross the boundary as `Matrix` objects or nested lists of
//! numbers. Selection indices are zero-based.

use std::path::PathBuf;

use num_complex::Complex64;
use pyo3::exceptions::{PyArithmeticError, PyIndexError, PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use pseudosim::eigen;
use pseudosim::experiment::{self, ExperimentConfig, ReportFormat, TrialRecord};
use pseudosim::genmat::{self, MatrixRng};
use pseudosim::interlacing::{self, InterlacingReport};
use pseudosim::linalg::{self, ComplexMatrix};
use pseudosim::pseudosim as ps;
use pseudosim::{Error, Tolerances};

fn to_py(err: Error) -> PyErr {
    let msg = err.to_string();
    match err {
        Error::Dimension(_) | Error::Contract(_) | Error::Config(_) | Error::Parse { .. } => PyValueError::new_err(msg),
        Error::Io { .. } => PyOSError::new_err(msg),
        Error::NoConvergence { .. }
        | Error::Singular { .. }
        | Error::RouteDisagreement { .. }
        | Error::NotReal { .. }
        | Error::Classification { .. } => PyArithmeticError::new_err(msg),
    }
}

trait OrPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for pseudosim::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

/// Dense complex matrix.
#[pyclass(name = "Matrix", module = "pseudosim_py", frozen, from_py_object)]
#[derive(Clone)]
pub struct PyMatrix {
    inner: ComplexMatrix,
}

impl From<ComplexMatrix> for PyMatrix {
    fn from(inner: ComplexMatrix) -> Self {
        Self { inner }
    }
}

/// Accepts a `Matrix` or a nested list of numbers.
#[derive(FromPyObject)]
pub enum MatrixArg {
    Matrix(PyMatrix),
    Rows(Vec<Vec<Complex64>>),
}

impl MatrixArg {
    fn into_matrix(self) -> PyResult<ComplexMatrix> {
        match self {
            MatrixArg::Matrix(m) => Ok(m.inner),
            MatrixArg::Rows(rows) => rows_to_matrix(rows),
        }
    }
}

fn rows_to_matrix(rows: Vec<Vec<Complex64>>) -> PyResult<ComplexMatrix> {
    if rows.is_empty() {
        return ComplexMatrix::new(0, 0, Vec::new()).py();
    }
    ComplexMatrix::from_rows(&rows).py()
}

#[pymethods]
impl PyMatrix {
    #[new]
    fn new(rows: Vec<Vec<Complex64>>) -> PyResult<Self> {
        rows_to_matrix(rows).map(Self::from)
    }

    #[staticmethod]
    fn identity(n: usize) -> Self {
        ComplexMatrix::identity(n).into()
    }

    #[staticmethod]
    fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix::zeros(rows, cols).into()
    }

    #[staticmethod]
    fn diag(values: Vec<f64>) -> Self {
        ComplexMatrix::from_diag(&values).into()
    }

    #[getter]
    fn shape(&self) -> (usize, usize) {
        self.inner.shape()
    }

    fn to_list(&self) -> Vec<Vec<Complex64>> {
        self.inner.to_rows()
    }

    fn adjoint(&self) -> Self {
        self.inner.adjoint().into()
    }

    fn trace(&self) -> Complex64 {
        self.inner.trace()
    }

    fn max_abs_diff(&self, other: MatrixArg) -> PyResult<f64> {
        let other = other.into_matrix()?;
        if other.shape() != self.inner.shape() {
            return Err(PyValueError::new_err("shape mismatch"));
        }
        Ok(self.inner.max_abs_diff(&other))
    }

    fn orthonormality_defect(&self) -> f64 {
        self.inner.orthonormality_defect()
    }

    fn is_hermitian(&self, tol: f64) -> PyResult<bool> {
        linalg::is_hermitian(&self.inner, tol).py()
    }

    fn __matmul__(&self, other: MatrixArg) -> PyResult<Self> {
        self.inner.try_matmul(&other.into_matrix()?).py().map(Self::from)
    }

    fn __getitem__(&self, index: (usize, usize)) -> PyResult<Complex64> {
        let (i, j) = index;
        let (r, c) = self.inner.shape();
        if i >= r || j >= c {
            return Err(PyIndexError::new_err(format!("({i}, {j}) outside {r}x{c}")));
        }
        Ok(self.inner[(i, j)])
    }

    fn __repr__(&self) -> String {
        let (r, c) = self.inner.shape();
        format!("Matrix({r}x{c}, {:?})", self.inner.to_rows())
    }
}

#[pyfunction]
#[pyo3(signature = (m, rank_tol = 1e-10))]
fn pseudo_inverse(m: MatrixArg, rank_tol: f64) -> PyResult<PyMatrix> {
    linalg::pseudo_inverse(&m.into_matrix()?, rank_tol).py().map(PyMatrix::from)
}

#[pyfunction]
#[pyo3(signature = (m, rank_tol = 1e-10))]
fn pseudo_inverse_qr(m: MatrixArg, rank_tol: f64) -> PyResult<PyMatrix> {
    linalg::pseudo_inverse_qr(&m.into_matrix()?, rank_tol).py().map(PyMatrix::from)
}

#[pyfunction]
#[pyo3(signature = (m, rank_tol = 1e-10))]
fn numerical_rank(m: MatrixArg, rank_tol: f64) -> PyResult<usize> {
    linalg::numerical_rank(&m.into_matrix()?, rank_tol).py()
}

#[pyfunction]
fn singular_values(m: MatrixArg) -> PyResult<Vec<f64>> {
    linalg::singular_values(&m.into_matrix()?).py()
}

/// Returns `(q, r, perm, rank)` with `m[:, perm] = q @ r`.
#[pyfunction]
#[pyo3(signature = (m, rank_tol = 1e-10))]
fn qr_pivoted(m: MatrixArg, rank_tol: f64) -> PyResult<(PyMatrix, PyMatrix, Vec<usize>, usize)> {
    let f = linalg::qr_economy_pivoted(&m.into_matrix()?, rank_tol).py()?;
    Ok((f.q.into(), f.r.into(), f.perm, f.rank))
}

#[pyfunction]
fn determinant(m: MatrixArg) -> PyResult<Complex64> {
    linalg::determinant(&m.into_matrix()?).py()
}

#[pyfunction]
fn inverse(m: MatrixArg) -> PyResult<PyMatrix> {
    linalg::inverse(&m.into_matrix()?).py().map(PyMatrix::from)
}

/// Sorted real eigenvalues of a Hermitian matrix.
#[pyfunction]
#[pyo3(signature = (m, herm_tol = 1e-10))]
fn eigvals_hermitian(m: MatrixArg, herm_tol: f64) -> PyResult<Vec<f64>> {
    eigen::eigvals_hermitian(&m.into_matrix()?, herm_tol).py()?.sorted_real().py()
}

/// Eigenvalues of a general square matrix, ordered by real then imaginary part.
#[pyfunction]
#[pyo3(signature = (m, realness_tol = 1e-8))]
fn eigvals_general(m: MatrixArg, realness_tol: f64) -> PyResult<Vec<Complex64>> {
    Ok(eigen::eigvals_general(&m.into_matrix()?, realness_tol).py()?.values().to_vec())
}

#[pyfunction]
fn charpoly_eigenvalues(m: MatrixArg) -> PyResult<Vec<Complex64>> {
    let m = m.into_matrix()?;
    if !m.is_square() {
        return Err(PyValueError::new_err("matrix must be square"));
    }
    Ok(pseudosim::oracle::charpoly_eigenvalues(&m))
}

fn transform_tuple(t: ps::TransformResult) -> (PyMatrix, usize, bool) {
    (t.transformed.into(), t.input_rank, t.hermitian)
}

/// `H†·P·H`; returns `(transformed, rank of H, hermitian flag)`.
#[pyfunction]
fn pseudo_similarity(p: MatrixArg, h: MatrixArg) -> PyResult<(PyMatrix, usize, bool)> {
    let t = ps::pseudo_similarity(&p.into_matrix()?, &h.into_matrix()?, &Tolerances::default()).py()?;
    Ok(transform_tuple(t))
}

/// `Qᴴ·P·Q`; returns `(transformed, L, hermitian flag)`.
#[pyfunction]
fn unitary_compression(p: MatrixArg, q: MatrixArg) -> PyResult<(PyMatrix, usize, bool)> {
    let t = ps::unitary_compression(&p.into_matrix()?, &q.into_matrix()?, &Tolerances::default()).py()?;
    Ok(transform_tuple(t))
}

#[pyfunction]
fn build_rank_deficient(h: MatrixArg, v: MatrixArg) -> PyResult<PyMatrix> {
    ps::build_rank_deficient(&h.into_matrix()?, &v.into_matrix()?, &Tolerances::default())
        .py()
        .map(PyMatrix::from)
}

/// Transform of `H·Vᴴ` two ways; returns `(direct, factored, route gap, rank)`.
#[pyfunction]
fn inflate_transform(p: MatrixArg, h: MatrixArg, v: MatrixArg) -> PyResult<(PyMatrix, PyMatrix, f64, usize)> {
    let inf = ps::inflate_transform(
        &p.into_matrix()?,
        &h.into_matrix()?,
        &v.into_matrix()?,
        &Tolerances::default(),
    )
    .py()?;
    Ok((
        inf.result.transformed.into(),
        inf.factored.into(),
        inf.route_gap,
        inf.result.input_rank,
    ))
}

/// `(X⁻¹·P·X)` restricted to the zero-based `selection`; returns
/// `(transformed, hermitian flag)`.
#[pyfunction]
fn oblique_transform(p: MatrixArg, x: MatrixArg, selection: Vec<usize>) -> PyResult<(PyMatrix, bool)> {
    let t = ps::oblique_transform(&p.into_matrix()?, &x.into_matrix()?, &selection, &Tolerances::default()).py()?;
    Ok((t.transformed.into(), t.hermitian))
}

fn report_dict<'py>(py: Python<'py>, r: &InterlacingReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("passed", r.passed)?;
    d.set_item("vacuous", r.vacuous)?;
    d.set_item("tol_used", r.tol_used)?;
    d.set_item("lambda", r.lambda.clone())?;
    d.set_item("eta", r.eta.clone())?;
    d.set_item("min_lower_margin", r.min_lower_margin())?;
    d.set_item("min_upper_margin", r.min_upper_margin())?;
    let rows: Vec<(usize, f64, f64, f64)> = r.per_index.iter().map(|c| (c.index, c.lower, c.value, c.upper)).collect();
    d.set_item("per_index", rows)?;
    Ok(d)
}

/// Interlacing check; returns a dict with `passed`, margins and per-index
/// `(index, lower, value, upper)` tuples.
#[pyfunction]
fn check_interlacing<'py>(py: Python<'py>, lambda: Vec<f64>, eta: Vec<f64>, tol: f64) -> PyResult<Bound<'py, PyDict>> {
    let r = interlacing::check_interlacing(&lambda, &eta, tol).py()?;
    report_dict(py, &r)
}

/// Splits `values` into `expected_l` nonzero values and structural zeros;
/// returns `(nonzero, zero_count)`.
#[pyfunction]
#[pyo3(signature = (values, expected_l, zero_tol = 1e-6, realness_tol = 1e-8))]
fn extract_nonzero(
    values: Vec<Complex64>,
    expected_l: usize,
    zero_tol: f64,
    realness_tol: f64,
) -> PyResult<(Vec<f64>, usize)> {
    let s = eigen::Spectrum::new(values, realness_tol);
    interlacing::extract_nonzero(&s, expected_l, zero_tol).py()
}

#[pyfunction]
#[pyo3(signature = (values, realness_tol = 1e-8))]
fn classify_real(values: Vec<Complex64>, realness_tol: f64) -> PyResult<Vec<f64>> {
    interlacing::classify_real(&eigen::Spectrum::new(values, 0.0), realness_tol).py()
}

#[pyfunction]
fn selection_matrix(indices: Vec<usize>, n: usize) -> PyResult<PyMatrix> {
    genmat::selection_matrix(&indices, n).py().map(PyMatrix::from)
}

#[pyfunction]
fn derive_seed(master: u64, stream: u64, index: u64) -> u64 {
    genmat::derive_seed(master, stream, index)
}

/// Seeded generator of test matrices.
#[pyclass(name = "Rng", module = "pseudosim_py")]
pub struct PyRng {
    inner: MatrixRng,
}

fn check_dims(ok: bool, msg: &str) -> PyResult<()> {
    if ok {
        Ok(())
    } else {
        Err(PyValueError::new_err(msg.to_string()))
    }
}

#[pymethods]
impl PyRng {
    #[new]
    fn new(seed: u64) -> Self {
        Self {
            inner: MatrixRng::new(seed),
        }
    }

    fn uniform(&mut self) -> f64 {
        self.inner.uniform()
    }

    fn gaussian(&mut self, rows: usize, cols: usize) -> PyMatrix {
        self.inner.gaussian_matrix(rows, cols).into()
    }

    fn unitary(&mut self, n: usize, l: usize) -> PyResult<PyMatrix> {
        check_dims(l >= 1 && l <= n, "need 1 <= l <= n")?;
        Ok(genmat::random_unitary(&mut self.inner, n, l).into())
    }

    fn hermitian_with_spectrum(&mut self, spectrum: Vec<f64>) -> PyResult<PyMatrix> {
        check_dims(!spectrum.is_empty(), "empty spectrum")?;
        check_dims(spectrum.iter().all(|x| x.is_finite()), "spectrum must be finite")?;
        Ok(genmat::hermitian_with_spectrum(&mut self.inner, &spectrum).into())
    }

    #[pyo3(signature = (n, l, condition_cap = 1e3))]
    fn full_column_rank(&mut self, n: usize, l: usize, condition_cap: f64) -> PyResult<PyMatrix> {
        check_dims(l >= 1 && l <= n, "need 1 <= l <= n")?;
        check_dims(condition_cap >= 1.0, "condition_cap must be at least 1")?;
        Ok(genmat::random_full_column_rank(&mut self.inner, n, l, condition_cap).into())
    }

    #[pyo3(signature = (n, k, l, condition_cap = 1e3))]
    fn rank_l(&mut self, n: usize, k: usize, l: usize, condition_cap: f64) -> PyResult<PyMatrix> {
        check_dims(condition_cap >= 1.0, "condition_cap must be at least 1")?;
        genmat::random_rank_l(&mut self.inner, n, k, l, condition_cap).py().map(PyMatrix::from)
    }

    #[pyo3(signature = (n, condition_cap = 100.0, nonunitarity_floor = 2.0))]
    fn invertible_nonunitary(&mut self, n: usize, condition_cap: f64, nonunitarity_floor: f64) -> PyResult<PyMatrix> {
        genmat::random_invertible_nonunitary(&mut self.inner, n, condition_cap, nonunitarity_floor)
            .py()
            .map(PyMatrix::from)
    }
}

fn record_dict<'py>(py: Python<'py>, r: &TrialRecord) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("suite", r.suite.tag())?;
    d.set_item("trial_index", r.trial_index)?;
    d.set_item("seed", r.seed)?;
    d.set_item("n", r.n)?;
    d.set_item("k", r.k)?;
    d.set_item("l", r.l)?;
    d.set_item("passed", r.passed)?;
    d.set_item("min_lower_margin", r.min_lower_margin)?;
    d.set_item("min_upper_margin", r.min_upper_margin)?;
    d.set_item("worst_residual", r.worst_residual)?;
    d.set_item("notes", &r.notes)?;
    Ok(d)
}

fn parse_config(config_toml: &str) -> PyResult<ExperimentConfig> {
    ExperimentConfig::from_toml_str(config_toml).py()
}

/// Runs the suites described by a TOML config (empty string = defaults) and
/// returns one dict per trial record.
#[pyfunction]
#[pyo3(signature = (config_toml = ""))]
fn run_suite<'py>(py: Python<'py>, config_toml: &str) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let cfg = parse_config(config_toml)?;
    let records = py.detach(|| experiment::run_suite(&cfg)).py()?;
    records.iter().map(|r| record_dict(py, r)).collect()
}

/// Runs the suites and renders the report as `table`, `csv` or `json-lines`.
#[pyfunction]
#[pyo3(signature = (config_toml = "", format = "csv"))]
fn run_suite_report(py: Python<'_>, config_toml: &str, format: &str) -> PyResult<String> {
    let cfg = parse_config(config_toml)?;
    let format: ReportFormat = format.parse().py()?;
    let records = py.detach(|| experiment::run_suite(&cfg)).py()?;
    let mut buf = Vec::new();
    experiment::write_report(&records, format, &mut buf).py()?;
    String::from_utf8(buf).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Writes a report of the suites to `path`.
#[pyfunction]
#[pyo3(signature = (path, config_toml = "", format = "csv"))]
fn write_suite_report(py: Python<'_>, path: PathBuf, config_toml: &str, format: &str) -> PyResult<bool> {
    let cfg = parse_config(config_toml)?;
    let format: ReportFormat = format.parse().py()?;
    let records = py.detach(|| experiment::run_suite(&cfg)).py()?;
    experiment::emit_report(&records, format, Some(&path)).py()?;
    Ok(experiment::all_theorems_hold(&records))
}

#[pymodule]
fn pseudosim_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    register(m)
}

/// Adds every class and function to `m`.
pub fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMatrix>()?;
    m.add_class::<PyRng>()?;
    m.add_function(wrap_pyfunction!(pseudo_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(pseudo_inverse_qr, m)?)?;
    m.add_function(wrap_pyfunction!(numerical_rank, m)?)?;
    m.add_function(wrap_pyfunction!(singular_values, m)?)?;
    m.add_function(wrap_pyfunction!(qr_pivoted, m)?)?;
    m.add_function(wrap_pyfunction!(determinant, m)?)?;
    m.add_function(wrap_pyfunction!(inverse, m)?)?;
    m.add_function(wrap_pyfunction!(eigvals_hermitian, m)?)?;
    m.add_function(wrap_pyfunction!(eigvals_general, m)?)?;
    m.add_function(wrap_pyfunction!(charpoly_eigenvalues, m)?)?;
    m.add_function(wrap_pyfunction!(pseudo_similarity, m)?)?;
    m.add_function(wrap_pyfunction!(unitary_compression, m)?)?;
    m.add_function(wrap_pyfunction!(build_rank_deficient, m)?)?;
    m.add_function(wrap_pyfunction!(inflate_transform, m)?)?;
    m.add_function(wrap_pyfunction!(oblique_transform, m)?)?;
    m.add_function(wrap_pyfunction!(check_interlacing, m)?)?;
    m.add_function(wrap_pyfunction!(extract_nonzero, m)?)?;
    m.add_function(wrap_pyfunction!(classify_real, m)?)?;
    m.add_function(wrap_pyfunction!(selection_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(derive_seed, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite_report, m)?)?;
    m.add_function(wrap_pyfunction!(write_suite_report, m)?)?;
    Ok(())
}
