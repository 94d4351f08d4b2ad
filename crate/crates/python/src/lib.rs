//! Python bindings. Matrices are lists of rows of complex (or real) numbers;
//! INFINITE seminorms come back as `float("inf")`.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

use semihilbert::aops::{self, Radius};
use semihilbert::applications::{self, FockConfig, SpinConfig, SturmConfig};
use semihilbert::bounds::{self, BoundId, BoundParams, VerifyConfig};
use semihilbert::lemmas::{self, LemmaId};
use semihilbert::space::{CVector, SemiHilbertSpace, DEFAULT_TOL};
use semihilbert::{CMatrix, Error};

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn matrix(rows: Vec<Vec<Complex64>>) -> PyResult<CMatrix> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != m) {
        return Err(PyValueError::new_err("ragged matrix"));
    }
    CMatrix::from_vec(n, m, rows.into_iter().flatten().collect()).map_err(err)
}

fn rows(m: &CMatrix) -> Vec<Vec<Complex64>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m[(i, j)]).collect()).collect()
}

fn vector(v: Vec<Complex64>) -> PyResult<CVector> {
    CVector::new(v).map_err(err)
}

fn radius(r: Radius) -> f64 {
    r.finite().unwrap_or(f64::INFINITY)
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn params(alpha: f64, beta: f64, r: f64, n: u32) -> PyResult<BoundParams> {
    BoundParams::new(alpha, beta, r, n).map_err(err)
}

/// Finite-dimensional space with the semi-inner product ⟨x, y⟩_A = y*Ax.
#[pyclass(name = "Space", frozen)]
struct PySpace {
    inner: SemiHilbertSpace,
}

#[pymethods]
impl PySpace {
    #[new]
    #[pyo3(signature = (a, tol = DEFAULT_TOL))]
    fn new(a: Vec<Vec<Complex64>>, tol: f64) -> PyResult<Self> {
        let inner = SemiHilbertSpace::new(matrix(a)?, tol).map_err(err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    fn weight(&self) -> Vec<Vec<Complex64>> {
        rows(self.inner.a())
    }

    fn inner(&self, x: Vec<Complex64>, y: Vec<Complex64>) -> PyResult<Complex64> {
        self.inner.inner(&vector(x)?, &vector(y)?).map_err(err)
    }

    fn norm(&self, x: Vec<Complex64>) -> PyResult<f64> {
        self.inner.norm(&vector(x)?).map_err(err)
    }

    fn in_b_a(&self, t: Vec<Vec<Complex64>>) -> PyResult<bool> {
        aops::in_b_a(&self.inner, &matrix(t)?).map_err(err)
    }

    fn in_b_a_half(&self, t: Vec<Vec<Complex64>>) -> PyResult<bool> {
        aops::in_b_a_half(&self.inner, &matrix(t)?).map_err(err)
    }

    /// T♯ = A†T*A; raises if T ∉ B_A.
    fn adjoint(&self, t: Vec<Vec<Complex64>>) -> PyResult<Vec<Vec<Complex64>>> {
        Ok(rows(&aops::a_adjoint(&self.inner, &matrix(t)?).map_err(err)?))
    }

    fn reduced(&self, t: Vec<Vec<Complex64>>) -> PyResult<Vec<Vec<Complex64>>> {
        Ok(rows(&aops::reduced_matrix(&self.inner, &matrix(t)?).map_err(err)?))
    }

    fn op_norm(&self, t: Vec<Vec<Complex64>>) -> PyResult<f64> {
        Ok(radius(aops::a_op_norm(&self.inner, &matrix(t)?).map_err(err)?.value))
    }

    fn numerical_radius(&self, t: Vec<Vec<Complex64>>) -> PyResult<f64> {
        Ok(radius(aops::a_numerical_radius(&self.inner, &matrix(t)?).map_err(err)?.value))
    }

    fn is_selfadjoint(&self, t: Vec<Vec<Complex64>>) -> PyResult<bool> {
        aops::is_a_selfadjoint(&self.inner, &matrix(t)?).map_err(err)
    }

    fn is_positive(&self, t: Vec<Vec<Complex64>>) -> PyResult<bool> {
        aops::is_a_positive(&self.inner, &matrix(t)?).map_err(err)
    }

    #[pyo3(signature = (id, t, s = None, alpha = 0.5, beta = 1.0, r = 1.0, n = 2))]
    #[allow(clippy::too_many_arguments)]
    fn bound<'py>(
        &self,
        py: Python<'py>,
        id: &str,
        t: Vec<Vec<Complex64>>,
        s: Option<Vec<Vec<Complex64>>>,
        alpha: f64,
        beta: f64,
        r: f64,
        n: u32,
    ) -> PyResult<Bound<'py, PyAny>> {
        let id: BoundId = id.parse().map_err(err)?;
        let p = params(alpha, beta, r, n)?;
        let t = matrix(t)?;
        let rep = match s {
            Some(s) => bounds::eval_pair(&self.inner, &t, &matrix(s)?, id, p),
            None => bounds::eval_single(&self.inner, &t, id, p),
        }
        .map_err(err)?;
        to_py(py, &rep)
    }

    #[pyo3(signature = (id, a, b, e, t = None, alpha = 0.5, beta = 1.0, r = 1.0))]
    #[allow(clippy::too_many_arguments)]
    fn lemma<'py>(
        &self,
        py: Python<'py>,
        id: &str,
        a: Vec<Complex64>,
        b: Vec<Complex64>,
        e: Vec<Complex64>,
        t: Option<Vec<Vec<Complex64>>>,
        alpha: f64,
        beta: f64,
        r: f64,
    ) -> PyResult<Bound<'py, PyAny>> {
        let id: LemmaId = id.parse().map_err(err)?;
        let p = params(alpha, beta, r, 2)?;
        let t = t.map(matrix).transpose()?;
        let rep = lemmas::eval_lemma(&self.inner, &vector(a)?, &vector(b)?, &vector(e)?, id, p, t.as_ref())
            .map_err(err)?;
        to_py(py, &rep)
    }
}

/// Randomized bound and lemma suites; returns {"bounds": ..., "lemmas": ...}.
#[pyfunction]
#[pyo3(signature = (trials = 1000, lemma_trials = 5000, seed = 42, dim_min = 2, dim_max = 6))]
fn verify<'py>(
    py: Python<'py>,
    trials: usize,
    lemma_trials: usize,
    seed: u64,
    dim_min: usize,
    dim_max: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let cfg = VerifyConfig {
        trials,
        seed,
        dim_min,
        dim_max,
        ..VerifyConfig::default()
    };
    let (b, l) = py
        .detach(|| {
            let b = bounds::verify_random(&cfg)?;
            let l = lemmas::verify_lemmas_random(&VerifyConfig { trials: lemma_trials, ..cfg.clone() })?;
            Ok::<_, Error>((b, l))
        })
        .map_err(err)?;
    let out = serde_json::json!({ "passed": b.passed() && l.passed(), "bounds": b, "lemmas": l });
    to_py(py, &out)
}

#[pyfunction]
fn sturm<'py>(py: Python<'py>, n: usize) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &applications::sturm_report(&SturmConfig::constant(n)).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (j = 1.0, b = 0.0, beta = 0.0))]
fn spin<'py>(py: Python<'py>, j: f64, b: f64, beta: f64) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &applications::spin_report(SpinConfig { j, b, beta }).map_err(err)?)
}

#[pyfunction]
fn fock<'py>(py: Python<'py>, nmax: usize) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &applications::fock_report(FockConfig { nmax }).map_err(err)?)
}

#[pyfunction]
fn rdiff<'py>(py: Python<'py>, v: Vec<f64>, fprime: Vec<f64>) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &applications::reaction_diffusion_check(v.len(), &v, &fprime).map_err(err)?)
}

#[pyfunction]
fn worked_examples<'py>(py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &applications::worked_example_rows().map_err(err)?)
}

#[pymodule]
fn semihilbert_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySpace>()?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(sturm, m)?)?;
    m.add_function(wrap_pyfunction!(spin, m)?)?;
    m.add_function(wrap_pyfunction!(fock, m)?)?;
    m.add_function(wrap_pyfunction!(rdiff, m)?)?;
    m.add_function(wrap_pyfunction!(worked_examples, m)?)?;
    m.add("BOUND_IDS", BoundId::ALL.iter().map(|b| b.name()).collect::<Vec<_>>())?;
    Ok(())
}
