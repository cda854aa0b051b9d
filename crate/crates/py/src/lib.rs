//! Python bindings: `import tdfejer`.
//!
//! Matrices cross the boundary as nested lists of `complex`; reports come
//! back as plain dicts.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyAny;
use serde::Serialize;

use tdfejer_core as core;
use tdfejer_core::random::{random_class_function, stream_rng, RandomKind};
use tdfejer_core::{BoundId, CMatrix, Complex64, DykstraOptions, IdentityId};

fn err(e: core::Error) -> PyErr {
    match e {
        core::Error::NonConvergence { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn to_py_dict<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn matrix_to_rows(m: &CMatrix) -> Vec<Vec<Complex64>> {
    (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| m[(r, c)]).collect()).collect()
}

fn rows_to_matrix(rows: Vec<Vec<Complex64>>) -> PyResult<CMatrix> {
    let d = rows.len();
    if d == 0 || rows.iter().any(|r| r.len() != d) {
        return Err(PyValueError::new_err("expected a non-empty square matrix"));
    }
    Ok(CMatrix::from_fn(d, d, |r, c| rows[r][c]))
}

fn random_kind(kind: &str) -> PyResult<RandomKind> {
    match kind {
        "general" => Ok(RandomKind::General),
        "hermitian" => Ok(RandomKind::Hermitian),
        "positive" => Ok(RandomKind::Positive),
        _ => Err(PyValueError::new_err(format!("unknown matrix kind `{kind}`"))),
    }
}

/// Truncated product `G_0 x ... x G_{L-1}` of finite groups.
#[pyclass(name = "GroupSequence", module = "tdfejer", frozen)]
struct PyGroupSequence {
    inner: core::GroupSequence,
}

#[pymethods]
impl PyGroupSequence {
    /// `pattern` holds catalog names (`"S3"`, `"Z4"`, `"D5"`, `"Q8"`) cycled to `depth`.
    #[new]
    fn new(pattern: Vec<String>, depth: usize) -> PyResult<Self> {
        let specs = pattern
            .iter()
            .map(|name| name.parse().map(core::GroupSpec::Catalog))
            .collect::<core::Result<Vec<_>>>()
            .map_err(err)?;
        Ok(PyGroupSequence {
            inner: core::GroupSequence::new(&specs, depth).map_err(err)?,
        })
    }

    /// Builds a one-factor-pattern sequence from a Cayley table.
    #[staticmethod]
    fn from_cayley(table: Vec<Vec<usize>>, depth: usize, label: Option<String>) -> PyResult<Self> {
        let spec = core::GroupSpec::Table {
            label: label.unwrap_or_else(|| "G".into()),
            table,
        };
        Ok(PyGroupSequence {
            inner: core::GroupSequence::new(&[spec], depth).map_err(err)?,
        })
    }

    #[getter]
    fn depth(&self) -> usize {
        self.inner.depth()
    }

    #[getter]
    fn label(&self) -> String {
        self.inner.label()
    }

    #[getter]
    fn m(&self) -> Vec<usize> {
        self.inner.m_seq().to_vec()
    }

    #[getter]
    fn p(&self) -> Vec<usize> {
        self.inner.p_seq().to_vec()
    }

    #[getter]
    fn big_p(&self) -> Vec<usize> {
        self.inner.big_p().to_vec()
    }

    #[getter]
    fn big_m(&self) -> Vec<u128> {
        self.inner.big_m().to_vec()
    }

    #[getter]
    fn rho(&self) -> usize {
        self.inner.rho()
    }

    #[getter]
    fn point_count(&self) -> usize {
        self.inner.point_count()
    }

    fn point_labels(&self, idx: usize) -> PyResult<Vec<usize>> {
        if idx >= self.inner.point_count() {
            return Err(PyValueError::new_err(format!("point {idx} out of range")));
        }
        Ok(self.inner.point(idx).labels.clone())
    }

    fn point_weight(&self, idx: usize) -> PyResult<f64> {
        if idx >= self.inner.point_count() {
            return Err(PyValueError::new_err(format!("point {idx} out of range")));
        }
        Ok(self.inner.point(idx).weight)
    }

    /// Mixed-radix digits of `n`, least significant first.
    fn digits(&self, n: usize) -> PyResult<Vec<usize>> {
        Ok(self.inner.expand(n).map_err(err)?.digits)
    }

    fn order_index(&self, n: usize) -> PyResult<usize> {
        self.inner.order_index(n).map_err(err)
    }

    fn tail_index(&self, n: usize, s: usize) -> PyResult<usize> {
        self.inner.tail_index(n, s).map_err(err)
    }

    /// `chi_n` at point index `idx`.
    fn chi(&self, n: usize, idx: usize) -> PyResult<Complex64> {
        if idx >= self.inner.point_count() {
            return Err(PyValueError::new_err(format!("point {idx} out of range")));
        }
        self.inner.chi(n, self.inner.point(idx)).map_err(err)
    }

    /// Character table of factor `k`, rows indexed by character.
    fn character_table(&self, k: usize) -> PyResult<Vec<Vec<Complex64>>> {
        if k >= self.inner.depth() {
            return Err(PyValueError::new_err(format!("factor {k} out of range")));
        }
        Ok(self.inner.factor(k).characters.chars.clone())
    }

    fn class_sizes(&self, k: usize) -> PyResult<Vec<usize>> {
        if k >= self.inner.depth() {
            return Err(PyValueError::new_err(format!("factor {k} out of range")));
        }
        Ok(self.inner.factor(k).classes.class_sizes.clone())
    }

    fn __repr__(&self) -> String {
        format!("GroupSequence('{}', depth={})", self.inner.label(), self.inner.depth())
    }
}

/// Matrix-valued function on the class points of a sequence.
#[pyclass(name = "ClassFunction", module = "tdfejer", frozen, from_py_object)]
#[derive(Clone)]
struct PyClassFunction {
    inner: core::ClassFunction,
}

fn wrap(inner: core::ClassFunction) -> PyClassFunction {
    PyClassFunction { inner }
}

#[pymethods]
impl PyClassFunction {
    /// `values[i]` is the `d x d` matrix at point index `i`.
    #[new]
    fn new(values: Vec<Vec<Vec<Complex64>>>) -> PyResult<Self> {
        let mats = values.into_iter().map(rows_to_matrix).collect::<PyResult<Vec<_>>>()?;
        let dim = mats.first().map(|m| m.nrows()).unwrap_or(1);
        Ok(wrap(core::ClassFunction::new(dim, mats).map_err(err)?))
    }

    /// Seeded random function; `kind` is `general`, `hermitian` or `positive`.
    #[staticmethod]
    #[pyo3(signature = (seq, dim, seed, kind = "general"))]
    fn random(seq: &PyGroupSequence, dim: usize, seed: u64, kind: &str) -> PyResult<Self> {
        if dim == 0 {
            return Err(PyValueError::new_err("dim must be at least 1"));
        }
        let mut rng = stream_rng(seed, "function");
        Ok(wrap(random_class_function(&seq.inner, dim, random_kind(kind)?, &mut rng)))
    }

    #[staticmethod]
    fn character(seq: &PyGroupSequence, n: usize) -> PyResult<Self> {
        Ok(wrap(core::ClassFunction::character(&seq.inner, n).map_err(err)?))
    }

    /// Indicator of the level-`s` cylinder around the point with `labels`.
    #[staticmethod]
    fn cylinder(seq: &PyGroupSequence, labels: Vec<usize>, s: usize) -> PyResult<Self> {
        let s_ = &seq.inner;
        if labels.len() != s_.depth() || labels.iter().zip(s_.p_seq()).any(|(l, p)| l >= p) {
            return Err(PyValueError::new_err(format!("{labels:?} is not a point of the sequence")));
        }
        let y = s_.point(s_.point_index(&labels)).clone();
        Ok(wrap(core::ClassFunction::cylinder_indicator(s_, &y, s).map_err(err)?))
    }

    #[staticmethod]
    fn from_json(seq: &PyGroupSequence, text: &str) -> PyResult<Self> {
        Ok(wrap(core::ClassFunction::from_json(&seq.inner, text).map_err(err)?))
    }

    fn to_json(&self, seq: &PyGroupSequence) -> PyResult<String> {
        self.inner.to_json(&seq.inner).map_err(err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn value(&self, idx: usize) -> PyResult<Vec<Vec<Complex64>>> {
        if idx >= self.inner.len() {
            return Err(PyValueError::new_err(format!("point {idx} out of range")));
        }
        Ok(matrix_to_rows(self.inner.value(idx)))
    }

    fn values(&self) -> Vec<Vec<Vec<Complex64>>> {
        self.inner.values().iter().map(matrix_to_rows).collect()
    }

    fn norm(&self, seq: &PyGroupSequence) -> PyResult<f64> {
        core::norm2(&seq.inner, &self.inner).map_err(err)
    }

    fn __sub__(&self, other: &PyClassFunction) -> PyResult<Self> {
        Ok(wrap(self.inner.sub(&other.inner).map_err(err)?))
    }

    fn __add__(&self, other: &PyClassFunction) -> PyResult<Self> {
        Ok(wrap(self.inner.add(&other.inner).map_err(err)?))
    }
}

#[pyfunction]
fn inner_product(seq: &PyGroupSequence, f: &PyClassFunction, g: &PyClassFunction) -> PyResult<Complex64> {
    core::inner_product(&seq.inner, &f.inner, &g.inner).map_err(err)
}

#[pyfunction]
fn fourier_coefficient(seq: &PyGroupSequence, f: &PyClassFunction, n: usize) -> PyResult<Vec<Vec<Complex64>>> {
    Ok(matrix_to_rows(&core::fourier_coefficient(&seq.inner, &f.inner, n).map_err(err)?))
}

#[pyfunction]
fn dirichlet_mean(seq: &PyGroupSequence, f: &PyClassFunction, n: usize) -> PyResult<PyClassFunction> {
    Ok(wrap(core::dirichlet_mean(&seq.inner, &f.inner, n).map_err(err)?))
}

#[pyfunction]
fn fejer_mean(seq: &PyGroupSequence, f: &PyClassFunction, n: usize) -> PyResult<PyClassFunction> {
    Ok(wrap(core::fejer_mean(&seq.inner, &f.inner, n).map_err(err)?))
}

/// `K_n(y, x)` at point indices `y`, `x`.
#[pyfunction]
fn fejer_kernel(seq: &PyGroupSequence, n: usize, y: usize, x: usize) -> PyResult<Complex64> {
    let s = &seq.inner;
    if y >= s.point_count() || x >= s.point_count() {
        return Err(PyValueError::new_err("point index out of range"));
    }
    core::fejer_kernel(s, n, s.point(y), s.point(x)).map_err(err)
}

#[pyfunction]
fn dirichlet_kernel(seq: &PyGroupSequence, n: usize, y: usize, x: usize) -> PyResult<Complex64> {
    let s = &seq.inner;
    if y >= s.point_count() || x >= s.point_count() {
        return Err(PyValueError::new_err("point index out of range"));
    }
    core::dirichlet_kernel(s, n, s.point(y), s.point(x)).map_err(err)
}

#[pyfunction]
fn conditional_expectation(seq: &PyGroupSequence, f: &PyClassFunction, k: usize) -> PyResult<PyClassFunction> {
    Ok(wrap(core::conditional_expectation(&seq.inner, &f.inner, k).map_err(err)?))
}

#[pyfunction]
fn martingale_differences(seq: &PyGroupSequence, f: &PyClassFunction) -> PyResult<Vec<PyClassFunction>> {
    Ok(core::martingale_differences(&seq.inner, &f.inner)
        .map_err(err)?
        .into_iter()
        .map(wrap)
        .collect())
}

/// Residual report for one identity id as a dict.
#[pyfunction]
#[pyo3(signature = (seq, id, f = None, tol = None))]
fn check_identity(
    py: Python<'_>,
    seq: &PyGroupSequence,
    id: &str,
    f: Option<&PyClassFunction>,
    tol: Option<f64>,
) -> PyResult<Py<PyAny>> {
    let id: IdentityId = id.parse().map_err(err)?;
    let inputs = core::IdentityInputs {
        function: f.map(|f| &f.inner),
        tolerance: tol,
        ..Default::default()
    };
    let report = core::check_identity(&seq.inner, id, &inputs).map_err(err)?;
    to_py_dict(py, &report)
}

#[pyfunction]
fn identity_ids() -> Vec<&'static str> {
    IdentityId::ALL.iter().map(IdentityId::name).collect()
}

#[pyfunction]
fn bound_ids() -> Vec<&'static str> {
    BoundId::ALL.iter().map(BoundId::name).collect()
}

/// One report dict per admissible `(A, s)` combination of bound `id`.
#[pyfunction]
#[pyo3(signature = (seq, id, f, nmax = None))]
fn check_bound(
    py: Python<'_>,
    seq: &PyGroupSequence,
    id: &str,
    f: &PyClassFunction,
    nmax: Option<usize>,
) -> PyResult<Py<PyAny>> {
    let id: BoundId = id.parse().map_err(err)?;
    let reports = core::check_bound_all(&seq.inner, id, &f.inner, nmax, &DykstraOptions::default()).map_err(err)?;
    to_py_dict(py, &reports)
}

/// Least Frobenius-norm `Y` with `Y >= A_k` for every `k`.
#[pyfunction]
#[pyo3(signature = (mats, tol = None))]
fn loewner_join(mats: Vec<Vec<Vec<Complex64>>>, tol: Option<f64>) -> PyResult<Vec<Vec<Complex64>>> {
    let mats = mats.into_iter().map(rows_to_matrix).collect::<PyResult<Vec<_>>>()?;
    let mut opts = DykstraOptions::default();
    if let Some(t) = tol {
        opts.tol = t;
    }
    let join = core::loewner_join(&mats, &opts).map_err(err)?;
    Ok(matrix_to_rows(&join.matrix))
}

/// `|| sup_k |x_k| ||_2` for a family of positive functions.
#[pyfunction]
fn positive_family_norm(seq: &PyGroupSequence, family: Vec<PyClassFunction>) -> PyResult<f64> {
    let family_len = family.len();
    let members = family.into_iter().map(|f| f.inner).collect();
    let labels = (0..family_len).map(|k| k.to_string()).collect();
    let fam = core::OperatorFamily::new(members, labels, core::FamilyKind::Positive).map_err(err)?;
    Ok(core::positive_family_norm(&seq.inner, &fam, &DykstraOptions::default())
        .map_err(err)?
        .value())
}

#[pymodule]
pub fn tdfejer(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGroupSequence>()?;
    m.add_class::<PyClassFunction>()?;
    m.add_function(wrap_pyfunction!(inner_product, m)?)?;
    m.add_function(wrap_pyfunction!(fourier_coefficient, m)?)?;
    m.add_function(wrap_pyfunction!(dirichlet_mean, m)?)?;
    m.add_function(wrap_pyfunction!(fejer_mean, m)?)?;
    m.add_function(wrap_pyfunction!(dirichlet_kernel, m)?)?;
    m.add_function(wrap_pyfunction!(fejer_kernel, m)?)?;
    m.add_function(wrap_pyfunction!(conditional_expectation, m)?)?;
    m.add_function(wrap_pyfunction!(martingale_differences, m)?)?;
    m.add_function(wrap_pyfunction!(check_identity, m)?)?;
    m.add_function(wrap_pyfunction!(check_bound, m)?)?;
    m.add_function(wrap_pyfunction!(identity_ids, m)?)?;
    m.add_function(wrap_pyfunction!(bound_ids, m)?)?;
    m.add_function(wrap_pyfunction!(loewner_join, m)?)?;
    m.add_function(wrap_pyfunction!(positive_family_norm, m)?)?;
    Ok(())
}
