//! Matrix-valued class functions on a [`GroupSequence`], i.e. elements of
//! `L_2(L_inf(G) (x) M_d)` that are constant on conjugacy classes.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::sequence::{ClassPoint, GroupSequence};

#[derive(Debug, Clone, PartialEq)]
pub struct ClassFunction {
    dim: usize,
    values: Vec<CMatrix>,
}

impl ClassFunction {
    pub fn new(dim: usize, values: Vec<CMatrix>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("matrix dimension must be at least 1".into()));
        }
        for v in &values {
            if v.nrows() != dim || v.ncols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.nrows().max(v.ncols()),
                });
            }
        }
        Ok(ClassFunction { dim, values })
    }

    pub fn from_fn(seq: &GroupSequence, dim: usize, mut f: impl FnMut(&ClassPoint) -> CMatrix) -> Result<Self> {
        Self::new(dim, seq.points().iter().map(&mut f).collect())
    }

    pub fn from_scalars(values: Vec<Complex64>) -> Self {
        ClassFunction {
            dim: 1,
            values: values.into_iter().map(linalg::scalar).collect(),
        }
    }

    pub fn constant(seq: &GroupSequence, value: CMatrix) -> Result<Self> {
        let dim = value.nrows();
        Self::new(dim, vec![value; seq.point_count()])
    }

    pub fn zero(seq: &GroupSequence, dim: usize) -> Self {
        ClassFunction {
            dim,
            values: vec![linalg::zeros(dim); seq.point_count()],
        }
    }

    /// The scalar function `chi_n`.
    pub fn character(seq: &GroupSequence, n: usize) -> Result<Self> {
        let values = seq
            .points()
            .iter()
            .map(|x| seq.chi(n, x))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_scalars(values))
    }

    /// `mu(J_s(y))^{-1/2} 1_{J_s(y)}`, the unit-norm indicator of a
    /// conjugacy cylinder.
    pub fn cylinder_indicator(seq: &GroupSequence, y: &ClassPoint, s: usize) -> Result<Self> {
        let mass = seq.cylinder_measure(y, s, crate::sequence::CylinderKind::J)?;
        let height = 1.0 / mass.sqrt();
        let values = seq
            .points()
            .iter()
            .map(|x| {
                let inside = seq.same_j_cylinder(y, x, s)?;
                Ok(Complex64::new(if inside { height } else { 0.0 }, 0.0))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_scalars(values))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[CMatrix] {
        &self.values
    }

    pub fn value(&self, idx: usize) -> &CMatrix {
        &self.values[idx]
    }

    pub fn into_values(self) -> Vec<CMatrix> {
        self.values
    }

    pub(crate) fn check_on(&self, seq: &GroupSequence) -> Result<()> {
        if self.values.len() != seq.point_count() {
            return Err(Error::InvalidInput(format!(
                "function has {} values but the sequence has {} points",
                self.values.len(),
                seq.point_count()
            )));
        }
        Ok(())
    }

    pub(crate) fn check_same_dim(&self, other: &ClassFunction) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        if self.values.len() != other.values.len() {
            return Err(Error::InvalidInput("functions live on different sequences".into()));
        }
        Ok(())
    }

    pub fn map(&self, f: impl Fn(&CMatrix) -> CMatrix) -> Self {
        ClassFunction {
            dim: self.dim,
            values: self.values.iter().map(f).collect(),
        }
    }

    pub fn zip_with(&self, other: &ClassFunction, f: impl Fn(&CMatrix, &CMatrix) -> CMatrix) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(ClassFunction {
            dim: self.dim,
            values: self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &ClassFunction) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ClassFunction) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|a| a * Complex64::new(c, 0.0))
    }

    pub fn adjoint(&self) -> Self {
        self.map(|a| a.adjoint())
    }

    pub fn max_hermitian_defect(&self) -> f64 {
        self.values.iter().map(linalg::hermitian_defect).fold(0.0, f64::max)
    }

    /// Smallest eigenvalue over all points of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        self.values
            .iter()
            .map(linalg::min_eigenvalue)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_hermitian_defect() <= tol
    }

    pub fn is_positive(&self, tol: f64) -> bool {
        self.is_hermitian(tol) && self.min_eigenvalue() >= -tol
    }

    /// Largest pointwise Frobenius distance.
    pub fn max_distance(&self, other: &ClassFunction) -> Result<f64> {
        self.check_same_dim(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| linalg::frobenius(&(a - b)))
            .fold(0.0, f64::max))
    }

    pub fn to_json(&self, seq: &GroupSequence) -> Result<String> {
        self.check_on(seq)?;
        let values = seq
            .points()
            .iter()
            .zip(&self.values)
            .map(|(p, v)| {
                let key = labels_key(&p.labels);
                let entries = (0..self.dim)
                    .flat_map(|r| (0..self.dim).map(move |c| (r, c)))
                    .map(|(r, c)| [v[(r, c)].re, v[(r, c)].im])
                    .collect();
                (key, entries)
            })
            .collect();
        let doc = ClassFunctionJson {
            dim: self.dim,
            depth: seq.depth(),
            values,
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn from_json(seq: &GroupSequence, text: &str) -> Result<Self> {
        let doc: ClassFunctionJson = serde_json::from_str(text)?;
        if doc.depth != seq.depth() {
            return Err(Error::InvalidInput(format!(
                "function depth {} does not match sequence depth {}",
                doc.depth,
                seq.depth()
            )));
        }
        if doc.values.len() != seq.point_count() {
            return Err(Error::InvalidInput(format!(
                "function has {} points, sequence has {}",
                doc.values.len(),
                seq.point_count()
            )));
        }
        let d = doc.dim;
        let values = seq
            .points()
            .iter()
            .map(|p| {
                let key = labels_key(&p.labels);
                let entries = doc
                    .values
                    .get(&key)
                    .ok_or_else(|| Error::InvalidInput(format!("missing point {key}")))?;
                if entries.len() != d * d {
                    return Err(Error::DimensionMismatch {
                        expected: d * d,
                        found: entries.len(),
                    });
                }
                Ok(CMatrix::from_fn(d, d, |r, c| {
                    let [re, im] = entries[r * d + c];
                    Complex64::new(re, im)
                }))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(d, values)
    }
}

fn labels_key(labels: &[usize]) -> String {
    let parts: Vec<String> = labels.iter().map(|l| l.to_string()).collect();
    parts.join(",")
}

/// On-disk form: point-label tuple `"l0,l1,..."` to a row-major matrix of
/// `[re, im]` pairs.
#[derive(Debug, Serialize, Deserialize)]
struct ClassFunctionJson {
    dim: usize,
    depth: usize,
    values: BTreeMap<String, Vec<[f64; 2]>>,
}

/// `<f, g> = sum_x w(x) tau(f(x)* g(x))`.
pub fn inner_product(seq: &GroupSequence, f: &ClassFunction, g: &ClassFunction) -> Result<Complex64> {
    f.check_on(seq)?;
    f.check_same_dim(g)?;
    Ok(seq
        .points()
        .iter()
        .zip(f.values().iter().zip(g.values()))
        .map(|(p, (a, b))| linalg::tau_inner(a, b) * p.weight)
        .sum())
}

pub fn norm2(seq: &GroupSequence, f: &ClassFunction) -> Result<f64> {
    f.check_on(seq)?;
    Ok(seq
        .points()
        .iter()
        .zip(f.values())
        .map(|(p, a)| p.weight * linalg::tau_norm_sqr(a))
        .sum::<f64>()
        .sqrt())
}
