//! Conditional expectations onto the cylinder filtration and the associated
//! martingale differences.
//!
//! With labels ordered most-significant-first, the points sharing their
//! first `k` labels form a contiguous block of `P_L / P_k` points, and
//! `E_k f` is the weighted average of `f` over that block.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{norm2, ClassFunction};
use crate::linalg::{self, CMatrix};
use crate::sequence::GroupSequence;

fn check_level(seq: &GroupSequence, k: usize) -> Result<()> {
    if k > seq.depth() {
        return Err(Error::LevelOutOfRange {
            level: k,
            depth: seq.depth(),
        });
    }
    Ok(())
}

/// `E_k f`, for `0 <= k <= L`.
pub fn conditional_expectation(seq: &GroupSequence, f: &ClassFunction, k: usize) -> Result<ClassFunction> {
    check_level(seq, k)?;
    f.check_on(seq)?;
    let block = seq.index_bound() / seq.big_p()[k];
    let mut values = Vec::with_capacity(seq.point_count());
    for start in (0..seq.point_count()).step_by(block) {
        let mut acc = linalg::zeros(f.dim());
        let mut mass = 0.0;
        for idx in start..start + block {
            let w = seq.point(idx).weight;
            acc += f.value(idx) * num_complex::Complex64::new(w, 0.0);
            mass += w;
        }
        let avg = acc / num_complex::Complex64::new(mass, 0.0);
        values.extend(std::iter::repeat_n(avg, block));
    }
    ClassFunction::new(f.dim(), values)
}

/// `d_k f = E_k f - E_{k-1} f` with `E_{-1} = 0`.
pub fn martingale_difference(seq: &GroupSequence, f: &ClassFunction, k: usize) -> Result<ClassFunction> {
    let ek = conditional_expectation(seq, f, k)?;
    if k == 0 {
        return Ok(ek);
    }
    ek.sub(&conditional_expectation(seq, f, k - 1)?)
}

/// `d_0 f, ..., d_L f`.
pub fn martingale_differences(seq: &GroupSequence, f: &ClassFunction) -> Result<Vec<ClassFunction>> {
    let expectations = (0..=seq.depth())
        .map(|k| conditional_expectation(seq, f, k))
        .collect::<Result<Vec<_>>>()?;
    let mut out = vec![expectations[0].clone()];
    for k in 1..expectations.len() {
        out.push(expectations[k].sub(&expectations[k - 1])?);
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SquareFunctionReport {
    pub norm: f64,
    /// `|| (sum_k |d_k f|^2)^{1/2} ||_2`
    pub column_norm: f64,
    /// `|| (sum_k |(d_k f)*|^2)^{1/2} ||_2`
    pub row_norm: f64,
    pub column_residual: f64,
    pub row_residual: f64,
}

impl SquareFunctionReport {
    pub fn max_residual(&self) -> f64 {
        self.column_residual.max(self.row_residual)
    }
}

fn square_function_norm(seq: &GroupSequence, diffs: &[ClassFunction], row: bool) -> f64 {
    let dim = diffs[0].dim();
    let mut total = 0.0;
    for (idx, p) in seq.points().iter().enumerate() {
        let mut acc: CMatrix = linalg::zeros(dim);
        for d in diffs {
            let v = d.value(idx);
            acc += if row { v * v.adjoint() } else { v.adjoint() * v };
        }
        let root = linalg::psd_sqrt(&acc);
        total += p.weight * linalg::tau_norm_sqr(&root);
    }
    total.sqrt()
}

/// Compares both square-function norms with `||f||_2`; residuals are
/// relative to `max(1, ||f||_2^2)` on squared norms.
pub fn square_function_check(seq: &GroupSequence, f: &ClassFunction) -> Result<SquareFunctionReport> {
    let diffs = martingale_differences(seq, f)?;
    let norm = norm2(seq, f)?;
    let column_norm = square_function_norm(seq, &diffs, false);
    let row_norm = square_function_norm(seq, &diffs, true);
    let scale = norm.powi(2).max(1.0);
    Ok(SquareFunctionReport {
        norm,
        column_norm,
        row_norm,
        column_residual: (column_norm.powi(2) - norm.powi(2)).abs() / scale,
        row_residual: (row_norm.powi(2) - norm.powi(2)).abs() / scale,
    })
}
