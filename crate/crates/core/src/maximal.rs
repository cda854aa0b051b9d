//! `L_2(N; l_inf)` norms of finite operator families.
//!
//! For a positive family the norm is the least `||y||_2` over common Loewner
//! majorants `y >= x_k`. The squared objective is a weighted sum of
//! pointwise squared Frobenius norms and every constraint is pointwise, so
//! the optimal majorant is assembled point by point from Frobenius
//! projections of `0` onto `{Y : Y >= A_k for all k}`, computed with
//! Dykstra's alternating projections.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{norm2, ClassFunction};
use crate::linalg::{self, CMatrix};
use crate::sequence::GroupSequence;

pub const DEFAULT_JOIN_TOL: f64 = 1e-9;
pub const DEFAULT_MAX_SWEEPS: usize = 100_000;
pub const KIND_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DykstraOptions {
    pub tol: f64,
    pub max_sweeps: usize,
}

impl Default for DykstraOptions {
    fn default() -> Self {
        DykstraOptions {
            tol: DEFAULT_JOIN_TOL,
            max_sweeps: DEFAULT_MAX_SWEEPS,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoewnerJoin {
    pub matrix: CMatrix,
    pub sweeps: usize,
    /// `max_k max(0, -lambda_min(Y - A_k))` at exit.
    pub violation: f64,
}

fn violation(y: &CMatrix, mats: &[CMatrix]) -> f64 {
    mats.iter()
        .map(|a| (-linalg::min_eigenvalue(&(y - a))).max(0.0))
        .fold(0.0, f64::max)
}

/// Frobenius-least `Y` with `Y >= A_k` for every `k`.
///
/// Stops once the constraint violation is at most `tol` and the
/// sweep-to-sweep change of both the iterate and the correction terms is at
/// most `tol / 10`. The iterate alone can stall for a sweep away from the
/// optimum.
pub fn loewner_join(mats: &[CMatrix], opts: &DykstraOptions) -> Result<LoewnerJoin> {
    let first = mats
        .first()
        .ok_or_else(|| Error::InvalidInput("loewner join of an empty family".into()))?;
    let d = first.nrows();
    for a in mats {
        if a.nrows() != d || a.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: a.nrows().max(a.ncols()),
            });
        }
        if linalg::hermitian_defect(a) > KIND_TOL * 1f64.max(linalg::frobenius(a)) {
            return Err(Error::FamilyKind("loewner join input is not Hermitian".into()));
        }
        if linalg::min_eigenvalue(a) < -KIND_TOL * 1f64.max(linalg::frobenius(a)) {
            return Err(Error::FamilyKind("loewner join input is not positive semidefinite".into()));
        }
    }
    let mats: Vec<CMatrix> = mats.iter().map(linalg::hermitize).collect();
    let mut y = linalg::zeros(d);
    let mut increments = vec![linalg::zeros(d); mats.len()];
    let mut change = f64::INFINITY;
    let mut viol = f64::INFINITY;
    for sweep in 1..=opts.max_sweeps {
        let prev = y.clone();
        let mut moved: f64 = 0.0;
        for (a, inc) in mats.iter().zip(increments.iter_mut()) {
            let shifted = &y + &*inc;
            let projected = a + linalg::psd_part(&(&shifted - a));
            let next = shifted - &projected;
            moved = moved.max(linalg::frobenius(&(&next - &*inc)));
            *inc = next;
            y = projected;
        }
        y = linalg::hermitize(&y);
        change = linalg::frobenius(&(&y - &prev)).max(moved);
        viol = violation(&y, &mats);
        if viol <= opts.tol && change <= opts.tol / 10.0 {
            return Ok(LoewnerJoin {
                matrix: y,
                sweeps: sweep,
                violation: viol,
            });
        }
    }
    Err(Error::NonConvergence {
        sweeps: opts.max_sweeps,
        violation: viol,
        change,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Positive,
    Selfadjoint,
    General,
}

#[derive(Debug, Clone)]
pub struct OperatorFamily {
    members: Vec<ClassFunction>,
    labels: Vec<String>,
    kind: FamilyKind,
}

impl OperatorFamily {
    /// Checks the claimed kind against every member (tolerance 1e-10,
    /// relative to the member's size).
    pub fn new(members: Vec<ClassFunction>, labels: Vec<String>, kind: FamilyKind) -> Result<Self> {
        let first = members
            .first()
            .ok_or_else(|| Error::InvalidInput("empty operator family".into()))?;
        if labels.len() != members.len() {
            return Err(Error::InvalidInput("one label per member required".into()));
        }
        for (m, label) in members.iter().zip(&labels) {
            first.check_same_dim(m)?;
            let scale = m.values().iter().map(linalg::frobenius).fold(1.0, f64::max);
            let tol = KIND_TOL * scale;
            match kind {
                FamilyKind::Positive if !m.is_positive(tol) => {
                    return Err(Error::FamilyKind(format!("member {label} is not positive")));
                }
                FamilyKind::Selfadjoint if !m.is_hermitian(tol) => {
                    return Err(Error::FamilyKind(format!("member {label} is not self-adjoint")));
                }
                _ => {}
            }
        }
        Ok(OperatorFamily { members, labels, kind })
    }

    /// Strongest kind the members satisfy.
    pub fn classify(members: Vec<ClassFunction>, labels: Vec<String>) -> Result<Self> {
        for kind in [FamilyKind::Positive, FamilyKind::Selfadjoint] {
            if let Ok(f) = Self::new(members.clone(), labels.clone(), kind) {
                return Ok(f);
            }
        }
        Self::new(members, labels, FamilyKind::General)
    }

    pub fn indexed(members: Vec<ClassFunction>, kind: FamilyKind) -> Result<Self> {
        let labels = (0..members.len()).map(|i| i.to_string()).collect();
        Self::new(members, labels, kind)
    }

    pub fn members(&self) -> &[ClassFunction] {
        &self.members
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.members[0].dim()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn scaled(&self, factors: &[f64]) -> Result<Self> {
        if factors.len() != self.members.len() || factors.iter().any(|c| *c < 0.0) {
            return Err(Error::InvalidInput("one nonnegative factor per member required".into()));
        }
        let members = self.members.iter().zip(factors).map(|(m, c)| m.scale(*c)).collect();
        Ok(OperatorFamily {
            members,
            labels: self.labels.clone(),
            kind: self.kind,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaximalEstimate {
    /// `max_k ||x_k||_2`, valid for every kind.
    pub lower: f64,
    pub upper: f64,
    /// Whether `upper` is the norm itself (up to solver tolerance).
    pub exact: bool,
    pub sweeps_max: usize,
    pub violation_max: f64,
    pub members: usize,
}

impl MaximalEstimate {
    pub fn value(&self) -> f64 {
        self.upper
    }
}

fn lower_bound(seq: &GroupSequence, family: &OperatorFamily) -> Result<f64> {
    family
        .members()
        .iter()
        .map(|m| norm2(seq, m))
        .try_fold(0.0, |acc: f64, v| v.map(|v| acc.max(v)))
}

/// The per-point joins of a positive family.
pub fn positive_majorant(seq: &GroupSequence, family: &OperatorFamily, opts: &DykstraOptions) -> Result<(ClassFunction, usize, f64)> {
    if family.kind() != FamilyKind::Positive {
        return Err(Error::FamilyKind("positive family required".into()));
    }
    family.members()[0].check_on(seq)?;
    let mut values = Vec::with_capacity(seq.point_count());
    let mut sweeps = 0;
    let mut viol: f64 = 0.0;
    for idx in 0..seq.point_count() {
        let mats: Vec<CMatrix> = family.members().iter().map(|m| m.value(idx).clone()).collect();
        let join = loewner_join(&mats, opts)?;
        sweeps = sweeps.max(join.sweeps);
        viol = viol.max(join.violation);
        values.push(join.matrix);
    }
    Ok((ClassFunction::new(family.dim(), values)?, sweeps, viol))
}

/// Exact norm of a positive family: the `L_2` norm of the pointwise least
/// Loewner majorant.
pub fn positive_family_norm(seq: &GroupSequence, family: &OperatorFamily, opts: &DykstraOptions) -> Result<MaximalEstimate> {
    let (majorant, sweeps, viol) = positive_majorant(seq, family, opts)?;
    Ok(MaximalEstimate {
        lower: lower_bound(seq, family)?,
        upper: norm2(seq, &majorant)?,
        exact: true,
        sweeps_max: sweeps,
        violation_max: viol,
        members: family.len(),
    })
}

/// Exact norm of a scalar family of any kind: `|| sup_k |x_k| ||_2`.
pub fn scalar_family_norm(seq: &GroupSequence, family: &OperatorFamily) -> Result<MaximalEstimate> {
    if family.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: family.dim(),
        });
    }
    family.members()[0].check_on(seq)?;
    let total: f64 = seq
        .points()
        .iter()
        .enumerate()
        .map(|(idx, p)| {
            let sup = family
                .members()
                .iter()
                .map(|m| m.value(idx)[(0, 0)].norm())
                .fold(0.0, f64::max);
            p.weight * sup * sup
        })
        .sum();
    Ok(MaximalEstimate {
        lower: lower_bound(seq, family)?,
        upper: total.sqrt(),
        exact: true,
        sweeps_max: 0,
        violation_max: 0.0,
        members: family.len(),
    })
}

/// `upper = ||(x_k^+)|| + ||(x_k^-)||`, a valid but non-exact upper bound for
/// a self-adjoint family.
pub fn selfadjoint_upper_bound(seq: &GroupSequence, family: &OperatorFamily, opts: &DykstraOptions) -> Result<MaximalEstimate> {
    if family.kind() == FamilyKind::General {
        return Err(Error::FamilyKind("self-adjoint family required".into()));
    }
    let split = |part: fn(&CMatrix) -> CMatrix| -> Result<OperatorFamily> {
        let members = family.members().iter().map(|m| m.map(part)).collect();
        OperatorFamily::new(members, family.labels().to_vec(), FamilyKind::Positive)
    };
    let plus = positive_family_norm(seq, &split(linalg::psd_part)?, opts)?;
    let minus = positive_family_norm(seq, &split(linalg::negative_part)?, opts)?;
    Ok(MaximalEstimate {
        lower: lower_bound(seq, family)?,
        upper: plus.upper + minus.upper,
        exact: false,
        sweeps_max: plus.sweeps_max.max(minus.sweeps_max),
        violation_max: plus.violation_max.max(minus.violation_max),
        members: family.len(),
    })
}
