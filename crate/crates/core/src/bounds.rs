//! Checks of the quantitative maximal inequalities on concrete functions.
//!
//! Scalar functions are measured with the exact scalar maximal norm. Matrix
//! functions use the exact Loewner-join norm when the family is positive by
//! construction and the guaranteed lower bound `max_k ||x_k||_2` otherwise.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{modulated_conjugacy_average, integrate_kernel, CharacterGrid, KernelTable};
use crate::function::{norm2, ClassFunction};
use crate::martingale::conditional_expectation;
use crate::maximal::{
    positive_family_norm, scalar_family_norm, DykstraOptions, FamilyKind, MaximalEstimate, OperatorFamily, KIND_TOL,
};
use crate::sequence::GroupSequence;

pub const DOOB_CONSTANT: f64 = 2.0;
pub const PROP12_CONSTANT: f64 = 40.0;
pub const PROP13_CONSTANT: f64 = 640.0;
/// Envelope `640 + (6 + 1280)` for the `thm11` constant,
/// with `rho >= 2` absorbing the additive 6, rounded up.
pub const THM11_CONSTANT: f64 = 2000.0;
/// Relative slack allowed on `estimate <= bound`.
pub const BOUND_SLACK: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundId {
    Doob,
    Lemma32,
    Lemma33,
    Lemma44,
    Prop12,
    Prop13,
    Thm11,
}

impl BoundId {
    pub const ALL: [BoundId; 7] = [
        BoundId::Doob,
        BoundId::Lemma32,
        BoundId::Lemma33,
        BoundId::Lemma44,
        BoundId::Prop12,
        BoundId::Prop13,
        BoundId::Thm11,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BoundId::Doob => "doob",
            BoundId::Lemma32 => "lemma32",
            BoundId::Lemma33 => "lemma33",
            BoundId::Lemma44 => "lemma44",
            BoundId::Prop12 => "prop12",
            BoundId::Prop13 => "prop13",
            BoundId::Thm11 => "thm11",
        }
    }

    /// Whether the bound ranges over `(A, s)` or over `A` alone.
    pub fn uses_level(&self) -> bool {
        matches!(self, BoundId::Lemma44 | BoundId::Prop12 | BoundId::Prop13)
    }

    pub fn uses_s(&self) -> bool {
        matches!(self, BoundId::Lemma44 | BoundId::Prop12)
    }

    pub fn needs_positive(&self) -> bool {
        matches!(self, BoundId::Doob | BoundId::Lemma32 | BoundId::Lemma33)
    }
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        BoundId::ALL
            .into_iter()
            .find(|id| id.name() == key)
            .ok_or_else(|| Error::UnknownBound(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BoundParams {
    pub a: Option<usize>,
    pub s: Option<usize>,
    pub nmax: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateKind {
    Exact,
    Lower,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundDiagnostics {
    pub members: usize,
    pub norm_f: f64,
    pub rho: usize,
    pub lower: f64,
    pub sweeps_max: usize,
    pub violation_max: f64,
    /// Bound divided by `||f||_2`, or by the reference quantity for the
    /// family-only lemmas.
    pub constant: f64,
    pub nmax: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub id: BoundId,
    pub group: String,
    pub depth: usize,
    pub dim: usize,
    #[serde(rename = "A")]
    pub a: Option<usize>,
    pub s: Option<usize>,
    pub estimate_kind: EstimateKind,
    pub estimate: f64,
    pub bound: f64,
    /// `estimate / ||f||_2`: the observed constant.
    pub ratio: f64,
    pub pass: bool,
    pub diagnostics: BoundDiagnostics,
}

/// Every admissible `(A, s)` for `id` at the sequence's depth.
pub fn admissible_params(seq: &GroupSequence, id: BoundId, nmax: Option<usize>) -> Vec<BoundParams> {
    let depth = seq.depth();
    match id {
        BoundId::Lemma44 | BoundId::Prop12 => (0..depth)
            .flat_map(|a| {
                (0..=a).map(move |s| BoundParams {
                    a: Some(a),
                    s: Some(s),
                    nmax,
                })
            })
            .collect(),
        BoundId::Prop13 => (0..depth)
            .map(|a| BoundParams {
                a: Some(a),
                s: None,
                nmax,
            })
            .collect(),
        _ => vec![BoundParams { a: None, s: None, nmax }],
    }
}

pub fn default_nmax(seq: &GroupSequence) -> usize {
    4 * seq.index_bound()
}

fn level(seq: &GroupSequence, id: BoundId, params: &BoundParams) -> Result<(usize, usize)> {
    let a = params
        .a
        .ok_or_else(|| Error::InvalidInput(format!("{id} requires A")))?;
    if a >= seq.depth() {
        return Err(Error::LevelOutOfRange {
            level: a,
            depth: seq.depth(),
        });
    }
    let s = if id.uses_s() {
        let s = params
            .s
            .ok_or_else(|| Error::InvalidInput(format!("{id} requires s")))?;
        if s > a {
            return Err(Error::InvalidInput(format!("{id} requires s <= A, got s = {s}, A = {a}")));
        }
        s
    } else {
        0
    };
    Ok((a, s))
}

fn martingale_family(seq: &GroupSequence, f: &ClassFunction) -> Result<Vec<ClassFunction>> {
    (0..=seq.depth()).map(|k| conditional_expectation(seq, f, k)).collect()
}

/// Exact norm for scalar or positive families, lower bound otherwise.
fn measure(seq: &GroupSequence, members: Vec<ClassFunction>, opts: &DykstraOptions) -> Result<(EstimateKind, MaximalEstimate)> {
    let family = OperatorFamily::classify(members.clone(), (0..members.len()).map(|i| i.to_string()).collect())?;
    if family.dim() == 1 {
        return Ok((EstimateKind::Exact, scalar_family_norm(seq, &family)?));
    }
    if family.kind() == FamilyKind::Positive {
        return Ok((EstimateKind::Exact, positive_family_norm(seq, &family, opts)?));
    }
    let lower = family
        .members()
        .iter()
        .map(|m| norm2(seq, m))
        .try_fold(0.0, |acc: f64, v| v.map(|v| acc.max(v)))?;
    Ok((
        EstimateKind::Lower,
        MaximalEstimate {
            lower,
            upper: lower,
            exact: false,
            sweeps_max: 0,
            violation_max: 0.0,
            members: family.len(),
        },
    ))
}

pub fn check_bound(
    seq: &GroupSequence,
    id: BoundId,
    f: &ClassFunction,
    params: &BoundParams,
    opts: &DykstraOptions,
) -> Result<BoundReport> {
    f.check_on(seq)?;
    let norm_f = norm2(seq, f)?;
    if id.needs_positive() {
        let scale = f.values().iter().map(crate::linalg::frobenius).fold(1.0, f64::max);
        if !f.is_positive(KIND_TOL * scale) {
            return Err(Error::FamilyKind(format!("{id} requires a positive function")));
        }
    }
    let rho = seq.rho() as f64;
    let mut a_s = (None, None);
    let mut nmax = None;
    let (kind, est, bound, constant) = match id {
        BoundId::Doob => {
            let (kind, est) = measure(seq, martingale_family(seq, f)?, opts)?;
            (kind, est, DOOB_CONSTANT * norm_f, DOOB_CONSTANT)
        }
        BoundId::Lemma32 => {
            let members = martingale_family(seq, f)?;
            let l2 = members
                .iter()
                .map(|m| norm2(seq, m).map(|v| v * v))
                .sum::<Result<f64>>()?
                .sqrt();
            let (kind, est) = measure(seq, members, opts)?;
            (kind, est, l2, l2 / norm_f.max(f64::MIN_POSITIVE))
        }
        BoundId::Lemma33 => {
            let members = martingale_family(seq, f)?;
            let coeffs: Vec<f64> = (0..members.len()).map(|k| 1.0 / (k as f64 + 1.0)).collect();
            let scaled = members.iter().zip(&coeffs).map(|(m, c)| m.scale(*c)).collect();
            let (_, base) = measure(seq, members, opts)?;
            let (kind, est) = measure(seq, scaled, opts)?;
            let sup = coeffs.iter().cloned().fold(0.0, f64::max);
            (kind, est, sup * base.upper, sup * base.upper / norm_f.max(f64::MIN_POSITIVE))
        }
        BoundId::Lemma44 => {
            let (a, s) = level(seq, id, params)?;
            a_s = (Some(a), Some(s));
            let members = seq
                .block(a)?
                .map(|n| modulated_conjugacy_average(seq, f, n, s))
                .collect::<Result<Vec<_>>>()?;
            let (kind, est) = measure(seq, members, opts)?;
            (kind, est, norm_f, 1.0)
        }
        BoundId::Prop12 => {
            let (a, s) = level(seq, id, params)?;
            a_s = (Some(a), Some(s));
            let table = KernelTable::new(seq)?;
            let width = seq.big_p()[s];
            let members = seq
                .block(a)?
                .map(|n| {
                    let start = seq.tail_index(n, s)?;
                    integrate_kernel(seq, f, |y, x| table.block(start, width, y, x))
                })
                .collect::<Result<Vec<_>>>()?;
            let (kind, est) = measure(seq, members, opts)?;
            let spread = (a - s) as f64;
            let constant = PROP12_CONSTANT * rho * rho * width as f64 * (spread * spread + 1.0);
            (kind, est, constant * norm_f, constant)
        }
        BoundId::Prop13 => {
            let (a, _) = level(seq, id, params)?;
            a_s = (Some(a), None);
            let block = seq.block(a)?;
            let sigma = CharacterGrid::new(seq).fejer_sequence(f, block.end - 1)?;
            let members = block.map(|n| sigma[n - 1].clone()).collect();
            let (kind, est) = measure(seq, members, opts)?;
            let constant = PROP13_CONSTANT * rho * rho;
            (kind, est, constant * norm_f, constant)
        }
        BoundId::Thm11 => {
            let n_max = params.nmax.unwrap_or_else(|| default_nmax(seq));
            if n_max == 0 {
                return Err(Error::InvalidInput("nmax must be at least 1".into()));
            }
            nmax = Some(n_max);
            let members = CharacterGrid::new(seq).fejer_sequence(f, n_max)?;
            let (kind, est) = measure(seq, members, opts)?;
            let constant = THM11_CONSTANT * rho * rho;
            (kind, est, constant * norm_f, constant)
        }
    };
    let estimate = match kind {
        EstimateKind::Exact => est.upper,
        EstimateKind::Lower => est.lower,
    };
    let pass = estimate <= bound + BOUND_SLACK * bound.max(1.0);
    let ratio = if norm_f > 0.0 { estimate / norm_f } else { 0.0 };
    Ok(BoundReport {
        id,
        group: seq.label(),
        depth: seq.depth(),
        dim: f.dim(),
        a: a_s.0,
        s: a_s.1,
        estimate_kind: kind,
        estimate,
        bound,
        ratio,
        pass,
        diagnostics: BoundDiagnostics {
            members: est.members,
            norm_f,
            rho: seq.rho(),
            lower: est.lower,
            sweeps_max: est.sweeps_max,
            violation_max: est.violation_max,
            constant,
            nmax,
        },
    })
}

/// Runs `id` over every admissible parameter combination.
pub fn check_bound_all(
    seq: &GroupSequence,
    id: BoundId,
    f: &ClassFunction,
    nmax: Option<usize>,
    opts: &DykstraOptions,
) -> Result<Vec<BoundReport>> {
    admissible_params(seq, id, nmax)
        .iter()
        .map(|p| check_bound(seq, id, f, p, opts))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;
    use crate::random::{random_class_function, stream_rng, RandomKind};
    use crate::sequence::GroupSpec;

    fn s3(depth: usize) -> GroupSequence {
        GroupSequence::new(&[GroupSpec::Catalog("S3".parse().unwrap())], depth).unwrap()
    }

    #[test]
    fn names_round_trip() {
        for id in BoundId::ALL {
            assert_eq!(id.name().parse::<BoundId>().unwrap(), id);
        }
        assert!(matches!("thm12".parse::<BoundId>(), Err(Error::UnknownBound(_))));
    }

    #[test]
    fn doob_on_constant() {
        let seq = s3(2);
        let one = ClassFunction::constant(&seq, linalg::identity(2)).unwrap();
        let r = check_bound(&seq, BoundId::Doob, &one, &BoundParams::default(), &DykstraOptions::default()).unwrap();
        assert_eq!(r.estimate_kind, EstimateKind::Exact);
        assert!((r.estimate - 1.0).abs() < 1e-9);
        assert!((r.bound - 2.0).abs() < 1e-12);
        assert!(r.pass);
    }

    #[test]
    fn doob_rejects_non_positive() {
        let seq = s3(2);
        let mut rng = stream_rng(1, "doob");
        let h = random_class_function(&seq, 2, RandomKind::Hermitian, &mut rng);
        assert!(matches!(
            check_bound(&seq, BoundId::Doob, &h, &BoundParams::default(), &DykstraOptions::default()),
            Err(Error::FamilyKind(_))
        ));
    }

    #[test]
    fn prop13_on_trivial_character() {
        let seq = s3(3);
        let f = ClassFunction::character(&seq, 0).unwrap();
        for r in check_bound_all(&seq, BoundId::Prop13, &f, None, &DykstraOptions::default()).unwrap() {
            let a = r.a.unwrap();
            let last = seq.big_p()[a + 1] - 1;
            assert!((r.estimate - (last as f64 - 1.0) / last as f64).abs() < 1e-12);
            assert!((r.bound - 640.0 * 36.0).abs() < 1e-9);
            assert!(r.pass);
        }
    }

    #[test]
    fn admissible_counts() {
        let seq = s3(3);
        assert_eq!(admissible_params(&seq, BoundId::Lemma44, None).len(), 6);
        assert_eq!(admissible_params(&seq, BoundId::Prop13, None).len(), 3);
        assert_eq!(admissible_params(&seq, BoundId::Thm11, None).len(), 1);
    }

    #[test]
    fn level_validation() {
        let seq = s3(2);
        let f = ClassFunction::character(&seq, 1).unwrap();
        let opts = DykstraOptions::default();
        let bad = BoundParams { a: Some(1), s: Some(2), nmax: None };
        assert!(check_bound(&seq, BoundId::Lemma44, &f, &bad, &opts).is_err());
        let deep = BoundParams { a: Some(2), s: Some(0), nmax: None };
        assert!(matches!(
            check_bound(&seq, BoundId::Prop12, &f, &deep, &opts),
            Err(Error::LevelOutOfRange { .. })
        ));
    }
}
