//! Exact identities between kernels, means and conditional expectations,
//! evaluated as residual reports.
//!
//! Each residual compares the two sides independently computed and is
//! normalized as `|lhs - rhs| / max(1, |lhs|, |rhs|)` (Frobenius norm for
//! matrix values).

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{CharacterGrid, KernelTable};
use crate::function::{norm2, ClassFunction};
use crate::linalg::{self, CMatrix};
use crate::martingale::{conditional_expectation, square_function_check};
use crate::sequence::{CylinderKind, GroupSequence};

pub const DEFAULT_IDENTITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityId {
    Lemma31,
    Lemma34a,
    Lemma34b,
    Lemma41,
    Lemma42,
    Lemma43,
    BlockFormula,
    Plancherel,
    SquareFunction,
    DirichletConditionalChain,
}

impl IdentityId {
    pub const ALL: [IdentityId; 10] = [
        IdentityId::Lemma31,
        IdentityId::Lemma34a,
        IdentityId::Lemma34b,
        IdentityId::Lemma41,
        IdentityId::Lemma42,
        IdentityId::Lemma43,
        IdentityId::BlockFormula,
        IdentityId::Plancherel,
        IdentityId::SquareFunction,
        IdentityId::DirichletConditionalChain,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            IdentityId::Lemma31 => "lemma31",
            IdentityId::Lemma34a => "lemma34a",
            IdentityId::Lemma34b => "lemma34b",
            IdentityId::Lemma41 => "lemma41",
            IdentityId::Lemma42 => "lemma42",
            IdentityId::Lemma43 => "lemma43",
            IdentityId::BlockFormula => "block_formula",
            IdentityId::Plancherel => "plancherel",
            IdentityId::SquareFunction => "square_function",
            IdentityId::DirichletConditionalChain => "dirichlet_conditional_chain",
        }
    }

    /// Kernel identities work on point pairs; the rest need a function.
    pub fn needs_function(&self) -> bool {
        !matches!(self, IdentityId::Lemma41 | IdentityId::Lemma42 | IdentityId::BlockFormula)
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IdentityId::ALL
            .iter()
            .copied()
            .find(|id| id.name() == s.trim())
            .ok_or_else(|| Error::UnknownIdentity(s.to_string()))
    }
}

/// Inputs for [`check_identity`]. `pairs` defaults to every point pair;
/// `indices` defaults to the natural range of each identity (see
/// [`default_indices`]).
#[derive(Debug, Clone, Default)]
pub struct IdentityInputs<'a> {
    pub function: Option<&'a ClassFunction>,
    pub pairs: Option<Vec<(usize, usize)>>,
    pub indices: Option<Vec<usize>>,
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResidualReport {
    pub id: IdentityId,
    pub max_residual: f64,
    pub evaluations: usize,
    pub tolerance: f64,
    pub passed: bool,
    /// Where the worst residual occurred.
    pub worst: String,
}

struct Tracker {
    max: f64,
    count: usize,
    worst: String,
}

impl Tracker {
    fn new() -> Self {
        Tracker {
            max: 0.0,
            count: 0,
            worst: String::new(),
        }
    }

    fn scalar(&mut self, lhs: Complex64, rhs: Complex64, at: impl FnOnce() -> String) {
        let r = (lhs - rhs).norm() / 1f64.max(lhs.norm()).max(rhs.norm());
        self.record(r, at);
    }

    fn matrix(&mut self, lhs: &CMatrix, rhs: &CMatrix, at: impl FnOnce() -> String) {
        let scale = 1f64.max(linalg::frobenius(lhs)).max(linalg::frobenius(rhs));
        self.record(linalg::frobenius(&(lhs - rhs)) / scale, at);
    }

    fn functions(&mut self, lhs: &ClassFunction, rhs: &ClassFunction, at: impl Fn() -> String) {
        for (idx, (a, b)) in lhs.values().iter().zip(rhs.values()).enumerate() {
            self.matrix(a, b, || format!("{} at point {idx}", at()));
        }
    }

    fn record(&mut self, r: f64, at: impl FnOnce() -> String) {
        self.count += 1;
        // NaN counts as a failure
        if r > self.max || r.is_nan() {
            self.max = if r.is_nan() { f64::INFINITY } else { r };
            self.worst = at();
        }
    }
}

/// The natural index range of an identity: `n` in `1..P_L` for the
/// per-index identities, levels `0..=L` for the cylinder identities,
/// `1..=L` for `lemma34b` and `0..P_L` for the Dirichlet
/// decomposition.
pub fn default_indices(seq: &GroupSequence, id: IdentityId) -> Vec<usize> {
    let bound = seq.index_bound();
    let depth = seq.depth();
    match id {
        IdentityId::Lemma31 | IdentityId::Lemma34a | IdentityId::BlockFormula => (1..bound).collect(),
        IdentityId::Lemma41 => (0..bound).collect(),
        IdentityId::Lemma42 | IdentityId::Lemma43 | IdentityId::DirichletConditionalChain => (0..=depth).collect(),
        IdentityId::Lemma34b => (1..=depth).collect(),
        IdentityId::Plancherel | IdentityId::SquareFunction => Vec::new(),
    }
}

fn all_pairs(seq: &GroupSequence) -> Vec<(usize, usize)> {
    let n = seq.point_count();
    (0..n).flat_map(|y| (0..n).map(move |x| (y, x))).collect()
}

pub fn check_identity(seq: &GroupSequence, id: IdentityId, inputs: &IdentityInputs<'_>) -> Result<ResidualReport> {
    let tolerance = inputs.tolerance.unwrap_or(DEFAULT_IDENTITY_TOL);
    let indices = inputs.indices.clone().unwrap_or_else(|| default_indices(seq, id));
    let function = if id.needs_function() {
        let f = inputs
            .function
            .ok_or_else(|| Error::InvalidInput(format!("identity {id} needs a class function")))?;
        f.check_on(seq)?;
        Some(f)
    } else {
        None
    };
    let mut t = Tracker::new();
    match id {
        IdentityId::Lemma41 | IdentityId::Lemma42 | IdentityId::BlockFormula => {
            let pairs = inputs.pairs.clone().unwrap_or_else(|| all_pairs(seq));
            kernel_identity(seq, id, &indices, &pairs, &mut t)?;
        }
        IdentityId::Lemma31 => lemma31(seq, function.unwrap(), &indices, &mut t)?,
        IdentityId::Lemma34a => lemma34a(seq, function.unwrap(), &indices, &mut t)?,
        IdentityId::Lemma34b => lemma34b(seq, function.unwrap(), &indices, &mut t)?,
        IdentityId::Lemma43 => lemma43(seq, function.unwrap(), &indices, &mut t)?,
        IdentityId::DirichletConditionalChain => conditional_chain(seq, function.unwrap(), &indices, &mut t)?,
        IdentityId::Plancherel => {
            let f = function.unwrap();
            let grid = CharacterGrid::new(seq);
            let energy: f64 = grid.coefficients(f)?.iter().map(linalg::tau_norm_sqr).sum();
            let n = norm2(seq, f)?;
            t.scalar(Complex64::new(n * n, 0.0), Complex64::new(energy, 0.0), || "energy".into());
        }
        IdentityId::SquareFunction => {
            let report = square_function_check(seq, function.unwrap())?;
            t.record(report.column_residual, || "column square function".into());
            t.record(report.row_residual, || "row square function".into());
        }
    }
    Ok(ResidualReport {
        id,
        max_residual: t.max,
        evaluations: t.count,
        tolerance,
        passed: t.max <= tolerance,
        worst: t.worst,
    })
}

fn kernel_identity(
    seq: &GroupSequence,
    id: IdentityId,
    indices: &[usize],
    pairs: &[(usize, usize)],
    t: &mut Tracker,
) -> Result<()> {
    let grid = CharacterGrid::new(seq);
    let bound = seq.index_bound();
    let big_p = seq.big_p();
    for &n in indices {
        match id {
            IdentityId::Lemma42 => {
                if n > seq.depth() {
                    return Err(Error::LevelOutOfRange { level: n, depth: seq.depth() });
                }
                for &(y, x) in pairs {
                    let (py, px) = (seq.point(y), seq.point(x));
                    let lhs = grid.dirichlet_kernel(big_p[n], y, x)?;
                    let rhs = if seq.same_j_cylinder(py, px, n)? {
                        1.0 / seq.cylinder_measure(py, n, CylinderKind::J)?
                    } else {
                        0.0
                    };
                    t.scalar(lhs, Complex64::new(rhs, 0.0), || format!("n={n} y={y} x={x}"));
                }
            }
            IdentityId::Lemma41 => {
                let digits = seq.expand(n)?.digits;
                for &(y, x) in pairs {
                    let (ly, lx) = (&seq.point(y).labels, &seq.point(x).labels);
                    let lhs = grid.dirichlet_kernel(n, y, x)?;
                    let mut rhs = Complex64::new(0.0, 0.0);
                    for (l, &digit) in digits.iter().enumerate() {
                        if digit == 0 {
                            continue;
                        }
                        let chars = &seq.factor(l).characters.chars;
                        let local: Complex64 = (0..digit).map(|i| chars[i][ly[l]] * chars[i][lx[l]].conj()).sum();
                        let tail = seq.tail_index(n, l + 1)?;
                        let modulation = seq.chi_labels(tail, ly) * seq.chi_labels(tail, lx).conj();
                        rhs += grid.dirichlet_kernel(big_p[l], y, x)? * local * modulation;
                    }
                    t.scalar(lhs, rhs, || format!("n={n} y={y} x={x}"));
                }
            }
            IdentityId::BlockFormula => {
                if n == 0 || n >= bound {
                    return Err(Error::IndexOutOfRange { index: n, bound });
                }
                let exp = seq.expand(n)?;
                let a = exp.order().unwrap();
                for &(y, x) in pairs {
                    let mut lhs = Complex64::new(0.0, 0.0);
                    for k in 0..n {
                        lhs += grid.dirichlet_kernel(k, y, x)?;
                    }
                    let mut rhs = Complex64::new(0.0, 0.0);
                    for s in 0..=a {
                        let base = seq.tail_index(n, s + 1)?;
                        for j in 0..exp.digits[s] {
                            let start = base + j * big_p[s];
                            for k in start..start + big_p[s] {
                                rhs += grid.dirichlet_kernel(k, y, x)?;
                            }
                        }
                    }
                    t.scalar(lhs, rhs, || format!("n={n} y={y} x={x}"));
                }
            }
            _ => unreachable!(),
        }
    }
    Ok(())
}

fn expectations(seq: &GroupSequence, f: &ClassFunction) -> Result<Vec<ClassFunction>> {
    (0..=seq.depth()).map(|k| conditional_expectation(seq, f, k)).collect()
}

fn lemma31(seq: &GroupSequence, f: &ClassFunction, indices: &[usize], t: &mut Tracker) -> Result<()> {
    let grid = CharacterGrid::new(seq);
    let n_max = indices.iter().copied().max().unwrap_or(0);
    let direct = grid.fejer_sequence(f, n_max)?;
    let e = expectations(seq, f)?;
    let conditioned = e
        .iter()
        .map(|ek| grid.fejer_sequence(ek, n_max))
        .collect::<Result<Vec<_>>>()?;
    for &n in indices {
        let a = seq.order_index(n)?;
        t.functions(&direct[n - 1], &conditioned[a + 1][n - 1], || format!("n={n}"));
    }
    Ok(())
}

fn lemma34a(seq: &GroupSequence, f: &ClassFunction, indices: &[usize], t: &mut Tracker) -> Result<()> {
    let grid = CharacterGrid::new(seq);
    let n_max = indices.iter().copied().max().unwrap_or(0);
    let e = expectations(seq, f)?;
    let sigma = e
        .iter()
        .map(|ek| grid.fejer_sequence(ek, n_max))
        .collect::<Result<Vec<_>>>()?;
    let big_p = seq.big_p();
    for &n in indices {
        let a = seq.order_index(n)?;
        let lhs = sigma[a][n - 1].scale(n as f64);
        let rhs = sigma[a][big_p[a] - 1]
            .scale(big_p[a] as f64)
            .add(&e[a].scale((n - big_p[a]) as f64))?;
        t.functions(&lhs, &rhs, || format!("n={n}"));
    }
    Ok(())
}

fn lemma34b(seq: &GroupSequence, f: &ClassFunction, levels: &[usize], t: &mut Tracker) -> Result<()> {
    let grid = CharacterGrid::new(seq);
    let e = expectations(seq, f)?;
    let big_p = seq.big_p();
    for &a in levels {
        if a == 0 || a > seq.depth() {
            return Err(Error::LevelOutOfRange {
                level: a,
                depth: seq.depth(),
            });
        }
        let (pa, pa1) = (big_p[a], big_p[a - 1]);
        let lhs = grid.fejer_sequence(&e[a], pa)?[pa - 1].scale(pa as f64);
        let diff = e[a].sub(&e[a - 1])?;
        let rhs = grid.fejer_sequence(&diff, pa)?[pa - 1]
            .scale(pa as f64)
            .add(&grid.fejer_sequence(&e[a - 1], pa1)?[pa1 - 1].scale(pa1 as f64))?
            .add(&e[a - 1].scale((pa - pa1) as f64))?;
        t.functions(&lhs, &rhs, || format!("A={a}"));
    }
    Ok(())
}

/// `S_{P_n} f` through the kernel integral against `E_n f`.
fn lemma43(seq: &GroupSequence, f: &ClassFunction, levels: &[usize], t: &mut Tracker) -> Result<()> {
    let table = KernelTable::new(seq)?;
    for &n in levels {
        if n > seq.depth() {
            return Err(Error::LevelOutOfRange { level: n, depth: seq.depth() });
        }
        let pn = seq.big_p()[n];
        let lhs = crate::fourier::integrate_kernel(seq, f, |y, x| Ok(table.dirichlet(pn, y, x)))?;
        let rhs = conditional_expectation(seq, f, n)?;
        t.functions(&lhs, &rhs, || format!("n={n}"));
    }
    Ok(())
}

/// `E_k f` against the coefficient sum `sum_{j < P_k} f^(j) chi_j`.
fn conditional_chain(seq: &GroupSequence, f: &ClassFunction, levels: &[usize], t: &mut Tracker) -> Result<()> {
    let grid = CharacterGrid::new(seq);
    let coeffs = grid.coefficients(f)?;
    for &k in levels {
        if k > seq.depth() {
            return Err(Error::LevelOutOfRange { level: k, depth: seq.depth() });
        }
        let pk = seq.big_p()[k];
        let values = (0..seq.point_count())
            .map(|y| {
                let mut acc = linalg::zeros(f.dim());
                for (j, c) in coeffs.iter().enumerate().take(pk) {
                    acc += c * grid.chi(j, y);
                }
                acc
            })
            .collect();
        let rhs = ClassFunction::new(f.dim(), values)?;
        let lhs = conditional_expectation(seq, f, k)?;
        t.functions(&lhs, &rhs, || format!("k={k}"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_class_function, stream_rng, RandomKind};
    use crate::sequence::GroupSpec;

    fn chain(name: &str, depth: usize) -> GroupSequence {
        GroupSequence::new(&[GroupSpec::Catalog(name.parse().unwrap())], depth).unwrap()
    }

    #[test]
    fn ids_round_trip_through_names() {
        for id in IdentityId::ALL {
            assert_eq!(id.name().parse::<IdentityId>().unwrap(), id);
        }
        assert!(matches!("lemma99".parse::<IdentityId>(), Err(Error::UnknownIdentity(_))));
    }

    #[test]
    fn every_identity_holds_on_mixed_chain() {
        let pattern = vec![
            GroupSpec::Catalog("Z2".parse().unwrap()),
            GroupSpec::Catalog("S3".parse().unwrap()),
            GroupSpec::Catalog("Q8".parse().unwrap()),
        ];
        let seq = GroupSequence::new(&pattern, 3).unwrap();
        let mut rng = stream_rng(17, "identities");
        let f = random_class_function(&seq, 2, RandomKind::General, &mut rng);
        for id in IdentityId::ALL {
            let inputs = IdentityInputs {
                function: Some(&f),
                ..Default::default()
            };
            let report = check_identity(&seq, id, &inputs).unwrap();
            assert!(report.passed, "{id}: {report:?}");
            assert!(report.evaluations > 0);
        }
    }

    #[test]
    fn lemma34a_on_constant_one() {
        let seq = chain("S3", 3);
        let one = ClassFunction::character(&seq, 0).unwrap();
        let report = check_identity(
            &seq,
            IdentityId::Lemma34a,
            &IdentityInputs {
                function: Some(&one),
                ..Default::default()
            },
        )
        .unwrap();
        assert!(report.max_residual < 1e-12);
        // both sides equal n - 1
        let grid = CharacterGrid::new(&seq);
        let sigma = grid.fejer_sequence(&one, 26).unwrap();
        for n in 1..=26 {
            let v = sigma[n - 1].value(0)[(0, 0)].re * n as f64;
            assert!((v - (n as f64 - 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn corrupted_characters_break_lemma42() {
        let seq = chain("S3", 2).with_perturbed_character(0, 2, 1, 0.25);
        let report = check_identity(&seq, IdentityId::Lemma42, &IdentityInputs::default()).unwrap();
        assert!(!report.passed);
    }

    #[test]
    fn function_identities_require_a_function() {
        let seq = chain("Z2", 2);
        assert!(check_identity(&seq, IdentityId::Lemma31, &IdentityInputs::default()).is_err());
    }
}
