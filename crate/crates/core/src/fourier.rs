//! Fourier coefficients, Dirichlet and Fejer means, and the Dirichlet,
//! Fejer and block kernels of the character system.
//!
//! All sums are direct. At truncation depth `L` every class function is a
//! combination of `chi_0, ..., chi_{P_L - 1}`, so `S_k f = f` for `k >= P_L`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::function::ClassFunction;
use crate::linalg::{self, CMatrix};
use crate::sequence::{ClassPoint, CylinderKind, GroupSequence};

/// Character values `chi_n(x)` for every `n < P_L` and every point.
pub struct CharacterGrid<'a> {
    seq: &'a GroupSequence,
    values: Vec<Vec<Complex64>>,
}

impl<'a> CharacterGrid<'a> {
    pub fn new(seq: &'a GroupSequence) -> Self {
        CharacterGrid {
            seq,
            values: seq.character_grid(),
        }
    }

    pub fn seq(&self) -> &'a GroupSequence {
        self.seq
    }

    pub fn chi(&self, n: usize, point: usize) -> Complex64 {
        self.values[n][point]
    }

    /// All `P_L` Fourier coefficients of `f`.
    pub fn coefficients(&self, f: &ClassFunction) -> Result<Vec<CMatrix>> {
        f.check_on(self.seq)?;
        Ok((0..self.seq.index_bound()).map(|n| self.coefficient_unchecked(f, n)).collect())
    }

    fn coefficient_unchecked(&self, f: &ClassFunction, n: usize) -> CMatrix {
        let mut acc = linalg::zeros(f.dim());
        for (idx, p) in self.seq.points().iter().enumerate() {
            acc += f.value(idx) * (self.values[n][idx].conj() * p.weight);
        }
        acc
    }

    /// `S_0 f, S_1 f, ..., S_{P_L} f`.
    pub fn dirichlet_prefix(&self, f: &ClassFunction) -> Result<Vec<ClassFunction>> {
        let coeffs = self.coefficients(f)?;
        let mut current = ClassFunction::zero(self.seq, f.dim());
        let mut out = Vec::with_capacity(coeffs.len() + 1);
        out.push(current.clone());
        for (k, c) in coeffs.iter().enumerate() {
            let values = current
                .values()
                .iter()
                .enumerate()
                .map(|(idx, v)| v + c * self.values[k][idx])
                .collect();
            current = ClassFunction::new(f.dim(), values)?;
            out.push(current.clone());
        }
        Ok(out)
    }

    /// `sigma_1 f, ..., sigma_{n_max} f`.
    pub fn fejer_sequence(&self, f: &ClassFunction, n_max: usize) -> Result<Vec<ClassFunction>> {
        let prefix = self.dirichlet_prefix(f)?;
        let saturated = prefix.last().unwrap().clone();
        let mut running = ClassFunction::zero(self.seq, f.dim());
        let mut out = Vec::with_capacity(n_max);
        for n in 1..=n_max {
            let s_prev = prefix.get(n - 1).unwrap_or(&saturated);
            running = running.add(s_prev)?;
            out.push(running.scale(1.0 / n as f64));
        }
        Ok(out)
    }

    pub fn dirichlet_kernel(&self, n: usize, y: usize, x: usize) -> Result<Complex64> {
        check_kernel_index(self.seq, n)?;
        Ok((0..n).map(|k| self.values[k][y] * self.values[k][x].conj()).sum())
    }
}

fn check_kernel_index(seq: &GroupSequence, n: usize) -> Result<()> {
    if n > seq.index_bound() {
        return Err(Error::IndexOutOfRange {
            index: n,
            bound: seq.index_bound() + 1,
        });
    }
    Ok(())
}

pub fn fourier_coefficient(seq: &GroupSequence, f: &ClassFunction, n: usize) -> Result<CMatrix> {
    f.check_on(seq)?;
    seq.expand(n)?;
    let mut acc = linalg::zeros(f.dim());
    for (idx, p) in seq.points().iter().enumerate() {
        acc += f.value(idx) * (seq.chi_labels(n, &p.labels).conj() * p.weight);
    }
    Ok(acc)
}

/// `S_n f = sum_{k<n} f^(k) chi_k`; `S_0 f = 0`.
pub fn dirichlet_mean(seq: &GroupSequence, f: &ClassFunction, n: usize) -> Result<ClassFunction> {
    let grid = CharacterGrid::new(seq);
    let prefix = grid.dirichlet_prefix(f)?;
    Ok(prefix[n.min(seq.index_bound())].clone())
}

/// `sigma_n f = (1/n) sum_{k<n} S_k f`, defined for `n >= 1`.
pub fn fejer_mean(seq: &GroupSequence, f: &ClassFunction, n: usize) -> Result<ClassFunction> {
    if n == 0 {
        return Err(Error::InvalidInput("the Fejer mean is defined for n >= 1".into()));
    }
    let grid = CharacterGrid::new(seq);
    Ok(grid.fejer_sequence(f, n)?.pop().unwrap())
}

/// `D_n(y, x) = sum_{k<n} chi_k(y) conj(chi_k(x))`, `0 <= n <= P_L`.
pub fn dirichlet_kernel(seq: &GroupSequence, n: usize, y: &ClassPoint, x: &ClassPoint) -> Result<Complex64> {
    check_kernel_index(seq, n)?;
    Ok((0..n)
        .map(|k| seq.chi_labels(k, &y.labels) * seq.chi_labels(k, &x.labels).conj())
        .sum())
}

/// `K_n = (1/n) sum_{k<n} D_k`, with `K_0 = 0`.
pub fn fejer_kernel(seq: &GroupSequence, n: usize, y: &ClassPoint, x: &ClassPoint) -> Result<Complex64> {
    check_kernel_index(seq, n)?;
    if n == 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mut total = Complex64::new(0.0, 0.0);
    for k in 0..n {
        total += dirichlet_kernel(seq, k, y, x)?;
    }
    Ok(total / n as f64)
}

/// `K_{m,n} = sum_{k=m}^{m+n-1} D_k`.
pub fn block_kernel(seq: &GroupSequence, m: usize, n: usize, y: &ClassPoint, x: &ClassPoint) -> Result<Complex64> {
    if n > 0 {
        check_kernel_index(seq, m + n - 1)?;
    }
    let mut total = Complex64::new(0.0, 0.0);
    for k in m..m + n {
        total += dirichlet_kernel(seq, k, y, x)?;
    }
    Ok(total)
}

/// `y -> sum_x w(x) f(x) kernel(y, x)`.
pub fn integrate_kernel(
    seq: &GroupSequence,
    f: &ClassFunction,
    mut kernel: impl FnMut(usize, usize) -> Result<Complex64>,
) -> Result<ClassFunction> {
    f.check_on(seq)?;
    let values = (0..seq.point_count())
        .map(|y| {
            let mut acc = linalg::zeros(f.dim());
            for (x, p) in seq.points().iter().enumerate() {
                acc += f.value(x) * (kernel(y, x)? * p.weight);
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    ClassFunction::new(f.dim(), values)
}

/// Table of `D_k(y, x)` for `0 <= k <= P_L` over all point pairs, with
/// running sums so that Fejer and block kernels are differences.
pub struct KernelTable {
    points: usize,
    bound: usize,
    dirichlet: Vec<Complex64>,
    cumulative: Vec<Complex64>,
}

/// Largest number of stored kernel entries.
pub const KERNEL_TABLE_CAP: usize = 20_000_000;

impl KernelTable {
    pub fn new(seq: &GroupSequence) -> Result<Self> {
        let points = seq.point_count();
        let bound = seq.index_bound();
        let entries = (bound + 2) * points * points;
        if entries > KERNEL_TABLE_CAP {
            return Err(Error::StateSpaceTooLarge {
                size: entries as u128,
                cap: KERNEL_TABLE_CAP,
            });
        }
        let grid = seq.character_grid();
        let plane = points * points;
        let mut dirichlet = vec![Complex64::new(0.0, 0.0); (bound + 1) * plane];
        for k in 0..bound {
            for y in 0..points {
                for x in 0..points {
                    let prev = dirichlet[k * plane + y * points + x];
                    dirichlet[(k + 1) * plane + y * points + x] = prev + grid[k][y] * grid[k][x].conj();
                }
            }
        }
        let mut cumulative = vec![Complex64::new(0.0, 0.0); (bound + 2) * plane];
        for k in 0..=bound {
            for i in 0..plane {
                cumulative[(k + 1) * plane + i] = cumulative[k * plane + i] + dirichlet[k * plane + i];
            }
        }
        Ok(KernelTable {
            points,
            bound,
            dirichlet,
            cumulative,
        })
    }

    fn at(&self, data: &[Complex64], k: usize, y: usize, x: usize) -> Complex64 {
        data[k * self.points * self.points + y * self.points + x]
    }

    pub fn dirichlet(&self, k: usize, y: usize, x: usize) -> Complex64 {
        self.at(&self.dirichlet, k, y, x)
    }

    /// `sum_{k<n} D_k(y, x) = n K_n(y, x)`, for `n <= P_L + 1`.
    pub fn dirichlet_sum(&self, n: usize, y: usize, x: usize) -> Complex64 {
        self.at(&self.cumulative, n, y, x)
    }

    pub fn fejer(&self, n: usize, y: usize, x: usize) -> Complex64 {
        if n == 0 {
            return Complex64::new(0.0, 0.0);
        }
        self.dirichlet_sum(n, y, x) / n as f64
    }

    pub fn block(&self, m: usize, n: usize, y: usize, x: usize) -> Result<Complex64> {
        if m + n > self.bound + 1 {
            return Err(Error::IndexOutOfRange {
                index: m + n - 1,
                bound: self.bound + 1,
            });
        }
        Ok(self.dirichlet_sum(m + n, y, x) - self.dirichlet_sum(m, y, x))
    }
}

fn modulation_preconditions(seq: &GroupSequence, n: usize, s: usize) -> Result<usize> {
    let a = seq.order_index(n)?;
    if s > a {
        return Err(Error::InvalidInput(format!("level s = {s} exceeds |n| = {a}")));
    }
    seq.tail_index(n, s)
}

/// `y -> mu(J_s(y))^{-1} int_{J_s(y)} f(x) chi_t(y) conj(chi_t(x)) dx` with
/// `t = n^(s)`, for `s <= |n|`.
pub fn modulated_conjugacy_average(seq: &GroupSequence, f: &ClassFunction, n: usize, s: usize) -> Result<ClassFunction> {
    f.check_on(seq)?;
    let t = modulation_preconditions(seq, n, s)?;
    let values = seq
        .points()
        .iter()
        .map(|y| {
            let mass = seq.cylinder_measure(y, s, CylinderKind::J)?;
            let chi_y = seq.chi_labels(t, &y.labels);
            let mut acc = linalg::zeros(f.dim());
            for (idx, x) in seq.points().iter().enumerate() {
                if seq.same_j_cylinder(y, x, s)? {
                    acc += f.value(idx) * (chi_y * seq.chi_labels(t, &x.labels).conj() * x.weight);
                }
            }
            Ok(acc / Complex64::new(mass, 0.0))
        })
        .collect::<Result<Vec<_>>>()?;
    ClassFunction::new(f.dim(), values)
}

/// The same average written as `M_s int_{I_s(y)} f(x) chi_t(y) conj(chi_t(x)) dx`:
/// coordinates below `s` are frozen to those of `y` and the remaining
/// coordinates are integrated against their class masses.
pub fn modulated_cylinder_average(seq: &GroupSequence, f: &ClassFunction, n: usize, s: usize) -> Result<ClassFunction> {
    f.check_on(seq)?;
    let t = modulation_preconditions(seq, n, s)?;
    let depth = seq.depth();
    let suffix_radices = &seq.p_seq()[s..];
    let suffix_count: usize = suffix_radices.iter().product();
    let values = seq
        .points()
        .iter()
        .map(|y| {
            let chi_y = seq.chi_labels(t, &y.labels);
            let mut acc = linalg::zeros(f.dim());
            let mut labels = y.labels.clone();
            for code in 0..suffix_count {
                let mut rest = code;
                let mut mass = 1.0;
                for k in (s..depth).rev() {
                    labels[k] = rest % seq.p_seq()[k];
                    rest /= seq.p_seq()[k];
                    mass *= seq.factor(k).class_mass(labels[k]);
                }
                let x = seq.point_index(&labels);
                acc += f.value(x) * (chi_y * seq.chi_labels(t, &labels).conj() * mass);
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    ClassFunction::new(f.dim(), values)
}
