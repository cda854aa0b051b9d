//! Truncated product groups `G_0 x ... x G_{L-1}` represented on conjugacy
//! class labels, with the mixed-radix index system of the character system.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{character_table, CatalogGroup, CharacterTable, ConjugacyStructure, FiniteGroup};

pub const DEFAULT_POINT_CAP: usize = 1_000_000;

/// One entry of a sequence pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupSpec {
    Catalog(CatalogGroup),
    Table { label: String, table: Vec<Vec<usize>> },
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupSpec::Catalog(entry) => FiniteGroup::from_catalog(*entry),
            GroupSpec::Table { label, table } => FiniteGroup::from_cayley_table(table.clone(), label.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Factor {
    pub group: FiniteGroup,
    pub classes: ConjugacyStructure,
    pub characters: CharacterTable,
}

impl Factor {
    pub fn new(group: FiniteGroup) -> Result<Self> {
        let classes = group.conjugacy_classes();
        let characters = character_table(&group, &classes)?;
        Ok(Factor {
            group,
            classes,
            characters,
        })
    }

    /// Haar mass of a conjugacy class.
    pub fn class_mass(&self, class: usize) -> f64 {
        self.classes.class_sizes[class] as f64 / self.group.order() as f64
    }
}

/// A point of `G` up to conjugacy in every coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassPoint {
    pub labels: Vec<usize>,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexExpansion {
    pub value: usize,
    pub digits: Vec<usize>,
}

impl IndexExpansion {
    /// `|n|`, or `None` for `n = 0`.
    pub fn order(&self) -> Option<usize> {
        self.digits.iter().rposition(|&d| d != 0)
    }

    /// `|n|` with the convention `|0| = 0`; the flag is `false` for `n = 0`.
    pub fn order_flagged(&self) -> (usize, bool) {
        match self.order() {
            Some(a) => (a, true),
            None => (0, false),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CylinderKind {
    /// Conjugacy-class cylinder `J_s(y)`.
    J,
    /// Exact cylinder `I_s(y)`.
    I,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupSequence {
    factors: Vec<Factor>,
    m_seq: Vec<usize>,
    p_seq: Vec<usize>,
    big_p: Vec<usize>,
    big_m: Vec<u128>,
    rho: usize,
    points: Vec<ClassPoint>,
}

impl GroupSequence {
    /// Cycles `pattern` to `depth` factors.
    pub fn new(pattern: &[GroupSpec], depth: usize) -> Result<Self> {
        Self::with_cap(pattern, depth, DEFAULT_POINT_CAP)
    }

    pub fn with_cap(pattern: &[GroupSpec], depth: usize, cap: usize) -> Result<Self> {
        if pattern.is_empty() {
            return Err(Error::InvalidInput("empty group pattern".into()));
        }
        if depth == 0 {
            return Err(Error::InvalidInput("depth must be at least 1".into()));
        }
        let built = pattern
            .iter()
            .map(|spec| spec.build().and_then(Factor::new))
            .collect::<Result<Vec<_>>>()?;
        let factors = (0..depth).map(|k| built[k % built.len()].clone()).collect();
        Self::from_factors(factors, cap)
    }

    pub fn from_factors(factors: Vec<Factor>, cap: usize) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidInput("depth must be at least 1".into()));
        }
        let m_seq: Vec<usize> = factors.iter().map(|f| f.group.order()).collect();
        let p_seq: Vec<usize> = factors.iter().map(|f| f.classes.class_count).collect();
        if let Some(k) = m_seq.iter().position(|&m| m < 2) {
            return Err(Error::InvalidInput(format!("factor {k} has order below 2")));
        }
        let size = p_seq.iter().try_fold(1u128, |acc, &p| acc.checked_mul(p as u128));
        let size = size.unwrap_or(u128::MAX);
        if size > cap as u128 {
            return Err(Error::StateSpaceTooLarge { size, cap });
        }
        let mut big_p = vec![1usize];
        let mut big_m = vec![1u128];
        for k in 0..factors.len() {
            big_p.push(big_p[k] * p_seq[k]);
            big_m.push(big_m[k].saturating_mul(m_seq[k] as u128));
        }
        let rho = *m_seq.iter().max().unwrap();
        let mut seq = GroupSequence {
            factors,
            m_seq,
            p_seq,
            big_p,
            big_m,
            rho,
            points: Vec::new(),
        };
        seq.points = seq.build_points();
        Ok(seq)
    }

    fn build_points(&self) -> Vec<ClassPoint> {
        let count = self.point_count();
        (0..count)
            .map(|idx| {
                let labels = self.labels_of(idx);
                let weight = self.weight_of(&labels);
                ClassPoint { labels, weight }
            })
            .collect()
    }

    pub fn depth(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn factor(&self, k: usize) -> &Factor {
        &self.factors[k]
    }

    pub fn m_seq(&self) -> &[usize] {
        &self.m_seq
    }

    pub fn p_seq(&self) -> &[usize] {
        &self.p_seq
    }

    /// `P_0 = 1, P_{k+1} = p_k P_k`, length `L + 1`.
    pub fn big_p(&self) -> &[usize] {
        &self.big_p
    }

    /// `M_0 = 1, M_{k+1} = m_k M_k`, length `L + 1`.
    pub fn big_m(&self) -> &[u128] {
        &self.big_m
    }

    pub fn rho(&self) -> usize {
        self.rho
    }

    /// `P_L`: number of characters and of class points.
    pub fn index_bound(&self) -> usize {
        self.big_p[self.depth()]
    }

    pub fn point_count(&self) -> usize {
        self.index_bound()
    }

    pub fn points(&self) -> &[ClassPoint] {
        &self.points
    }

    pub fn point(&self, idx: usize) -> &ClassPoint {
        &self.points[idx]
    }

    pub fn label(&self) -> String {
        let names: Vec<&str> = self.factors.iter().map(|f| f.group.label()).collect();
        names.join(",")
    }

    /// Labels of the point with lexicographic index `idx` (label 0 most significant).
    pub fn labels_of(&self, mut idx: usize) -> Vec<usize> {
        let mut labels = vec![0; self.depth()];
        for k in (0..self.depth()).rev() {
            labels[k] = idx % self.p_seq[k];
            idx /= self.p_seq[k];
        }
        labels
    }

    pub fn point_index(&self, labels: &[usize]) -> usize {
        labels
            .iter()
            .zip(&self.p_seq)
            .fold(0, |acc, (&l, &p)| acc * p + l)
    }

    pub fn weight_of(&self, labels: &[usize]) -> f64 {
        labels
            .iter()
            .enumerate()
            .map(|(k, &c)| self.factors[k].class_mass(c))
            .product()
    }

    fn check_index(&self, n: usize) -> Result<()> {
        if n >= self.index_bound() {
            return Err(Error::IndexOutOfRange {
                index: n,
                bound: self.index_bound(),
            });
        }
        Ok(())
    }

    fn check_level(&self, s: usize) -> Result<()> {
        if s > self.depth() {
            return Err(Error::LevelOutOfRange {
                level: s,
                depth: self.depth(),
            });
        }
        Ok(())
    }

    pub fn expand(&self, n: usize) -> Result<IndexExpansion> {
        self.check_index(n)?;
        Ok(self.expand_unchecked(n))
    }

    pub(crate) fn expand_unchecked(&self, n: usize) -> IndexExpansion {
        let mut rest = n;
        let digits = self
            .p_seq
            .iter()
            .map(|&p| {
                let d = rest % p;
                rest /= p;
                d
            })
            .collect();
        IndexExpansion { value: n, digits }
    }

    pub fn value_of(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.big_p).map(|(d, p)| d * p).sum()
    }

    /// `|n| = max{k : n_k != 0}`; undefined for `n = 0`.
    pub fn order_index(&self, n: usize) -> Result<usize> {
        self.expand(n)?.order().ok_or(Error::ZeroOrderIndex)
    }

    /// `n^(s)`: digits below `s` set to zero.
    pub fn tail_index(&self, n: usize, s: usize) -> Result<usize> {
        self.check_index(n)?;
        self.check_level(s)?;
        Ok(n - n % self.big_p[s])
    }

    /// Indices `n` with `|n| = a`, i.e. `P_a <= n < P_{a+1}`.
    pub fn block(&self, a: usize) -> Result<std::ops::Range<usize>> {
        if a >= self.depth() {
            return Err(Error::LevelOutOfRange {
                level: a,
                depth: self.depth() - 1,
            });
        }
        Ok(self.big_p[a]..self.big_p[a + 1])
    }

    /// `chi_n(x) = prod_k r_k^{n_k}(x_k)`.
    pub fn chi(&self, n: usize, x: &ClassPoint) -> Result<Complex64> {
        self.check_index(n)?;
        Ok(self.chi_labels(n, &x.labels))
    }

    pub(crate) fn chi_labels(&self, n: usize, labels: &[usize]) -> Complex64 {
        let mut rest = n;
        let mut acc = Complex64::new(1.0, 0.0);
        for (k, f) in self.factors.iter().enumerate() {
            let digit = rest % self.p_seq[k];
            rest /= self.p_seq[k];
            if digit != 0 {
                acc *= f.characters.chars[digit][labels[k]];
            }
        }
        acc
    }

    /// Character values `chi[n][point]` for every `n < P_L`.
    pub fn character_grid(&self) -> Vec<Vec<Complex64>> {
        (0..self.index_bound())
            .map(|n| self.points.iter().map(|x| self.chi_labels(n, &x.labels)).collect())
            .collect()
    }

    /// Haar measure of `J_s(y)` or `I_s(y)`.
    pub fn cylinder_measure(&self, y: &ClassPoint, s: usize, kind: CylinderKind) -> Result<f64> {
        self.check_level(s)?;
        Ok(match kind {
            CylinderKind::J => (0..s).map(|i| self.factors[i].class_mass(y.labels[i])).product(),
            CylinderKind::I => (0..s).map(|i| 1.0 / self.m_seq[i] as f64).product(),
        })
    }

    /// Whether `x` lies in `J_s(y)`.
    pub fn same_j_cylinder(&self, y: &ClassPoint, x: &ClassPoint, s: usize) -> Result<bool> {
        self.check_level(s)?;
        Ok(y.labels[..s] == x.labels[..s])
    }

    /// Replaces one character value of one factor. Used to exercise failure
    /// paths of the identity checks; the result is no longer a valid table.
    pub fn with_perturbed_character(&self, factor: usize, character: usize, class: usize, delta: f64) -> Self {
        let mut out = self.clone();
        out.factors[factor].characters.chars[character][class] += Complex64::new(delta, 0.0);
        out
    }
}
