//! Finite groups given by Cayley tables, their conjugacy classes and their
//! irreducible character tables.
//!
//! Character tables are computed numerically with the Burnside class-sum
//! method. The class algebra is written in the orthonormal basis
//! `C_c / sqrt(|C_c|)`, where multiplication by a class sum is a normal
//! operator whose adjoint is multiplication by the inverse class. A random
//! Hermitian element of the algebra therefore has an orthonormal eigenbasis,
//! and each eigenvector is proportional to a primitive central idempotent,
//! from which the character values are read off.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 64;

/// Default seed for the random class-sum combination.
pub const DEFAULT_CHARACTER_SEED: u64 = 0x5eed_c4a2;

const MAX_ATTEMPTS: u32 = 16;
const DEGREE_TOL: f64 = 1e-6;
const VALIDATION_TOL: f64 = 1e-8;

/// Catalog entries with frozen element orderings.
///
/// * `Cyclic(m)`: element `k` is `k mod m`, product is addition.
/// * `Symmetric3`: the permutations of `{0,1,2}` in lexicographic order of
///   their images `[012, 021, 102, 120, 201, 210]`; `(a*b)(i) = a(b(i))`.
/// * `Dihedral(n)`: `r^k` is element `k`, `s r^k` is element `n + k`, with
///   `s r = r^{-1} s`.
/// * `Quaternion8`: `1, -1, i, -i, j, -j, k, -k` in that order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CatalogGroup {
    Cyclic(usize),
    Symmetric3,
    Dihedral(usize),
    Quaternion8,
}

impl fmt::Display for CatalogGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogGroup::Cyclic(m) => write!(f, "Z{m}"),
            CatalogGroup::Symmetric3 => write!(f, "S3"),
            CatalogGroup::Dihedral(n) => write!(f, "D{n}"),
            CatalogGroup::Quaternion8 => write!(f, "Q8"),
        }
    }
}

fn parse_parameter(name: &str, raw: &str) -> Result<usize> {
    raw.trim().parse::<usize>().map_err(|_| Error::UnknownGroup(name.to_string()))
}

impl FromStr for CatalogGroup {
    type Err = Error;

    /// Accepts `cyclic(m)`/`Zm`, `symmetric3`/`S3`, `dihedral(n)`/`Dn` and
    /// `quaternion8`/`Q8`.
    fn from_str(s: &str) -> Result<Self> {
        let name = s.trim();
        let lower = name.to_ascii_lowercase();
        let bracketed = |prefix: &str| -> Option<&str> {
            lower
                .strip_prefix(prefix)
                .and_then(|rest| rest.strip_prefix('('))
                .and_then(|rest| rest.strip_suffix(')'))
        };
        let entry = if lower == "symmetric3" || lower == "s3" {
            CatalogGroup::Symmetric3
        } else if lower == "quaternion8" || lower == "q8" {
            CatalogGroup::Quaternion8
        } else if let Some(arg) = bracketed("cyclic") {
            CatalogGroup::Cyclic(parse_parameter(name, arg)?)
        } else if let Some(arg) = bracketed("dihedral") {
            CatalogGroup::Dihedral(parse_parameter(name, arg)?)
        } else if let Some(arg) = lower.strip_prefix('z') {
            CatalogGroup::Cyclic(parse_parameter(name, arg)?)
        } else if let Some(arg) = lower.strip_prefix('d') {
            CatalogGroup::Dihedral(parse_parameter(name, arg)?)
        } else {
            return Err(Error::UnknownGroup(name.to_string()));
        };
        entry.check_range()?;
        Ok(entry)
    }
}

impl CatalogGroup {
    fn check_range(&self) -> Result<()> {
        let bad = |detail: &str| {
            Err(Error::ParameterOutOfRange {
                group: self.to_string(),
                detail: detail.to_string(),
            })
        };
        match *self {
            CatalogGroup::Cyclic(m) if m < 2 => bad("cyclic order must be at least 2"),
            CatalogGroup::Cyclic(m) if m > MAX_ORDER => bad("cyclic order must be at most 64"),
            CatalogGroup::Dihedral(n) if n < 3 => bad("dihedral parameter must be at least 3"),
            CatalogGroup::Dihedral(n) if 2 * n > MAX_ORDER => {
                bad("dihedral parameter must be at most 32")
            }
            _ => Ok(()),
        }
    }

    pub fn cayley_table(&self) -> Result<Vec<Vec<usize>>> {
        self.check_range()?;
        Ok(match *self {
            CatalogGroup::Cyclic(m) => (0..m).map(|a| (0..m).map(|b| (a + b) % m).collect()).collect(),
            CatalogGroup::Symmetric3 => {
                let perms = symmetric3_elements();
                let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
                perms
                    .iter()
                    .map(|a| {
                        perms
                            .iter()
                            .map(|b| index([a[b[0]], a[b[1]], a[b[2]]]))
                            .collect()
                    })
                    .collect()
            }
            CatalogGroup::Dihedral(n) => {
                let mul = |a: usize, b: usize| -> usize {
                    let (sa, ka) = (a >= n, a % n);
                    let (sb, kb) = (b >= n, b % n);
                    match (sa, sb) {
                        (false, false) => (ka + kb) % n,
                        (false, true) => n + (kb + n - ka) % n,
                        (true, false) => n + (ka + kb) % n,
                        (true, true) => (kb + n - ka) % n,
                    }
                };
                (0..2 * n).map(|a| (0..2 * n).map(|b| mul(a, b)).collect()).collect()
            }
            CatalogGroup::Quaternion8 => {
                // unit index: 0=1, 1=i, 2=j, 3=k; element = 2*unit + sign
                let unit_mul = |u: usize, v: usize| -> (usize, bool) {
                    match (u, v) {
                        (0, x) | (x, 0) => (x, false),
                        (a, b) if a == b => (0, true),
                        (1, 2) => (3, false),
                        (2, 3) => (1, false),
                        (3, 1) => (2, false),
                        (2, 1) => (3, true),
                        (3, 2) => (1, true),
                        (1, 3) => (2, true),
                        _ => unreachable!(),
                    }
                };
                (0..8)
                    .map(|a: usize| {
                        (0..8)
                            .map(|b: usize| {
                                let (u, neg) = unit_mul(a / 2, b / 2);
                                let sign = (a % 2 == 1) ^ (b % 2 == 1) ^ neg;
                                2 * u + usize::from(sign)
                            })
                            .collect()
                    })
                    .collect()
            }
        })
    }
}

fn symmetric3_elements() -> Vec<[usize; 3]> {
    vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroup {
    order: usize,
    cayley: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
    label: String,
}

impl FiniteGroup {
    pub fn from_catalog(entry: CatalogGroup) -> Result<Self> {
        Self::from_cayley_table(entry.cayley_table()?, entry.to_string())
    }

    pub fn from_catalog_name(name: &str) -> Result<Self> {
        Self::from_catalog(name.parse()?)
    }

    /// Validates a Cayley table and discovers identity and inverses.
    ///
    /// Checks run in the order: entry range, Latin square, identity,
    /// inverses, associativity; the first failure is reported.
    pub fn from_cayley_table(table: Vec<Vec<usize>>, label: impl Into<String>) -> Result<Self> {
        let m = table.len();
        if m == 0 {
            return Err(Error::Parse("empty table".into()));
        }
        if m > MAX_ORDER {
            return Err(Error::OrderTooLarge(m));
        }
        for (row, entries) in table.iter().enumerate() {
            if entries.len() != m {
                return Err(Error::Parse(format!("row {row} has {} entries, expected {m}", entries.len())));
            }
            for (col, &value) in entries.iter().enumerate() {
                if value >= m {
                    return Err(Error::EntryOutOfRange { row, col, value, order: m });
                }
            }
        }
        for i in 0..m {
            let row: BTreeSet<usize> = table[i].iter().copied().collect();
            if row.len() != m {
                return Err(Error::NotLatinSquare(format!("row {i} repeats an element")));
            }
            let col: BTreeSet<usize> = table.iter().map(|r| r[i]).collect();
            if col.len() != m {
                return Err(Error::NotLatinSquare(format!("column {i} repeats an element")));
            }
        }
        let identity = (0..m)
            .find(|&e| (0..m).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or(Error::NoIdentity)?;
        let mut inverses = Vec::with_capacity(m);
        for g in 0..m {
            let inv = (0..m)
                .find(|&h| table[g][h] == identity && table[h][g] == identity)
                .ok_or(Error::MissingInverse(g))?;
            inverses.push(inv);
        }
        for a in 0..m {
            for b in 0..m {
                let ab = table[a][b];
                for c in 0..m {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::NonAssociative(a, b, c));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            order: m,
            cayley: table,
            identity,
            inverses,
            label: label.into(),
        })
    }

    /// Parses the Cayley text format: first line `m`, then `m` rows of `m`
    /// whitespace-separated indices. Lines starting with `#` are ignored.
    pub fn parse_cayley_text(text: &str) -> Result<Vec<Vec<usize>>> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("missing order line".into()))?;
        let m: usize = header
            .parse()
            .map_err(|_| Error::Parse(format!("bad order line `{header}`")))?;
        let mut table = Vec::with_capacity(m);
        for line in lines {
            let row = line
                .split_whitespace()
                .map(|tok| tok.parse::<usize>().map_err(|_| Error::Parse(format!("bad entry `{tok}`"))))
                .collect::<Result<Vec<_>>>()?;
            table.push(row);
        }
        if table.len() != m {
            return Err(Error::Parse(format!("expected {m} rows, found {}", table.len())));
        }
        Ok(table)
    }

    pub fn from_cayley_text(text: &str, label: impl Into<String>) -> Result<Self> {
        Self::from_cayley_table(Self::parse_cayley_text(text)?, label)
    }

    pub fn to_cayley_text(&self) -> String {
        let mut out = format!("# {}\n{}\n", self.label, self.order);
        for row in &self.cayley {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn cayley(&self) -> &[Vec<usize>] {
        &self.cayley
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverses[g]
    }

    pub fn inverses(&self) -> &[usize] {
        &self.inverses
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.cayley[a][b]
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// `z^{-1} g z`.
    pub fn conjugate(&self, g: usize, z: usize) -> usize {
        self.mul(self.mul(self.inverse(z), g), z)
    }

    /// Classes ordered with the identity class first, then by
    /// `(size, smallest member index)`.
    pub fn conjugacy_classes(&self) -> ConjugacyStructure {
        let m = self.order;
        let mut seen = vec![false; m];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for g in 0..m {
            if seen[g] {
                continue;
            }
            let members: BTreeSet<usize> = (0..m).map(|z| self.conjugate(g, z)).collect();
            for &h in &members {
                seen[h] = true;
            }
            classes.push(members.into_iter().collect());
        }
        let id = self.identity;
        classes.sort_by_key(|c| (!c.contains(&id), c.len(), c[0]));
        let mut class_of = vec![0; m];
        for (ci, members) in classes.iter().enumerate() {
            for &g in members {
                class_of[g] = ci;
            }
        }
        let inverse_class = classes.iter().map(|c| class_of[self.inverse(c[0])]).collect();
        ConjugacyStructure {
            class_of,
            class_count: classes.len(),
            class_sizes: classes.iter().map(Vec::len).collect(),
            representatives: classes.iter().map(|c| c[0]).collect(),
            inverse_class,
            members: classes,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugacyStructure {
    pub class_of: Vec<usize>,
    pub class_count: usize,
    pub class_sizes: Vec<usize>,
    pub representatives: Vec<usize>,
    pub inverse_class: Vec<usize>,
    pub members: Vec<Vec<usize>>,
}

impl ConjugacyStructure {
    pub fn group_order(&self) -> usize {
        self.class_sizes.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacterTable {
    /// `chars[i][c]`: character `i` on class `c`.
    pub chars: Vec<Vec<Complex64>>,
    pub degrees: Vec<usize>,
    /// Seed of the random class-sum combination that produced the table.
    pub seed: u64,
    pub attempts: u32,
}

impl CharacterTable {
    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    pub fn value(&self, character: usize, class: usize) -> Complex64 {
        self.chars[character][class]
    }
}

/// Number of pairs `(x, y)` with `x` in class `j`, `y` in class `k` and
/// `x y = z` for a fixed `z` in class `l`.
fn structure_constants(group: &FiniteGroup, classes: &ConjugacyStructure) -> Vec<Vec<Vec<f64>>> {
    let p = classes.class_count;
    let mut c = vec![vec![vec![0.0; p]; p]; p];
    for l in 0..p {
        let z = classes.representatives[l];
        for x in 0..group.order() {
            let y = group.mul(group.inverse(x), z);
            c[classes.class_of[x]][classes.class_of[y]][l] += 1.0;
        }
    }
    c
}

pub fn character_table(group: &FiniteGroup, classes: &ConjugacyStructure) -> Result<CharacterTable> {
    character_table_seeded(group, classes, DEFAULT_CHARACTER_SEED)
}

pub fn character_table_seeded(
    group: &FiniteGroup,
    classes: &ConjugacyStructure,
    seed: u64,
) -> Result<CharacterTable> {
    let p = classes.class_count;
    let m = group.order() as f64;
    let sizes: Vec<f64> = classes.class_sizes.iter().map(|&s| s as f64).collect();
    let constants = structure_constants(group, classes);
    // multiplication by class j in the orthonormal basis C_c / sqrt(|C_c|)
    let mult: Vec<DMatrix<Complex64>> = (0..p)
        .map(|j| {
            DMatrix::from_fn(p, p, |l, k| {
                Complex64::new(constants[j][k][l] * (sizes[l] / sizes[k]).sqrt(), 0.0)
            })
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=MAX_ATTEMPTS {
        let mut x = DMatrix::<Complex64>::zeros(p, p);
        for lj in &mult {
            let a: f64 = rng.random_range(-1.0..1.0);
            let b: f64 = rng.random_range(-1.0..1.0);
            let sym = lj + lj.adjoint();
            let anti = (lj - lj.adjoint()) * Complex64::new(0.0, 1.0);
            x += sym * Complex64::new(a, 0.0) + anti * Complex64::new(b, 0.0);
        }
        if let Some(chars) = characters_from_eigenbasis(&x, &sizes, m) {
            let mut table = order_characters(chars);
            let degrees = table.iter().map(|row| row[0].re.round() as usize).collect();
            for row in table.iter_mut() {
                let d = row[0].re.round();
                row[0] = Complex64::new(d, 0.0);
            }
            let table = CharacterTable {
                chars: table,
                degrees,
                seed,
                attempts: attempt,
            };
            if validate_character_table(&table, classes).passed {
                return Ok(table);
            }
        }
    }
    Err(Error::CharacterSeparation(MAX_ATTEMPTS))
}

fn characters_from_eigenbasis(x: &DMatrix<Complex64>, sizes: &[f64], m: f64) -> Option<Vec<Vec<Complex64>>> {
    let p = sizes.len();
    if p == 1 {
        return Some(vec![vec![Complex64::new(1.0, 0.0)]]);
    }
    let eig = x.clone().symmetric_eigen();
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    let scale = values.iter().fold(1.0_f64, |acc, v| acc.max(v.abs()));
    if values.windows(2).any(|w| w[1] - w[0] < 1e-6 * scale) {
        return None;
    }
    let mut chars = Vec::with_capacity(p);
    for col in 0..p {
        let v = eig.eigenvectors.column(col);
        let anchor = v[0].conj();
        if anchor.norm() < 1e-12 {
            return None;
        }
        let ratios: Vec<Complex64> = (0..p).map(|c| v[c].conj() / sizes[c].sqrt() / anchor).collect();
        let mass: f64 = ratios.iter().zip(sizes).map(|(u, s)| s * u.norm_sqr()).sum();
        let degree = (m / mass).sqrt();
        if (degree - degree.round()).abs() > DEGREE_TOL || degree.round() < 1.0 {
            return None;
        }
        chars.push(ratios.iter().map(|u| u * degree).collect());
    }
    Some(chars)
}

fn rounded_key(row: &[Complex64]) -> Vec<(i64, i64)> {
    row.iter()
        .map(|z| ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64))
        .collect()
}

/// Trivial character first, then by degree, then lexicographically on the
/// class values rounded to 1e-6.
fn order_characters(mut chars: Vec<Vec<Complex64>>) -> Vec<Vec<Complex64>> {
    let is_trivial = |row: &Vec<Complex64>| row.iter().all(|z| (z - Complex64::new(1.0, 0.0)).norm() < 1e-6);
    chars.sort_by(|a, b| {
        let ka = (!is_trivial(a), a[0].re.round() as i64, rounded_key(a));
        let kb = (!is_trivial(b), b[0].re.round() as i64, rounded_key(b));
        ka.cmp(&kb)
    });
    chars
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub row_orthonormality: f64,
    pub column_orthogonality: f64,
    pub degree_sum: f64,
    pub trivial_character: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub failures: Vec<String>,
}

/// Maximum deviation of every character-table relation; passes iff all are
/// within 1e-8.
pub fn validate_character_table(table: &CharacterTable, classes: &ConjugacyStructure) -> ValidationReport {
    let p = classes.class_count;
    let m = classes.group_order() as f64;
    let sizes: Vec<f64> = classes.class_sizes.iter().map(|&s| s as f64).collect();
    let mut failures = Vec::new();
    if table.chars.len() != p || table.chars.iter().any(|r| r.len() != p) {
        failures.push("dimensions".to_string());
        return ValidationReport {
            row_orthonormality: f64::INFINITY,
            column_orthogonality: f64::INFINITY,
            degree_sum: f64::INFINITY,
            trivial_character: f64::INFINITY,
            tolerance: VALIDATION_TOL,
            passed: false,
            failures,
        };
    }
    let chars = &table.chars;
    let mut row_dev: f64 = 0.0;
    for i in 0..p {
        for j in 0..p {
            let s: Complex64 = (0..p).map(|c| chars[i][c] * chars[j][c].conj() * (sizes[c] / m)).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            row_dev = row_dev.max((s - target).norm());
        }
    }
    let mut col_dev: f64 = 0.0;
    for c in 0..p {
        for c2 in 0..p {
            let s: Complex64 = (0..p).map(|i| chars[i][c] * chars[i][c2].conj()).sum();
            let target = if c == c2 { m / sizes[c] } else { 0.0 };
            // relative to the magnitude of the diagonal entry
            col_dev = col_dev.max((s - target).norm() / (m / sizes[c]).max(1.0));
        }
    }
    let degree_sum = (chars.iter().map(|r| r[0].norm_sqr()).sum::<f64>() - m).abs();
    let trivial = chars[0].iter().map(|z| (z - Complex64::new(1.0, 0.0)).norm()).fold(0.0, f64::max);
    if row_dev > VALIDATION_TOL {
        failures.push(format!("row orthonormality deviates by {row_dev:.3e}"));
    }
    if col_dev > VALIDATION_TOL {
        failures.push(format!("column orthogonality deviates by {col_dev:.3e}"));
    }
    if degree_sum > VALIDATION_TOL {
        failures.push(format!("degree sum deviates by {degree_sum:.3e}"));
    }
    if trivial > VALIDATION_TOL {
        failures.push(format!("character 0 is not trivial (deviation {trivial:.3e})"));
    }
    ValidationReport {
        row_orthonormality: row_dev,
        column_orthogonality: col_dev,
        degree_sum,
        trivial_character: trivial,
        tolerance: VALIDATION_TOL,
        passed: failures.is_empty(),
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table_for(name: &str) -> (FiniteGroup, ConjugacyStructure, CharacterTable) {
        let g = FiniteGroup::from_catalog_name(name).unwrap();
        let s = g.conjugacy_classes();
        let t = character_table(&g, &s).unwrap();
        (g, s, t)
    }

    fn near(a: Complex64, re: f64) -> bool {
        (a - Complex64::new(re, 0.0)).norm() < 1e-9
    }

    #[test]
    fn parses_catalog_names() {
        assert_eq!("cyclic(5)".parse::<CatalogGroup>().unwrap(), CatalogGroup::Cyclic(5));
        assert_eq!("Z2".parse::<CatalogGroup>().unwrap(), CatalogGroup::Cyclic(2));
        assert_eq!("dihedral(4)".parse::<CatalogGroup>().unwrap(), CatalogGroup::Dihedral(4));
        assert_eq!("S3".parse::<CatalogGroup>().unwrap(), CatalogGroup::Symmetric3);
        assert_eq!("quaternion8".parse::<CatalogGroup>().unwrap(), CatalogGroup::Quaternion8);
        assert!(matches!("foo".parse::<CatalogGroup>(), Err(Error::UnknownGroup(_))));
        assert!(matches!("cyclic(1)".parse::<CatalogGroup>(), Err(Error::ParameterOutOfRange { .. })));
        assert!(matches!("dihedral(2)".parse::<CatalogGroup>(), Err(Error::ParameterOutOfRange { .. })));
        assert!(matches!("Z65".parse::<CatalogGroup>(), Err(Error::ParameterOutOfRange { .. })));
    }

    #[test]
    fn cyclic_two_is_addition_mod_two() {
        let g = FiniteGroup::from_catalog(CatalogGroup::Cyclic(2)).unwrap();
        assert_eq!(g.cayley(), &[vec![0, 1], vec![1, 0]]);
        assert_eq!(g.identity(), 0);
    }

    #[test]
    fn class_sizes_of_catalog_groups() {
        let sizes = |name: &str| FiniteGroup::from_catalog_name(name).unwrap().conjugacy_classes().class_sizes;
        // identity, 3-cycles, transpositions
        assert_eq!(sizes("S3"), vec![1, 2, 3]);
        assert_eq!(sizes("D4"), vec![1, 1, 2, 2, 2]);
        assert_eq!(sizes("Q8"), vec![1, 1, 2, 2, 2]);
        assert_eq!(sizes("Z5"), vec![1; 5]);
    }

    #[test]
    fn conjugacy_matches_exhaustive_definition() {
        for name in ["S3", "D4", "Q8", "D5"] {
            let g = FiniteGroup::from_catalog_name(name).unwrap();
            let s = g.conjugacy_classes();
            for a in 0..g.order() {
                for b in 0..g.order() {
                    let conj = (0..g.order()).any(|z| g.conjugate(a, z) == b);
                    assert_eq!(conj, s.class_of[a] == s.class_of[b]);
                }
            }
        }
    }

    #[test]
    fn symmetric3_character_table() {
        let (g, s, t) = table_for("S3");
        // permutation 1 is a transposition, permutation 3 a 3-cycle
        let cols = [s.class_of[g.identity()], s.class_of[1], s.class_of[3]];
        let expected = [[1.0, 1.0, 1.0], [1.0, -1.0, 1.0], [2.0, 0.0, -1.0]];
        for (row, exp) in t.chars.iter().zip(expected.iter()) {
            for (c, e) in cols.iter().zip(exp) {
                assert!(near(row[*c], *e), "{row:?}");
            }
        }
        assert_eq!(t.degrees, vec![1, 1, 2]);
        assert!(validate_character_table(&t, &s).row_orthonormality < 1e-12);
    }

    #[test]
    fn cyclic_two_characters() {
        let (_, _, t) = table_for("Z2");
        assert!(near(t.chars[1][0], 1.0) && near(t.chars[1][1], -1.0));
    }

    #[test]
    fn quaternion_has_single_degree_two_character() {
        let (_, _, t) = table_for("Q8");
        assert_eq!(t.degrees, vec![1, 1, 1, 1, 2]);
        let last = &t.chars[4];
        for (v, e) in last.iter().zip([2.0, -2.0, 0.0, 0.0, 0.0]) {
            assert!(near(*v, e));
        }
    }

    #[test]
    fn abelian_characters_are_unimodular() {
        for name in ["Z5", "Z7", "Z12"] {
            let (_, _, t) = table_for(name);
            assert!(t.degrees.iter().all(|&d| d == 1));
            assert!(t.chars.iter().flatten().all(|z| (z.norm() - 1.0).abs() < 1e-9));
        }
    }

    #[test]
    fn perturbed_table_fails_validation() {
        let (_, s, mut t) = table_for("S3");
        t.chars[2][1] += Complex64::new(1e-3, 0.0);
        let report = validate_character_table(&t, &s);
        assert!(!report.passed);
        assert!(report.failures.iter().any(|f| f.contains("row orthonormality")));
    }

    #[test]
    fn same_seed_same_table() {
        let g = FiniteGroup::from_catalog_name("D5").unwrap();
        let s = g.conjugacy_classes();
        let a = character_table_seeded(&g, &s, 9).unwrap();
        let b = character_table_seeded(&g, &s, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_tables() {
        let not_latin = vec![vec![0, 1], vec![0, 1]];
        assert!(matches!(FiniteGroup::from_cayley_table(not_latin, "x"), Err(Error::NotLatinSquare(_))));
        let out_of_range = vec![vec![0, 2], vec![1, 0]];
        assert!(matches!(
            FiniteGroup::from_cayley_table(out_of_range, "x"),
            Err(Error::EntryOutOfRange { .. })
        ));
        // x * y = -x - y mod 3
        let no_id = vec![vec![0, 2, 1], vec![2, 1, 0], vec![1, 0, 2]];
        assert!(matches!(FiniteGroup::from_cayley_table(no_id, "x"), Err(Error::NoIdentity)));
        // a loop of order 5 in which every element is an involution
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let err = FiniteGroup::from_cayley_table(loop5, "loop").unwrap_err();
        assert!(matches!(err, Error::NonAssociative(..)));
        assert!(err.to_string().starts_with("associativity violated at ("));
    }

    #[test]
    fn missing_inverse_is_reported() {
        // latin square with identity 0 where 1*2 = 0 but 2*1 = 3
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 2, 0, 4, 3],
            vec![2, 3, 4, 0, 1],
            vec![3, 4, 1, 2, 0],
            vec![4, 0, 3, 1, 2],
        ];
        let err = FiniteGroup::from_cayley_table(t, "x").unwrap_err();
        assert!(matches!(err, Error::MissingInverse(1)), "{err}");
    }

    #[test]
    fn cayley_text_round_trip() {
        let g = FiniteGroup::from_catalog_name("D4").unwrap();
        let text = g.to_cayley_text();
        let back = FiniteGroup::from_cayley_text(&text, "D4").unwrap();
        assert_eq!(back, g);
        assert_eq!(back.to_cayley_text(), text);
    }
}
