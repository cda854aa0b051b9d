//! Run configuration: flags merged over an optional flat `key = value` file.
//!
//! Config grammar, one entry per line:
//!
//! ```text
//! # comment
//! group = S3, Z2
//! cayley = tables/g.tbl
//! depth = 3
//! dim = 2
//! seed = 42
//! tol = 1e-8
//! out = reports
//! check = doob, prop13
//! nmax = 108
//! samples = 3
//! function = random:7:positive
//! corrupt_characters = true
//! ```
//!
//! Relative paths are resolved against the config file's directory.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use serde::Serialize;
use tdfejer_core::random::{random_class_function, stream_rng, RandomKind};
use tdfejer_core::sequence::GroupSpec;
use tdfejer_core::{linalg, CatalogGroup, ClassFunction, FiniteGroup, GroupSequence};

pub const DEFAULT_DEPTH: usize = 3;
pub const DEFAULT_SEED: u64 = 42;

/// Input that cannot be run (exit code 2).
#[derive(Debug)]
pub struct Invalid(pub String);

impl fmt::Display for Invalid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<tdfejer_core::Error> for Invalid {
    fn from(e: tdfejer_core::Error) -> Self {
        Invalid(e.to_string())
    }
}

impl From<std::io::Error> for Invalid {
    fn from(e: std::io::Error) -> Self {
        Invalid(e.to_string())
    }
}

impl From<csv::Error> for Invalid {
    fn from(e: csv::Error) -> Self {
        Invalid(e.to_string())
    }
}

impl From<serde_json::Error> for Invalid {
    fn from(e: serde_json::Error) -> Self {
        Invalid(e.to_string())
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Comma-separated catalog groups, cycled to the depth (e.g. `S3` or `Z2,S3`).
    #[arg(long)]
    pub group: Option<String>,
    /// Cayley-table files appended to the group pattern.
    #[arg(long, value_delimiter = ',')]
    pub cayley: Vec<PathBuf>,
    #[arg(long)]
    pub depth: Option<usize>,
    /// Matrix dimension of generated functions.
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Residual tolerance for identity checks.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Directory for JSON and CSV outputs.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Comma-separated identity or bound ids.
    #[arg(long)]
    pub check: Option<String>,
    /// Largest Fejer index (`fejer`, `thm11`).
    #[arg(long)]
    pub nmax: Option<usize>,
    /// Number of seeded random functions for `verify`.
    #[arg(long)]
    pub samples: Option<usize>,
    /// `random:SEED[:general|hermitian|positive]`, `cylinder:L0,L1,..:S`,
    /// `character:N` or `file:PATH`.
    #[arg(long)]
    pub function: Option<String>,
    /// Flat key = value config file; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Perturb one character value by 1e-3 before running.
    #[arg(long)]
    pub corrupt_characters: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub groups: Vec<String>,
    pub cayley: Vec<PathBuf>,
    pub depth: usize,
    pub dim: usize,
    pub seed: u64,
    pub tol: Option<f64>,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    pub check: Vec<String>,
    pub nmax: Option<usize>,
    pub samples: usize,
    pub function: Option<String>,
    pub corrupt_characters: bool,
}

fn parse_value<T: std::str::FromStr>(key: &str, raw: &str) -> Result<T, Invalid> {
    raw.trim()
        .parse()
        .map_err(|_| Invalid(format!("config: cannot parse `{raw}` for `{key}`")))
}

fn split_list(raw: &str) -> Vec<String> {
    raw.split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>, Invalid> {
    let text = fs::read_to_string(path).map_err(|e| Invalid(format!("config {}: {e}", path.display())))?;
    let mut entries = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Invalid(format!("config line {}: expected key = value", lineno + 1)))?;
        entries.insert(key.trim().replace('-', "_"), value.trim().to_string());
    }
    Ok(entries)
}

impl RunConfig {
    pub fn resolve(args: &RunArgs) -> Result<Self, Invalid> {
        let mut file = BTreeMap::new();
        let mut base = PathBuf::new();
        if let Some(path) = &args.config {
            file = read_config_file(path)?;
            base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        }
        const KEYS: [&str; 12] = [
            "group", "cayley", "depth", "dim", "seed", "tol", "out", "check", "nmax", "samples", "function",
            "corrupt_characters",
        ];
        if let Some(key) = file.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(Invalid(format!("config: unknown key `{key}`")));
        }
        let get = |key: &str| file.get(key).map(String::as_str);
        let rel = |p: &str| {
            let p = PathBuf::from(p);
            if p.is_relative() {
                base.join(p)
            } else {
                p
            }
        };

        let groups = match (&args.group, get("group")) {
            (Some(g), _) => split_list(g),
            (None, Some(g)) => split_list(g),
            (None, None) => Vec::new(),
        };
        let cayley = if !args.cayley.is_empty() {
            args.cayley.clone()
        } else {
            get("cayley").map(|c| split_list(c).iter().map(|p| rel(p)).collect()).unwrap_or_default()
        };
        let groups = if groups.is_empty() && cayley.is_empty() {
            vec!["S3".to_string()]
        } else {
            groups
        };
        let depth = match args.depth {
            Some(d) => d,
            None => get("depth").map(|v| parse_value("depth", v)).transpose()?.unwrap_or(DEFAULT_DEPTH),
        };
        let dim = match args.dim {
            Some(d) => d,
            None => get("dim").map(|v| parse_value("dim", v)).transpose()?.unwrap_or(1),
        };
        let seed = match args.seed {
            Some(s) => s,
            None => get("seed").map(|v| parse_value("seed", v)).transpose()?.unwrap_or(DEFAULT_SEED),
        };
        let tol = match args.tol {
            Some(t) => Some(t),
            None => get("tol").map(|v| parse_value("tol", v)).transpose()?,
        };
        let out = args.out.clone().or_else(|| get("out").map(rel));
        let check = args
            .check
            .as_deref()
            .or(get("check"))
            .map(split_list)
            .unwrap_or_default();
        let nmax = match args.nmax {
            Some(n) => Some(n),
            None => get("nmax").map(|v| parse_value("nmax", v)).transpose()?,
        };
        let samples = match args.samples {
            Some(n) => n,
            None => get("samples").map(|v| parse_value("samples", v)).transpose()?.unwrap_or(3),
        };
        let function = args.function.clone().or_else(|| {
            get("function").map(|f| match f.strip_prefix("file:") {
                Some(p) => format!("file:{}", rel(p).display()),
                None => f.to_string(),
            })
        });
        let corrupt_characters = args.corrupt_characters
            || get("corrupt_characters")
                .map(|v| parse_value::<bool>("corrupt_characters", v))
                .transpose()?
                .unwrap_or(false);

        let config = RunConfig {
            groups,
            cayley,
            depth,
            dim,
            seed,
            tol,
            out,
            check,
            nmax,
            samples,
            function,
            corrupt_characters,
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), Invalid> {
        if self.depth == 0 {
            return Err(Invalid("depth must be at least 1".into()));
        }
        if self.dim == 0 {
            return Err(Invalid("dim must be at least 1".into()));
        }
        if let Some(t) = self.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Invalid(format!("tolerance must be positive, got {t}")));
            }
        }
        for path in &self.cayley {
            if !path.is_file() {
                return Err(Invalid(format!("cayley file {} does not exist", path.display())));
            }
        }
        Ok(())
    }

    pub fn pattern(&self) -> Result<Vec<GroupSpec>, Invalid> {
        let mut pattern = Vec::new();
        for name in &self.groups {
            let entry: CatalogGroup = name.parse()?;
            pattern.push(GroupSpec::Catalog(entry));
        }
        for path in &self.cayley {
            let text = fs::read_to_string(path)?;
            let label = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "table".into());
            let table = FiniteGroup::parse_cayley_text(&text)
                .map_err(|e| Invalid(format!("invalid cayley table {}: {e}", path.display())))?;
            FiniteGroup::from_cayley_table(table.clone(), label.clone())
                .map_err(|e| Invalid(format!("invalid cayley table {}: {e}", path.display())))?;
            pattern.push(GroupSpec::Table { label, table });
        }
        Ok(pattern)
    }

    pub fn sequence(&self) -> Result<GroupSequence, Invalid> {
        let seq = GroupSequence::new(&self.pattern()?, self.depth)?;
        Ok(if self.corrupt_characters {
            seq.with_perturbed_character(0, 1, 1, 1e-3)
        } else {
            seq
        })
    }

    pub fn function_or(&self, seq: &GroupSequence, default: FunctionSpec) -> Result<(FunctionSpec, ClassFunction), Invalid> {
        let spec = match &self.function {
            Some(raw) => FunctionSpec::parse(raw)?,
            None => default,
        };
        let f = spec.build(seq, self.dim)?;
        Ok((spec, f))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionSpec {
    Random { seed: u64, matrix: String },
    Cylinder { labels: Vec<usize>, s: usize },
    Character { n: usize },
    File { path: PathBuf },
}

impl FunctionSpec {
    pub fn random(seed: u64, kind: RandomKind) -> Self {
        let matrix = match kind {
            RandomKind::General => "general",
            RandomKind::Hermitian => "hermitian",
            RandomKind::Positive => "positive",
        };
        FunctionSpec::Random {
            seed,
            matrix: matrix.to_string(),
        }
    }

    pub fn parse(raw: &str) -> Result<Self, Invalid> {
        let bad = || Invalid(format!("cannot parse function spec `{raw}`"));
        let (head, rest) = raw.split_once(':').ok_or_else(bad)?;
        match head {
            "random" => {
                let mut parts = rest.split(':');
                let seed = parts.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
                let matrix = parts.next().unwrap_or("general");
                if !["general", "hermitian", "positive"].contains(&matrix) || parts.next().is_some() {
                    return Err(bad());
                }
                Ok(FunctionSpec::Random {
                    seed,
                    matrix: matrix.to_string(),
                })
            }
            "cylinder" => {
                let (labels, s) = rest.rsplit_once(':').ok_or_else(bad)?;
                let labels = labels
                    .split(',')
                    .map(|l| l.trim().parse().map_err(|_| bad()))
                    .collect::<Result<Vec<usize>, _>>()?;
                let s = s.trim().parse().map_err(|_| bad())?;
                Ok(FunctionSpec::Cylinder { labels, s })
            }
            "character" => Ok(FunctionSpec::Character {
                n: rest.trim().parse().map_err(|_| bad())?,
            }),
            "file" => Ok(FunctionSpec::File { path: PathBuf::from(rest) }),
            _ => Err(bad()),
        }
    }

    /// Scalar specs become `f(x) I_d` when `dim > 1`.
    pub fn build(&self, seq: &GroupSequence, dim: usize) -> Result<ClassFunction, Invalid> {
        let scalar = match self {
            FunctionSpec::Random { seed, matrix } => {
                let kind = match matrix.as_str() {
                    "hermitian" => RandomKind::Hermitian,
                    "positive" => RandomKind::Positive,
                    _ => RandomKind::General,
                };
                let mut rng = stream_rng(*seed, "function");
                return Ok(random_class_function(seq, dim, kind, &mut rng));
            }
            FunctionSpec::File { path } => {
                let text = fs::read_to_string(path).map_err(|e| Invalid(format!("function file {}: {e}", path.display())))?;
                return Ok(ClassFunction::from_json(seq, &text)?);
            }
            FunctionSpec::Character { n } => ClassFunction::character(seq, *n)?,
            FunctionSpec::Cylinder { labels, s } => {
                if labels.len() != seq.depth() || labels.iter().zip(seq.p_seq()).any(|(l, p)| l >= p) {
                    return Err(Invalid(format!("cylinder point {labels:?} is not a point of the sequence")));
                }
                let y = seq.point(seq.point_index(labels)).clone();
                ClassFunction::cylinder_indicator(seq, &y, *s)?
            }
        };
        if dim == 1 {
            return Ok(scalar);
        }
        Ok(scalar.map(|v| linalg::identity(dim) * v[(0, 0)]))
    }
}
