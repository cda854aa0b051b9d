use std::fs;
use std::path::Path;

use serde::Serialize;
use tdfejer_core::bounds::default_nmax;
use tdfejer_core::identities::DEFAULT_IDENTITY_TOL;
use tdfejer_core::random::{random_class_function, stream_rng, RandomKind};
use tdfejer_core::{
    check_bound_all, check_identity, norm2, BoundId, BoundReport, CharacterGrid, Complex64, DykstraOptions,
    GroupSequence, IdentityId, IdentityInputs, KernelTable, ResidualReport,
};

use crate::config::{FunctionSpec, Invalid, RunConfig};
use crate::Outcome;

/// Kernel CSV is skipped above this many rows.
const KERNEL_ROW_LIMIT: usize = 2_000_000;

fn fmt_complex(z: Complex64) -> String {
    let clean = |v: f64| if v.abs() < 5e-10 { 0.0 } else { v };
    let (re, im) = (clean(z.re), clean(z.im));
    match (re == 0.0, im == 0.0) {
        (_, true) => format!("{re:.4}"),
        (true, false) => format!("{im:.4}i"),
        _ => format!("{re:.4}{im:+.4}i"),
    }
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<(), Invalid> {
    fs::create_dir_all(dir)?;
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(dir.join(name), text)?;
    Ok(())
}

#[derive(Serialize)]
struct FactorReport {
    label: String,
    order: usize,
    class_sizes: Vec<usize>,
    class_members: Vec<Vec<usize>>,
    degrees: Vec<usize>,
    /// `characters[i][c]` as `[re, im]`.
    characters: Vec<Vec<[f64; 2]>>,
}

#[derive(Serialize)]
struct GroupReport {
    label: String,
    depth: usize,
    m: Vec<usize>,
    p: Vec<usize>,
    big_p: Vec<usize>,
    big_m: Vec<String>,
    rho: usize,
    factors: Vec<FactorReport>,
}

fn group_report(seq: &GroupSequence) -> GroupReport {
    let factors = seq
        .factors()
        .iter()
        .map(|f| FactorReport {
            label: f.group.label().to_string(),
            order: f.group.order(),
            class_sizes: f.classes.class_sizes.clone(),
            class_members: f.classes.members.clone(),
            degrees: f.characters.degrees.clone(),
            characters: f
                .characters
                .chars
                .iter()
                .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        })
        .collect();
    GroupReport {
        label: seq.label(),
        depth: seq.depth(),
        m: seq.m_seq().to_vec(),
        p: seq.p_seq().to_vec(),
        big_p: seq.big_p().to_vec(),
        big_m: seq.big_m().iter().map(u128::to_string).collect(),
        rho: seq.rho(),
        factors,
    }
}

pub fn group(cfg: &RunConfig) -> Result<Outcome, Invalid> {
    let seq = cfg.sequence()?;
    let report = group_report(&seq);
    println!("sequence {} (L = {})", report.label, report.depth);
    println!("m   = ({})", join(&report.m));
    println!("p   = ({})", join(&report.p));
    println!("P   = ({})", join(&report.big_p));
    println!("M   = ({})", join(&report.big_m));
    println!("rho = {}", report.rho);
    let mut seen = Vec::new();
    for f in seq.factors() {
        if seen.contains(&f.group.label()) {
            continue;
        }
        seen.push(f.group.label());
        println!();
        println!("{} (order {}), class sizes ({})", f.group.label(), f.group.order(), join(&f.classes.class_sizes));
        for (i, row) in f.characters.chars.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|&z| format!("{:>16}", fmt_complex(z))).collect();
            println!("  chi_{i:<3}{}", cells.join(""));
        }
    }
    if let Some(out) = &cfg.out {
        write_json(out, "group.json", &report)?;
    }
    Ok(Outcome::Pass)
}

#[derive(Serialize)]
struct VerifyEntry {
    sample: Option<usize>,
    #[serde(flatten)]
    report: ResidualReport,
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    sequence: String,
    config: &'a RunConfig,
    results: Vec<VerifyEntry>,
    failing: Vec<String>,
    passed: bool,
}

fn selected_identities(cfg: &RunConfig) -> Result<Vec<IdentityId>, Invalid> {
    if cfg.check.is_empty() {
        return Ok(IdentityId::ALL.to_vec());
    }
    cfg.check.iter().map(|c| c.parse().map_err(Invalid::from)).collect()
}

pub fn verify(cfg: &RunConfig) -> Result<Outcome, Invalid> {
    let seq = cfg.sequence()?;
    let ids = selected_identities(cfg)?;
    let tolerance = cfg.tol.unwrap_or(DEFAULT_IDENTITY_TOL);
    let samples = cfg.samples.max(1);
    let functions = (0..samples)
        .map(|i| {
            let mut rng = stream_rng(cfg.seed, &format!("verify/{i}"));
            random_class_function(&seq, cfg.dim, RandomKind::General, &mut rng)
        })
        .collect::<Vec<_>>();

    let mut results = Vec::new();
    for &id in &ids {
        if id.needs_function() {
            for (i, f) in functions.iter().enumerate() {
                let inputs = IdentityInputs {
                    function: Some(f),
                    tolerance: Some(tolerance),
                    ..Default::default()
                };
                results.push(VerifyEntry {
                    sample: Some(i),
                    report: check_identity(&seq, id, &inputs)?,
                });
            }
        } else {
            let inputs = IdentityInputs {
                tolerance: Some(tolerance),
                ..Default::default()
            };
            results.push(VerifyEntry {
                sample: None,
                report: check_identity(&seq, id, &inputs)?,
            });
        }
    }

    println!("verify {} (L = {}, d = {}, seed {}, tol {tolerance:e})", seq.label(), seq.depth(), cfg.dim, cfg.seed);
    println!("{:<30}{:>14}{:>8}  result", "identity", "worst", "evals");
    let mut failing = Vec::new();
    for &id in &ids {
        let entries: Vec<&VerifyEntry> = results.iter().filter(|e| e.report.id == id).collect();
        let worst = entries
            .iter()
            .max_by(|a, b| a.report.max_residual.total_cmp(&b.report.max_residual))
            .unwrap();
        let evals: usize = entries.iter().map(|e| e.report.evaluations).sum();
        let ok = entries.iter().all(|e| e.report.passed);
        println!(
            "{:<30}{:>14.3e}{:>8}  {}",
            id.name(),
            worst.report.max_residual,
            evals,
            if ok { "pass" } else { "FAIL" }
        );
        if !ok {
            failing.push(id.name().to_string());
        }
    }
    for &id in &ids {
        if let Some(e) = results
            .iter()
            .filter(|e| e.report.id == id && !e.report.passed)
            .max_by(|a, b| a.report.max_residual.total_cmp(&b.report.max_residual))
        {
            println!("failed: {} residual {:.3e} at {}", id.name(), e.report.max_residual, e.report.worst);
        }
    }
    let passed = failing.is_empty();
    if let Some(out) = &cfg.out {
        let report = VerifyReport {
            sequence: seq.label(),
            config: cfg,
            results,
            failing,
            passed,
        };
        write_json(out, "verify.json", &report)?;
    }
    Ok(if passed { Outcome::Pass } else { Outcome::Fail })
}

#[derive(Serialize)]
struct FejerRow {
    n: usize,
    error: f64,
    dirichlet_error: f64,
    order: String,
    digits: String,
}

pub fn fejer(cfg: &RunConfig) -> Result<Outcome, Invalid> {
    let seq = cfg.sequence()?;
    let default = FunctionSpec::random(cfg.seed, RandomKind::General);
    let (_, f) = cfg.function_or(&seq, default)?;
    let bound = seq.index_bound();
    let nmax = cfg.nmax.unwrap_or(bound);
    if nmax == 0 {
        return Err(Invalid("nmax must be at least 1".into()));
    }
    let grid = CharacterGrid::new(&seq);
    let prefix = grid.dirichlet_prefix(&f)?;
    let means = grid.fejer_sequence(&f, nmax)?;
    let mut rows = Vec::with_capacity(nmax);
    for (i, sigma) in means.iter().enumerate() {
        let n = i + 1;
        let dirichlet = &prefix[n.min(bound)];
        let (order, digits) = if n < bound {
            let e = seq.expand(n)?;
            let order = e.order().map(|a| a.to_string()).unwrap_or_default();
            (order, e.digits.iter().map(usize::to_string).collect::<Vec<_>>().join(" "))
        } else {
            (String::new(), String::new())
        };
        rows.push(FejerRow {
            n,
            error: norm2(&seq, &sigma.sub(&f)?)?,
            dirichlet_error: norm2(&seq, &dirichlet.sub(&f)?)?,
            order,
            digits,
        });
    }
    let write_rows = |w: &mut csv::Writer<Box<dyn std::io::Write>>| -> Result<(), Invalid> {
        w.write_record(["n", "error", "dirichlet_error", "|n|", "digits"])?;
        for r in &rows {
            w.write_record([
                r.n.to_string(),
                format!("{:e}", r.error),
                format!("{:e}", r.dirichlet_error),
                r.order.clone(),
                r.digits.clone(),
            ])?;
        }
        w.flush()?;
        Ok(())
    };
    match &cfg.out {
        None => {
            let mut w = csv::Writer::from_writer(Box::new(std::io::stdout()) as Box<dyn std::io::Write>);
            write_rows(&mut w)?;
        }
        Some(out) => {
            fs::create_dir_all(out)?;
            let file = fs::File::create(out.join("fejer.csv"))?;
            let mut w = csv::Writer::from_writer(Box::new(file) as Box<dyn std::io::Write>);
            write_rows(&mut w)?;
            let kernel_n = nmax.min(bound);
            let points = seq.point_count();
            if kernel_n * points * points <= KERNEL_ROW_LIMIT {
                let table = KernelTable::new(&seq)?;
                let mut w = csv::Writer::from_path(out.join("kernel.csv"))?;
                w.write_record(["n", "y", "x", "re", "im"])?;
                for n in 1..=kernel_n {
                    for y in 0..points {
                        for x in 0..points {
                            let k = table.fejer(n, y, x);
                            w.write_record([
                                n.to_string(),
                                y.to_string(),
                                x.to_string(),
                                format!("{:e}", k.re),
                                format!("{:e}", k.im),
                            ])?;
                        }
                    }
                }
                w.flush()?;
            } else {
                eprintln!("kernel.csv skipped: more than {KERNEL_ROW_LIMIT} rows");
            }
            let last = rows.last().unwrap();
            println!(
                "fejer {}: n = 1..{nmax}, final error {:.3e}, wrote {}",
                seq.label(),
                last.error,
                out.display()
            );
        }
    }
    Ok(Outcome::Pass)
}

#[derive(Serialize)]
struct MaximalReport<'a> {
    sequence: String,
    config: &'a RunConfig,
    function: FunctionSpec,
    reports: Vec<BoundReport>,
    failing: Vec<String>,
    passed: bool,
}

fn combination(r: &BoundReport) -> String {
    let mut s = r.id.name().to_string();
    if let Some(a) = r.a {
        s.push_str(&format!(" A={a}"));
    }
    if let Some(v) = r.s {
        s.push_str(&format!(" s={v}"));
    }
    s
}

pub fn maximal(cfg: &RunConfig) -> Result<Outcome, Invalid> {
    let seq = cfg.sequence()?;
    let ids: Vec<BoundId> = if cfg.check.is_empty() {
        BoundId::ALL.to_vec()
    } else {
        cfg.check.iter().map(|c| c.parse().map_err(Invalid::from)).collect::<Result<_, _>>()?
    };
    let default = FunctionSpec::random(cfg.seed, RandomKind::Positive);
    let (spec, f) = cfg.function_or(&seq, default)?;
    let mut opts = DykstraOptions::default();
    if let Some(t) = cfg.tol {
        opts.tol = t;
    }
    let nmax = cfg.nmax.or(Some(default_nmax(&seq)));
    let mut reports = Vec::new();
    for &id in &ids {
        reports.extend(check_bound_all(&seq, id, &f, nmax, &opts)?);
    }

    println!("maximal {} (L = {}, d = {}, rho = {})", seq.label(), seq.depth(), cfg.dim, seq.rho());
    println!("{:<22}{:>8}{:>14}{:>14}{:>12}  result", "bound", "kind", "estimate", "bound", "ratio");
    let mut failing = Vec::new();
    for r in &reports {
        let kind = match r.estimate_kind {
            tdfejer_core::EstimateKind::Exact => "exact",
            tdfejer_core::EstimateKind::Lower => "lower",
        };
        println!(
            "{:<22}{:>8}{:>14.6e}{:>14.6e}{:>12.4}  {}",
            combination(r),
            kind,
            r.estimate,
            r.bound,
            r.ratio,
            if r.pass { "pass" } else { "FAIL" }
        );
        if !r.pass {
            failing.push(combination(r));
        }
    }
    for c in &failing {
        println!("failed: {c}");
    }
    let passed = failing.is_empty();
    if let Some(out) = &cfg.out {
        fs::create_dir_all(out)?;
        let mut w = csv::Writer::from_path(out.join("maximal.csv"))?;
        w.write_record(["id", "A", "s", "estimate_kind", "estimate", "bound", "ratio", "pass"])?;
        for r in &reports {
            w.write_record([
                r.id.name().to_string(),
                r.a.map(|v| v.to_string()).unwrap_or_default(),
                r.s.map(|v| v.to_string()).unwrap_or_default(),
                format!("{:?}", r.estimate_kind).to_lowercase(),
                format!("{:e}", r.estimate),
                format!("{:e}", r.bound),
                format!("{:e}", r.ratio),
                r.pass.to_string(),
            ])?;
        }
        w.flush()?;
        let report = MaximalReport {
            sequence: seq.label(),
            config: cfg,
            function: spec,
            reports,
            failing,
            passed,
        };
        write_json(out, "maximal.json", &report)?;
    }
    Ok(if passed { Outcome::Pass } else { Outcome::Fail })
}

pub fn export(cfg: &RunConfig) -> Result<Outcome, Invalid> {
    let out = cfg
        .out
        .as_ref()
        .ok_or_else(|| Invalid("export needs --out".into()))?;
    let seq = cfg.sequence()?;
    fs::create_dir_all(out)?;
    let mut written = Vec::new();
    for f in seq.factors() {
        let name = format!("{}.tbl", f.group.label());
        if !written.contains(&name) {
            fs::write(out.join(&name), f.group.to_cayley_text())?;
            written.push(name);
        }
    }
    write_json(out, "characters.json", &group_report(&seq))?;
    let default = FunctionSpec::random(cfg.seed, RandomKind::General);
    let (_, f) = cfg.function_or(&seq, default)?;
    let mut text = f.to_json(&seq)?;
    text.push('\n');
    fs::write(out.join("function.json"), text)?;
    println!("exported {} to {}", seq.label(), out.display());
    Ok(Outcome::Pass)
}
