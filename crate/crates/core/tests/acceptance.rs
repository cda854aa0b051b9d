//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::process::ExitCode;

use common::{chain, clarabel_join_2x2, frobenius, s3_chain};
use rand::Rng;
use tdfejer_core::bounds::{admissible_params, check_bound_all, EstimateKind};
use tdfejer_core::group::character_table_seeded;
use tdfejer_core::linalg::{self, real_diagonal};
use tdfejer_core::random::{random_class_function, random_matrix, stream_rng, RandomKind};
use tdfejer_core::{
    character_table, check_bound, check_identity, dirichlet_kernel, inner_product, loewner_join, norm2,
    validate_character_table, BoundId, BoundParams, CMatrix, CharacterGrid, ClassFunction, DykstraOptions,
    FiniteGroup, GroupSequence, IdentityId, IdentityInputs,
};

const SEED: u64 = 20_240_601;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn character_systems() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut degrees_ok = true;
    for name in ["Z2", "Z3", "S3", "D4", "Q8"] {
        let g = FiniteGroup::from_catalog_name(name).unwrap();
        let classes = g.conjugacy_classes();
        let table = character_table(&g, &classes).unwrap();
        let report = validate_character_table(&table, &classes);
        worst = worst.max(report.row_orthonormality).max(report.column_orthogonality);
        degrees_ok &= table.degrees.iter().map(|d| d * d).sum::<usize>() == g.order();
    }
    let seq = s3_chain(3);
    let chars: Vec<ClassFunction> = (0..seq.index_bound())
        .map(|n| ClassFunction::character(&seq, n).unwrap())
        .collect();
    let mut gram: f64 = 0.0;
    for (i, a) in chars.iter().enumerate() {
        for (j, b) in chars.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            gram = gram.max((inner_product(&seq, a, b).unwrap() - target).norm());
        }
    }
    outcome(
        worst <= 1e-9 && degrees_ok && gram <= 1e-9,
        format!("orthogonality {worst:.2e}, degree sums exact: {degrees_ok}, S3 chain gram {gram:.2e}"),
    )
}

fn kernel_identities() -> Outcome {
    let seq = s3_chain(3);
    let n = seq.point_count();
    let lemma42 = check_identity(
        &seq,
        IdentityId::Lemma42,
        &IdentityInputs {
            indices: Some((0..=3).collect()),
            tolerance: Some(1e-9),
            ..Default::default()
        },
    )
    .unwrap();
    let mut rng = stream_rng(SEED, "acceptance-pairs");
    let pairs: Vec<(usize, usize)> = (0..20).map(|_| (rng.random_range(0..n), rng.random_range(0..n))).collect();
    let lemma41 = check_identity(
        &seq,
        IdentityId::Lemma41,
        &IdentityInputs {
            pairs: Some(pairs),
            indices: Some((0..seq.index_bound()).collect()),
            tolerance: Some(1e-8),
            ..Default::default()
        },
    )
    .unwrap();
    let block = check_identity(
        &seq,
        IdentityId::BlockFormula,
        &IdentityInputs {
            indices: Some(seq.block(2).unwrap().collect()),
            tolerance: Some(1e-8),
            ..Default::default()
        },
    )
    .unwrap();
    outcome(
        lemma42.passed && lemma41.passed && block.passed,
        format!(
            "lemma42 {:.2e}, lemma41 {:.2e}, block_formula {:.2e}",
            lemma42.max_residual, lemma41.max_residual, block.max_residual
        ),
    )
}

fn mean_identities() -> Outcome {
    let seq = s3_chain(3);
    let ids = [
        IdentityId::Lemma43,
        IdentityId::Lemma31,
        IdentityId::Lemma34a,
        IdentityId::Lemma34b,
        IdentityId::Plancherel,
        IdentityId::SquareFunction,
    ];
    let mut worst = vec![0.0f64; ids.len()];
    let mut pass = true;
    for dim in [1, 2] {
        let mut rng = stream_rng(SEED, &format!("acceptance-means-d{dim}"));
        for _ in 0..50 {
            let f = random_class_function(&seq, dim, RandomKind::General, &mut rng);
            for (slot, id) in ids.iter().enumerate() {
                let r = check_identity(
                    &seq,
                    *id,
                    &IdentityInputs {
                        function: Some(&f),
                        tolerance: Some(1e-8),
                        ..Default::default()
                    },
                )
                .unwrap();
                worst[slot] = worst[slot].max(r.max_residual);
                pass &= r.passed;
            }
        }
    }
    let detail = ids
        .iter()
        .zip(&worst)
        .map(|(id, w)| format!("{id} {w:.2e}"))
        .collect::<Vec<_>>()
        .join(", ");
    outcome(pass, detail)
}

fn doob() -> Outcome {
    let seq = s3_chain(3);
    let opts = DykstraOptions::default();
    let mut pass = true;
    let mut max_ratio: f64 = 0.0;
    for dim in [1, 2] {
        let mut rng = stream_rng(SEED, &format!("acceptance-doob-d{dim}"));
        for _ in 0..50 {
            let f = random_class_function(&seq, dim, RandomKind::Positive, &mut rng);
            let r = check_bound(&seq, BoundId::Doob, &f, &BoundParams::default(), &opts).unwrap();
            pass &= r.pass && r.estimate_kind == EstimateKind::Exact;
            max_ratio = max_ratio.max(r.ratio);
        }
    }
    outcome(
        pass && max_ratio > 1.0,
        format!("100 functions, largest ||sup E_k f|| / ||f|| = {max_ratio:.4} (bound 2, witness > 1)"),
    )
}

fn lemma44() -> Outcome {
    let seq = s3_chain(3);
    let opts = DykstraOptions::default();
    let mut pass = true;
    let mut max_ratio: f64 = 0.0;
    let mut combos = 0;
    for dim in [1, 2] {
        let mut rng = stream_rng(SEED, &format!("acceptance-lemma44-d{dim}"));
        for _ in 0..20 {
            let f = random_class_function(&seq, dim, RandomKind::General, &mut rng);
            for r in check_bound_all(&seq, BoundId::Lemma44, &f, None, &opts).unwrap() {
                let expected = if dim == 1 { EstimateKind::Exact } else { EstimateKind::Lower };
                pass &= r.pass && r.estimate_kind == expected;
                max_ratio = max_ratio.max(r.ratio);
                combos += 1;
            }
        }
    }
    outcome(
        pass && combos == 2 * 20 * admissible_params(&seq, BoundId::Lemma44, None).len(),
        format!("{combos} (f, A, s) cases, largest ratio {max_ratio:.4} (bound 1)"),
    )
}

fn quantitative_bounds() -> Outcome {
    let seq = s3_chain(3);
    let opts = DykstraOptions::default();
    let mut pass = true;
    let mut parts = Vec::new();
    for id in [BoundId::Prop12, BoundId::Prop13, BoundId::Thm11] {
        let mut worst_slack: f64 = 0.0;
        let mut max_ratio: f64 = 0.0;
        for dim in [1, 2] {
            let mut rng = stream_rng(SEED, &format!("acceptance-{id}-d{dim}"));
            for _ in 0..5 {
                let f = random_class_function(&seq, dim, RandomKind::General, &mut rng);
                for r in check_bound_all(&seq, id, &f, Some(4 * seq.index_bound()), &opts).unwrap() {
                    pass &= r.pass;
                    if dim == 1 {
                        pass &= r.estimate_kind == EstimateKind::Exact;
                    }
                    max_ratio = max_ratio.max(r.ratio);
                    worst_slack = worst_slack.max(r.estimate / r.bound);
                }
            }
        }
        parts.push(format!("{id} ratio {max_ratio:.3} (estimate/bound {worst_slack:.2e})"));
    }
    outcome(pass, parts.join(", "))
}

fn solver_oracle() -> Outcome {
    let opts = DykstraOptions::default();
    let mut rng = stream_rng(SEED, "acceptance-oracle");
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let a = random_matrix(&mut rng, 2, RandomKind::Positive);
        let b = random_matrix(&mut rng, 2, RandomKind::Positive);
        let oracle = clarabel_join_2x2(&[a.clone(), b.clone()]);
        let join = loewner_join(&[a, b], &opts).unwrap();
        worst = worst.max(frobenius(&(join.matrix - oracle)));
    }
    let mut diag_worst: f64 = 0.0;
    for _ in 0..20 {
        let diags: Vec<Vec<f64>> = (0..4).map(|_| (0..3).map(|_| rng.random_range(0.0..2.0)).collect()).collect();
        let mats: Vec<CMatrix> = diags.iter().map(|d| real_diagonal(d)).collect();
        let max: Vec<f64> = (0..3).map(|i| diags.iter().map(|d| d[i]).fold(0.0, f64::max)).collect();
        let join = loewner_join(&mats, &opts).unwrap();
        diag_worst = diag_worst.max(linalg::frobenius(&(join.matrix - real_diagonal(&max))));
    }
    outcome(
        worst <= 1e-5 && diag_worst <= 1e-7,
        format!("convex oracle distance {worst:.2e}, diagonal maxima distance {diag_worst:.2e}"),
    )
}

fn walsh() -> Outcome {
    let seq = chain(&["Z2"], 4);
    let grid = CharacterGrid::new(&seq);
    let mut rng = stream_rng(SEED, "acceptance-walsh");
    let mut reproduce: f64 = 0.0;
    let mut decay: f64 = 0.0;
    for _ in 0..10 {
        let f = random_class_function(&seq, 1, RandomKind::General, &mut rng);
        let scale = norm2(&seq, &f).unwrap();
        let partial = grid.dirichlet_prefix(&f).unwrap();
        reproduce = reproduce.max(partial[16].max_distance(&f).unwrap() / scale);
        // past 2^4 the Fejer error decays exactly like 16 / n
        let sigma = grid.fejer_sequence(&f, 64).unwrap();
        let base = norm2(&seq, &sigma[15].sub(&f).unwrap()).unwrap();
        for n in 16..=64 {
            let err = norm2(&seq, &sigma[n - 1].sub(&f).unwrap()).unwrap();
            decay = decay.max((err - 16.0 / n as f64 * base).abs() / scale);
        }
    }
    let mut kernel: f64 = 0.0;
    for k in 0..=4 {
        let n = 1usize << k;
        for y in seq.points() {
            for x in seq.points() {
                let inside = (0..k).all(|i| y.labels[i] == x.labels[i]);
                let expected = if inside { n as f64 } else { 0.0 };
                kernel = kernel.max((dirichlet_kernel(&seq, n, y, x).unwrap() - expected).norm());
            }
        }
    }
    outcome(
        reproduce <= 1e-10 && decay <= 1e-10 && kernel <= 1e-10,
        format!("S_16 f = f {reproduce:.2e}, sigma_n error = 16/n * base {decay:.2e}, dyadic kernels {kernel:.2e}"),
    )
}

fn suite_report(seed: u64) -> String {
    let seq: GroupSequence = s3_chain(3);
    let mut rng = stream_rng(seed, "acceptance-determinism");
    let f = random_class_function(&seq, 2, RandomKind::Positive, &mut rng);
    let opts = DykstraOptions::default();
    let identities: Vec<_> = IdentityId::ALL
        .iter()
        .map(|id| {
            check_identity(
                &seq,
                *id,
                &IdentityInputs {
                    function: Some(&f),
                    ..Default::default()
                },
            )
            .unwrap()
        })
        .collect();
    let bounds: Vec<_> = [BoundId::Doob, BoundId::Lemma44, BoundId::Prop13]
        .iter()
        .flat_map(|id| check_bound_all(&seq, *id, &f, None, &opts).unwrap())
        .collect();
    let g = FiniteGroup::from_catalog_name("Q8").unwrap();
    let table = character_table_seeded(&g, &g.conjugacy_classes(), seed).unwrap();
    serde_json::to_string_pretty(&(identities, bounds, table)).unwrap()
}

fn determinism() -> Outcome {
    let a = suite_report(SEED);
    let b = suite_report(SEED);
    outcome(a == b, format!("{} report bytes, identical: {}", a.len(), a == b))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("character systems", character_systems),
        ("kernel identities", kernel_identities),
        ("mean and martingale identities", mean_identities),
        ("doob estimate", doob),
        ("modulated conjugacy averages", lemma44),
        ("prop12 / prop13 / thm11 bounds", quantitative_bounds),
        ("solver oracle equivalence", solver_oracle),
        ("walsh regression", walsh),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {}: {status} {name}: {}", i + 1, o.detail);
        if !o.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
