#![allow(dead_code)]

use clarabel::algebra::CscMatrix;
use clarabel::solver::{DefaultSettings, DefaultSolver, IPSolver, SolverStatus, SupportedConeT};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use tdfejer_core::sequence::GroupSpec;
use tdfejer_core::{CMatrix, GroupSequence};

pub fn chain(names: &[&str], depth: usize) -> GroupSequence {
    let pattern: Vec<GroupSpec> = names.iter().map(|n| GroupSpec::Catalog(n.parse().unwrap())).collect();
    GroupSequence::new(&pattern, depth).unwrap()
}

pub fn s3_chain(depth: usize) -> GroupSequence {
    chain(&["S3"], depth)
}

fn light_cone_coords(m: &CMatrix) -> [f64; 4] {
    [
        (m[(0, 0)].re + m[(1, 1)].re) / 2.0,
        (m[(0, 0)].re - m[(1, 1)].re) / 2.0,
        m[(0, 1)].re,
        m[(0, 1)].im,
    ]
}

fn from_light_cone(p: &[f64]) -> CMatrix {
    CMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(p[0] + p[1], 0.0),
            Complex64::new(p[2], p[3]),
            Complex64::new(p[2], -p[3]),
            Complex64::new(p[0] - p[1], 0.0),
        ],
    )
}

/// Interior point solution of the join problem in light-cone coordinates
/// `t = tr(Y)/2`, `x = ((a - e)/2, Re y01, Im y01)`, where the PSD cone is
/// `t >= |x|` and `||Y||_F^2 = 2(t^2 + |x|^2)`.
fn clarabel_light_cone(apexes: &[[f64; 4]]) -> [f64; 4] {
    let p = CscMatrix::from(&[
        [2.0, 0.0, 0.0, 0.0],
        [0.0, 2.0, 0.0, 0.0],
        [0.0, 0.0, 2.0, 0.0],
        [0.0, 0.0, 0.0, 2.0],
    ]);
    let q = vec![0.0; 4];
    let mut rows: Vec<[f64; 4]> = Vec::new();
    let mut rhs = Vec::new();
    let mut cones = Vec::new();
    for apex in apexes {
        for (i, v) in apex.iter().enumerate() {
            let mut row = [0.0; 4];
            row[i] = -1.0;
            rows.push(row);
            rhs.push(-v);
        }
        cones.push(SupportedConeT::SecondOrderConeT(4));
    }
    let a = CscMatrix::from(&rows);
    [1e-12, 1e-11, 1e-10, 1e-9]
        .iter()
        .find_map(|&tol| {
            let settings = DefaultSettings {
                verbose: false,
                tol_gap_abs: tol,
                tol_gap_rel: tol,
                tol_feas: tol,
                max_iter: 400,
                ..DefaultSettings::default()
            };
            let mut solver = DefaultSolver::new(&p, &q, &a, &rhs, &cones, settings).unwrap();
            solver.solve();
            (solver.solution.status == SolverStatus::Solved).then(|| {
                let x = &solver.solution.x;
                [x[0], x[1], x[2], x[3]]
            })
        })
        .expect("clarabel did not solve the join at any tolerance")
}

/// `t - t_k - |x - x_k|`, nonnegative on the cone with apex `k`.
fn cone_slack(p: &[f64; 4], apex: &[f64; 4]) -> f64 {
    let r = ((p[1] - apex[1]).powi(2) + (p[2] - apex[2]).powi(2) + (p[3] - apex[3]).powi(2)).sqrt();
    p[0] - apex[0] - r
}

/// Newton's method on the KKT system of `min |p|^2` subject to
/// `g_k(p) = (t - t_k)^2 - |x - x_k|^2 = 0` for the active cones.
fn kkt_newton(start: [f64; 4], active: &[[f64; 4]]) -> Option<[f64; 4]> {
    let n = 4 + active.len();
    let grad = |p: &DVector<f64>, apex: &[f64; 4]| {
        DVector::from_vec(vec![
            2.0 * (p[0] - apex[0]),
            -2.0 * (p[1] - apex[1]),
            -2.0 * (p[2] - apex[2]),
            -2.0 * (p[3] - apex[3]),
        ])
    };
    let mut p = DVector::from_row_slice(&start);
    // multipliers from least squares on 2p = sum mu_k grad g_k
    let g = DMatrix::from_columns(&active.iter().map(|a| grad(&p, a)).collect::<Vec<_>>());
    let mut mu = g.clone().svd(true, true).solve(&(&p * 2.0), 1e-14).ok()?;
    for _ in 0..50 {
        let mut f = DVector::zeros(n);
        let mut jac = DMatrix::zeros(n, n);
        let mut stat = &p * 2.0;
        for i in 0..4 {
            jac[(i, i)] = 2.0;
        }
        for (k, apex) in active.iter().enumerate() {
            let gk = grad(&p, apex);
            stat -= &gk * mu[k];
            let sign = [1.0, -1.0, -1.0, -1.0];
            for i in 0..4 {
                jac[(i, i)] -= 2.0 * sign[i] * mu[k];
                jac[(i, 4 + k)] = -gk[i];
                jac[(4 + k, i)] = gk[i];
            }
            f[4 + k] = (p[0] - apex[0]).powi(2)
                - (p[1] - apex[1]).powi(2)
                - (p[2] - apex[2]).powi(2)
                - (p[3] - apex[3]).powi(2);
        }
        f.rows_mut(0, 4).copy_from(&stat);
        let step = jac.lu().solve(&(-&f))?;
        p += step.rows(0, 4);
        mu += step.rows(4, active.len());
        if step.norm() < 1e-15 * (1.0 + p.norm()) {
            break;
        }
    }
    Some([p[0], p[1], p[2], p[3]])
}

/// Least-Frobenius common Loewner majorant of 2x2 Hermitian PSD matrices.
///
/// Clarabel solves the second-order cone program; its interior iterate sits
/// a distance of order `sqrt(gap)` from the optimum along the curved cone
/// boundary, so the active set it identifies is then solved exactly by
/// Newton's method on the KKT equations.
pub fn clarabel_join_2x2(mats: &[CMatrix]) -> CMatrix {
    let apexes: Vec<[f64; 4]> = mats.iter().map(light_cone_coords).collect();
    let rough = clarabel_light_cone(&apexes);
    let scale = 1.0 + rough.iter().map(|v| v * v).sum::<f64>().sqrt();
    let feasible = |p: &[f64; 4]| apexes.iter().all(|a| cone_slack(p, a) >= -1e-12 * scale);
    let objective = |p: &[f64; 4]| p.iter().map(|v| v * v).sum::<f64>();
    // optimum at an apex that dominates every other member
    for apex in &apexes {
        let dist = apex.iter().zip(&rough).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        if dist < 1e-4 * scale && feasible(apex) {
            return from_light_cone(apex);
        }
    }
    let active: Vec<[f64; 4]> = apexes
        .iter()
        .filter(|a| cone_slack(&rough, a) < 1e-4 * scale)
        .copied()
        .collect();
    let refined = kkt_newton(rough, &active).expect("singular KKT system");
    assert!(feasible(&refined), "refined point left the feasible set");
    assert!(objective(&refined) <= objective(&rough) + 1e-9 * scale * scale);
    from_light_cone(&refined)
}

pub fn frobenius(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Real symmetric 2x2 join by exhaustive grid search over `[lo, hi]^2 x [-w, w]`.
pub fn grid_join_real_2x2(mats: &[[f64; 3]], lo: f64, hi: f64, w: f64, steps: usize) -> [f64; 3] {
    let mut best = [f64::NAN; 3];
    let mut best_obj = f64::INFINITY;
    let at = |i: usize, from: f64, to: f64| from + (to - from) * i as f64 / steps as f64;
    for i in 0..=steps {
        for j in 0..=steps {
            for k in 0..=steps {
                let (a, e, b) = (at(i, lo, hi), at(j, lo, hi), at(k, -w, w));
                let feasible = mats.iter().all(|m| {
                    let (da, de, db) = (a - m[0], e - m[1], b - m[2]);
                    da >= -1e-12 && de >= -1e-12 && da * de - db * db >= -1e-12
                });
                let obj = a * a + e * e + 2.0 * b * b;
                if feasible && obj < best_obj {
                    best_obj = obj;
                    best = [a, e, b];
                }
            }
        }
    }
    best
}
