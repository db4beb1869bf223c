//! Acceptance criteria. Prints one line per criterion and exits non-zero
//! on any unexpected outcome.

mod common;

use std::f64::consts::FRAC_PI_4;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anisofem::bench::{
    catalog, graded_family, loglog_slope, run_case, superapprox_rate, uniform_family, CaseId, HessianMode, TableRow,
};
use anisofem::estimators::{bank_smith_local, interp_h1_local, interp_l2_local};
use anisofem::fem::interpolate;
use anisofem::hessian::{convergence_delta, recover_hessian_qf};
use anisofem::mesh::{generate_graded, CellGeometry, Grading, Rect};
use anisofem::quadrature::{high_order_rule, integrate_cell_bary, midpoint_rule};
use anisofem::{Sym2, Vec2};
use common::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

/// Criteria that cannot be met as stated, with the reason.
const EXPECTED_FAILURES: [(u32, &str); 2] = [
    (2, "7/30 is not the integral of (x²+y²-x-y)² over the reference triangle; direct integration gives 11/180"),
    (
        9,
        "on this mesh family u_h equals u_I at every node, so ‖∇(u_I-u_h)‖ is rounding noise and no exponent can be fitted",
    ),
];

fn reference() -> CellGeometry<f64> {
    CellGeometry::from_points([Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)]).unwrap()
}

fn c1_oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(1);
    let rule = midpoint_rule::<f64>();
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let g = random_triangle(&mut rng);
        let h = random_sym(&mut rng);
        let thm = interp_h1_local(&g, &h);
        let bs = bank_smith_local(&g, &h);
        let quad = integrate_cell_bary(&rule, &g, |_, b| quadratic_grad_error(&g, &h, b).norm_sq());
        let scale = thm.abs().max(bs.abs()).max(quad.abs());
        worst = worst.max((thm - bs).abs() / scale).max((thm - quad).abs() / scale);
    }
    let elapsed = start.elapsed();
    let reference = interp_h1_local(&reference(), &Sym2::scaled_identity(2.0));
    let ref_err = (reference - 1.0 / 3.0).abs();
    Outcome::new(
        worst <= 1e-11 && ref_err <= 1e-14 && elapsed < Duration::from_secs(5),
        format!("max rel. disagreement {worst:.2e}; reference value {reference} (|Δ| {ref_err:.1e}); {elapsed:.2?}"),
    )
}

fn c2_nadler_identity() -> Outcome {
    let mut rng = StdRng::seed_from_u64(2);
    let rule = high_order_rule::<f64>();
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let g = random_triangle(&mut rng);
        let h = random_semidefinite(&mut rng);
        let closed = interp_l2_local(&g, &h);
        let quad = integrate_cell_bary(&rule, &g, |_, b| quadratic_error(&g, &h, b).powi(2));
        worst = worst.max((closed - quad).abs() / closed.abs().max(quad.abs()));
    }
    let value = interp_l2_local(&reference(), &Sym2::scaled_identity(2.0));
    let quadrature_ok = worst <= 1e-11;
    let literal_ok = (value - 7.0 / 30.0).abs() <= 1e-14;
    Outcome::new(
        quadrature_ok && literal_ok,
        format!(
            "max rel. disagreement with quadrature {worst:.2e} ({}); reference value {value:.15} vs 7/30 = {:.15}, 11/180 = {:.15}",
            if quadrature_ok { "ok" } else { "too large" },
            7.0 / 30.0,
            11.0 / 180.0
        ),
    )
}

fn c3_delta_formula() -> Outcome {
    let a: f64 = convergence_delta(172.773, 3744, 92.8695, 8664).unwrap();
    let b: f64 = convergence_delta(62.0580, 272, 34.0592, 278).unwrap();
    Outcome::new(
        (a - 1.48).abs() <= 0.01 && (b - 55.0).abs() <= 0.5,
        format!("δ = {a:.4} and {b:.3}"),
    )
}

fn ex43_uniform(ns: &[usize]) -> (Vec<TableRow<f64>>, Vec<anisofem::bench::RowDetail<f64>>) {
    let case = catalog::<f64>(CaseId::Ex43);
    let meshes = uniform_family(case.domain, ns).unwrap();
    run_case(&case, &meshes, HessianMode::Both, Default::default()).into_result().unwrap()
}

fn c4_fem_convergence() -> Outcome {
    let start = Instant::now();
    let ns = [8usize, 16, 32, 64];
    let (_, details) = ex43_uniform(&ns);
    let h1: Vec<(f64, f64)> = ns.iter().zip(&details).map(|(&n, d)| (1.0 / n as f64, d.errors.grad_err)).collect();
    let l2: Vec<(f64, f64)> = ns.iter().zip(&details).map(|(&n, d)| (1.0 / n as f64, d.errors.l2_err)).collect();
    let r1 = loglog_slope(&h1).unwrap();
    let r2 = loglog_slope(&l2).unwrap();
    let elapsed = start.elapsed();
    Outcome::new(
        (r1 - 1.0).abs() <= 0.15 && (r2 - 2.0).abs() <= 0.2 && elapsed < Duration::from_secs(60),
        format!("H¹ rate {r1:.4}, L² rate {r2:.4}; {elapsed:.2?}"),
    )
}

fn c5_asymptotic_exactness() -> Outcome {
    let (rows, _) = ex43_uniform(&[16, 32, 64]);
    let dev: Vec<f64> = rows.iter().map(|r| (r.ei.unwrap() - 1.0).abs()).collect();
    let monotone = dev.windows(2).all(|w| w[1] <= w[0]);
    let last = rows.last().unwrap();
    let e = last.e.unwrap();
    Outcome::new(
        monotone && dev[2] <= 0.15 && (0.85..=1.10).contains(&e),
        format!(
            "EI = {:.5}, {:.5}, {:.5}; E(n=64) = {e:.5}",
            rows[0].ei.unwrap(),
            rows[1].ei.unwrap(),
            rows[2].ei.unwrap()
        ),
    )
}

fn c6_graded_trend() -> Outcome {
    let start = Instant::now();
    let case = catalog::<f64>(CaseId::Ex41);
    let levels: Vec<_> = [(8, 5.0), (16, 10.0), (32, 20.0), (64, 40.0)]
        .iter()
        .map(|&(n, s)| (n, Grading::toward(FRAC_PI_4, 0.85, s, 0.05)))
        .collect();
    let meshes = graded_family(case.domain, &levels).unwrap();
    let max_aspect = (0..meshes[3].num_cells()).map(|k| meshes[3].geometry(k).aspect).fold(0.0, f64::max);
    let (rows, _) = run_case(&case, &meshes, HessianMode::Both, Default::default()).into_result().unwrap();
    let er: Vec<f64> = rows.iter().map(|r| r.e_r.unwrap()).collect();
    let eir: Vec<f64> = rows.iter().map(|r| r.ei_r.unwrap()).collect();
    let increasing = |v: &[f64]| v.windows(2).all(|w| w[1] > w[0]);
    let elapsed = start.elapsed();
    Outcome::new(
        rows.len() >= 4
            && increasing(&er)
            && increasing(&eir)
            && *er.last().unwrap() > 0.7
            && *eir.last().unwrap() > 0.7
            && elapsed < Duration::from_secs(180),
        format!("E_r = {er:.4?}; EI_r = {eir:.4?}; finest max aspect {max_aspect:.1}; {elapsed:.2?}"),
    )
}

fn c7_hessian_recovery() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let n = rng.gen_range(3..9);
        let mesh = jittered_mesh(n, 0.3, &mut rng);
        let h = random_sym(&mut rng);
        let (bx, by, c) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let field = interpolate(&mesh, |p| 0.5 * h.quad(p) + bx * p.x + by * p.y + c);
        let rec = recover_hessian_qf(&mesh, &field).unwrap();
        for r in &rec.values {
            let d = *r - h;
            worst = worst.max(d.xx.abs()).max(d.xy.abs()).max(d.yy.abs());
        }
    }
    let (rows, _) = ex43_uniform(&[8, 16, 32, 64]);
    let errs: Vec<f64> = rows.iter().map(|r| r.h_err.unwrap()).collect();
    let deltas: Vec<f64> = rows.iter().skip(1).map(|r| r.delta.unwrap()).collect();
    let decreasing = errs.windows(2).all(|w| w[1] < w[0]);
    Outcome::new(
        worst <= 1e-9 && decreasing && deltas.iter().all(|&d| d > 0.0),
        format!("quadratic reproduction max error {worst:.2e}; ‖H-H_r‖ = {errs:.4?}; δ = {deltas:.3?}"),
    )
}

fn c8_signed_estimator() -> Outcome {
    let case = catalog::<f64>(CaseId::Ex41);
    // layer along x + y = 0.85, mesh stretched across x = 0.85 instead
    let mesh = generate_graded(8, Rect::unit(), Grading::toward(0.0, 0.85, 20.0, 0.05)).unwrap();
    let run = run_case(&case, std::slice::from_ref(&mesh), HessianMode::Exact, Default::default());
    match run.into_result() {
        Ok((rows, details)) => {
            let report = details[0].exact.as_ref().unwrap();
            let e = rows[0].e.unwrap();
            Outcome::new(
                report.eta_disc_sq_signed < 0.0 && report.eta_disc.is_none() && e < 0.0,
                format!("N = {}: signed η² = {:.4e}, E = {e:.4}", rows[0].n_cells, report.eta_disc_sq_signed),
            )
        }
        Err(err) => Outcome::new(false, format!("pipeline error: {err}")),
    }
}

fn c9_superapproximation() -> Outcome {
    let ns = [8usize, 16, 32, 64];
    let (rows, details) = ex43_uniform(&ns);
    let pts: Vec<(usize, f64)> = rows.iter().zip(&details).map(|(r, d)| (r.n_cells, d.errors.superapprox)).collect();
    let ratio = details.iter().map(|d| d.errors.superapprox / d.errors.interp_grad_err).fold(0.0, f64::max);
    // below this relative size the norm is solver round-off, not a trend
    let resolved = ratio > 1e-8;
    match superapprox_rate(&pts) {
        Ok(fit) => Outcome::new(
            resolved && fit.gamma > 0.0,
            format!(
                "fitted γ = {:.4} (rate {:.4}); max ‖∇(u_I-u_h)‖/‖∇(u-u_I)‖ = {ratio:.1e}{}",
                fit.gamma,
                fit.rate,
                if resolved { "" } else { " (below solver resolution)" }
            ),
        ),
        Err(e) => Outcome::new(false, format!("fit failed: {e}")),
    }
}

fn c10_l_shape() -> Outcome {
    let case = catalog::<f64>(CaseId::Ex45);
    let meshes = uniform_family(case.domain, &[4, 8, 16, 32]).unwrap();
    match run_case(&case, &meshes, HessianMode::Recovered, Default::default()).into_result() {
        Ok((rows, details)) => {
            let finite = details.iter().all(|d| {
                let r = d.recovered.as_ref().unwrap();
                let e = &d.errors;
                [r.eta_i, r.eta_i0, r.eta_disc_sq_signed, e.grad_err, e.l2_err, e.interp_grad_err, e.superapprox]
                    .iter()
                    .all(|v| v.is_finite())
                    && r.per_cell.iter().all(|c| c.eta_i_sq.is_finite() && c.eta_disc_sq.is_finite())
            }) && rows.iter().all(|r| r.e_r.unwrap().is_finite() && r.ei_r.unwrap().is_finite());
            let eir: Vec<f64> = rows.iter().map(|r| r.ei_r.unwrap()).collect();
            let er: Vec<f64> = rows.iter().map(|r| r.e_r.unwrap()).collect();
            Outcome::new(
                finite && eir.iter().all(|&v| v > 0.0),
                format!("EI_r = {eir:.4?}; E_r = {er:.4?}; all fields finite: {finite}"),
            )
        }
        Err(e) => Outcome::new(false, format!("pipeline error: {e}")),
    }
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Outcome); 10] = [
        (1, "oracle equivalence of the H¹ interpolation error", c1_oracle_equivalence),
        (2, "L² interpolation identity and reference value 7/30", c2_nadler_identity),
        (3, "rate δ reproduces tabulated values", c3_delta_formula),
        (4, "P1 convergence rates, example 4.3", c4_fem_convergence),
        (5, "asymptotic exactness trend, example 4.3", c5_asymptotic_exactness),
        (6, "graded-mesh trend of E_r and EI_r, example 4.1", c6_graded_trend),
        (7, "Hessian recovery", c7_hessian_recovery),
        (8, "negative signed estimator on a mismatched mesh", c8_signed_estimator),
        (9, "superapproximation exponent γ > 0, example 4.3", c9_superapproximation),
        (10, "L-shaped domain with recovered Hessian, example 4.5", c10_l_shape),
    ];
    let mut unexpected = 0;
    for (id, name, check) in criteria {
        let outcome = check();
        let expected = EXPECTED_FAILURES.iter().find(|(c, _)| *c == id);
        let status = match (outcome.pass, expected) {
            (true, None) => "PASS",
            (false, Some(_)) => "FAIL (expected)",
            (false, None) => {
                unexpected += 1;
                "FAIL"
            }
            (true, Some(_)) => {
                unexpected += 1;
                "PASS (unexpected)"
            }
        };
        println!("criterion {id:>2} {status}: {name}: {}", outcome.detail);
        if let Some((_, why)) = expected {
            println!("             reason: {why}");
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} criteria with unexpected outcome");
        ExitCode::FAILURE
    }
}
