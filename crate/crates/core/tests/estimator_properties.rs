mod common;

use anisofem::estimators::{
    bank_smith_local, disc_estimator, interp_h1_local, interp_l2_local, interpolation_report,
};
use anisofem::fem::{cell_gradient, interpolate, ExactSolution, ProblemSpec};
use anisofem::hessian::HessianField;
use anisofem::mesh::{generate_uniform, CellGeometry, Rect};
use anisofem::quadrature::{high_order_rule, integrate_cell_bary, midpoint_rule};
use anisofem::{Sym2, Vec2};
use common::*;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use std::sync::Arc;

fn triangle() -> impl Strategy<Value = CellGeometry<f64>> {
    prop::array::uniform3((-1.0..1.0f64, -1.0..1.0f64))
        .prop_filter_map("degenerate", |p| {
            let mut a = p.map(|(x, y)| Vec2::new(x, y));
            let area2 = (a[1] - a[0]).cross(a[2] - a[0]);
            if area2.abs() < 1e-3 {
                return None;
            }
            if area2 < 0.0 {
                a.swap(1, 2);
            }
            CellGeometry::from_points(a).ok()
        })
}

fn sym() -> impl Strategy<Value = Sym2<f64>> {
    (-5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64).prop_map(|(a, b, c)| Sym2::new(a, b, c))
}

fn semidefinite() -> impl Strategy<Value = Sym2<f64>> {
    (0.0..5.0f64, 0.0..5.0f64, 0.0..std::f64::consts::TAU, any::<bool>()).prop_map(|(l1, l2, t, neg)| {
        let s = if neg { -1.0 } else { 1.0 };
        Sym2::new(s * l1, 0.0, s * l2).rotated(t)
    })
}

fn moved(g: &CellGeometry<f64>, angle: f64, shift: Vec2<f64>, scale: f64) -> CellGeometry<f64> {
    let (s, c) = angle.sin_cos();
    CellGeometry::from_points(g.a.map(|p| Vec2::new(c * p.x - s * p.y, s * p.x + c * p.y) * scale + shift)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn h1_closed_forms_agree_with_quadrature(g in triangle(), h in sym()) {
        let thm = interp_h1_local(&g, &h);
        let bs = bank_smith_local(&g, &h);
        let quad = integrate_cell_bary(&midpoint_rule(), &g, |_, b| quadratic_grad_error(&g, &h, b).norm_sq());
        prop_assert!(rel_close(thm, bs, 1e-11), "{thm} vs {bs}");
        prop_assert!(rel_close(thm, quad, 1e-11), "{thm} vs {quad}");
    }

    #[test]
    fn l2_identity_agrees_with_quadrature(g in triangle(), h in semidefinite()) {
        let closed = interp_l2_local(&g, &h);
        let quad = integrate_cell_bary(&high_order_rule(), &g, |_, b| quadratic_error(&g, &h, b).powi(2));
        prop_assert!(rel_close(closed, quad, 1e-11), "{closed} vs {quad}");
    }

    #[test]
    fn l2_identity_holds_for_indefinite_hessians(g in triangle(), h in sym()) {
        let closed = interp_l2_local(&g, &h);
        let quad = integrate_cell_bary(&high_order_rule(), &g, |_, b| quadratic_error(&g, &h, b).powi(2));
        prop_assert!(closed >= 0.0);
        prop_assert!((closed - quad).abs() <= 1e-11 * quad.max(1e-12));
    }

    #[test]
    fn rigid_motion_invariance(
        g in triangle(),
        h in sym(),
        angle in 0.0..std::f64::consts::TAU,
        sx in -10.0..10.0f64,
        sy in -10.0..10.0f64,
    ) {
        let m = moved(&g, angle, Vec2::new(sx, sy), 1.0);
        let hm = h.rotated(angle);
        prop_assert!(rel_close(interp_h1_local(&g, &h), interp_h1_local(&m, &hm), 1e-11));
        let (a, b) = (interp_l2_local(&g, &h), interp_l2_local(&m, &hm));
        prop_assert!((a - b).abs() <= 1e-11 * a.abs().max(b.abs()).max(1e-12));
    }

    #[test]
    fn quartic_scaling(g in triangle(), h in sym(), s in 0.01..100.0f64) {
        let m = moved(&g, 0.0, Vec2::zero(), s);
        prop_assert!(rel_close(interp_h1_local(&m, &h), s.powi(4) * interp_h1_local(&g, &h), 1e-11));
    }

    #[test]
    fn linear_plus_xy_makes_the_signed_estimator_exact(
        seed in any::<u64>(),
        n in 2usize..5,
        k in -3.0..3.0f64,
        bx in -1.0..1.0f64,
        by in -1.0..1.0f64,
    ) {
        // boundary edges are axis-aligned, so ℓ·Hℓ = 0 there and u - u_I
        // vanishes on the boundary; every term of the identity is exact
        let mut rng = StdRng::seed_from_u64(seed);
        let mesh = jittered_mesh(n, 0.25, &mut rng);
        prop_assume!(mesh.num_cells() <= 32);
        let u = move |p: Vec2<f64>| k * p.x * p.y + bx * p.x + by * p.y;
        let grad = move |p: Vec2<f64>| Vec2::new(k * p.y + bx, k * p.x + by);
        let h = Sym2::new(0.0, k, 0.0);
        let problem = ProblemSpec::poisson(|_| 0.0, u).with_exact(ExactSolution {
            u: Arc::new(u),
            grad: Arc::new(grad),
            hessian: Some(Arc::new(move |_| h)),
        });
        let u_i = interpolate(&mesh, u);
        let report = disc_estimator(&mesh, &u_i, &HessianField::constant(&mesh, h), &problem).unwrap();
        let rule = high_order_rule::<f64>();
        let direct: f64 = (0..mesh.num_cells())
            .map(|c| {
                let gi = cell_gradient(&mesh, &u_i, c);
                integrate_cell_bary(&rule, &mesh.geometry(c), |p, _| (grad(p) - gi).norm_sq())
            })
            .sum();
        prop_assert!((report.eta_disc_sq_signed - direct).abs() <= 1e-10 * direct.max(1e-12),
            "{} vs {direct}", report.eta_disc_sq_signed);
        prop_assert!((report.eta_i * report.eta_i - direct).abs() <= 1e-10 * direct.max(1e-12));
    }
}

#[test]
fn zero_hessian_zeroes_every_estimator() {
    let mesh = generate_uniform::<f64>(4, Rect::unit()).unwrap();
    let zero = HessianField::constant(&mesh, Sym2::zero());
    let problem = ProblemSpec::poisson(|p: Vec2<f64>| p.x, |_| 0.0);
    let u = anisofem::fem::solve(&mesh, &problem, Default::default()).unwrap();
    let r = disc_estimator(&mesh, &u, &zero, &problem).unwrap();
    assert_eq!((r.eta_i, r.eta_i0, r.eta_disc_sq_signed), (0.0, 0.0, 0.0));
    let r = interpolation_report(&mesh, &zero).unwrap();
    assert_eq!((r.eta_i, r.eta_i0), (0.0, 0.0));
}

#[test]
fn global_values_are_sums_of_cells() {
    let mut rng = StdRng::seed_from_u64(11);
    let mesh = jittered_mesh(6, 0.3, &mut rng);
    let field = HessianField {
        values: (0..mesh.num_vertices()).map(|_| random_sym(&mut rng)).collect(),
    };
    let r = interpolation_report(&mesh, &field).unwrap();
    let h1: f64 = r.per_cell.iter().map(|c| c.eta_i_sq).sum();
    let l2: f64 = r.per_cell.iter().map(|c| c.eta_i0_sq.max(0.0)).sum();
    assert!(rel_close(r.eta_i * r.eta_i, h1, 1e-12));
    assert!(rel_close(r.eta_i0 * r.eta_i0, l2, 1e-12));
    assert!(!r.l2_clamped);
}

#[test]
fn two_cell_hand_computation() {
    // unit square split along (0,0)-(1,1); u_h = x y at the nodes is 0 except
    // at (1,1), f = 0, H = I; only the diagonal carries a jump
    use anisofem::mesh::{build_mesh, Vertex};
    let mesh = build_mesh(
        vec![Vertex::new(0.0, 0.0), Vertex::new(1.0, 0.0), Vertex::new(1.0, 1.0), Vertex::new(0.0, 1.0)],
        vec![[0, 1, 2], [0, 2, 3]],
    )
    .unwrap();
    let u_h = anisofem::fem::NodalField { values: vec![0.0f64, 0.0, 1.0, 0.0] };
    let problem = ProblemSpec::poisson(|_| 0.0, |_| 0.0);
    let r = disc_estimator(&mesh, &u_h, &HessianField::constant(&mesh, Sym2::identity()), &problem).unwrap();
    // gradients (0,1) below and (1,0) above the diagonal; outward normals
    // (-1,1)/√2 and (1,-1)/√2 give fluxes 1/√2 each, so [∂_n u_h] = -√2;
    // |ℓ| = √2 and d = |ℓ|² = 2 in each cell: -(1/24)(√2·(-√2))·2 = 1/6
    for c in &r.per_cell {
        assert!((c.eta_disc_sq - 1.0 / 6.0).abs() < 1e-15, "{}", c.eta_disc_sq);
    }
    assert!((r.eta_disc_sq_signed - 1.0 / 3.0).abs() < 1e-15);
}
