#![allow(dead_code)]

use anisofem::mesh::{build_mesh, generate_uniform, Mesh, Rect, Vertex};
use anisofem::mesh::CellGeometry;
use anisofem::{Sym2, Vec2};
use rand::rngs::StdRng;
use rand::Rng;

/// Uniform `n × n` mesh of the unit square with interior vertices moved by
/// up to `jitter · h` in each coordinate.
pub fn jittered_mesh(n: usize, jitter: f64, rng: &mut StdRng) -> Mesh<f64> {
    let base = generate_uniform::<f64>(n, Rect::unit()).unwrap();
    let h = 1.0 / n as f64;
    let vertices = (0..base.num_vertices())
        .map(|v| {
            let p = base.position(v);
            if base.is_boundary_vertex(v) {
                Vertex::new(p.x, p.y)
            } else {
                let dx = rng.gen_range(-jitter..jitter) * h;
                let dy = rng.gen_range(-jitter..jitter) * h;
                Vertex::new(p.x + dx, p.y + dy)
            }
        })
        .collect();
    build_mesh(vertices, base.cells().iter().map(|c| c.v).collect()).unwrap()
}

/// Random non-degenerate triangle with vertices in `[-1, 1]²`.
pub fn random_triangle(rng: &mut StdRng) -> CellGeometry<f64> {
    loop {
        let mut p = [0; 3].map(|_| Vec2::<f64>::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let area2: f64 = (p[1] - p[0]).cross(p[2] - p[0]);
        if area2.abs() < 1e-3 {
            continue;
        }
        if area2 < 0.0 {
            p.swap(1, 2);
        }
        return CellGeometry::from_points(p).unwrap();
    }
}

pub fn random_sym(rng: &mut StdRng) -> Sym2<f64> {
    Sym2::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0))
}

/// Random symmetric matrix with eigenvalues of one sign.
pub fn random_semidefinite(rng: &mut StdRng) -> Sym2<f64> {
    let l1: f64 = rng.gen_range(0.0..5.0);
    let l2: f64 = rng.gen_range(0.0..5.0);
    let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    Sym2::new(sign * l1, 0.0, sign * l2).rotated(rng.gen_range(0.0..std::f64::consts::TAU))
}

/// `u - u_I` on a triangle for `u(x) = ½ x·Hx`.
pub fn quadratic_error(g: &CellGeometry<f64>, h: &Sym2<f64>, bary: [f64; 3]) -> f64 {
    let u = |p: Vec2<f64>| 0.5 * h.quad(p);
    let p = g.point(bary);
    u(p) - (bary[0] * u(g.a[0]) + bary[1] * u(g.a[1]) + bary[2] * u(g.a[2]))
}

/// `∇(u - u_I)` on a triangle for `u(x) = ½ x·Hx`.
pub fn quadratic_grad_error(g: &CellGeometry<f64>, h: &Sym2<f64>, bary: [f64; 3]) -> Vec2<f64> {
    let u = |p: Vec2<f64>| 0.5 * h.quad(p);
    let grad_i = g.grad_lambda[0] * u(g.a[0]) + g.grad_lambda[1] * u(g.a[1]) + g.grad_lambda[2] * u(g.a[2]);
    h.apply(g.point(bary)) - grad_i
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}
