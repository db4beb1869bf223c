//! Fixed quadrature rules on triangles (barycentric points) and segments.

use crate::mesh::CellGeometry;
use crate::{Scalar, Vec2};

#[derive(Clone, Debug, PartialEq)]
pub struct TriangleRule<T> {
    pub points: Vec<[T; 3]>,
    /// Normalized to sum to 1; multiplied by `|K|` on use.
    pub weights: Vec<T>,
    pub degree: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EdgeRule<T> {
    /// Parameters in `[0, 1]` along the segment.
    pub points: Vec<T>,
    pub weights: Vec<T>,
    pub degree: u32,
}

/// Edge-midpoint rule, exact for polynomials of degree ≤ 2.
pub fn midpoint_rule<T: Scalar>() -> TriangleRule<T> {
    let (z, h, w) = (T::zero(), T::lit(0.5), T::one() / T::lit(3.0));
    TriangleRule { points: vec![[z, h, h], [h, z, h], [h, h, z]], weights: vec![w; 3], degree: 2 }
}

// 4-point Gauss–Legendre on [-1, 1]
const GL4_NODES: [f64; 4] =
    [-0.861_136_311_594_052_6, -0.339_981_043_584_856_26, 0.339_981_043_584_856_26, 0.861_136_311_594_052_6];
const GL4_WEIGHTS: [f64; 4] =
    [0.347_854_845_137_453_86, 0.652_145_154_862_546_1, 0.652_145_154_862_546_1, 0.347_854_845_137_453_86];

/// Collapsed (Duffy) 4×4 Gauss product rule, exact for degree ≤ 6.
///
/// `x = u`, `y = v (1 - u)` maps the unit square onto the reference
/// triangle; a degree-p polynomial becomes degree p+1 in `u` (Jacobian
/// `1 - u`) and p in `v`, both within the 7th-degree exactness of 4-point
/// Gauss–Legendre.
pub fn high_order_rule<T: Scalar>() -> TriangleRule<T> {
    let half = T::lit(0.5);
    let mut points = Vec::with_capacity(16);
    let mut weights = Vec::with_capacity(16);
    for (xu, wu) in GL4_NODES.iter().zip(GL4_WEIGHTS) {
        let u = (T::one() + T::lit(*xu)) * half;
        for (xv, wv) in GL4_NODES.iter().zip(GL4_WEIGHTS) {
            let v = (T::one() + T::lit(*xv)) * half;
            let x = u;
            let y = v * (T::one() - u);
            points.push([T::one() - x - y, x, y]);
            // (wu/2)(wv/2)(1-u) integrates over the reference area 1/2
            weights.push(T::lit(wu) * T::lit(wv) * (T::one() - u) * half);
        }
    }
    TriangleRule { points, weights, degree: 6 }
}

/// Simpson's rule on a segment, exact for degree ≤ 3.
pub fn simpson_edge_rule<T: Scalar>() -> EdgeRule<T> {
    let sixth = T::one() / T::lit(6.0);
    EdgeRule {
        points: vec![T::zero(), T::lit(0.5), T::one()],
        weights: vec![sixth, T::lit(4.0) * sixth, sixth],
        degree: 3,
    }
}

/// `|K| Σ_q w_q f(x_q)`.
pub fn integrate_cell<T: Scalar>(
    rule: &TriangleRule<T>,
    geom: &CellGeometry<T>,
    mut f: impl FnMut(Vec2<T>) -> T,
) -> T {
    let mut acc = T::zero();
    for (b, &w) in rule.points.iter().zip(&rule.weights) {
        acc += w * f(geom.point(*b));
    }
    acc * geom.area
}

/// Like [`integrate_cell`] but the integrand also receives the barycentric
/// coordinates of the quadrature point.
pub fn integrate_cell_bary<T: Scalar>(
    rule: &TriangleRule<T>,
    geom: &CellGeometry<T>,
    mut f: impl FnMut(Vec2<T>, [T; 3]) -> T,
) -> T {
    let mut acc = T::zero();
    for (b, &w) in rule.points.iter().zip(&rule.weights) {
        acc += w * f(geom.point(*b), *b);
    }
    acc * geom.area
}

/// `|e| Σ_q w_q f(p0 + t_q (p1 - p0))`.
pub fn integrate_edge<T: Scalar>(
    rule: &EdgeRule<T>,
    p0: Vec2<T>,
    p1: Vec2<T>,
    mut f: impl FnMut(Vec2<T>) -> T,
) -> T {
    let d = p1 - p0;
    let mut acc = T::zero();
    for (&t, &w) in rule.points.iter().zip(&rule.weights) {
        acc += w * f(p0 + d * t);
    }
    acc * d.norm()
}
