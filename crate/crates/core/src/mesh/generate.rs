//! Structured mesh generators: uniform grids, graded grids clustered toward
//! a line, and the L-shaped domain.

use crate::{Error, Result, Scalar, Vec2};

use super::{build_mesh, signed_double_area, Mesh, Vertex};

/// Axis-aligned rectangle `[x0, x1] × [y0, y1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect<T> {
    pub x0: T,
    pub y0: T,
    pub x1: T,
    pub y1: T,
}

impl<T: Scalar> Rect<T> {
    pub fn new(x0: T, y0: T, x1: T, y1: T) -> Self {
        Self { x0, y0, x1, y1 }
    }

    pub fn unit() -> Self {
        Self::new(T::zero(), T::zero(), T::one(), T::one())
    }

    fn validate(&self) -> Result<()> {
        let ok = [self.x0, self.y0, self.x1, self.y1].iter().all(|v| v.is_finite())
            && self.x1 > self.x0
            && self.y1 > self.y0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("degenerate rectangle {self:?}")))
        }
    }

    fn corners(&self) -> [Vec2<T>; 4] {
        [
            Vec2::new(self.x0, self.y0),
            Vec2::new(self.x1, self.y0),
            Vec2::new(self.x1, self.y1),
            Vec2::new(self.x0, self.y1),
        ]
    }
}

/// Tanh clustering of mesh lines toward the line `m · p = target`, where
/// `m = (cos θ, sin θ) / max(|cos θ|, |sin θ|)`.
///
/// With this normalization `angle = 0` targets the vertical line
/// `x = target` and `angle = π/4` targets `x + y = target`.
///
/// Mesh lines are equidistributed with respect to the density
/// `1 + strength · sech²((s - target) / width)` in the coordinate `s = m · p`,
/// so the spacing near the target shrinks by the factor `1 / (1 + strength)`
/// relative to the far field.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grading<T> {
    pub angle: T,
    pub target: T,
    pub strength: T,
    pub width: T,
}

impl<T: Scalar> Grading<T> {
    pub fn identity() -> Self {
        Self { angle: T::zero(), target: T::zero(), strength: T::zero(), width: T::one() }
    }

    pub fn toward(angle: T, target: T, strength: T, width: T) -> Self {
        Self { angle, target, strength, width }
    }

    fn validate(&self) -> Result<()> {
        if !(self.angle.is_finite() && self.target.is_finite() && self.strength.is_finite()) {
            return Err(Error::InvalidParameter("grading parameters must be finite".into()));
        }
        if !(self.width > T::zero()) || !self.width.is_finite() {
            return Err(Error::InvalidParameter("grading width must be positive".into()));
        }
        // G'(s) = 1 + strength·sech² > 0 everywhere iff strength > -1
        if !(self.strength > -T::one()) {
            return Err(Error::NonMonotoneGrading(format!(
                "strength {} must exceed -1",
                self.strength
            )));
        }
        Ok(())
    }

    fn direction(&self) -> Vec2<T> {
        let snap = |v: T| {
            let tol = T::lit(1e-12);
            if (v - T::one()).abs() < tol {
                T::one()
            } else if (v + T::one()).abs() < tol {
                -T::one()
            } else if v.abs() < tol {
                T::zero()
            } else {
                v
            }
        };
        let (s, c) = self.angle.sin_cos();
        let inf = c.abs().max(s.abs());
        Vec2::new(snap(c / inf), snap(s / inf))
    }

    /// Cumulative density; strictly increasing when `validate` passes.
    fn cumulative(&self, s: T) -> T {
        s + self.strength * self.width * ((s - self.target) / self.width).tanh()
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidParameter("number of subdivisions must be at least 1".into()))
    } else {
        Ok(())
    }
}

fn side_marker(i: usize, j: usize, n: usize) -> u32 {
    if j == 0 {
        1
    } else if i == n {
        2
    } else if j == n {
        3
    } else if i == 0 {
        4
    } else {
        0
    }
}

/// Vertex `(i, j)` of an `n × n` grid has index `j (n + 1) + i`.
fn grid_cells(n: usize) -> Vec<[usize; 3]> {
    let idx = |i: usize, j: usize| j * (n + 1) + i;
    let mut cells = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for i in 0..n {
            let (p00, p10, p11, p01) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
            cells.push([p00, p10, p11]);
            cells.push([p00, p11, p01]);
        }
    }
    cells
}

/// `n × n` squares, each split along its lower-left to upper-right diagonal.
pub fn generate_uniform<T: Scalar>(n: usize, rect: Rect<T>) -> Result<Mesh<T>> {
    check_n(n)?;
    rect.validate()?;
    let nf = T::from_usize_lossy(n);
    let mut vertices = Vec::with_capacity((n + 1) * (n + 1));
    for j in 0..=n {
        for i in 0..=n {
            let x = rect.x0 + (rect.x1 - rect.x0) * T::from_usize_lossy(i) / nf;
            let y = rect.y0 + (rect.y1 - rect.y0) * T::from_usize_lossy(j) / nf;
            // exact sides
            let x = if i == n { rect.x1 } else { x };
            let y = if j == n { rect.y1 } else { y };
            vertices.push(Vertex::with_marker(x, y, side_marker(i, j, n)));
        }
    }
    build_mesh(vertices, grid_cells(n))
}

/// Uniform grid deformed so that mesh lines cluster toward a line.
///
/// Each vertex is moved along the chord `{m · q = s}` of the rectangle it
/// lies on: the chord coordinate `s` is remapped through the grading while
/// the relative position along the chord is kept. Rectangle corners and
/// sides are preserved, so the result triangulates the same rectangle.
pub fn generate_graded<T: Scalar>(n: usize, rect: Rect<T>, grading: Grading<T>) -> Result<Mesh<T>> {
    check_n(n)?;
    rect.validate()?;
    grading.validate()?;
    if grading.strength == T::zero() {
        return generate_uniform(n, rect);
    }
    let map = ChordMap::new(rect, grading);
    let base = generate_uniform(n, rect)?;
    let mut vertices: Vec<Vertex<T>> = base.vertices().to_vec();
    for v in &mut vertices {
        let p = v.pos();
        let mut q = map.apply(p);
        // keep boundary vertices exactly on their sides
        for (orig, new, lo, hi) in [(p.x, &mut q.x, rect.x0, rect.x1), (p.y, &mut q.y, rect.y0, rect.y1)] {
            if orig == lo {
                *new = lo;
            } else if orig == hi {
                *new = hi;
            } else {
                *new = new.max(lo).min(hi);
            }
        }
        v.x = q.x;
        v.y = q.y;
    }
    let cells: Vec<[usize; 3]> = base.cells().iter().map(|c| c.v).collect();
    for (k, c) in cells.iter().enumerate() {
        let area2 =
            signed_double_area(vertices[c[0]].pos(), vertices[c[1]].pos(), vertices[c[2]].pos());
        if !(area2 > T::zero()) {
            return Err(Error::InvertedCell { cell: k });
        }
    }
    build_mesh(vertices, cells)
}

struct ChordMap<T> {
    rect: Rect<T>,
    grading: Grading<T>,
    m: Vec2<T>,
    tangent: Vec2<T>,
    /// Sorted distinct values of `m · corner`.
    breaks: Vec<T>,
}

impl<T: Scalar> ChordMap<T> {
    fn new(rect: Rect<T>, grading: Grading<T>) -> Self {
        let m = grading.direction();
        let mut vals: Vec<T> = rect.corners().iter().map(|c| m.dot(*c)).collect();
        vals.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        let span = vals[3] - vals[0];
        let mut breaks = vec![vals[0]];
        for &v in &vals[1..] {
            if v - *breaks.last().expect("non-empty") > T::lit(1e-12) * span {
                breaks.push(v);
            }
        }
        let tangent = m.perp();
        Self { rect, grading, m, tangent, breaks }
    }

    /// Parameter interval of the chord `{m · q = s}` as `q = q0 + t · tangent`.
    fn chord(&self, s: T) -> (Vec2<T>, T, T) {
        let q0 = self.m * (s / self.m.norm_sq());
        let mut lo = T::neg_infinity();
        let mut hi = T::infinity();
        for (base, dir, a, b) in [
            (q0.x, self.tangent.x, self.rect.x0, self.rect.x1),
            (q0.y, self.tangent.y, self.rect.y0, self.rect.y1),
        ] {
            if dir != T::zero() {
                let (t0, t1) = ((a - base) / dir, (b - base) / dir);
                lo = lo.max(t0.min(t1));
                hi = hi.min(t0.max(t1));
            }
        }
        if hi < lo {
            let mid = (lo + hi) * T::lit(0.5);
            lo = mid;
            hi = mid;
        }
        (q0, lo, hi)
    }

    fn remap(&self, s: T) -> T {
        let b = &self.breaks;
        let last = b.len() - 1;
        if s <= b[0] {
            return b[0];
        }
        if s >= b[last] {
            return b[last];
        }
        let k = b.windows(2).position(|w| s <= w[1]).unwrap_or(last - 1);
        let (a, c) = (b[k], b[k + 1]);
        if s == a || s == c {
            return s;
        }
        let g = |v: T| self.grading.cumulative(v);
        let goal = g(a) + (s - a) / (c - a) * (g(c) - g(a));
        let (mut lo, mut hi) = (a, c);
        for _ in 0..200 {
            let mid = (lo + hi) * T::lit(0.5);
            if mid <= lo || mid >= hi {
                break;
            }
            if g(mid) < goal {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (lo + hi) * T::lit(0.5)
    }

    fn apply(&self, p: Vec2<T>) -> Vec2<T> {
        let s = self.m.dot(p);
        let (q0, lo, hi) = self.chord(s);
        let t = (p - q0).dot(self.tangent) / self.tangent.norm_sq();
        let tau = if hi - lo > T::epsilon() * (T::one() + hi.abs()) {
            ((t - lo) / (hi - lo)).max(T::zero()).min(T::one())
        } else {
            T::lit(0.5)
        };
        let s_new = self.remap(s);
        let (q0n, lon, hin) = self.chord(s_new);
        q0n + self.tangent * (lon + (hin - lon) * tau)
    }
}

/// Uniform mesh of the L-shaped domain
/// `(-1/2, 1/2) × (0, 1/2) ∪ (-1/2, 0) × (-1/2, 0)` with squares of side
/// `1 / (2n)`, each split like [`generate_uniform`].
pub fn generate_l_shape<T: Scalar>(n: usize) -> Result<Mesh<T>> {
    check_n(n)?;
    let m = 2 * n;
    let h = T::one() / T::from_usize_lossy(m);
    let half = T::lit(0.5);
    let keep = |i: usize, j: usize| !(i >= n && j < n);
    let mut index = vec![usize::MAX; (m + 1) * (m + 1)];
    let mut vertices = Vec::new();
    let mut cells = Vec::new();
    let mut vid = |i: usize, j: usize, vertices: &mut Vec<Vertex<T>>| {
        let slot = &mut index[j * (m + 1) + i];
        if *slot == usize::MAX {
            *slot = vertices.len();
            let x = T::from_usize_lossy(i) * h - half;
            let y = T::from_usize_lossy(j) * h - half;
            vertices.push(Vertex::new(x, y));
        }
        *slot
    };
    for j in 0..m {
        for i in 0..m {
            if !keep(i, j) {
                continue;
            }
            let p00 = vid(i, j, &mut vertices);
            let p10 = vid(i + 1, j, &mut vertices);
            let p11 = vid(i + 1, j + 1, &mut vertices);
            let p01 = vid(i, j + 1, &mut vertices);
            cells.push([p00, p10, p11]);
            cells.push([p00, p11, p01]);
        }
    }
    let mut mesh = build_mesh(vertices, cells)?;
    mesh.infer_boundary_markers();
    Ok(mesh)
}
