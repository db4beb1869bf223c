use crate::{Error, Result, Scalar, Vec2};

use super::Mesh;

/// Geometric data of one triangle `K` with vertices `a_1, a_2, a_3`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CellGeometry<T> {
    pub a: [Vec2<T>; 3],
    /// `ℓ_1 = a_3 - a_2`, `ℓ_2 = a_1 - a_3`, `ℓ_3 = a_2 - a_1`.
    pub ell: [Vec2<T>; 3],
    pub area: T,
    /// Gradients of the barycentric coordinates.
    pub grad_lambda: [Vec2<T>; 3],
    /// Diameter (longest edge).
    pub h: T,
    /// Diameter of the inscribed circle, `4|K| / perimeter`.
    pub rho: T,
    /// `h / rho`.
    pub aspect: T,
}

impl<T: Scalar> CellGeometry<T> {
    /// Geometry of a counterclockwise triangle. Fails if the area is not
    /// strictly positive.
    pub fn from_points(a: [Vec2<T>; 3]) -> Result<Self> {
        let ell = [a[2] - a[1], a[0] - a[2], a[1] - a[0]];
        let area = ell[2].cross(-ell[1]) * T::lit(0.5);
        if !(area > T::zero()) || !area.is_finite() {
            return Err(Error::DegenerateCell { cell: usize::MAX });
        }
        let two_area = area + area;
        let grad_lambda = [0, 1, 2].map(|i| {
            let p = a[(i + 1) % 3];
            let q = a[(i + 2) % 3];
            Vec2::new((p.y - q.y) / two_area, -(p.x - q.x) / two_area)
        });
        let lens = ell.map(|l| l.norm());
        let h = lens[0].max(lens[1]).max(lens[2]);
        let perimeter = lens[0] + lens[1] + lens[2];
        let rho = T::lit(4.0) * area / perimeter;
        Ok(Self { a, ell, area, grad_lambda, h, rho, aspect: h / rho })
    }

    /// Physical point with barycentric coordinates `bary`.
    #[inline]
    pub fn point(&self, bary: [T; 3]) -> Vec2<T> {
        self.a[0] * bary[0] + self.a[1] * bary[1] + self.a[2] * bary[2]
    }

    /// Barycentric coordinates of a physical point.
    pub fn barycentric(&self, p: Vec2<T>) -> [T; 3] {
        [0, 1, 2].map(|i| {
            let anchor = self.a[(i + 1) % 3];
            self.grad_lambda[i].dot(p - anchor)
        })
    }

    pub fn centroid(&self) -> Vec2<T> {
        (self.a[0] + self.a[1] + self.a[2]) * (T::one() / T::lit(3.0))
    }

    #[inline]
    pub fn edge_length(&self, i: usize) -> T {
        self.ell[i].norm()
    }

    /// Unit outward normal of local edge `i`.
    #[inline]
    pub fn outward_normal(&self, i: usize) -> Vec2<T> {
        // counterclockwise boundary: outward = tangent rotated clockwise
        let t = self.ell[i];
        Vec2::new(t.y, -t.x) * (T::one() / t.norm())
    }
}

/// Geometry of cell `k`; degenerate cells are reported with their index.
pub fn cell_geometry<T: Scalar>(mesh: &Mesh<T>, k: usize) -> Result<CellGeometry<T>> {
    if k >= mesh.num_cells() {
        return Err(Error::InvalidParameter(format!(
            "cell index {k} out of range ({} cells)",
            mesh.num_cells()
        )));
    }
    CellGeometry::from_points(mesh.cell_points(k)).map_err(|_| Error::DegenerateCell { cell: k })
}
