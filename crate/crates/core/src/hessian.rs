//! Nodal Hessian fields: exact sampling, quadratic-fit recovery from P1
//! data, cell averaging and error norms.

use crate::fem::{NodalField, ProblemSpec};
use crate::mesh::Mesh;
use crate::quadrature::midpoint_rule;
use crate::scalar::compensated_sum;
use crate::{Error, Result, Scalar, Sym2, Vec2};

/// One symmetric 2x2 matrix per vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct HessianField<T> {
    pub values: Vec<Sym2<T>>,
}

impl<T: Scalar> HessianField<T> {
    pub fn constant(mesh: &Mesh<T>, h: Sym2<T>) -> Self {
        Self { values: vec![h; mesh.num_vertices()] }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// [`cell_hessian`] for every cell.
    pub fn cell_means(&self, mesh: &Mesh<T>) -> Vec<Sym2<T>> {
        (0..mesh.num_cells()).map(|k| cell_hessian(self, mesh, k)).collect()
    }
}

/// Samples the exact Hessian at every vertex.
pub fn exact_hessian<T: Scalar>(mesh: &Mesh<T>, problem: &ProblemSpec<T>) -> Result<HessianField<T>> {
    let h = exact_hessian_fn(problem)?;
    Ok(HessianField { values: mesh.vertices().iter().map(|v| h(v.pos())).collect() })
}

/// Exact Hessian evaluated at cell centroids (sensitivity alternative to
/// averaging vertex samples).
pub fn exact_cell_hessians_at_centroids<T: Scalar>(
    mesh: &Mesh<T>,
    problem: &ProblemSpec<T>,
) -> Result<Vec<Sym2<T>>> {
    let h = exact_hessian_fn(problem)?;
    Ok((0..mesh.num_cells()).map(|k| h(mesh.geometry(k).centroid())).collect())
}

fn exact_hessian_fn<T: Scalar>(problem: &ProblemSpec<T>) -> Result<&crate::fem::TensorFn<T>> {
    problem
        .exact
        .as_ref()
        .and_then(|e| e.hessian.as_ref())
        .ok_or(Error::MissingExact("Hessian"))
}

/// Arithmetic mean of the three vertex Hessians of cell `k`.
pub fn cell_hessian<T: Scalar>(field: &HessianField<T>, mesh: &Mesh<T>, k: usize) -> Sym2<T> {
    let v = mesh.cells()[k].v;
    let third = T::one() / T::lit(3.0);
    (field.values[v[0]] + field.values[v[1]] + field.values[v[2]]).scale(third)
}

/// Quadratic least-squares recovery.
///
/// For each vertex a full quadratic is fitted to the nodal values of its
/// first ring of neighbors (plus itself). The patch grows to the second ring
/// when it has fewer than six vertices or the fit is rank deficient. The fit
/// runs in centered coordinates scaled along the principal axes of the
/// patch, which makes it insensitive to element stretching. The quadratic's
/// Hessian is the recovered value.
pub fn recover_hessian_qf<T: Scalar>(mesh: &Mesh<T>, field: &NodalField<T>) -> Result<HessianField<T>> {
    if field.len() != mesh.num_vertices() {
        return Err(Error::SizeMismatch { expected: mesh.num_vertices(), found: field.len() });
    }
    let mut values = Vec::with_capacity(mesh.num_vertices());
    let mut patch = Vec::new();
    let mut mark = vec![false; mesh.num_vertices()];
    for v in 0..mesh.num_vertices() {
        patch.clear();
        patch.push(v);
        patch.extend_from_slice(mesh.neighbors(v));
        let mut fitted = None;
        if patch.len() >= 6 {
            fitted = fit_patch(mesh, field, &patch);
        }
        if fitted.is_none() {
            for &p in &patch {
                mark[p] = true;
            }
            let ring1 = patch.len();
            for i in 0..ring1 {
                for &q in mesh.neighbors(patch[i]) {
                    if !mark[q] {
                        mark[q] = true;
                        patch.push(q);
                    }
                }
            }
            for &p in &patch {
                mark[p] = false;
            }
            if patch.len() >= 6 {
                fitted = fit_patch(mesh, field, &patch);
            }
        }
        values.push(fitted.ok_or(Error::RankDeficientPatch { vertex: v })?);
    }
    Ok(HessianField { values })
}

/// Least-squares quadratic through the patch values; `None` if rank deficient.
fn fit_patch<T: Scalar>(mesh: &Mesh<T>, field: &NodalField<T>, patch: &[usize]) -> Option<Sym2<T>> {
    let m = patch.len();
    let mf = T::from_usize_lossy(m);
    let mut center = Vec2::zero();
    for &p in patch {
        center += mesh.position(p);
    }
    center = center * (T::one() / mf);

    // principal axes of the patch
    let (mut cxx, mut cxy, mut cyy) = (T::zero(), T::zero(), T::zero());
    for &p in patch {
        let d = mesh.position(p) - center;
        cxx += d.x * d.x;
        cxy += d.x * d.y;
        cyy += d.y * d.y;
    }
    let cov = Sym2::new(cxx / mf, cxy / mf, cyy / mf);
    let half = T::lit(0.5);
    let angle = (cxy + cxy).atan2(cov.xx - cov.yy) * half;
    let (sn, cs) = angle.sin_cos();
    let e1 = Vec2::new(cs, sn);
    let e2 = Vec2::new(-sn, cs);
    let s1 = cov.quad(e1).max(T::zero()).sqrt();
    let s2 = cov.quad(e2).max(T::zero()).sqrt();
    let floor = s1.max(s2) * T::lit(1e-8);
    if !(floor > T::zero()) {
        return None;
    }
    let (s1, s2) = (s1.max(floor), s2.max(floor));

    let mut a = vec![[T::zero(); 6]; m];
    let mut rhs = vec![T::zero(); m];
    for (row, &p) in patch.iter().enumerate() {
        let d = mesh.position(p) - center;
        let xi = e1.dot(d) / s1;
        let eta = e2.dot(d) / s2;
        a[row] = [T::one(), xi, eta, xi * xi, xi * eta, eta * eta];
        rhs[row] = field.values[p];
    }
    let c = least_squares6(&mut a, &mut rhs)?;
    // Hessian in (ξ, η), then chain rule back to (x, y)
    let two = T::lit(2.0);
    let local = Sym2::new(two * c[3] / (s1 * s1), c[4] / (s1 * s2), two * c[5] / (s2 * s2));
    Some(local.rotated(angle))
}

/// Householder QR least squares for an `m × 6` system, `m ≥ 6`.
fn least_squares6<T: Scalar>(a: &mut [[T; 6]], b: &mut [T]) -> Option<[T; 6]> {
    let m = a.len();
    let mut diag = [T::zero(); 6];
    for k in 0..6 {
        let norm = compensated_sum((k..m).map(|i| a[i][k] * a[i][k])).sqrt();
        if norm == T::zero() {
            return None;
        }
        let alpha = if a[k][k] > T::zero() { -norm } else { norm };
        // v = x - alpha e_k stored in column k
        a[k][k] -= alpha;
        let vnorm_sq = compensated_sum((k..m).map(|i| a[i][k] * a[i][k]));
        if vnorm_sq > T::zero() {
            for j in (k + 1)..6 {
                let s = compensated_sum((k..m).map(|i| a[i][k] * a[i][j]));
                let f = (s + s) / vnorm_sq;
                for i in k..m {
                    let vk = a[i][k];
                    a[i][j] -= f * vk;
                }
            }
            let s = compensated_sum((k..m).map(|i| a[i][k] * b[i]));
            let f = (s + s) / vnorm_sq;
            for i in k..m {
                b[i] -= f * a[i][k];
            }
        }
        diag[k] = alpha;
    }
    let max = diag.iter().fold(T::zero(), |acc, d| acc.max(d.abs()));
    let tol = max * T::epsilon().sqrt();
    if diag.iter().any(|d| d.abs() <= tol) {
        return None;
    }
    let mut x = [T::zero(); 6];
    for k in (0..6).rev() {
        let mut s = b[k];
        for j in (k + 1)..6 {
            s -= a[k][j] * x[j];
        }
        x[k] = s / diag[k];
    }
    Some(x)
}

/// `‖H_a - H_b‖_{L²(Ω)}` of the Frobenius norm, with entries interpolated
/// linearly inside each cell (midpoint rule is exact for the squared
/// linear difference).
pub fn hessian_error_norm<T: Scalar>(mesh: &Mesh<T>, a: &HessianField<T>, b: &HessianField<T>) -> T {
    let rule = midpoint_rule::<T>();
    let sum = compensated_sum((0..mesh.num_cells()).map(|k| {
        let v = mesh.cells()[k].v;
        let d = v.map(|i| a.values[i] - b.values[i]);
        let area = mesh.geometry(k).area;
        let mut acc = T::zero();
        for (bary, &w) in rule.points.iter().zip(&rule.weights) {
            let diff = d[0].scale(bary[0]) + d[1].scale(bary[1]) + d[2].scale(bary[2]);
            acc += w * diff.frobenius_sq();
        }
        acc * area
    }));
    sum.max(T::zero()).sqrt()
}

/// Observed rate `δ` in `err ~ N^{-δ/2}`, i.e. the rate with respect to the
/// mesh size `h ~ N^{-1/2}`:
/// `δ = 2 ln(err_prev / err_curr) / ln(N_curr / N_prev)`.
pub fn convergence_delta<T: Scalar>(err_prev: T, n_prev: usize, err_curr: T, n_curr: usize) -> Result<T> {
    if !(err_prev > T::zero() && err_curr > T::zero()) || n_prev == 0 || n_curr == 0 {
        return Err(Error::Undefined("convergence rate needs positive errors and sizes".into()));
    }
    if n_prev == n_curr {
        return Err(Error::Undefined("convergence rate between equal element counts".into()));
    }
    let ratio = T::from_usize_lossy(n_curr) / T::from_usize_lossy(n_prev);
    Ok(T::lit(2.0) * (err_prev / err_curr).ln() / ratio.ln())
}
