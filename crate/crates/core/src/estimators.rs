//! Hessian-based estimators of the interpolation error and of the
//! discretization error of P1 solutions.
//!
//! Per cell, with edge vectors `ℓ_i` and a constant Hessian `H`:
//!
//! - `d_i = ℓ_i·Hℓ_i` and `c_i = ℓ_{i+1}·Hℓ_{i+2}` (cyclic),
//! - `‖∇(u-u_I)‖²_K = (1/(48|K|)) Σ c_i²|ℓ_i|²`,
//! - `‖u-u_I‖²_K = (|K|/360) [(d_1+d_2+d_3)² - (d_1d_2 + d_2d_3 + d_3d_1)]`,
//! - discretization: `-(1/24) Σ_i (f_K + |ℓ_i| [∂_n u_h]_i) d_i`.
//!
//! All three are exact for quadratic `u`.

use crate::bench::TrueErrors;
use crate::fem::{cell_average_coefficient, cell_gradient, NodalField, ProblemSpec};
use crate::hessian::HessianField;
use crate::mesh::{cell_geometry, CellGeometry, Mesh};
use crate::quadrature::{high_order_rule, integrate_cell_bary};
use crate::scalar::compensated_sum;
use crate::{Error, Result, Scalar, Sym2};

/// Per-cell estimator data.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CellEstimate<T> {
    pub d: [T; 3],
    pub c: [T; 3],
    pub eta_i_sq: T,
    pub eta_i0_sq: T,
    /// Signed; zero when no discrete solution was supplied.
    pub eta_disc_sq: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EstimatorReport<T> {
    /// `η_I`, estimate of `‖∇(u-u_I)‖`.
    pub eta_i: T,
    /// `η_I0`, estimate of `‖u-u_I‖`.
    pub eta_i0: T,
    /// Signed `η²` of the discretization error.
    pub eta_disc_sq_signed: T,
    /// `sqrt(η²)` when the signed square is non-negative.
    pub eta_disc: Option<T>,
    /// Whether any negative per-cell L² value was clamped in `eta_i0`.
    pub l2_clamped: bool,
    pub per_cell: Vec<CellEstimate<T>>,
}

/// `(d, c)` of a cell for constant `H`.
pub fn edge_forms<T: Scalar>(geom: &CellGeometry<T>, h: &Sym2<T>) -> ([T; 3], [T; 3]) {
    let l = &geom.ell;
    let d = [0, 1, 2].map(|i| h.quad(l[i]));
    let c = [0, 1, 2].map(|i| h.bilinear(l[(i + 1) % 3], l[(i + 2) % 3]));
    (d, c)
}

/// `‖∇(u-u_I)‖²_K` for a quadratic with Hessian `h`.
pub fn interp_h1_local<T: Scalar>(geom: &CellGeometry<T>, h: &Sym2<T>) -> T {
    let (_, c) = edge_forms(geom, h);
    let s: T = (0..3).map(|i| c[i] * c[i] * geom.ell[i].norm_sq()).sum();
    s / (T::lit(48.0) * geom.area)
}

/// Bank–Smith form `(1/4) d·B d` of the same quantity, with
/// `B = (1/(48|K|)) [[S, 2ℓ_1·ℓ_2, 2ℓ_1·ℓ_3], ...]`, `S = Σ|ℓ_i|²`.
pub fn bank_smith_local<T: Scalar>(geom: &CellGeometry<T>, h: &Sym2<T>) -> T {
    let (d, _) = edge_forms(geom, h);
    let l = &geom.ell;
    let s = l[0].norm_sq() + l[1].norm_sq() + l[2].norm_sq();
    let two = T::lit(2.0);
    let mut acc = T::zero();
    for i in 0..3 {
        for j in 0..3 {
            let b = if i == j { s } else { two * l[i].dot(l[j]) };
            acc += d[i] * b * d[j];
        }
    }
    acc / (T::lit(4.0) * T::lit(48.0) * geom.area)
}

/// `‖u-u_I‖²_K` for a quadratic with Hessian `h`.
pub fn interp_l2_local<T: Scalar>(geom: &CellGeometry<T>, h: &Sym2<T>) -> T {
    let (d, _) = edge_forms(geom, h);
    let sum = d[0] + d[1] + d[2];
    let mixed = d[0] * d[1] + d[1] * d[2] + d[2] * d[0];
    geom.area / T::lit(360.0) * (sum * sum - mixed)
}

/// Interpolation estimators only; `eta_disc_sq` is zero in every cell.
pub fn cell_estimate<T: Scalar>(geom: &CellGeometry<T>, h: &Sym2<T>) -> CellEstimate<T> {
    let (d, c) = edge_forms(geom, h);
    CellEstimate {
        d,
        c,
        eta_i_sq: interp_h1_local(geom, h),
        eta_i0_sq: interp_l2_local(geom, h),
        eta_disc_sq: T::zero(),
    }
}

/// Global `η_I`.
pub fn interp_estimator_h1<T: Scalar>(mesh: &Mesh<T>, hessian: &HessianField<T>) -> Result<T> {
    Ok(interpolation_report(mesh, hessian)?.eta_i)
}

/// Global `η_I0` and whether clamping occurred.
pub fn interp_estimator_l2<T: Scalar>(mesh: &Mesh<T>, hessian: &HessianField<T>) -> Result<(T, bool)> {
    let r = interpolation_report(mesh, hessian)?;
    Ok((r.eta_i0, r.l2_clamped))
}

/// Both interpolation estimators with vertex-mean cell Hessians.
pub fn interpolation_report<T: Scalar>(mesh: &Mesh<T>, hessian: &HessianField<T>) -> Result<EstimatorReport<T>> {
    let cell_h = checked_cell_means(mesh, hessian)?;
    report_from_cells(mesh, &cell_h, None)
}

/// Sum of the outward conormal fluxes `ā⁺∇u_h⁺·n⁺ + ā⁻∇u_h⁻·n⁻` across edge
/// `edge`; zero on the boundary.
///
/// The estimator's jump `[∂_n u_h]` is the negative of this quantity.
pub fn conormal_jump<T: Scalar>(
    mesh: &Mesh<T>,
    field: &NodalField<T>,
    edge: usize,
    problem: &ProblemSpec<T>,
) -> Result<T> {
    let e = mesh
        .edges()
        .get(edge)
        .ok_or_else(|| Error::InvalidParameter(format!("edge {edge} out of range")))?;
    if e.boundary {
        return Ok(T::zero());
    }
    let mut flux = T::zero();
    for k in e.adjacent_cells() {
        let a = cell_average_coefficient(mesh, problem, k)?;
        flux += cell_flux(mesh, field, &a, k, edge)?;
    }
    Ok(flux)
}

fn cell_flux<T: Scalar>(mesh: &Mesh<T>, field: &NodalField<T>, a: &Sym2<T>, k: usize, edge: usize) -> Result<T> {
    let i = mesh
        .local_edge_index(k, edge)
        .ok_or_else(|| Error::InvalidParameter(format!("edge {edge} not on cell {k}")))?;
    let g = cell_gradient(mesh, field, k);
    Ok(a.apply(g).dot(mesh.geometry(k).outward_normal(i)))
}

/// Full report: interpolation estimators and the signed discretization
/// estimator, using vertex-mean cell Hessians.
///
/// With a reaction term the cell residual integrates `f - b u_h` instead of
/// `f`; for `b = 0` this is exactly `f_K = ∫_K f`.
pub fn disc_estimator<T: Scalar>(
    mesh: &Mesh<T>,
    u_h: &NodalField<T>,
    hessian: &HessianField<T>,
    problem: &ProblemSpec<T>,
) -> Result<EstimatorReport<T>> {
    let cell_h = checked_cell_means(mesh, hessian)?;
    disc_estimator_with_cell_hessians(mesh, u_h, &cell_h, problem)
}

/// [`disc_estimator`] with one Hessian per cell supplied directly.
pub fn disc_estimator_with_cell_hessians<T: Scalar>(
    mesh: &Mesh<T>,
    u_h: &NodalField<T>,
    cell_h: &[Sym2<T>],
    problem: &ProblemSpec<T>,
) -> Result<EstimatorReport<T>> {
    if u_h.len() != mesh.num_vertices() {
        return Err(Error::SizeMismatch { expected: mesh.num_vertices(), found: u_h.len() });
    }
    if cell_h.len() != mesh.num_cells() {
        return Err(Error::SizeMismatch { expected: mesh.num_cells(), found: cell_h.len() });
    }
    report_from_cells(mesh, cell_h, Some((u_h, problem)))
}

fn checked_cell_means<T: Scalar>(mesh: &Mesh<T>, hessian: &HessianField<T>) -> Result<Vec<Sym2<T>>> {
    if hessian.len() != mesh.num_vertices() {
        return Err(Error::SizeMismatch { expected: mesh.num_vertices(), found: hessian.len() });
    }
    Ok(hessian.cell_means(mesh))
}

fn report_from_cells<T: Scalar>(
    mesh: &Mesh<T>,
    cell_h: &[Sym2<T>],
    disc: Option<(&NodalField<T>, &ProblemSpec<T>)>,
) -> Result<EstimatorReport<T>> {
    let mut per_cell = Vec::with_capacity(mesh.num_cells());
    for (k, h) in cell_h.iter().enumerate() {
        let geom = cell_geometry(mesh, k)?;
        per_cell.push(cell_estimate(&geom, h));
    }
    if let Some((u_h, problem)) = disc {
        let residuals = disc_cell_terms(mesh, u_h, problem)?;
        let fac = -T::one() / T::lit(24.0);
        for (est, (f_k, jumps)) in per_cell.iter_mut().zip(residuals) {
            est.eta_disc_sq = fac * (0..3).map(|i| (f_k + jumps[i]) * est.d[i]).sum::<T>();
        }
    }
    let eta_i_sq = compensated_sum(per_cell.iter().map(|c| c.eta_i_sq));
    let l2_clamped = per_cell.iter().any(|c| c.eta_i0_sq < T::zero());
    let eta_i0_sq = compensated_sum(per_cell.iter().map(|c| c.eta_i0_sq.max(T::zero())));
    let signed = compensated_sum(per_cell.iter().map(|c| c.eta_disc_sq));
    Ok(EstimatorReport {
        eta_i: eta_i_sq.max(T::zero()).sqrt(),
        eta_i0: eta_i0_sq.sqrt(),
        eta_disc_sq_signed: signed,
        eta_disc: (signed >= T::zero()).then(|| signed.sqrt()),
        l2_clamped,
        per_cell,
    })
}

/// Per cell: `∫_K (f - b u_h)` and `|ℓ_i| [∂_n u_h]_i` for the three edges.
fn disc_cell_terms<T: Scalar>(
    mesh: &Mesh<T>,
    u_h: &NodalField<T>,
    problem: &ProblemSpec<T>,
) -> Result<Vec<(T, [T; 3])>> {
    let rule = high_order_rule::<T>();
    let nc = mesh.num_cells();
    let mut coeff = Vec::with_capacity(nc);
    let mut flux = Vec::with_capacity(nc);
    for k in 0..nc {
        let a = cell_average_coefficient(mesh, problem, k)?;
        let g = cell_gradient(mesh, u_h, k);
        let geom = mesh.geometry(k);
        let ag = a.apply(g);
        flux.push([0, 1, 2].map(|i| ag.dot(geom.outward_normal(i))));
        coeff.push(a);
    }
    let mut out = Vec::with_capacity(nc);
    for k in 0..nc {
        let geom = mesh.geometry(k);
        let f_k = integrate_cell_bary(&rule, &geom, |p, bary| {
            (problem.source)(p) - (problem.reaction)(p) * u_h.eval_in_cell(mesh, k, bary)
        });
        let mut jumps = [T::zero(); 3];
        for (i, &e) in mesh.cell_edges()[k].iter().enumerate() {
            let edge = &mesh.edges()[e];
            if edge.boundary {
                continue;
            }
            let mut total = T::zero();
            for kk in edge.adjacent_cells() {
                let j = mesh.local_edge_index(kk, e).expect("edge adjacency is consistent");
                total += flux[kk][j];
            }
            jumps[i] = -total * geom.edge_length(i);
        }
        out.push((f_k, jumps));
    }
    Ok(out)
}

/// Normalization of the efficiency indices.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormMode<T> {
    /// Denominator `‖∇(u-u_h)‖²`.
    H1,
    /// Denominator `ε⁻¹‖u-u_h‖² + ‖∇(u-u_h)‖²`. The discretization
    /// estimator approximates `ε‖∇e‖² + ‖e‖²` for `-εΔu + u = f` and is
    /// divided by `ε` to match it.
    Energy { epsilon: T },
}

impl<T: Scalar> NormMode<T> {
    pub fn for_problem(problem: &ProblemSpec<T>) -> Self {
        match problem.epsilon {
            Some(epsilon) => NormMode::Energy { epsilon },
            None => NormMode::H1,
        }
    }
}

/// Signed efficiency indices of one report.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Efficiency<T> {
    /// `η² / denominator`.
    pub e: T,
    /// `η_I² / denominator`.
    pub ei: T,
}

pub fn efficiency_indices<T: Scalar>(
    report: &EstimatorReport<T>,
    errors: &TrueErrors<T>,
    mode: NormMode<T>,
) -> Result<Efficiency<T>> {
    let (denom, scale) = match mode {
        NormMode::H1 => (errors.grad_err * errors.grad_err, T::one()),
        NormMode::Energy { epsilon } => {
            if !(epsilon > T::zero()) {
                return Err(Error::InvalidParameter("energy norm needs epsilon > 0".into()));
            }
            let d = errors.energy_err_sq.ok_or(Error::Undefined("energy error not computed".into()))?;
            (d, epsilon)
        }
    };
    if !(denom > T::zero()) {
        return Err(Error::Undefined("zero true error in efficiency index".into()));
    }
    Ok(Efficiency {
        e: report.eta_disc_sq_signed / (scale * denom),
        ei: report.eta_i * report.eta_i / denom,
    })
}
