//! Benchmark harness: true errors, efficiency tables and Hessian-recovery
//! diagnostics over mesh sequences.

mod catalog;

pub use catalog::{catalog, CaseId, Domain, ExampleCase, SIGMOID_EPSILON};

use crate::estimators::{disc_estimator_with_cell_hessians, efficiency_indices, EstimatorReport, NormMode};
use crate::fem::{cell_gradient, interpolate, solve, NodalField, ProblemSpec, SolverOptions};
use crate::hessian::{convergence_delta, exact_hessian, hessian_error_norm, recover_hessian_qf, HessianField};
use crate::mesh::{generate_graded, generate_l_shape, generate_uniform, Grading, Mesh};
use crate::quadrature::{high_order_rule, integrate_cell_bary};
use crate::scalar::compensated_sum;
use crate::{Error, Result, Scalar};

/// True error norms of a discrete solution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrueErrors<T> {
    /// `‖∇(u-u_h)‖`.
    pub grad_err: T,
    /// `‖u-u_h‖`.
    pub l2_err: T,
    /// `ε⁻¹‖u-u_h‖² + ‖∇(u-u_h)‖²` when the problem has an `ε`.
    pub energy_err_sq: Option<T>,
    /// `‖∇(u-u_I)‖`.
    pub interp_grad_err: T,
    /// `‖∇(u_I-u_h)‖`.
    pub superapprox: T,
}

pub fn true_errors<T: Scalar>(mesh: &Mesh<T>, problem: &ProblemSpec<T>, u_h: &NodalField<T>) -> Result<TrueErrors<T>> {
    let exact = problem.exact.as_ref().ok_or(Error::MissingExact("solution"))?;
    if u_h.len() != mesh.num_vertices() {
        return Err(Error::SizeMismatch { expected: mesh.num_vertices(), found: u_h.len() });
    }
    let u_i = interpolate(mesh, |p| (exact.u)(p));
    let rule = high_order_rule::<T>();
    let mut grad = Vec::with_capacity(mesh.num_cells());
    let mut l2 = Vec::with_capacity(mesh.num_cells());
    let mut interp = Vec::with_capacity(mesh.num_cells());
    let mut superapprox = Vec::with_capacity(mesh.num_cells());
    for k in 0..mesh.num_cells() {
        let geom = mesh.geometry(k);
        let gh = cell_gradient(mesh, u_h, k);
        let gi = cell_gradient(mesh, &u_i, k);
        grad.push(integrate_cell_bary(&rule, &geom, |p, _| ((exact.grad)(p) - gh).norm_sq()));
        interp.push(integrate_cell_bary(&rule, &geom, |p, _| ((exact.grad)(p) - gi).norm_sq()));
        l2.push(integrate_cell_bary(&rule, &geom, |p, bary| {
            let e = (exact.u)(p) - u_h.eval_in_cell(mesh, k, bary);
            e * e
        }));
        superapprox.push((gi - gh).norm_sq() * geom.area);
    }
    let grad_sq = compensated_sum(grad);
    let l2_sq = compensated_sum(l2);
    let checked = |v: T| {
        if v.is_finite() {
            Ok(v.max(T::zero()))
        } else {
            Err(Error::Undefined("non-finite true error".into()))
        }
    };
    Ok(TrueErrors {
        grad_err: checked(grad_sq)?.sqrt(),
        l2_err: checked(l2_sq)?.sqrt(),
        energy_err_sq: problem.epsilon.map(|eps| l2_sq / eps + grad_sq),
        interp_grad_err: checked(compensated_sum(interp))?.sqrt(),
        superapprox: checked(compensated_sum(superapprox))?.sqrt(),
    })
}

/// Which Hessian feeds the estimators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HessianMode {
    Exact,
    Recovered,
    Both,
}

impl HessianMode {
    fn exact(self) -> bool {
        matches!(self, Self::Exact | Self::Both)
    }

    fn recovered(self) -> bool {
        matches!(self, Self::Recovered | Self::Both)
    }
}

impl std::str::FromStr for HessianMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Self::Exact),
            "recovered" => Ok(Self::Recovered),
            "both" => Ok(Self::Both),
            other => Err(Error::InvalidParameter(format!("unknown hessian mode '{other}'"))),
        }
    }
}

/// One line of an efficiency table. Undefined entries are `None`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TableRow<T> {
    pub step: usize,
    /// Number of cells.
    pub n_cells: usize,
    pub e: Option<T>,
    pub e_r: Option<T>,
    pub ei: Option<T>,
    pub ei_r: Option<T>,
    /// `‖H - H_r‖`.
    pub h_err: Option<T>,
    /// Rate of `h_err` against the previous row.
    pub delta: Option<T>,
}

/// Everything computed for one mesh.
#[derive(Clone, Debug)]
pub struct RowDetail<T> {
    pub n_vertices: usize,
    pub errors: TrueErrors<T>,
    pub exact: Option<EstimatorReport<T>>,
    pub recovered: Option<EstimatorReport<T>>,
}

/// Result of [`run_case`]; on failure holds the rows completed before it.
#[derive(Debug)]
pub struct CaseRun<T> {
    pub rows: Vec<TableRow<T>>,
    pub details: Vec<RowDetail<T>>,
    pub error: Option<Error>,
}

impl<T> CaseRun<T> {
    pub fn into_result(self) -> Result<(Vec<TableRow<T>>, Vec<RowDetail<T>>)> {
        match self.error {
            Some(e) => Err(e),
            None => Ok((self.rows, self.details)),
        }
    }
}

/// Solves, estimates and tabulates the case on every mesh in order.
pub fn run_case<T: Scalar>(
    case: &ExampleCase<T>,
    meshes: &[Mesh<T>],
    mode: HessianMode,
    opts: SolverOptions<T>,
) -> CaseRun<T> {
    let mut run = CaseRun { rows: Vec::new(), details: Vec::new(), error: None };
    for (i, mesh) in meshes.iter().enumerate() {
        let prev = run.rows.last().copied();
        match run_row(case, mesh, mode, opts, i + 1, prev) {
            Ok((row, detail)) => {
                run.rows.push(row);
                run.details.push(detail);
            }
            Err(e) => {
                run.error = Some(e);
                break;
            }
        }
    }
    run
}

fn run_row<T: Scalar>(
    case: &ExampleCase<T>,
    mesh: &Mesh<T>,
    mode: HessianMode,
    opts: SolverOptions<T>,
    step: usize,
    prev: Option<TableRow<T>>,
) -> Result<(TableRow<T>, RowDetail<T>)> {
    let problem = &case.problem;
    let has_exact_h = problem.exact.as_ref().is_some_and(|e| e.hessian.is_some());
    if mode == HessianMode::Exact && !has_exact_h {
        return Err(Error::MissingExact("Hessian"));
    }
    let u_h = solve(mesh, problem, opts)?;
    let errors = true_errors(mesh, problem, &u_h)?;
    let norm = NormMode::for_problem(problem);

    let h_exact = if has_exact_h { Some(exact_hessian(mesh, problem)?) } else { None };
    let h_rec = if mode.recovered() || has_exact_h { Some(recover_hessian_qf(mesh, &u_h)?) } else { None };

    let estimate = |h: &HessianField<T>| -> Result<_> {
        let report = disc_estimator_with_cell_hessians(mesh, &u_h, &h.cell_means(mesh), problem)?;
        let eff = efficiency_indices(&report, &errors, norm)?;
        Ok((report, eff))
    };
    let exact = match (&h_exact, mode.exact()) {
        (Some(h), true) => Some(estimate(h)?),
        _ => None,
    };
    let recovered = match (&h_rec, mode.recovered()) {
        (Some(h), true) => Some(estimate(h)?),
        _ => None,
    };
    let h_err = match (&h_exact, &h_rec) {
        (Some(a), Some(b)) => Some(hessian_error_norm(mesh, a, b)),
        _ => None,
    };
    let delta = match (prev.and_then(|p| p.h_err.map(|e| (e, p.n_cells))), h_err) {
        (Some((e0, n0)), Some(e1)) => convergence_delta(e0, n0, e1, mesh.num_cells()).ok(),
        _ => None,
    };
    let row = TableRow {
        step,
        n_cells: mesh.num_cells(),
        e: exact.as_ref().map(|x| x.1.e),
        e_r: recovered.as_ref().map(|x| x.1.e),
        ei: exact.as_ref().map(|x| x.1.ei),
        ei_r: recovered.as_ref().map(|x| x.1.ei),
        h_err,
        delta,
    };
    let detail = RowDetail {
        n_vertices: mesh.num_vertices(),
        errors,
        exact: exact.map(|x| x.0),
        recovered: recovered.map(|x| x.0),
    };
    Ok((row, detail))
}

/// Least-squares line `ln y = c + slope ln x`.
pub fn loglog_slope<T: Scalar>(points: &[(T, T)]) -> Result<T> {
    if points.len() < 2 {
        return Err(Error::Undefined("a rate needs at least two points".into()));
    }
    if points.iter().any(|&(x, y)| !(x > T::zero() && y > T::zero())) {
        return Err(Error::Undefined("a log-log rate needs positive data".into()));
    }
    let n = T::from_usize_lossy(points.len());
    let lx: Vec<T> = points.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<T> = points.iter().map(|p| p.1.ln()).collect();
    let mx = compensated_sum(lx.iter().copied()) / n;
    let my = compensated_sum(ly.iter().copied()) / n;
    let sxy = compensated_sum(lx.iter().zip(&ly).map(|(&x, &y)| (x - mx) * (y - my)));
    let sxx = compensated_sum(lx.iter().map(|&x| (x - mx) * (x - mx)));
    if sxx == T::zero() {
        return Err(Error::Undefined("a rate needs at least two distinct sizes".into()));
    }
    Ok(sxy / sxx)
}

/// Fitted `‖∇(u_I-u_h)‖ ~ N^ρ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuperapproxFit<T> {
    pub rate: T,
    /// `-ρ - 1/2`.
    pub gamma: T,
}

pub fn superapprox_rate<T: Scalar>(rows: &[(usize, T)]) -> Result<SuperapproxFit<T>> {
    let pts: Vec<(T, T)> = rows.iter().map(|&(n, e)| (T::from_usize_lossy(n), e)).collect();
    let rate = loglog_slope(&pts)?;
    Ok(SuperapproxFit { rate, gamma: -rate - T::lit(0.5) })
}

/// Uniform meshes of the case's domain for each subdivision count.
pub fn uniform_family<T: Scalar>(domain: Domain<T>, ns: &[usize]) -> Result<Vec<Mesh<T>>> {
    ns.iter()
        .map(|&n| match domain {
            Domain::Rect(r) => generate_uniform(n, r),
            Domain::LShape => generate_l_shape(n),
        })
        .collect()
}

/// Graded meshes of a rectangular domain, one per `(n, grading)` level.
pub fn graded_family<T: Scalar>(domain: Domain<T>, levels: &[(usize, Grading<T>)]) -> Result<Vec<Mesh<T>>> {
    let Domain::Rect(r) = domain else {
        return Err(Error::InvalidParameter("graded meshes need a rectangular domain".into()));
    };
    levels.iter().map(|&(n, g)| generate_graded(n, r, g)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_mesh, Rect, Vertex};
    use crate::Vec2;

    #[test]
    fn interpolant_has_zero_superapprox() {
        let case = catalog::<f64>(CaseId::Ex43);
        let m = generate_uniform(4, Rect::unit()).unwrap();
        let u_i = interpolate(&m, |p| (case.problem.exact.as_ref().unwrap().u)(p));
        let e = true_errors(&m, &case.problem, &u_i).unwrap();
        assert_eq!(e.superapprox, 0.0);
        assert_eq!(e.grad_err, e.interp_grad_err);
        assert!(e.energy_err_sq.is_none());
    }

    #[test]
    fn linear_solution_is_exact() {
        let p = ProblemSpec::poisson(|_| 0.0, |x: Vec2<f64>| 1.0 + 2.0 * x.x - 3.0 * x.y).with_exact(
            crate::fem::ExactSolution {
                u: std::sync::Arc::new(|x: Vec2<f64>| 1.0 + 2.0 * x.x - 3.0 * x.y),
                grad: std::sync::Arc::new(|_| Vec2::new(2.0, -3.0)),
                hessian: None,
            },
        );
        let m = generate_uniform(5, Rect::unit()).unwrap();
        let u = solve(&m, &p, Default::default()).unwrap();
        let e = true_errors(&m, &p, &u).unwrap();
        assert!(e.grad_err <= 1e-10 && e.l2_err <= 1e-10 && e.superapprox <= 1e-10);
    }

    #[test]
    fn x_squared_on_reference_triangle() {
        let m = build_mesh(
            vec![Vertex::new(0.0, 0.0), Vertex::new(1.0, 0.0), Vertex::new(0.0, 1.0)],
            vec![[0, 1, 2]],
        )
        .unwrap();
        let p = ProblemSpec::poisson(|_| -2.0, |x: Vec2<f64>| x.x * x.x).with_exact(crate::fem::ExactSolution {
            u: std::sync::Arc::new(|x: Vec2<f64>| x.x * x.x),
            grad: std::sync::Arc::new(|x: Vec2<f64>| Vec2::new(2.0 * x.x, 0.0)),
            hessian: None,
        });
        let u_i = interpolate(&m, |x| x.x * x.x);
        let e = true_errors(&m, &p, &u_i).unwrap();
        assert!((e.grad_err * e.grad_err - 1.0 / 6.0).abs() < 1e-14);
    }

    #[test]
    fn energy_norm_with_unit_epsilon() {
        let case = catalog::<f64>(CaseId::Ex43);
        let p = case.problem.clone().with_epsilon(1.0);
        let m = generate_uniform(4, Rect::unit()).unwrap();
        let u = solve(&m, &p, Default::default()).unwrap();
        let e = true_errors(&m, &p, &u).unwrap();
        let expect = e.l2_err * e.l2_err + e.grad_err * e.grad_err;
        assert!((e.energy_err_sq.unwrap() - expect).abs() < 1e-14 * expect);
    }

    #[test]
    fn rates() {
        let fit = superapprox_rate::<f64>(&[(10, 0.1), (100, 0.01), (1000, 0.001)]).unwrap();
        assert!((fit.rate + 1.0).abs() < 1e-12 && (fit.gamma - 0.5).abs() < 1e-12);
        let fit = superapprox_rate::<f64>(&[(10, 2.0), (40, 2.0)]).unwrap();
        assert!(fit.rate.abs() < 1e-15 && (fit.gamma + 0.5).abs() < 1e-15);
        assert!(superapprox_rate::<f64>(&[(10, 1.0)]).is_err());
    }

    #[test]
    fn empty_run() {
        let case = catalog::<f64>(CaseId::Ex43);
        let run = run_case(&case, &[], HessianMode::Both, Default::default());
        assert!(run.rows.is_empty() && run.error.is_none());
    }

    #[test]
    fn exact_hessian_in_recovered_slot_gives_equal_indices() {
        let case = catalog::<f64>(CaseId::Ex43);
        let m = generate_uniform(8, Rect::unit()).unwrap();
        let u = solve(&m, &case.problem, Default::default()).unwrap();
        let errs = true_errors(&m, &case.problem, &u).unwrap();
        let h = exact_hessian(&m, &case.problem).unwrap();
        let r = crate::estimators::disc_estimator(&m, &u, &h, &case.problem).unwrap();
        let eff = efficiency_indices(&r, &errs, NormMode::H1).unwrap();
        let run = run_case(&case, std::slice::from_ref(&m), HessianMode::Exact, Default::default());
        let row = run.rows[0];
        assert_eq!(row.e, Some(eff.e));
        assert_eq!(row.ei, Some(eff.ei));
        let direct = r.eta_i * r.eta_i / (errs.grad_err * errs.grad_err);
        assert!((row.ei.unwrap() - direct).abs() <= 1e-12 * direct);
    }

    #[test]
    fn l_shape_has_no_exact_columns() {
        let case = catalog::<f64>(CaseId::Ex45);
        let meshes = uniform_family(case.domain, &[2, 4]).unwrap();
        let (rows, _) = run_case(&case, &meshes, HessianMode::Both, Default::default()).into_result().unwrap();
        for r in &rows {
            assert!(r.e.is_none() && r.ei.is_none() && r.h_err.is_none() && r.delta.is_none());
            assert!(r.e_r.unwrap().is_finite() && r.ei_r.unwrap() > 0.0);
        }
        let err = run_case(&case, &meshes, HessianMode::Exact, Default::default());
        assert!(err.rows.is_empty() && matches!(err.error, Some(Error::MissingExact(_))));
    }
}
