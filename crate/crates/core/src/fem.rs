//! P1 Galerkin discretization of `-div(a ∇u) + b u = f` with Dirichlet data.

use std::fmt;
use std::sync::Arc;

use crate::mesh::Mesh;
use crate::quadrature::{high_order_rule, integrate_cell, TriangleRule};
use crate::sparse::{conjugate_gradient, residual_norm, CsrMatrix};
use crate::{Error, Result, Scalar, Sym2, Vec2};

pub type ScalarFn<T> = Arc<dyn Fn(Vec2<T>) -> T + Send + Sync>;
pub type VectorFn<T> = Arc<dyn Fn(Vec2<T>) -> Vec2<T> + Send + Sync>;
pub type TensorFn<T> = Arc<dyn Fn(Vec2<T>) -> Sym2<T> + Send + Sync>;

/// Closed-form exact solution used for true errors and exact Hessians.
#[derive(Clone)]
pub struct ExactSolution<T> {
    pub u: ScalarFn<T>,
    pub grad: VectorFn<T>,
    /// Absent when the solution is not in H² (re-entrant corners).
    pub hessian: Option<TensorFn<T>>,
}

/// Coefficients and data of `-Σ ∂_i(a_ij ∂_j u) + b u = f`, `u = g` on the
/// boundary.
#[derive(Clone)]
pub struct ProblemSpec<T> {
    pub diffusion: TensorFn<T>,
    pub reaction: ScalarFn<T>,
    pub source: ScalarFn<T>,
    pub dirichlet: ScalarFn<T>,
    pub exact: Option<ExactSolution<T>>,
    /// Perturbation parameter of reaction–diffusion problems; selects the
    /// energy norm `ε⁻¹‖v‖² + ‖∇v‖²` for efficiency indices.
    pub epsilon: Option<T>,
}

impl<T: Scalar> ProblemSpec<T> {
    /// `-Δu = f` with `u = g` on the boundary.
    pub fn poisson(
        source: impl Fn(Vec2<T>) -> T + Send + Sync + 'static,
        dirichlet: impl Fn(Vec2<T>) -> T + Send + Sync + 'static,
    ) -> Self {
        Self {
            diffusion: Arc::new(|_| Sym2::identity()),
            reaction: Arc::new(|_| T::zero()),
            source: Arc::new(source),
            dirichlet: Arc::new(dirichlet),
            exact: None,
            epsilon: None,
        }
    }

    pub fn with_diffusion(mut self, a: impl Fn(Vec2<T>) -> Sym2<T> + Send + Sync + 'static) -> Self {
        self.diffusion = Arc::new(a);
        self
    }

    pub fn with_reaction(mut self, b: impl Fn(Vec2<T>) -> T + Send + Sync + 'static) -> Self {
        self.reaction = Arc::new(b);
        self
    }

    pub fn with_exact(mut self, exact: ExactSolution<T>) -> Self {
        self.exact = Some(exact);
        self
    }

    pub fn with_epsilon(mut self, epsilon: T) -> Self {
        self.epsilon = Some(epsilon);
        self
    }
}

impl<T: fmt::Debug> fmt::Debug for ProblemSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("exact", &self.exact.as_ref().map(|e| e.hessian.is_some()))
            .field("epsilon", &self.epsilon)
            .finish_non_exhaustive()
    }
}

/// One value per mesh vertex (u_h, u_I, ...).
#[derive(Clone, Debug, PartialEq)]
pub struct NodalField<T> {
    pub values: Vec<T>,
}

impl<T: Scalar> NodalField<T> {
    pub fn for_mesh(mesh: &Mesh<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != mesh.num_vertices() {
            return Err(Error::SizeMismatch { expected: mesh.num_vertices(), found: values.len() });
        }
        Ok(Self { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value of the piecewise-linear function in cell `k` at barycentric `bary`.
    pub fn eval_in_cell(&self, mesh: &Mesh<T>, k: usize, bary: [T; 3]) -> T {
        let v = mesh.cells()[k].v;
        self.values[v[0]] * bary[0] + self.values[v[1]] * bary[1] + self.values[v[2]] * bary[2]
    }
}

#[derive(Clone, Debug)]
pub struct LinearSystem<T> {
    pub matrix: CsrMatrix<T>,
    pub rhs: Vec<T>,
}

#[derive(Clone, Copy, Debug)]
pub struct SolverOptions<T> {
    /// Relative residual target `‖Ax - b‖ / ‖b‖`.
    pub tol: T,
    /// `None` selects `max(1000, 20 n)`.
    pub max_iter: Option<usize>,
}

impl<T: Scalar> Default for SolverOptions<T> {
    fn default() -> Self {
        Self { tol: T::lit(1e-12), max_iter: None }
    }
}

/// Cell average `(1/|K|) ∫_K a` of the diffusion tensor, checking that every
/// quadrature sample is SPD.
pub fn cell_average_coefficient<T: Scalar>(
    mesh: &Mesh<T>,
    problem: &ProblemSpec<T>,
    k: usize,
) -> Result<Sym2<T>> {
    cell_average_with(&high_order_rule(), mesh, problem, k)
}

fn cell_average_with<T: Scalar>(
    rule: &TriangleRule<T>,
    mesh: &Mesh<T>,
    problem: &ProblemSpec<T>,
    k: usize,
) -> Result<Sym2<T>> {
    let g = mesh.geometry(k);
    let mut avg = Sym2::zero();
    for (b, &w) in rule.points.iter().zip(&rule.weights) {
        let a = (problem.diffusion)(g.point(*b));
        if !a.is_finite() || !a.is_positive_definite() {
            return Err(Error::NonSpdCoefficient { cell: k });
        }
        avg += a.scale(w);
    }
    Ok(avg)
}

/// Global stiffness (with cell-averaged diffusion), reaction mass and load.
pub fn assemble<T: Scalar>(mesh: &Mesh<T>, problem: &ProblemSpec<T>) -> Result<LinearSystem<T>> {
    let rule = high_order_rule::<T>();
    let n = mesh.num_vertices();
    let mut triplets = Vec::with_capacity(9 * mesh.num_cells());
    let mut rhs = vec![T::zero(); n];
    for k in 0..mesh.num_cells() {
        let g = mesh.geometry(k);
        let abar = cell_average_with(&rule, mesh, problem, k)?;
        let mut mass = [[T::zero(); 3]; 3];
        let mut load = [T::zero(); 3];
        for (bary, &w) in rule.points.iter().zip(&rule.weights) {
            let x = g.point(*bary);
            let b = (problem.reaction)(x);
            if !(b >= T::zero()) {
                return Err(Error::NegativeReaction { cell: k });
            }
            let f = (problem.source)(x);
            for i in 0..3 {
                load[i] += w * f * bary[i];
                for j in i..3 {
                    mass[i][j] += w * b * bary[i] * bary[j];
                }
            }
        }
        let v = mesh.cells()[k].v;
        for i in 0..3 {
            rhs[v[i]] += load[i] * g.area;
            for j in i..3 {
                let kij = g.area * (abar.bilinear(g.grad_lambda[i], g.grad_lambda[j]) + mass[i][j]);
                triplets.push((v[i], v[j], kij));
                if i != j {
                    triplets.push((v[j], v[i], kij));
                }
            }
        }
    }
    Ok(LinearSystem { matrix: CsrMatrix::from_triplets(n, triplets), rhs })
}

/// Imposes `u = g` at boundary vertices by symmetric elimination: boundary
/// columns move to the right-hand side, boundary rows become identity rows.
pub fn apply_dirichlet<T: Scalar>(
    mut system: LinearSystem<T>,
    mesh: &Mesh<T>,
    problem: &ProblemSpec<T>,
) -> LinearSystem<T> {
    let n = mesh.num_vertices();
    let fixed: Vec<Option<T>> = (0..n)
        .map(|v| mesh.is_boundary_vertex(v).then(|| (problem.dirichlet)(mesh.position(v))))
        .collect();
    for i in 0..n {
        let (cols, vals) = system.matrix.row_mut(i);
        if let Some(gi) = fixed[i] {
            for (&j, a) in cols.iter().zip(vals.iter_mut()) {
                *a = if j == i { T::one() } else { T::zero() };
            }
            system.rhs[i] = gi;
        } else {
            let mut shift = T::zero();
            for (&j, a) in cols.iter().zip(vals.iter_mut()) {
                if let Some(gj) = fixed[j] {
                    shift += *a * gj;
                    *a = T::zero();
                }
            }
            system.rhs[i] -= shift;
        }
    }
    system
}

/// Solves an SPD system to the requested relative residual.
pub fn solve_spd<T: Scalar>(system: &LinearSystem<T>, opts: SolverOptions<T>) -> Result<NodalField<T>> {
    let n = system.rhs.len();
    let max_iter = opts.max_iter.unwrap_or_else(|| (20 * n).max(1000));
    let out = conjugate_gradient(&system.matrix, &system.rhs, opts.tol, max_iter)?;
    Ok(NodalField { values: out.x })
}

/// Relative residual of a candidate solution.
pub fn relative_residual<T: Scalar>(system: &LinearSystem<T>, field: &NodalField<T>) -> T {
    let bnorm = system.rhs.iter().map(|&v| v * v).sum::<T>().sqrt();
    let r = residual_norm(&system.matrix, &field.values, &system.rhs);
    if bnorm == T::zero() {
        r
    } else {
        r / bnorm
    }
}

/// Assemble, impose boundary data and solve.
pub fn solve<T: Scalar>(mesh: &Mesh<T>, problem: &ProblemSpec<T>, opts: SolverOptions<T>) -> Result<NodalField<T>> {
    let system = apply_dirichlet(assemble(mesh, problem)?, mesh, problem);
    solve_spd(&system, opts)
}

/// Nodal interpolant `u_I`.
pub fn interpolate<T: Scalar>(mesh: &Mesh<T>, f: impl Fn(Vec2<T>) -> T) -> NodalField<T> {
    NodalField { values: mesh.vertices().iter().map(|v| f(v.pos())).collect() }
}

/// Constant gradient `Σ_i u(a_i) ∇λ_i` of the P1 field in cell `k`.
pub fn cell_gradient<T: Scalar>(mesh: &Mesh<T>, field: &NodalField<T>, k: usize) -> Vec2<T> {
    let g = mesh.geometry(k);
    let v = mesh.cells()[k].v;
    g.grad_lambda[0] * field.values[v[0]] + g.grad_lambda[1] * field.values[v[1]] + g.grad_lambda[2] * field.values[v[2]]
}

/// `∫_Ω f` over the mesh with the degree-6 rule.
pub fn integrate_over<T: Scalar>(mesh: &Mesh<T>, f: impl Fn(Vec2<T>) -> T) -> T {
    let rule = high_order_rule::<T>();
    crate::scalar::compensated_sum((0..mesh.num_cells()).map(|k| integrate_cell(&rule, &mesh.geometry(k), &f)))
}
