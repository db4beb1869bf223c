//! Model problems with closed-form solutions, sources, gradients and
//! Hessians.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::fem::{ExactSolution, ProblemSpec};
use crate::mesh::Rect;
use crate::{Error, Scalar, Sym2, Vec2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseId {
    /// Sharp sigmoid layer along `x + y = 0.85`.
    Ex41,
    /// Same problem as [`CaseId::Ex41`], meant for adaptive mesh sequences.
    Ex42,
    /// `u = exp(x² - 0.8)`, varying in `x` only.
    Ex43,
    /// Zigzag `tanh` layer on `(-1, 1)²`.
    Ex44,
    /// Corner singularity on the L-shaped domain.
    Ex45,
    /// Reaction–diffusion `-εΔu + u = f` with the sigmoid solution.
    Ex46,
    /// `u = 1 + 2x - 3y`, reproduced exactly by P1 elements.
    Linear,
}

impl CaseId {
    pub const ALL: [CaseId; 7] =
        [Self::Ex41, Self::Ex42, Self::Ex43, Self::Ex44, Self::Ex45, Self::Ex46, Self::Linear];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Ex41 => "4.1",
            Self::Ex42 => "4.2",
            Self::Ex43 => "4.3",
            Self::Ex44 => "4.4",
            Self::Ex45 => "4.5",
            Self::Ex46 => "4.6",
            Self::Linear => "linear",
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CaseId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        CaseId::ALL
            .into_iter()
            .find(|c| c.as_str() == s.trim())
            .ok_or_else(|| Error::UnknownCase(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Domain<T> {
    Rect(Rect<T>),
    /// `(-0.5, 0.5) × (0, 0.5) ∪ (-0.5, 0) × (-0.5, 0)`.
    LShape,
}

#[derive(Clone, Debug)]
pub struct ExampleCase<T> {
    pub id: CaseId,
    pub problem: ProblemSpec<T>,
    pub domain: Domain<T>,
    pub notes: &'static str,
}

/// Layer parameter of the sigmoid solution.
pub const SIGMOID_EPSILON: f64 = 0.005;

pub fn catalog<T: Scalar>(id: CaseId) -> ExampleCase<T> {
    match id {
        CaseId::Ex41 | CaseId::Ex42 => ExampleCase {
            id,
            problem: sigmoid_poisson(),
            domain: Domain::Rect(Rect::unit()),
            notes: "-Δu = f on (0,1)², u = 1/(1 + exp((x+y-0.85)/(2ε))), ε = 0.005",
        },
        CaseId::Ex43 => ExampleCase {
            id,
            problem: exp_poisson(),
            domain: Domain::Rect(Rect::unit()),
            notes: "-Δu = f on (0,1)², u = exp(x² - 0.8)",
        },
        CaseId::Ex44 => ExampleCase {
            id,
            problem: zigzag_poisson(),
            domain: Domain::Rect(Rect::new(-T::one(), -T::one(), T::one(), T::one())),
            notes: "-Δu = f on (-1,1)², u = x²y + y³ + tanh(10(sin 5y - 2x))",
        },
        CaseId::Ex45 => ExampleCase {
            id,
            problem: corner_laplace(),
            domain: Domain::LShape,
            notes: "-Δu = 0 on the L-shape, u = r^(2/3) sin(2θ/3); no exact Hessian",
        },
        CaseId::Ex46 => ExampleCase {
            id,
            problem: sigmoid_reaction_diffusion(),
            domain: Domain::Rect(Rect::unit()),
            notes: "-εΔu + u = f on (0,1)², sigmoid solution, ε = 0.005",
        },
        CaseId::Linear => ExampleCase {
            id,
            problem: linear_laplace(),
            domain: Domain::Rect(Rect::unit()),
            notes: "-Δu = 0 on (0,1)², u = 1 + 2x - 3y",
        },
    }
}

fn problem_from<T: Scalar>(
    u: impl Fn(Vec2<T>) -> T + Send + Sync + Clone + 'static,
    grad: impl Fn(Vec2<T>) -> Vec2<T> + Send + Sync + 'static,
    hessian: Option<Arc<dyn Fn(Vec2<T>) -> Sym2<T> + Send + Sync>>,
    source: impl Fn(Vec2<T>) -> T + Send + Sync + 'static,
) -> ProblemSpec<T> {
    ProblemSpec::poisson(source, u.clone()).with_exact(ExactSolution {
        u: Arc::new(u),
        grad: Arc::new(grad),
        hessian,
    })
}

fn linear_laplace<T: Scalar>() -> ProblemSpec<T> {
    let (two, three) = (T::lit(2.0), T::lit(3.0));
    problem_from(
        move |p: Vec2<T>| T::one() + two * p.x - three * p.y,
        move |_| Vec2::new(two, -three),
        Some(Arc::new(|_| Sym2::zero())),
        |_| T::zero(),
    )
}

/// Value `u`, common first derivative and common second derivative of the
/// sigmoid (all mixed and pure second derivatives coincide).
fn sigmoid<T: Scalar>(p: Vec2<T>) -> (T, T, T) {
    let eps = T::lit(SIGMOID_EPSILON);
    let k = T::one() / (eps + eps);
    let z = (p.x + p.y - T::lit(0.85)) * k;
    // evaluated without overflow for either sign of z
    let u = if z > T::zero() {
        let e = (-z).exp();
        e / (T::one() + e)
    } else {
        T::one() / (T::one() + z.exp())
    };
    let s = u * (T::one() - u);
    let d1 = -k * s;
    let d2 = k * k * s * (T::one() - u - u);
    (u, d1, d2)
}

fn sigmoid_poisson<T: Scalar>() -> ProblemSpec<T> {
    problem_from(
        |p| sigmoid(p).0,
        |p| {
            let d = sigmoid(p).1;
            Vec2::new(d, d)
        },
        Some(Arc::new(|p| {
            let d = sigmoid(p).2;
            Sym2::new(d, d, d)
        })),
        |p| -(sigmoid(p).2 * T::lit(2.0)),
    )
}

fn sigmoid_reaction_diffusion<T: Scalar>() -> ProblemSpec<T> {
    let eps = T::lit(SIGMOID_EPSILON);
    problem_from(
        |p| sigmoid(p).0,
        |p| {
            let d = sigmoid(p).1;
            Vec2::new(d, d)
        },
        Some(Arc::new(|p| {
            let d = sigmoid(p).2;
            Sym2::new(d, d, d)
        })),
        move |p| {
            let (u, _, d2) = sigmoid(p);
            -eps * (d2 + d2) + u
        },
    )
    .with_diffusion(move |_| Sym2::scaled_identity(eps))
    .with_reaction(|_| T::one())
    .with_epsilon(eps)
}

fn exp_poisson<T: Scalar>() -> ProblemSpec<T> {
    let u = |p: Vec2<T>| (p.x * p.x - T::lit(0.8)).exp();
    let uxx = move |p: Vec2<T>| (T::lit(2.0) + T::lit(4.0) * p.x * p.x) * u(p);
    problem_from(
        u,
        move |p| Vec2::new(T::lit(2.0) * p.x * u(p), T::zero()),
        Some(Arc::new(move |p| Sym2::new(uxx(p), T::zero(), T::zero()))),
        move |p| -uxx(p),
    )
}

struct Zigzag<T> {
    t: T,
    dt: T,
    ddt: T,
    gy: T,
    gyy: T,
}

const ZIGZAG_GX: f64 = -20.0;

fn zigzag<T: Scalar>(p: Vec2<T>) -> Zigzag<T> {
    let five_y = T::lit(5.0) * p.y;
    let g = T::lit(10.0) * (five_y.sin() - T::lit(2.0) * p.x);
    let t = g.tanh();
    let dt = T::one() - t * t;
    Zigzag { t, dt, ddt: T::lit(-2.0) * t * dt, gy: T::lit(50.0) * five_y.cos(), gyy: T::lit(-250.0) * five_y.sin() }
}

fn zigzag_hessian<T: Scalar>(p: Vec2<T>) -> Sym2<T> {
    let z = zigzag(p);
    let gx = T::lit(ZIGZAG_GX);
    let two = T::lit(2.0);
    Sym2::new(
        two * p.y + z.ddt * gx * gx,
        two * p.x + z.ddt * gx * z.gy,
        T::lit(6.0) * p.y + z.ddt * z.gy * z.gy + z.dt * z.gyy,
    )
}

fn zigzag_poisson<T: Scalar>() -> ProblemSpec<T> {
    problem_from(
        |p: Vec2<T>| p.x * p.x * p.y + p.y * p.y * p.y + zigzag(p).t,
        |p| {
            let z = zigzag(p);
            Vec2::new(
                T::lit(2.0) * p.x * p.y + z.dt * T::lit(ZIGZAG_GX),
                p.x * p.x + T::lit(3.0) * p.y * p.y + z.dt * z.gy,
            )
        },
        Some(Arc::new(zigzag_hessian)),
        |p| -zigzag_hessian(p).trace(),
    )
}

/// Polar angle in `[0, 2π)`.
fn angle<T: Scalar>(p: Vec2<T>) -> T {
    let t = p.y.atan2(p.x);
    if t < T::zero() {
        t + T::TAU()
    } else {
        t
    }
}

fn corner_laplace<T: Scalar>() -> ProblemSpec<T> {
    let two_thirds = T::lit(2.0) / T::lit(3.0);
    problem_from(
        move |p: Vec2<T>| {
            let r = p.norm();
            if r == T::zero() {
                return T::zero();
            }
            r.powf(two_thirds) * (two_thirds * angle(p)).sin()
        },
        move |p: Vec2<T>| {
            let r = p.norm();
            if r == T::zero() {
                return Vec2::zero();
            }
            let third = angle(p) / T::lit(3.0);
            let s = two_thirds * r.powf(-T::one() / T::lit(3.0));
            Vec2::new(s * (-third).sin(), s * (-third).cos())
        },
        None,
        |_| T::zero(),
    )
}
