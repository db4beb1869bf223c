use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} has a non-finite coordinate")]
    NonFiniteVertex { vertex: usize },
    #[error("cell {cell} references vertex {index}, but the mesh has {count} vertices")]
    IndexOutOfRange { cell: usize, index: usize, count: usize },
    #[error("cell {cell} is degenerate (repeated vertex or zero area)")]
    DegenerateCell { cell: usize },
    #[error("cell {cell} duplicates cell {first}")]
    DuplicateCell { cell: usize, first: usize },
    #[error("cell {cell} makes the mesh non-conforming at edge ({a}, {b})")]
    NonConforming { cell: usize, a: usize, b: usize },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("grading map is not monotone: {0}")]
    NonMonotoneGrading(String),
    #[error("generated cell {cell} is inverted; the grading is too strong for this resolution")]
    InvertedCell { cell: usize },
    #[error("coefficient matrix is not symmetric positive definite in cell {cell}")]
    NonSpdCoefficient { cell: usize },
    #[error("reaction coefficient is negative in cell {cell}")]
    NegativeReaction { cell: usize },
    #[error("linear solver did not converge after {iterations} iterations (relative residual {residual:e})")]
    SolverDiverged { iterations: usize, residual: f64 },
    #[error("field has {found} values, but the mesh has {expected} vertices")]
    SizeMismatch { expected: usize, found: usize },
    #[error("problem has no exact {0}; use the recovered Hessian instead")]
    MissingExact(&'static str),
    #[error("Hessian recovery failed at vertex {vertex}: patch is rank deficient")]
    RankDeficientPatch { vertex: usize },
    #[error("undefined quantity: {0}")]
    Undefined(String),
    #[error("unknown example case `{0}`")]
    UnknownCase(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
