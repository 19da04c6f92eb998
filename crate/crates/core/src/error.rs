use thiserror::Error;

/// Errors raised across the crate.
///
/// Variants are grouped by how the command line reports them: malformed
/// input, failed mathematical validation, and numerical non-convergence.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("trivial fiber: only y = 0 solves the complex moment map equations for this x")]
    TrivialFiber,

    #[error("degenerate x: no full-rank sample found after {attempts} attempts")]
    DegenerateX { attempts: usize },

    #[error("non-convergence: best residual {best_residual:.3e} after {restarts} restarts")]
    NonConvergence { best_residual: f64, restarts: usize },

    #[error("not on polygon level set: {0}")]
    NotOnPolygonLevelSet(String),

    #[error("zero matrix: the factorization fibre is all of projective space")]
    ZeroMatrix,

    #[error("matrix is not in the minimal nilpotent orbit closure")]
    NotInMinimalOrbit,

    #[error("complex moment map violated{}", index.map(|i| format!(" at index {}", i + 1)).unwrap_or_default())]
    ComplexMomentMapViolated { index: Option<usize> },

    #[error("evaluation at pole")]
    EvaluationAtPole,

    #[error("degree overflow in component {component}: {detail}")]
    DegreeOverflow { component: usize, detail: String },

    #[error("coincident evaluation points")]
    CoincidentEvaluationPoints,

    #[error("degenerate discriminant: the spectral curve is non-reduced")]
    DegenerateDiscriminant,

    #[error("validation failed: {0}")]
    Validation(String),
}

impl Error {
    /// Command-line exit code for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument(_) | Error::Parse(_) => 3,
            Error::NonConvergence { .. } => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
