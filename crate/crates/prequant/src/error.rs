//! Crate-wide error type.

use thiserror::Error;

/// Errors produced anywhere in the pipeline.
///
/// Variants are grouped by the stage that raises them: catalog resolution,
/// numerical verification, holonomy routing, obstruction solving, and
/// scenario ingestion.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported group for this operation: {0}")]
    UnsupportedGroup(String),

    #[error("algebra element has {got} coordinates, group needs {expected}")]
    AlgebraDimension { expected: usize, got: usize },

    #[error("operands belong to different groups or surfaces")]
    Mismatch,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("quadrature did not converge: I_N = {coarse}, I_2N = {fine}")]
    QuadratureDivergence { coarse: f64, fine: f64 },

    #[error("curvature flux {flux} is not within {tol} of an integer")]
    NotIntegral { flux: f64, tol: f64 },

    #[error("loop is sampled too coarsely for a homology class (residual {residual})")]
    HomologyResidual { residual: f64 },

    #[error("no holonomy route applies: {0}")]
    NoRoute(String),

    #[error("cap boundary does not trace the loop (max deviation {deviation})")]
    CapMismatch { deviation: f64 },

    #[error("curve endpoint does not match the group translate of its start (gap {gap})")]
    EndpointMismatch { gap: f64 },

    #[error("obstruction samples disagree beyond tolerance: {details}")]
    InconsistentDelta { details: String },

    #[error("torsion obstruction is nonzero (worst value {worst}); no moment shift can cancel it")]
    TorsionObstruction { worst: f64 },

    #[error("flat-twist system is singular: {0}")]
    SingularTwistSystem(String),

    #[error("moment map fails verification: {0}")]
    MomentMapInvalid(String),

    #[error("scenario parse error: {0}")]
    Parse(String),

    #[error("unknown builtin or unreadable scenario: {0}")]
    UnknownScenario(String),

    #[error("unknown output format: {0}")]
    UnknownFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the CLI: 3 for numerical failures, 4 for
    /// ingestion problems.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_)
            | Error::UnknownScenario(_)
            | Error::UnknownFormat(_)
            | Error::Io(_)
            | Error::Json(_) => 4,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
