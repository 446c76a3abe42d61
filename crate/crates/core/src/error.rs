use thiserror::Error;

/// Every failure surfaced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degenerate lattice: generators span a rank-{rank} subspace of Q^{dim}")]
    DegenerateLattice { rank: usize, dim: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("vector {0} is not in the lattice")]
    NotInGamma(String),

    #[error("singular block in group element: {0}")]
    SingularBlock(&'static str),

    #[error("elements belong to different algebras")]
    ParamsMismatch,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("exponent vectors of different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error("homogeneous part of degree {0} is zero")]
    ZeroPart(String),

    #[error("zero direction: a leading term needs a nonzero derivation")]
    ZeroDirection,

    #[error("direction is not in the admissible derivation subspace for alpha - rho = {0}")]
    NotInDAlphaRho(String),

    #[error("admissibility violated: alpha = rho needs i_m = 0 or a_m = 0 (m = {0})")]
    AdmissibilityViolated(usize),

    #[error("operation requires l1 >= 1")]
    RequiresL1,

    #[error("shape tuples differ: {0:?} vs {1:?}")]
    InvariantMismatch((usize, usize, usize), (usize, usize, usize)),

    #[error("witness rejected: {0}")]
    WitnessInvalid(String),

    #[error("induced map failed validation: {0}")]
    LiftValidationFailed(String),

    #[error("invalid derivation handle: {0}")]
    InvalidHandle(String),

    #[error("element is not in S: {0}")]
    NotInS(String),

    #[error("classification needs l >= 3 (got l = {0})")]
    HypothesisViolated(usize),

    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("arity error: {0}")]
    Arity(String),

    #[error("invalid rational literal {0:?}")]
    BadRational(String),

    #[error("json: {0}")]
    Json(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

impl Error {
    /// Stable machine-readable tag, used by the CLI's structured errors.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DegenerateLattice { .. } => "DegenerateLattice",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NotInGamma(_) => "NotInGamma",
            Error::SingularBlock(_) => "SingularBlock",
            Error::ParamsMismatch => "ParamsMismatch",
            Error::InvalidParams(_) => "InvalidParams",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::LengthMismatch(..) => "LengthMismatch",
            Error::ZeroPart(_) => "ZeroPart",
            Error::ZeroDirection => "ZeroDirection",
            Error::NotInDAlphaRho(_) => "NotInDAlphaRho",
            Error::AdmissibilityViolated(_) => "AdmissibilityViolated",
            Error::RequiresL1 => "RequiresL1",
            Error::InvariantMismatch(..) => "InvariantMismatch",
            Error::WitnessInvalid(_) => "WitnessInvalid",
            Error::LiftValidationFailed(_) => "LiftValidationFailed",
            Error::InvalidHandle(_) => "InvalidHandle",
            Error::NotInS(_) => "NotInS",
            Error::HypothesisViolated(_) => "HypothesisViolated",
            Error::Syntax { .. } => "SyntaxError",
            Error::Arity(_) => "ArityError",
            Error::BadRational(_) => "BadRational",
            Error::Json(_) => "Json",
        }
    }
}
