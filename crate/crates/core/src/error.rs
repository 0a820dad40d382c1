use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters n={n}, a={a}: {reason}")]
    InvalidParams { n: usize, a: f64, reason: &'static str },
    #[error("end coupling a={a} makes a^2 = 2, the characteristic equation is singular")]
    SingularCoupling { a: f64 },
    #[error("analytic solver requires 0 < a^2 < 2, got a={a}")]
    Regime { a: f64 },
    #[error("characteristic function evaluated at a pole, gamma={gamma}")]
    PoleEvaluation { gamma: f64 },
    #[error("expected {expected} characteristic roots, found {found}")]
    RootCountMismatch { expected: usize, found: usize },
    #[error("characteristic roots closer than allowed (gap {gap:e})")]
    DuplicateRoot { gap: f64 },
    #[error("eigenvector norm deviates from one by {deviation:e}")]
    NormalizationFailure { deviation: f64 },
    #[error("tridiagonal QL did not converge within {iterations} iterations")]
    ConvergenceFailure { iterations: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("value {value} is outside the domain [0, 1]")]
    Domain { value: f64 },
    #[error("wave function is not normalized (norm^2 = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },
    #[error("spectrum has no positive eigenvalue")]
    NoPositiveEigenvalue,
    #[error("not applicable: {0}")]
    NotApplicable(&'static str),
    #[error("need at least {needed} usable points, found {found}")]
    InsufficientPoints { needed: usize, found: usize },
    #[error("degenerate fit: {0}")]
    DegenerateFit(&'static str),
    #[error("no transfer within the window: P_end never exceeds {threshold} (max {p_max})")]
    NoTransfer { threshold: f64, p_max: f64 },
    #[error("invalid time window: {0}")]
    InvalidWindow(&'static str),
    #[error("unknown figure `{0}`")]
    UnknownFigure(String),
}

impl Error {
    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidParams { .. } => "invalid-params",
            Error::SingularCoupling { .. } => "singular-coupling",
            Error::Regime { .. } => "regime",
            Error::PoleEvaluation { .. } => "pole-evaluation",
            Error::RootCountMismatch { .. } => "root-count-mismatch",
            Error::DuplicateRoot { .. } => "duplicate-root",
            Error::NormalizationFailure { .. } => "normalization-failure",
            Error::ConvergenceFailure { .. } => "convergence-failure",
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::Domain { .. } => "domain-error",
            Error::NotNormalized { .. } => "not-normalized",
            Error::NoPositiveEigenvalue => "no-positive-eigenvalue",
            Error::NotApplicable(_) => "not-applicable",
            Error::InsufficientPoints { .. } => "insufficient-points",
            Error::DegenerateFit(_) => "degenerate-fit",
            Error::NoTransfer { .. } => "no-transfer",
            Error::InvalidWindow(_) => "invalid-window",
            Error::UnknownFigure(_) => "unknown-figure",
        }
    }
}
