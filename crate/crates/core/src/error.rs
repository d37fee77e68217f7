use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid sign probabilities at n={n}: {reason}")]
    InvalidSignProbabilities { n: usize, reason: String },

    #[error("power series needs {needed} coefficients, got {got}")]
    SeriesTooShort { needed: usize, got: usize },

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("horizon too short: ladder sequences reach M={horizon}, window N={n} needs M >= N+1")]
    HorizonTooShort { horizon: usize, n: usize },

    #[error("degenerate walk: persistence denominator p~_{index} vanishes")]
    DegenerateWalk { index: usize },

    #[error("kernel invariant violated: {0}")]
    KernelInvariant(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("unsupported model: {0}")]
    UnsupportedModel(String),

    #[error("subordinator excluded: positivity parameter {0} is not in (0,1)")]
    SubordinatorExcluded(f64),

    #[error("alpha = 1 with nonzero skewness is unsupported")]
    SkewedCauchyUnsupported,

    #[error("quadrature did not converge: estimate {value}, error estimate {error:e}")]
    QuadratureNonConvergence { value: f64, error: f64 },

    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),

    #[error("enumeration too large: N={0} exceeds 14")]
    EnumerationTooLarge(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
