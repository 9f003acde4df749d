use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("denominator of ratio {0} is non-positive")]
    NonPositiveDenominator(usize),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("value {value} outside [{lo}, {hi}]")]
    OutOfBounds { value: f64, lo: f64, hi: f64 },

    #[error("reciprocal bounds unavailable: denominator interval of ratio {0} touches zero")]
    UnboundedAuxiliary(usize),

    #[error("denominator function of ratio {t}, item {i} is not increasing on the grid")]
    MonotonicityViolated { t: usize, i: usize },

    #[error("denominator anchor value at the lower bound must be positive (ratio {t}, item {i})")]
    NonPositiveAnchor { t: usize, i: usize },

    #[error("unsupported instance family: {0}")]
    UnsupportedFamily(String),

    #[error("row {0} cannot be represented in the requested output format")]
    UnrepresentableRow(String),

    #[error("instance has no feasible point")]
    InfeasibleInstance,

    #[error("node bound unusable: denominator bound of ratio {0} is non-positive")]
    BoundDenominatorNonPositive(usize),

    #[error("problem is not in capture form (all-zero numerator functions, minus sense)")]
    NotMcpForm,

    #[error("enumeration needs {states:.3e} states, budget is {budget:.3e}")]
    BudgetExceeded { states: f64, budget: f64 },

    #[error("non-finite value encountered in {0}")]
    NonFinite(String),

    #[error("rejection sampling gave up after {0} draws")]
    RejectionOverflow(u64),

    #[error("invariant violated: {0}")]
    InvariantViolated(String),

    #[error("instance parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
