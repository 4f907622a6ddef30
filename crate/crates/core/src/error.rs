use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in the library.
///
/// Variants are grouped by how the CLI reports them: hypothesis failures,
/// inconsistent inputs, theorem-verdict violations and schema problems each
/// map onto their own exit code (see [`Error::exit_code`]).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a supported prime (need a prime >= 5)")]
    UnsupportedPrime(u64),

    #[error("invalid precision configuration: {0}")]
    InvalidPrecision(String),

    #[error("{value} is divisible by {prime}")]
    DivisibleByPrime { value: String, prime: u64 },

    #[error("p-adic logarithm needs an argument congruent to 1 mod {0}")]
    LogDomain(u64),

    #[error("curve is not ordinary at {prime}: a_p = {a_p} is divisible by p")]
    NotOrdinary { prime: u64, a_p: i64 },

    #[error("all coefficients vanish modulo p^{0}")]
    PrecisionExhausted(u32),

    #[error("coefficient of T^{index} is nonzero; order of vanishing is below {required}")]
    OrderTooLow { index: usize, required: usize },

    #[error("series are incompatible: {0}")]
    IncompatibleSeries(String),

    #[error("could not parse series: {0}")]
    SeriesParse(String),

    #[error("singular Weierstrass equation (discriminant is zero)")]
    SingularCurve,

    #[error("curve has bad reduction at {0}")]
    BadReduction(u64),

    #[error("prime {prime} is above the point-counting cutoff {cutoff}")]
    CutoffExceeded { prime: u64, cutoff: u64 },

    #[error("curve {label} has bad reduction at p = {prime}")]
    BadAtP { label: String, prime: u64 },

    #[error("m = {m} is not coprime to {modulus}")]
    NotCoprime { m: u64, modulus: String },

    #[error("missing arithmetic input: {0}")]
    MissingInput(String),

    #[error("inconsistent input: {0}")]
    InconsistentInput(String),

    #[error("truncated Euler characteristic of {label} has negative valuation {valuation}")]
    NegativeValuation { label: String, valuation: i64 },

    #[error("hypothesis failed: {reason}")]
    HypothesisFailed { reason: String, witnesses: Vec<u64> },

    #[error("internal consistency check failed: {0}")]
    Invariant(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("unknown curve label {0:?}")]
    UnknownLabel(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NotOrdinary { .. }
            | Error::BadReduction(_)
            | Error::BadAtP { .. }
            | Error::HypothesisFailed { .. }
            | Error::NotCoprime { .. } => 2,
            Error::Schema(_) | Error::UnknownLabel(_) | Error::SingularCurve | Error::Io(_) => 5,
            Error::Invariant(_) => 4,
            _ => 3,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
