use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("unknown atom name `{0}`")]
    UnknownAtom(String),
    #[error("non-canonical rational `{0}`")]
    NonCanonical(String),
    #[error("unknown integrand `{0}`")]
    UnknownIntegrand(String),
    #[error("invalid value `{0}`")]
    Invalid(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("working precision must be at least 15 digits, got {0}")]
    PrecisionTooLow(u32),
    #[error("quadrature did not stabilize after {nodes} nodes (last change {last_change})")]
    NonConvergent { nodes: usize, last_change: String },
    #[error("tolerance {tol} is below ten units in the last requested digit")]
    ToleranceTooTight { tol: String },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("eps must be positive and finite, got {0}")]
    NonPositiveEps(f64),
    #[error("{digits} digits cannot resolve eps = {eps}: rounding bound {bound} exceeds eps/10")]
    InsufficientDigits { digits: u32, eps: f64, bound: String },
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Error)]
pub enum SequenceError {
    #[error("cannot normalize an empty sequence")]
    Empty,
    #[error("value {0} is not an integer; choose numerators, denominators or scaled_lcm")]
    NotIntegral(String),
    #[error("query must have between 1 and 50 terms, got {0}")]
    QueryLength(usize),
    #[error("network failure contacting {url}: {reason}")]
    Network { url: String, reason: String },
    #[error("malformed OEIS response: {0}")]
    Malformed(String),
    #[error("offline and no cached or recorded result for query `{0}`")]
    OfflineMiss(String),
    #[error("cache I/O error: {0}")]
    Cache(#[from] std::io::Error),
}
