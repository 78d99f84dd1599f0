use thiserror::Error;

/// Errors surfaced by the exact and floating evaluation paths.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("denominator must be nonzero")]
    ZeroDenominator,

    #[error("q must satisfy 0 < q < 1, got {0}")]
    QOutOfRange(String),

    #[error("X must satisfy q <= X <= 1 (X stands for q^x with x in [0,1]), got q={q}, X={x}")]
    PointOutOfRange { q: String, x: String },

    #[error("x must lie in [0,1], got {0}")]
    XOutOfRange(String),

    #[error("series has zero constant term and cannot be inverted")]
    NonInvertibleSeries,

    #[error("coefficient {n} requested from a series truncated at order {order}")]
    TruncationTooShort { n: usize, order: usize },

    #[error("derivative check is defined only on the open interval (0,1), got x={0}")]
    DerivativeAtBoundary(f64),

    #[error("ratio identity is undefined where [1-x]_q = 0 (x = 1, i.e. X = q)")]
    ZeroComplement,

    #[error("moment index i={i} exceeds degree n={n}")]
    MomentIndexOutOfRange { i: u32, n: u32 },

    #[error("operator needs values f(0..={needed}), got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("unknown identity id '{0}'")]
    UnknownIdentity(String),

    #[error("invalid verify configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
