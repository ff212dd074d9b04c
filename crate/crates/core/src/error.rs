use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid delta {0}: stationary methods require 0 <= delta <= 1")]
    InvalidDelta(String),

    /// `f(p,H;0)` is empty when `H < n`: for any positive multiplier the
    /// Adams rounding rule forces at least one seat per state.
    #[error("empty outcome: delta=0 (or q<=0) with house {house} < states {states}")]
    EmptyOutcome { house: u64, states: usize },

    #[error("rank {k} out of range 1..={max}")]
    RankOutOfRange { k: u64, max: u64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("cannot parse rational from {0:?}")]
    ParseRat(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("seeded-random tie-breaking admits no closed-form expectation here")]
    SeededRandomExpectation,

    #[error("distribution mean is {0}, bound requires exactly 1/2")]
    MeanNotHalf(String),

    #[error("degenerate arrangement: {0}")]
    DegenerateArrangement(String),

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
