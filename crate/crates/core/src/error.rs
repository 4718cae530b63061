use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("malformed rational {0:?}: expected \"<int>\" or \"<int>/<posint>\"")]
    Malformed(String),
    #[error("rational {0:?} has a zero denominator")]
    ZeroDenominator(String),
}

/// Errors raised by the exact engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("distribution has no atoms")]
    EmptyDistribution,
    #[error("negative weight {0}")]
    NegativeWeight(Rational),
    #[error("total weight is zero")]
    ZeroTotalWeight,
    #[error("weights sum to {0}, not 1")]
    NotNormalized(Rational),
    /// Conditioning on an event of probability zero. The conditional is
    /// undefined; it must never be read as the value 0.
    #[error("conditioning event has probability zero")]
    ZeroProbabilityEvent,

    #[error("prediction support is empty")]
    EmptySupport,
    #[error("support point {index}: omega {omega} is outside [0, 1]")]
    OmegaOutOfRange { index: usize, omega: Rational },
    #[error("support point {index}: weight {weight} must be positive")]
    NonPositiveWeight { index: usize, weight: Rational },
    #[error("support point {index}: omega {omega} repeats an earlier point")]
    DuplicateOmega { index: usize, omega: Rational },
    #[error("reward {name} = {value} must be positive")]
    NonPositiveReward { name: &'static str, value: Rational },

    /// Prior probability of one-boxing is 0 or 1: the counterfactual for
    /// the never-taken decision is undefined, so nothing is computed.
    #[error("perfect knowledge: prior one-box probability is {0}; counterfactuals are undefined")]
    PerfectKnowledge(Rational),
    #[error("omega {0} is not in the prediction support (probability-zero event)")]
    UnknownOmegaValue(Rational),

    #[error("partition: {0}")]
    InvalidPartition(String),
    #[error("delta {delta} must satisfy 0 <= delta < min(p, 1 - p) = {limit}")]
    DeltaOutOfRange { delta: Rational, limit: Rational },

    #[error("beliefs are not a distribution: {0}")]
    NotADistribution(String),

    #[error("sample count must be at least 1")]
    ZeroSamples,
    #[error("chunk count must be at least 1")]
    ZeroChunks,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
