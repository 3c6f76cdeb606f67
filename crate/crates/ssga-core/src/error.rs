//! Error type shared across the crate.

/// Errors produced by configuration validation, chain solving and the
/// experiment harness.
///
/// Precondition violations on low-level operators (mismatched genome lengths,
/// empty populations, out-of-range mutation constants) are programming errors
/// and panic instead.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An algorithm or experiment configuration failed validation.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Markov-chain parameters are not a valid set of transition
    /// probabilities.
    #[error("invalid chain parameters: {0}")]
    InvalidParams(String),

    /// The chain has no path to absorption that the closed forms can price:
    /// the absorbing-time denominator is zero.
    #[error("expected absorbing time is infinite ({0})")]
    InfiniteExpectation(String),

    /// A simulated episode exceeded the per-episode step budget, signalling a
    /// near-reducible chain.
    #[error("chain simulation exceeded {0} steps in a single episode")]
    SimulationBudget(u64),

    /// Fitness-level inputs violate the normalization or viability
    /// conditions required by the lower-bound method.
    #[error("fitness-level bounds rejected: {0}")]
    InvalidLevelBounds(String),

    /// Writing an output table failed.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
