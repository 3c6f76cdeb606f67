//! Steady-state genetic algorithms on the OneMax hillclimbing benchmark,
//! together with the absorbing Markov-chain analysis of their expected
//! runtimes and a seeded, replicated experiment harness.
//!
//! The crate has three layers:
//!
//! * [`genome`], [`population`] and [`algorithm`] implement the bitstring
//!   representation, the variation and selection operators, and the state
//!   machines of the compared algorithms — mutation-only EAs, the standard
//!   (μ+1) GA, greedy and diversity-enforcing (2+1) GA variants, and the
//!   self-adjusting (1+(λ,λ)) GA.
//! * [`markov`] and [`bounds`] evaluate the three-state Markov chain that
//!   models a fitness level of a steady-state GA (no diversity / diversity /
//!   level left), its closed-form absorbing times, parameter bounds for the
//!   chain, and the resulting closed-form runtime bounds.
//! * [`harness`] runs seeded, replicated experiments over algorithm
//!   configurations and emits plot-ready CSV/JSON tables.
//!
//! Every run is reproducible: runs are seeded from a master seed through the
//! documented mixing function in [`seed`], and experiment tables are
//! byte-identical across worker counts.

pub mod algorithm;
pub mod bounds;
pub mod error;
pub mod format;
pub mod genome;
pub mod harness;
pub mod markov;
pub mod population;
pub mod seed;
pub mod stats;

pub use algorithm::{run_to_optimum, AlgorithmConfig, RunResult, RunState, Variant};
pub use bounds::{BoundKind, BoundMode, BoundReport};
pub use error::Error;
pub use genome::Genome;
pub use harness::{ExperimentSpec, Normalization, PointSummary, Scale, StatsSummary};
pub use markov::{AbsorbingTimes, ChainState, MarkovParams};
pub use population::{Population, SelectionPolicy, TieBreak};
