//! The three-state absorbing Markov chain that models one fitness level of a
//! steady-state GA, its closed-form absorbing times, a Monte-Carlo oracle,
//! and instantiated bounds on its transition probabilities.
//!
//! The chain has two transient states — "no diversity" (all individuals
//! share one genotype) and "diversity" (at least two genotypes at the best
//! level) — and one absorbing state, reached when a better fitness level is
//! sampled. Transitions: `p_d` creates diversity, `p_r` relapses to the
//! uniform state, `p_m` improves by mutation alone, `p_c` improves with
//! crossover's help.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Per-episode step budget of [`simulate_chain`]; exceeding it signals a
/// near-reducible chain rather than a long-running simulation.
pub const EPISODE_STEP_BUDGET: u64 = 1_000_000_000;

/// Transition probabilities of the level chain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarkovParams {
    /// No diversity → absorbed (improvement by mutation alone).
    pub p_m: f64,
    /// No diversity → diversity.
    pub p_d: f64,
    /// Diversity → absorbed (improvement exploiting diversity).
    pub p_c: f64,
    /// Diversity → no diversity (relapse).
    pub p_r: f64,
}

impl MarkovParams {
    /// Validated constructor: every probability in [0, 1] and the two
    /// outgoing rows must not exceed 1.
    pub fn new(p_m: f64, p_d: f64, p_c: f64, p_r: f64) -> Result<Self, Error> {
        let params = MarkovParams { p_m, p_d, p_c, p_r };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<(), Error> {
        for (name, v) in [
            ("p_m", self.p_m),
            ("p_d", self.p_d),
            ("p_c", self.p_c),
            ("p_r", self.p_r),
        ] {
            if !(0.0..=1.0).contains(&v) || !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} = {v} is not in [0, 1]")));
            }
        }
        if self.p_m + self.p_d > 1.0 + 1e-12 {
            return Err(Error::InvalidParams(format!(
                "p_m + p_d = {} exceeds 1",
                self.p_m + self.p_d
            )));
        }
        if self.p_c + self.p_r > 1.0 + 1e-12 {
            return Err(Error::InvalidParams(format!(
                "p_c + p_r = {} exceeds 1",
                self.p_c + self.p_r
            )));
        }
        Ok(())
    }

    fn denominator(&self) -> f64 {
        self.p_c * self.p_d + self.p_c * self.p_m + self.p_m * self.p_r
    }
}

/// Transient states of the chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChainState {
    /// All individuals share one genotype.
    NoDiversity,
    /// At least two distinct genotypes at the best level.
    Diversity,
}

/// Closed-form expected absorbing times from each transient state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AbsorbingTimes {
    /// Expected steps to absorption starting without diversity.
    pub from_no_diversity: f64,
    /// Expected steps to absorption starting with diversity.
    pub from_diversity: f64,
}

/// Expected absorbing times of the chain:
///
/// ```text
/// E[T₁] = (p_c + p_r + p_d) / (p_c·p_d + p_c·p_m + p_m·p_r)
/// E[T₂] = (p_m + p_r + p_d) / (p_c·p_d + p_c·p_m + p_m·p_r)
/// ```
///
/// Errors when the shared denominator is zero, in which case absorption has
/// infinite expectation from at least one state.
pub fn expected_absorbing_times(params: &MarkovParams) -> Result<AbsorbingTimes, Error> {
    params.validate()?;
    let d = params.denominator();
    if d <= 0.0 {
        return Err(Error::InfiniteExpectation(format!(
            "p_c·p_d + p_c·p_m + p_m·p_r = {d}"
        )));
    }
    Ok(AbsorbingTimes {
        from_no_diversity: (params.p_c + params.p_r + params.p_d) / d,
        from_diversity: (params.p_m + params.p_r + params.p_d) / d,
    })
}

/// Checks the dominance premises for a pair of chains: `p_m < p_c` on the
/// original chain, and the primed chain underestimates every transition
/// towards absorption while overestimating the relapse. When all five hold,
/// the primed chain's time from the no-diversity state upper-bounds the
/// original chain's unconditional absorbing time.
pub fn dominance_check(m: &MarkovParams, m_prime: &MarkovParams) -> bool {
    m.p_m < m.p_c
        && m_prime.p_d <= m.p_d
        && m_prime.p_r >= m.p_r
        && m_prime.p_c <= m.p_c
        && m_prime.p_m <= m.p_m
}

/// The closed upper bound on the no-diversity absorbing time used on top of
/// dominance: `(p_c + p_r)/(p_c·p_d + p_c·p_m + p_m·p_r) + 1/p_c`.
pub fn absorbing_time_upper_bound(params: &MarkovParams) -> f64 {
    (params.p_c + params.p_r) / params.denominator() + 1.0 / params.p_c
}

/// Monte-Carlo estimate of the absorbing time.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationSummary {
    pub mean: f64,
    pub std_error: f64,
    pub episodes: u64,
}

/// Simulates the chain step by step until absorption, `episodes` times, and
/// returns the sample mean and standard error of the absorption time. The
/// independent oracle for [`expected_absorbing_times`].
pub fn simulate_chain<R: Rng + ?Sized>(
    params: &MarkovParams,
    start: ChainState,
    rng: &mut R,
    episodes: u64,
) -> Result<SimulationSummary, Error> {
    params.validate()?;
    assert!(episodes >= 1, "at least one episode required");
    let mut sum = 0.0f64;
    let mut sum_sq = 0.0f64;
    for _ in 0..episodes {
        let mut state = start;
        let mut steps = 0u64;
        loop {
            if steps >= EPISODE_STEP_BUDGET {
                return Err(Error::SimulationBudget(EPISODE_STEP_BUDGET));
            }
            steps += 1;
            let u: f64 = rng.random();
            state = match state {
                ChainState::NoDiversity => {
                    if u < params.p_m {
                        break;
                    } else if u < params.p_m + params.p_d {
                        ChainState::Diversity
                    } else {
                        ChainState::NoDiversity
                    }
                }
                ChainState::Diversity => {
                    if u < params.p_c {
                        break;
                    } else if u < params.p_c + params.p_r {
                        ChainState::NoDiversity
                    } else {
                        ChainState::Diversity
                    }
                }
            };
        }
        let t = steps as f64;
        sum += t;
        sum_sq += t * t;
    }
    let n = episodes as f64;
    let mean = sum / n;
    let var = if episodes > 1 {
        ((sum_sq - sum * sum / n) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(SimulationSummary {
        mean,
        std_error: (var / n).sqrt(),
        episodes,
    })
}

/// How unresolved asymptotic error terms in instantiated bounds are treated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundMode {
    /// Error terms set to zero: the bound's leading behaviour.
    Leading,
    /// Error terms replaced by an explicit overshoot `κ/n` with
    /// [`CONSERVATIVE_KAPPA`], deliberately generous.
    Conservative,
}

/// The explicit constant standing in for `O(1/n)` surcharges in
/// [`BoundMode::Conservative`].
pub const CONSERVATIVE_KAPPA: f64 = 16.0;

impl BoundMode {
    fn surcharge(self, n: usize) -> f64 {
        match self {
            BoundMode::Leading => 0.0,
            BoundMode::Conservative => CONSERVATIVE_KAPPA / n as f64,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BoundMode::Leading => "leading",
            BoundMode::Conservative => "conservative",
        }
    }
}

/// Instantiated transition-probability bounds of the level chain of a
/// (μ+1) GA with μ ≥ 3 at fitness level `level` of problem size `n`:
///
/// * `p_d  ≥ μ/(μ+1) · i(n−i)c²/n² · (1−c/n)^(n−2)`
/// * `p_c  ≥ (μ−1)/(2μ²) · (1−c/n)^n`
/// * `p_m  ≥ c(n−i)/n · (1−c/n)^(n−1)`
/// * `p_r  ≤ (μ−1)(2μ−1)/(2e^c·μ²(μ+1)) + κ/n`
///
/// The three lower bounds are exact in `(1−c/n)` powers; the relapse upper
/// bound carries the mode-dependent surcharge.
pub fn transition_bounds_mu3(
    mu: usize,
    c: f64,
    n: usize,
    level: usize,
    mode: BoundMode,
) -> MarkovParams {
    assert!(mu >= 3, "these bounds require mu >= 3; use transition_bounds_mu2 for mu = 2");
    assert!(level < n, "level must satisfy 0 <= i < n");
    let mu_f = mu as f64;
    let relapse_base = (mu_f - 1.0) * (2.0 * mu_f - 1.0)
        / (2.0 * c.exp() * mu_f * mu_f * (mu_f + 1.0));
    bounds_with_factors(
        mu_f / (mu_f + 1.0),
        (mu_f - 1.0) / (2.0 * mu_f * mu_f),
        relapse_base,
        c,
        n,
        level,
        mode,
    )
}

/// Transition-probability bounds for μ = 2: the same `p_d`, `p_c`, `p_m`
/// forms with factors 2/3 and 1/8, and the larger relapse bound
/// `p_r ≤ 5/(24e^c) + κ/n` — with two individuals either genotype can take
/// over the population.
pub fn transition_bounds_mu2(c: f64, n: usize, level: usize, mode: BoundMode) -> MarkovParams {
    assert!(level < n, "level must satisfy 0 <= i < n");
    bounds_with_factors(
        2.0 / 3.0,
        1.0 / 8.0,
        5.0 / (24.0 * c.exp()),
        c,
        n,
        level,
        mode,
    )
}

fn bounds_with_factors(
    diversify_factor: f64,
    crossover_factor: f64,
    relapse_base: f64,
    c: f64,
    n: usize,
    level: usize,
    mode: BoundMode,
) -> MarkovParams {
    let nf = n as f64;
    let i = level as f64;
    let keep = 1.0 - c / nf;
    MarkovParams {
        p_d: diversify_factor * (i * (nf - i) * c * c / (nf * nf)) * keep.powi(n as i32 - 2),
        p_c: crossover_factor * keep.powi(n as i32),
        p_m: (c * (nf - i) / nf) * keep.powi(n as i32 - 1),
        p_r: relapse_base + mode.surcharge(n),
    }
}
