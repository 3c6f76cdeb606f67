//! Closed-form runtime bounds for the steady-state GAs on OneMax, the
//! fitness-level lower-bound machinery, and the population takeover bound.
//!
//! All logarithms are natural: every bound arises from harmonic sums. The
//! asymptotic error terms the derivations leave open are instantiated per
//! [`BoundMode`]; subtractive lower-order terms are reported symbolically
//! and never folded into numbers.

use serde::{Deserialize, Serialize};

pub use crate::markov::BoundMode;

use crate::error::Error;

/// Which closed-form bound a [`BoundReport`] carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundKind {
    /// Upper bound on the (μ+1) GA, μ ≥ 3.
    #[serde(rename = "upper")]
    MuGaUpper,
    /// Upper bound on the (2+1) GA.
    #[serde(rename = "upper-2plus1")]
    TwoPlusOneUpper,
    /// Lower bound on the greedy (2+1) GA with the OR shortcut.
    #[serde(rename = "lower")]
    GreedyLower,
    /// Expected generations for the whole population to take over a level.
    #[serde(rename = "takeover")]
    Takeover,
}

/// An evaluated closed-form bound together with the parameters that
/// produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub mu: Option<usize>,
    pub c: f64,
    pub n: Option<usize>,
    /// How unresolved asymptotic terms were instantiated.
    pub mode: BoundMode,
    /// Value of the bound's leading term.
    pub leading_term_value: f64,
    /// Optional per-level expected waiting times behind the leading term.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_level_values: Option<Vec<f64>>,
}

/// Leading coefficient of the (μ+1) GA upper bound: `3e^c / (c(3+c))`.
/// Multiplied by `n ln n` it gives the bound's leading term.
pub fn mu_ga_upper_coefficient(c: f64) -> f64 {
    assert!(c > 0.0, "mutation constant must be positive");
    3.0 * c.exp() / (c * (3.0 + c))
}

/// Upper bound `3e^c·n·ln n / (c(3+c))` on the expected evaluations of the
/// (μ+1) GA with μ ≥ 3 and mutation rate `c/n`. The suppressed additive
/// term is `O(n·μ log μ)`; see [`takeover_time_bound`].
pub fn mu_ga_upper_bound(mu: usize, c: f64, n: usize) -> BoundReport {
    assert!(mu >= 3, "the (mu+1) GA upper bound requires mu >= 3");
    assert!(n >= 2, "problem size must be at least 2");
    let leading = mu_ga_upper_coefficient(c) * n as f64 * (n as f64).ln();
    BoundReport {
        kind: BoundKind::MuGaUpper,
        mu: Some(mu),
        c,
        n: Some(n),
        mode: BoundMode::Leading,
        leading_term_value: leading,
        per_level_values: None,
    }
}

/// Per-level expected waiting times behind [`mu_ga_upper_bound`]:
/// `e^c·n / (c(n−i)) · 3/(3+c)` for levels `i = 0..n`.
pub fn mu_ga_upper_level_times(c: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    let nf = n as f64;
    (0..n)
        .map(|i| c.exp() * nf / (c * (nf - i as f64)) * 3.0 / (3.0 + c))
        .collect()
}

/// Upper bound `4e^c·n·ln n / (c(c+4))` on the expected evaluations of the
/// (2+1) GA. Larger than the μ ≥ 3 bound for every `c > 0`: with two
/// individuals either genotype can take over the population in one
/// generation, so diversity is lost more easily.
pub fn two_plus_one_upper_bound(c: f64, n: usize) -> BoundReport {
    assert!(c > 0.0, "mutation constant must be positive");
    assert!(n >= 2, "problem size must be at least 2");
    let leading = 4.0 * c.exp() * n as f64 * (n as f64).ln() / (c * (c + 4.0));
    BoundReport {
        kind: BoundKind::TwoPlusOneUpper,
        mu: Some(2),
        c,
        n: Some(n),
        mode: BoundMode::Leading,
        leading_term_value: leading,
        per_level_values: None,
    }
}

/// Largest value of `c^k/(k!)²` over `1 ≤ k ≤ n`: the factor that weights
/// multi-level gains in the greedy lower bound. Equals `c` for `c ≤ 4`
/// (the `k = 1` term wins; at `c = 4` exactly, `k = 2` ties it).
pub fn max_multi_gain_weight(c: f64, n: usize) -> f64 {
    assert!(c > 0.0 && n >= 1);
    let mut term = c; // k = 1
    let mut best = term;
    for k in 2..=n as u64 {
        term *= c / ((k * k) as f64);
        if term > best {
            best = term;
        } else if term < best {
            // Terms decay monotonically once c < (k+1)²; nothing larger follows.
            break;
        }
    }
    best
}

/// Lower bound `3e^c·n·ln n / (c(3+y))` with `y = max_k c^k/(k!)²` on the
/// expected evaluations of the greedy (2+1) GA with the OR shortcut. The
/// subtractive `O(n log log n)` term is reported symbolically, never as a
/// number; comparisons against experiments use the leading term only.
pub fn greedy_lower_bound(c: f64, n: usize) -> BoundReport {
    assert!(c > 0.0, "mutation constant must be positive");
    assert!(n >= 3, "problem size must be at least 3");
    let y = max_multi_gain_weight(c, n);
    let leading = 3.0 * c.exp() * n as f64 * (n as f64).ln() / (c * (3.0 + y));
    BoundReport {
        kind: BoundKind::GreedyLower,
        mu: Some(2),
        c,
        n: Some(n),
        mode: BoundMode::Leading,
        leading_term_value: leading,
        per_level_values: None,
    }
}

/// Mutation constant minimizing the shared leading coefficient
/// `e^c/(c(3+c))` of the upper and lower bounds over `c ∈ (0, 4]`, found by
/// ternary search to absolute tolerance 1e-9. Equals `(√13 − 1)/2`.
/// Unimodality on the interval is verified by a grid sweep in the tests.
pub fn optimal_mutation_constant() -> f64 {
    let objective = |c: f64| c.exp() / (c * (3.0 + c));
    let mut lo = 1e-9;
    let mut hi = 4.0;
    while hi - lo > 1e-9 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if objective(m1) <= objective(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    (lo + hi) / 2.0
}

/// Expected generations until the whole population reaches the current best
/// level, summed from the per-stage waits `2(e^c+1)·μ/k`:
/// `Σ_{k=1}^{μ−1} 2(e^c+1)·μ/k = 2(e^c+1)·μ·H_{μ−1}`, which is Θ(μ log μ).
/// Empty sum (zero) for μ = 1.
pub fn takeover_time_bound(mu: usize, c: f64) -> f64 {
    assert!(mu >= 1 && c > 0.0);
    let harmonic: f64 = (1..mu).map(|k| 1.0 / k as f64).sum();
    2.0 * (c.exp() + 1.0) * mu as f64 * harmonic
}

/// Report wrapper around [`takeover_time_bound`].
pub fn takeover_report(mu: usize, c: f64) -> BoundReport {
    BoundReport {
        kind: BoundKind::Takeover,
        mu: Some(mu),
        c,
        n: None,
        mode: BoundMode::Leading,
        leading_term_value: takeover_time_bound(mu, c),
        per_level_values: None,
    }
}

/// Inputs to the fitness-level lower-bound method: a partition into levels
/// `A_1..A_m`, per-level leave probabilities, jump distributions and the
/// viability constant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitnessLevelBounds {
    /// `u_i` for levels `1..m-1` (index 0 is level 1): upper bounds on the
    /// probability of leaving level i in one step.
    pub leave_probabilities: Vec<f64>,
    /// Row i: distribution of the target level over `i+1..=m`, so row i has
    /// `m - 1 - i` entries... row 0 has m-1 entries, the last row one entry.
    /// Each row sums to 1.
    pub jump_distributions: Vec<Vec<f64>>,
    /// Viability constant χ ∈ [0, 1] with
    /// `γ_{i,j} ≥ χ·Σ_{k≥j} γ_{i,k}` for all `j > i`.
    pub viability: f64,
    /// Probability of starting in level i, for `i = 1..m-1`.
    pub start_distribution: Vec<f64>,
}

impl FitnessLevelBounds {
    /// Number of levels m.
    pub fn levels(&self) -> usize {
        self.leave_probabilities.len() + 1
    }

    fn validate(&self) -> Result<(), Error> {
        let m = self.levels();
        if self.jump_distributions.len() != m - 1 || self.start_distribution.len() != m - 1 {
            return Err(Error::InvalidLevelBounds(
                "need m-1 leave probabilities, jump rows and start entries".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.viability) {
            return Err(Error::InvalidLevelBounds(format!(
                "viability {} outside [0, 1]",
                self.viability
            )));
        }
        for (i, &u) in self.leave_probabilities.iter().enumerate() {
            if !(u > 0.0 && u.is_finite()) {
                return Err(Error::InvalidLevelBounds(format!(
                    "leave rate u_{} = {u} must be positive and finite",
                    i + 1
                )));
            }
        }
        let start_total: f64 = self.start_distribution.iter().sum();
        if self.start_distribution.iter().any(|&p| !(0.0..=1.0).contains(&p))
            || start_total > 1.0 + 1e-12
        {
            return Err(Error::InvalidLevelBounds(
                "start distribution entries must be probabilities summing to at most 1".into(),
            ));
        }
        for (i, row) in self.jump_distributions.iter().enumerate() {
            if row.len() != m - 1 - i {
                return Err(Error::InvalidLevelBounds(format!(
                    "jump row {} must have {} entries, found {}",
                    i + 1,
                    m - 1 - i,
                    row.len()
                )));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidLevelBounds(format!(
                    "jump row {} sums to {sum}, not 1",
                    i + 1
                )));
            }
            // Viability: each entry must carry at least χ times its tail.
            let mut tail = 0.0;
            for &g in row.iter().rev() {
                tail += g;
                if g + 1e-12 < self.viability * tail {
                    return Err(Error::InvalidLevelBounds(format!(
                        "viability condition fails in jump row {}",
                        i + 1
                    )));
                }
            }
        }
        Ok(())
    }
}

/// The fitness-level lower bound
/// `Σ_i Pr(start in A_i)·(1/u_i + χ·Σ_{j=i+1}^{m−1} 1/u_j)`
/// on the expected hitting time of the top level `A_m`.
pub fn fitness_level_lower_bound(bounds: &FitnessLevelBounds) -> Result<f64, Error> {
    bounds.validate()?;
    let m = bounds.levels();
    // Suffix sums of 1/u over levels i..m-1.
    let inv: Vec<f64> = bounds.leave_probabilities.iter().map(|u| 1.0 / u).collect();
    let mut suffix = vec![0.0; m];
    for i in (0..m - 1).rev() {
        suffix[i] = suffix[i + 1] + inv[i];
    }
    let mut total = 0.0;
    for i in 0..m - 1 {
        total += bounds.start_distribution[i] * (inv[i] + bounds.viability * suffix[i + 1]);
    }
    Ok(total)
}

/// Parameters of the greedy (2+1) GA lower bound near the optimum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GreedyLowerBoundParams {
    pub c: f64,
    pub n: usize,
    /// `max_k c^k/(k!)²`; equals c for c ≤ 4.
    pub max_gain_weight: f64,
    /// First level from which the near-optimum estimates hold:
    /// `⌈n − min(n/ln n, n/(p²·ln n))⌉` with `p = c/n`.
    pub start_level: usize,
}

impl GreedyLowerBoundParams {
    pub fn new(c: f64, n: usize) -> Self {
        assert!(c > 0.0 && n >= 3);
        let nf = n as f64;
        let p = c / nf;
        let window = (nf / nf.ln()).min(nf / (p * p * nf.ln()));
        let start_level = (nf - window).ceil().max(0.0) as usize;
        GreedyLowerBoundParams {
            c,
            n,
            max_gain_weight: max_multi_gain_weight(c, n),
            start_level,
        }
    }
}

/// Per-level, per-distance estimates feeding the greedy lower bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GreedyLevelEstimates {
    /// Leading-order leave-rate bound
    /// `u'_i = e^{−c}·(n−i)p/(1−p)² · (3+y)/3` (lower-order term zero).
    pub leave_rate: f64,
    /// Unnormalized jump weight `γ'_{i,i+k} = ((3+12c)·p(n−i)/(1−p)²)^(k−1)`.
    pub jump_weight: f64,
    /// Probability that mutation flips `k` more 0-bits than 1-bits:
    /// `(1−p)^n·(p(n−i)/(1−p)²)^k·(1 + (3/5)·i(n−i)p²/(1−p)²)`.
    pub net_gain_probability: f64,
    /// Probability that mutation flips exactly `k` 0-bits and `k` 1-bits:
    /// `(1−p)^n·(p(n−i)/(1−p)²)^k·(np)^k/(k!)²`.
    pub balanced_flip_probability: f64,
}

/// Evaluates the near-optimum estimates at `level` for a gain of `k` levels.
/// Only valid from `params.start_level` upwards.
pub fn greedy_level_estimates(
    params: &GreedyLowerBoundParams,
    level: usize,
    k: usize,
) -> GreedyLevelEstimates {
    assert!(
        level >= params.start_level,
        "estimates only hold near the optimum (level >= {})",
        params.start_level
    );
    assert!(level < params.n && k >= 1 && k <= params.n - level);
    let n = params.n as f64;
    let i = level as f64;
    let p = params.c / n;
    let base = p * (n - i) / ((1.0 - p) * (1.0 - p));
    let total_keep = (1.0 - p).powi(params.n as i32);
    let correction = 1.0 + 0.6 * i * (n - i) * p * p / ((1.0 - p) * (1.0 - p));
    let factorial_sq: f64 = (1..=k as u64).map(|t| t as f64).product::<f64>().powi(2);
    GreedyLevelEstimates {
        leave_rate: (-params.c).exp() * base * (3.0 + params.max_gain_weight) / 3.0,
        jump_weight: ((3.0 + 12.0 * params.c) * base).powi(k as i32 - 1),
        net_gain_probability: total_keep * base.powi(k as i32) * correction,
        balanced_flip_probability: total_keep
            * base.powi(k as i32)
            * (n * p).powi(k as i32)
            / factorial_sq,
    }
}

/// Builds the full fitness-level instantiation of the greedy lower bound
/// for `(c, n)`: levels `start_level..=n`, leave probabilities from the
/// normalized jump weights, and the largest viability constant the rows
/// support. All runs start pessimistically at `start_level`.
pub fn greedy_fitness_levels(c: f64, n: usize) -> FitnessLevelBounds {
    let params = GreedyLowerBoundParams::new(c, n);
    let first = params.start_level;
    let count = n - first; // levels first..n have leave probabilities
    let mut leave = Vec::with_capacity(count);
    let mut rows = Vec::with_capacity(count);
    let mut viability = 1.0f64;
    for level in first..n {
        // Geometric weights q^(k-1), built incrementally.
        let p = c / n as f64;
        let q = (3.0 + 12.0 * c) * p * (n - level) as f64 / ((1.0 - p) * (1.0 - p));
        let mut weights = Vec::with_capacity(n - level);
        let mut w = 1.0;
        for _ in 1..=(n - level) {
            weights.push(w);
            w *= q;
        }
        let total: f64 = weights.iter().sum();
        assert!(
            total.is_finite(),
            "jump weights overflow at this problem size; the instantiation \
             is meant for desk-scale n"
        );
        for w in &mut weights {
            *w /= total;
        }
        // Tightest χ this row supports: min over j of γ_j / Σ_{k ≥ j} γ_k.
        let mut tail = 0.0;
        for &g in weights.iter().rev() {
            tail += g;
            viability = viability.min(g / tail);
        }
        leave.push(greedy_level_estimates(&params, level, 1).leave_rate * total);
        rows.push(weights);
    }
    let mut start = vec![0.0; count];
    if count > 0 {
        start[0] = 1.0;
    }
    FitnessLevelBounds {
        leave_probabilities: leave,
        jump_distributions: rows,
        viability,
        start_distribution: start,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn upper_bound_coefficients() {
        // c = 1: 3e/4.
        assert!((mu_ga_upper_coefficient(1.0) - 3.0 * E / 4.0).abs() < 1e-12);
        // The optimum c: coefficient just under 1.97.
        let c = 0.5 * (13.0f64.sqrt() - 1.0);
        let coeff = mu_ga_upper_coefficient(c);
        assert!((coeff - 1.969_206_206_100_464_7).abs() < 1e-12, "{coeff}");

        let report = mu_ga_upper_bound(3, 1.0, 1024);
        assert!((report.leading_term_value - 14_470.420_879_593_37).abs() < 1e-6);
        // Matches coefficient × n ln n by construction.
        assert!(
            (report.leading_term_value - mu_ga_upper_coefficient(1.0) * 1024.0 * 1024f64.ln())
                .abs()
                < 1e-9
        );
    }

    #[test]
    fn per_level_times_sum_below_harmonic_bound() {
        let levels = mu_ga_upper_level_times(1.0, 256);
        assert_eq!(levels.len(), 256);
        // Hardest level is the last one: e·n·3/4 expected generations.
        let last = levels[255];
        assert!((last - E * 256.0 * 0.75).abs() < 1e-9);
        let sum: f64 = levels.iter().sum();
        // The harmonic sum stays within (1 + 1/ln n) of n ln n.
        let cap = mu_ga_upper_coefficient(1.0) * 256.0 * (256f64.ln() + 1.0);
        assert!(sum <= cap);
    }

    #[test]
    fn two_plus_one_coefficient_and_ordering() {
        let report = two_plus_one_upper_bound(1.0, 1024);
        let coeff = report.leading_term_value / (1024.0 * 1024f64.ln());
        assert!((coeff - 4.0 * E / 5.0).abs() < 1e-12);

        // 4/(c+4) > 3/(c+3) for every c > 0: the two-individual bound is
        // strictly larger on (0, 4].
        for k in 1..=400 {
            let c = k as f64 / 100.0;
            let two = two_plus_one_upper_bound(c, 64).leading_term_value;
            let mu = mu_ga_upper_bound(3, c, 64).leading_term_value;
            assert!(two > mu, "ordering fails at c = {c}");
        }

        let at_opt = two_plus_one_upper_bound(1.302_776, 1024);
        assert!((at_opt.leading_term_value - 15_121.706_539_302_78).abs() < 1e-6);
    }

    #[test]
    fn multi_gain_weight() {
        // c = 1: k = 1 gives 1, k = 2 gives 1/4.
        assert_eq!(max_multi_gain_weight(1.0, 100), 1.0);
        // c = 4: k = 1 and k = 2 tie at 4 exactly, k = 3 gives 64/36.
        assert_eq!(max_multi_gain_weight(4.0, 100), 4.0);
        // c = 5: k = 2 wins with 25/4.
        assert!((max_multi_gain_weight(5.0, 100) - 6.25).abs() < 1e-12);
        // c <= 4 always reduces to c itself.
        for k in 1..=40 {
            let c = k as f64 / 10.0;
            assert!((max_multi_gain_weight(c, 1000) - c).abs() < 1e-12, "c = {c}");
        }
    }

    #[test]
    fn lower_bound_matches_upper_leading_coefficient() {
        // For c <= 4 the lower bound's leading coefficient equals the upper
        // bound's: both 3e^c/(c(3+c)).
        for k in [1, 5, 10, 13, 20, 40] {
            let c = k as f64 / 10.0;
            let lower = greedy_lower_bound(c, 512).leading_term_value;
            let upper = mu_ga_upper_bound(3, c, 512).leading_term_value;
            assert!((lower - upper).abs() < 1e-9 * upper, "c = {c}");
        }
        // c = 1 coefficient is 3e/4.
        let report = greedy_lower_bound(1.0, 1024);
        let coeff = report.leading_term_value / (1024.0 * 1024f64.ln());
        assert!((coeff - 3.0 * E / 4.0).abs() < 1e-12);
    }

    #[test]
    fn optimal_constant_matches_closed_form() {
        let c = optimal_mutation_constant();
        assert!((c - 1.302_775_637_731_995).abs() < 1e-6, "{c}");
        assert!((c - 0.5 * (13.0f64.sqrt() - 1.0)).abs() < 1e-6);

        // Unimodality sweep: strictly decreasing before, increasing after,
        // on a 10^4-point grid over (0, 4].
        let objective = |c: f64| c.exp() / (c * (3.0 + c));
        let grid: Vec<f64> = (1..=10_000).map(|k| k as f64 * 4.0 / 10_000.0).collect();
        let best = grid.iter().cloned().fold(f64::INFINITY, |a, x| a.min(objective(x)));
        let mut switched = false;
        for w in grid.windows(2) {
            let (a, b) = (objective(w[0]), objective(w[1]));
            if b > a {
                switched = true;
            } else {
                assert!(!switched, "objective rose and fell again near c = {}", w[0]);
            }
        }
        assert!(objective(c) <= best + 1e-12);
        // Direct evaluations either side of the optimum exceed it.
        assert!(objective(1.0) > objective(c));
        assert!(objective(1.6) > objective(c));
    }

    #[test]
    fn takeover_values_and_growth() {
        assert_eq!(takeover_time_bound(1, 1.0), 0.0);
        assert!((takeover_time_bound(2, 1.0) - 4.0 * (E + 1.0)).abs() < 1e-12);
        assert!((takeover_time_bound(2, 1.0) - 14.873_127_313_836_18).abs() < 1e-9);
        // Θ(μ log μ): the ratio to μ ln μ stays within [1, 10] across three
        // decades of μ.
        let mut mu = 4;
        while mu <= 1024 {
            let ratio = takeover_time_bound(mu, 1.0) / (mu as f64 * (mu as f64).ln());
            assert!((1.0..=10.0).contains(&ratio), "mu = {mu}: ratio {ratio}");
            mu *= 2;
        }
    }

    #[test]
    fn fitness_level_bound_single_wait() {
        // m = 2, certain start in level 1, u = 1/2: expected wait 2.
        let b = FitnessLevelBounds {
            leave_probabilities: vec![0.5],
            jump_distributions: vec![vec![1.0]],
            viability: 1.0,
            start_distribution: vec![1.0],
        };
        assert_eq!(fitness_level_lower_bound(&b).unwrap(), 2.0);
    }

    #[test]
    fn fitness_level_bound_accumulates_waits() {
        // m = 3, start at level 1, χ = 1, u = (1/2, 1/4). χ = 1 admits no
        // level skipping, so the bound must equal the exact sequential-chain
        // time 1/u₁ + 1/u₂ = 6, confirmed by solving the two-state chain.
        let b = FitnessLevelBounds {
            leave_probabilities: vec![0.5, 0.25],
            jump_distributions: vec![vec![1.0, 0.0], vec![1.0]],
            viability: 1.0,
            start_distribution: vec![1.0, 0.0],
        };
        let bound = fitness_level_lower_bound(&b).unwrap();
        assert_eq!(bound, 6.0);

        // Exact solve of the no-skip chain: E₂ = 1/u₂, E₁ = 1/u₁ + E₂.
        let e2 = 1.0 / 0.25;
        let e1 = 1.0 / 0.5 + e2;
        assert_eq!(bound, e1);

        // χ = 0 degenerates to the first waiting time only.
        let degenerate = FitnessLevelBounds { viability: 0.0, ..b };
        assert_eq!(fitness_level_lower_bound(&degenerate).unwrap(), 2.0);
    }

    #[test]
    fn fitness_level_bound_rejects_bad_input() {
        let base = FitnessLevelBounds {
            leave_probabilities: vec![0.5, 0.25],
            jump_distributions: vec![vec![1.0, 0.0], vec![1.0]],
            viability: 1.0,
            start_distribution: vec![1.0, 0.0],
        };
        // Row not summing to one.
        let mut bad = base.clone();
        bad.jump_distributions[0] = vec![0.9, 0.0];
        assert!(fitness_level_lower_bound(&bad).is_err());
        // Viability violated: mass on skipping exceeds what χ = 1 allows.
        let mut bad = base.clone();
        bad.jump_distributions[0] = vec![0.5, 0.5];
        assert!(fitness_level_lower_bound(&bad).is_err());
        // Zero leave probability.
        let mut bad = base;
        bad.leave_probabilities[0] = 0.0;
        assert!(fitness_level_lower_bound(&bad).is_err());
    }

    #[test]
    fn greedy_estimates_near_optimum() {
        let params = GreedyLowerBoundParams::new(1.0, 10_000);
        // Start level ⌈n − n/ln n⌉ = 8915 at this size.
        assert_eq!(params.start_level, 8_915);
        assert_eq!(params.max_gain_weight, 1.0);

        let e = greedy_level_estimates(&params, 10_000 - 10, 1);
        // High-precision frozen value of the k = 1 net-gain probability.
        assert!(
            (e.net_gain_probability - 3.681_552_138_111_699e-4).abs() < 1e-15,
            "{}",
            e.net_gain_probability
        );
        // Close to the e^{-1}·10^{-3} leading behaviour.
        assert!((e.net_gain_probability - 1e-3 / E).abs() < 3e-6);
        // k = 1 jump weight is the empty product.
        assert_eq!(e.jump_weight, 1.0);
        // Frozen leading-order leave rate at the same level.
        assert!(
            (e.leave_rate - 4.906_040_374_633_754e-4).abs() < 1e-15,
            "{}",
            e.leave_rate
        );

        // Geometric decay of consecutive net-gain probabilities.
        let e2 = greedy_level_estimates(&params, 10_000 - 10, 2);
        let ratio = e2.net_gain_probability / e.net_gain_probability;
        let p = 1.0 / 10_000.0;
        let expected = p * 10.0 / ((1.0 - p) * (1.0 - p));
        assert!((ratio - expected).abs() < 1e-12);
        assert!(ratio < 1.0);
    }

    #[test]
    #[should_panic(expected = "near the optimum")]
    fn greedy_estimates_reject_low_levels() {
        let params = GreedyLowerBoundParams::new(1.0, 10_000);
        greedy_level_estimates(&params, 100, 1);
    }

    #[test]
    fn greedy_fitness_levels_are_normalized_and_viable() {
        let levels = greedy_fitness_levels(1.0, 500);
        for row in &levels.jump_distributions {
            let sum: f64 = row.iter().sum();
            assert!((sum - 1.0).abs() < 1e-9, "row sums to {sum}");
        }
        assert!(levels.viability > 0.0 && levels.viability <= 1.0);
        // The assembled input passes the validator and produces a positive
        // bound.
        let bound = fitness_level_lower_bound(&levels).unwrap();
        assert!(bound.is_finite() && bound > 0.0);
    }
}
