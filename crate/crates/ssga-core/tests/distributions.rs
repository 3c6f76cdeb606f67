//! Distributional checks on the variation operators: crossover marginals
//! against Binomial(2d, 1/2) and mutation flip counts against
//! Binomial(n, c/n), both by chi-squared goodness of fit at significance
//! 0.001 with fixed seeds.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{Binomial, Discrete};

use ssga_core::genome::{standard_bit_mutation, uniform_crossover, Genome};
use ssga_core::stats::{chi_squared_critical, chi_squared_statistic};

fn binomial_probabilities(n: u64, p: f64) -> Vec<f64> {
    let dist = Binomial::new(p, n).expect("valid binomial");
    (0..=n).map(|k| dist.pmf(k)).collect()
}

#[test]
fn crossover_marginals_match_binomial() {
    // Parents at Hamming distance 2d = 6 on the same level: the number of
    // 1-bits the offspring collects among the differing positions is
    // Binomial(6, 1/2).
    let x = Genome::from_bit_str("1110000000");
    let y = Genome::from_bit_str("0001110000");
    let differing: Vec<usize> = (0..6).collect();
    let trials = 200_000u64;
    let mut counts = vec![0u64; 7];
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    for _ in 0..trials {
        let z = uniform_crossover(&x, &y, &mut rng);
        let ones = differing.iter().filter(|&&i| z.bit(i)).count();
        counts[ones] += 1;
    }
    let probs = binomial_probabilities(6, 0.5);
    let (stat, df) = chi_squared_statistic(&counts, &probs, 5.0);
    let critical = chi_squared_critical(df, 0.001);
    assert!(
        stat <= critical,
        "crossover marginal rejected: chi2 = {stat:.2} > {critical:.2} (df = {df})"
    );
}

#[test]
fn mutation_flip_counts_match_binomial() {
    let n = 100usize;
    let c = 1.5f64;
    let trials = 1_000_000u64;
    let base = Genome::zeros(n);
    let mut counts = vec![0u64; n + 1];
    let mut rng = ChaCha8Rng::seed_from_u64(73);
    for _ in 0..trials {
        let mutated = standard_bit_mutation(&base, c, &mut rng);
        counts[mutated.fitness() as usize] += 1;
    }
    let probs = binomial_probabilities(n as u64, c / n as f64);
    let (stat, df) = chi_squared_statistic(&counts, &probs, 5.0);
    let critical = chi_squared_critical(df, 0.001);
    assert!(
        stat <= critical,
        "mutation flip counts rejected: chi2 = {stat:.2} > {critical:.2} (df = {df})"
    );
}

#[test]
fn mutation_marginals_are_positionwise_uniform() {
    // Each position must flip equally often: 10^6 trials at n = 50, c = 1,
    // so each position flips with probability 1/50.
    let n = 50usize;
    let trials = 1_000_000u64;
    let base = Genome::zeros(n);
    let mut flips = vec![0u64; n];
    let mut rng = ChaCha8Rng::seed_from_u64(79);
    for _ in 0..trials {
        let mutated = standard_bit_mutation(&base, 1.0, &mut rng);
        for (i, f) in flips.iter_mut().enumerate() {
            if mutated.bit(i) {
                *f += 1;
            }
        }
    }
    let expected = trials as f64 / n as f64;
    let se = (trials as f64 * (1.0 / n as f64) * (1.0 - 1.0 / n as f64)).sqrt();
    for (i, &f) in flips.iter().enumerate() {
        assert!(
            (f as f64 - expected).abs() <= 5.0 * se,
            "position {i} flipped {f} times, expected {expected:.0} ± {se:.0}"
        );
    }
}
