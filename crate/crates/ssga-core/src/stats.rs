//! Sample summaries, Welch's t-test and a chi-squared goodness-of-fit
//! statistic. Everything the harness and the test suites need; nothing more.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, StudentsT};

/// Mean and sample standard deviation (divisor N−1; zero by convention for
/// fewer than two values).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub std_dev: f64,
    pub count: usize,
}

pub fn summarize(values: &[f64]) -> Summary {
    let count = values.len();
    if count == 0 {
        return Summary { mean: f64::NAN, std_dev: 0.0, count };
    }
    let mean = values.iter().sum::<f64>() / count as f64;
    let std_dev = if count < 2 {
        0.0
    } else {
        let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
        (ss / (count as f64 - 1.0)).sqrt()
    };
    Summary { mean, std_dev, count }
}

/// Welch's unequal-variance t-test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WelchTest {
    pub t: f64,
    pub degrees_of_freedom: f64,
    /// One-sided p-value for the alternative `mean_a < mean_b`: small values
    /// are strong evidence that a is smaller in expectation.
    pub p_less: f64,
}

pub fn welch_one_sided(a: &Summary, b: &Summary) -> WelchTest {
    assert!(a.count >= 2 && b.count >= 2, "Welch's test needs two samples per side");
    let va = a.std_dev * a.std_dev / a.count as f64;
    let vb = b.std_dev * b.std_dev / b.count as f64;
    let se = (va + vb).sqrt();
    if se == 0.0 {
        let p = match a.mean.partial_cmp(&b.mean) {
            Some(std::cmp::Ordering::Less) => 0.0,
            Some(std::cmp::Ordering::Greater) => 1.0,
            _ => 0.5,
        };
        return WelchTest { t: 0.0, degrees_of_freedom: f64::INFINITY, p_less: p };
    }
    let t = (a.mean - b.mean) / se;
    let df = (va + vb) * (va + vb)
        / (va * va / (a.count as f64 - 1.0) + vb * vb / (b.count as f64 - 1.0));
    let dist = StudentsT::new(0.0, 1.0, df).expect("valid t distribution");
    WelchTest { t, degrees_of_freedom: df, p_less: dist.cdf(t) }
}

/// Chi-squared goodness-of-fit statistic for observed counts against
/// expected bin probabilities over the same support. Bins with expected
/// count below `min_expected` are pooled into their left neighbour, a
/// standard validity adjustment. Returns the statistic and the degrees of
/// freedom (pooled bins − 1).
pub fn chi_squared_statistic(
    observed: &[u64],
    expected_probability: &[f64],
    min_expected: f64,
) -> (f64, usize) {
    assert_eq!(observed.len(), expected_probability.len());
    let trials: u64 = observed.iter().sum();
    let mut pooled: Vec<(f64, f64)> = Vec::new(); // (observed, expected)
    for (&obs, &p) in observed.iter().zip(expected_probability) {
        let exp = p * trials as f64;
        match pooled.last_mut() {
            Some(last) if last.1 < min_expected => {
                last.0 += obs as f64;
                last.1 += exp;
            }
            _ => pooled.push((obs as f64, exp)),
        }
    }
    // The final bin may still be undersized; merge it backwards.
    if pooled.len() >= 2 && pooled.last().unwrap().1 < min_expected {
        let (obs, exp) = pooled.pop().unwrap();
        let last = pooled.last_mut().unwrap();
        last.0 += obs;
        last.1 += exp;
    }
    let stat = pooled
        .iter()
        .filter(|(_, exp)| *exp > 0.0)
        .map(|(obs, exp)| (obs - exp) * (obs - exp) / exp)
        .sum();
    (stat, pooled.len().saturating_sub(1))
}

/// Upper critical value of the chi-squared distribution with `df` degrees
/// of freedom at significance `alpha` (i.e. the `1 − alpha` quantile).
pub fn chi_squared_critical(df: usize, alpha: f64) -> f64 {
    ChiSquared::new(df as f64)
        .expect("valid chi-squared distribution")
        .inverse_cdf(1.0 - alpha)
}
