//! Seeded, replicated execution of algorithm configurations, with the
//! built-in experiment definitions behind the comparison figures and the
//! summary table.
//!
//! Determinism contract: a spec rerun with the same master seed produces a
//! byte-identical table regardless of worker count. Per-run seeds come from
//! [`crate::seed::derive_seed`], runs are collected in index order, and
//! summaries are computed from the collected values, never from streamed
//! accumulation.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::algorithm::{run_to_optimum, AlgorithmConfig, Variant};
use crate::error::Error;
use crate::format::{format_significant, round_significant};
use crate::population::SelectionPolicy;
use crate::seed::derive_seed;
use crate::stats::summarize;

/// Master seed used by the built-in specs unless the caller overrides it.
pub const DEFAULT_MASTER_SEED: u64 = 42;

/// Mutation-rate numerator minimizing the diversity-enforcing GA's runtime:
/// `(1+√5)/2`.
pub fn optimal_diversity_rate() -> f64 {
    (1.0 + 5.0f64.sqrt()) / 2.0
}

/// Problem sizes of the n-sweeps: 64 to 8192 in doublings.
pub const N_SWEEP: [usize; 8] = [64, 128, 256, 512, 1024, 2048, 4096, 8192];

/// Experiment size: desk scale keeps every point to minutes on a laptop
/// (1000 runs up to n = 2048, 200 at n ∈ {4096, 8192}, 100 beyond); full
/// scale runs 1000 everywhere.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scale {
    Desk,
    Full,
}

impl Scale {
    /// Runs per point for an n-sweep point at this scale.
    pub fn runs_for(self, n: usize) -> u32 {
        match self {
            Scale::Full => 1000,
            Scale::Desk => {
                if n <= 2048 {
                    1000
                } else if n <= 8192 {
                    200
                } else {
                    100
                }
            }
        }
    }
}

/// How the summary table is normalized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    None,
    /// Divide each point by the (2+1) GA mean at the same problem size.
    VsTwoPlusOneGa,
    /// Divide each point by the (1+1) EA mean at the same problem size.
    VsOnePlusOneEa,
    /// Divide each point by the same algorithm's mean at c = 1.
    VsCEqualOne,
}

/// One configuration point of an experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSpec {
    /// Row identifier in the output table (one per algorithm behaviour).
    pub label: String,
    pub variant: Variant,
    pub selection: SelectionPolicy,
    pub n: usize,
    pub mu: usize,
    pub c: f64,
    pub runs: u32,
    /// Evaluation-cap override; the generous default applies when absent.
    pub max_evaluations: Option<u64>,
}

impl PointSpec {
    /// The runnable configuration for one seed.
    pub fn config(&self, seed: u64) -> AlgorithmConfig {
        let config = AlgorithmConfig::new(self.variant, self.n)
            .with_mu(self.mu)
            .with_c(self.c)
            .with_selection(self.selection)
            .with_seed(seed);
        match self.max_evaluations {
            Some(cap) => config.with_max_evaluations(cap),
            None => config,
        }
    }
}

/// A named set of points with a master seed and a normalization rule.
/// Constructors expand parameter sweeps into explicit points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub name: String,
    pub points: Vec<PointSpec>,
    pub master_seed: u64,
    pub normalization: Normalization,
}

impl ExperimentSpec {
    pub fn new(name: impl Into<String>, points: Vec<PointSpec>) -> Self {
        ExperimentSpec {
            name: name.into(),
            points,
            master_seed: DEFAULT_MASTER_SEED,
            normalization: Normalization::None,
        }
    }

    pub fn with_master_seed(mut self, seed: u64) -> Self {
        self.master_seed = seed;
        self
    }

    pub fn with_normalization(mut self, normalization: Normalization) -> Self {
        self.normalization = normalization;
        self
    }

    fn validate(&self) -> Result<(), Error> {
        if self.points.is_empty() {
            return Err(Error::InvalidConfig("experiment has no points".into()));
        }
        for point in &self.points {
            if point.runs == 0 {
                return Err(Error::InvalidConfig(format!(
                    "point {:?} has zero runs",
                    point.label
                )));
            }
            point.config(0).validate()?;
        }
        Ok(())
    }
}

/// Aggregated evaluation counts of one point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsSummary {
    /// Mean evaluations over the uncapped runs (NaN if every run capped).
    pub mean: f64,
    /// Sample standard deviation (divisor N−1; 0 for a single run).
    pub std_dev: f64,
    /// Number of uncapped runs behind the statistics.
    pub count: u32,
    pub normalized_mean: Option<f64>,
    pub normalized_std: Option<f64>,
}

/// One output row: the point's coordinates plus its statistics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSummary {
    pub label: String,
    pub variant: Variant,
    pub n: usize,
    pub mu: usize,
    pub c: f64,
    pub stats: StatsSummary,
    /// Runs that hit the evaluation cap; excluded from the statistics.
    pub capped: u32,
}

/// Executes every run of the spec and aggregates per-point statistics.
///
/// `workers` bounds the rayon pool (`None` uses all cores). Results are
/// independent of the worker count.
pub fn run_experiment(
    spec: &ExperimentSpec,
    workers: Option<usize>,
) -> Result<Vec<PointSummary>, Error> {
    spec.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidConfig(format!("worker pool: {e}")))?;

    let mut jobs: Vec<(usize, u32)> = Vec::new();
    for (pi, point) in spec.points.iter().enumerate() {
        for ri in 0..point.runs {
            jobs.push((pi, ri));
        }
    }

    let outcomes: Vec<(u64, bool)> = pool.install(|| {
        jobs.par_iter()
            .map(|&(pi, ri)| {
                let seed = derive_seed(spec.master_seed, pi as u64, u64::from(ri));
                let config = spec.points[pi].config(seed);
                let result = run_to_optimum(&config).expect("configuration was validated");
                (result.evaluations, result.hit_cap)
            })
            .collect()
    });

    let mut rows = Vec::with_capacity(spec.points.len());
    let mut offset = 0usize;
    for point in &spec.points {
        let slice = &outcomes[offset..offset + point.runs as usize];
        offset += point.runs as usize;
        let values: Vec<f64> = slice
            .iter()
            .filter(|(_, capped)| !capped)
            .map(|&(evals, _)| evals as f64)
            .collect();
        let capped = (slice.len() - values.len()) as u32;
        let summary = summarize(&values);
        rows.push(PointSummary {
            label: point.label.clone(),
            variant: point.variant,
            n: point.n,
            mu: point.mu,
            c: point.c,
            stats: StatsSummary {
                mean: summary.mean,
                std_dev: summary.std_dev,
                count: summary.count as u32,
                normalized_mean: None,
                normalized_std: None,
            },
            capped,
        });
    }
    apply_normalization(spec.normalization, &mut rows);
    Ok(rows)
}

/// Point-wise normalization of one series by a baseline series:
/// `normalized_mean = mean_a / mean_b`, `normalized_std = std_a / mean_b`.
/// The series must cover the same sweep points in the same order.
pub fn normalize(
    series_a: &[PointSummary],
    series_b: &[PointSummary],
) -> Result<Vec<PointSummary>, Error> {
    if series_a.len() != series_b.len() {
        return Err(Error::InvalidConfig(
            "normalization requires matching sweep points".into(),
        ));
    }
    let mut out = Vec::with_capacity(series_a.len());
    for (a, b) in series_a.iter().zip(series_b) {
        if a.n != b.n {
            return Err(Error::InvalidConfig(format!(
                "sweep points differ: n = {} vs n = {}",
                a.n, b.n
            )));
        }
        let mut row = a.clone();
        row.stats.normalized_mean = comparable(a, b).then(|| a.stats.mean / b.stats.mean);
        row.stats.normalized_std = comparable(a, b).then(|| a.stats.std_dev / b.stats.mean);
        out.push(row);
    }
    Ok(out)
}

fn comparable(a: &PointSummary, b: &PointSummary) -> bool {
    a.capped == 0 && b.capped == 0 && a.stats.count > 0 && b.stats.count > 0
}

fn apply_normalization(normalization: Normalization, rows: &mut [PointSummary]) {
    let baseline_of = |row: &PointSummary, all: &[PointSummary]| -> Option<PointSummary> {
        let found = match normalization {
            Normalization::None => return None,
            Normalization::VsTwoPlusOneGa => all.iter().find(|b| {
                b.variant == Variant::MuPlusOneGa && b.mu == 2 && b.n == row.n && b.c == row.c
            }),
            Normalization::VsOnePlusOneEa => all
                .iter()
                .find(|b| b.variant == Variant::OnePlusOneEa && b.n == row.n),
            Normalization::VsCEqualOne => all
                .iter()
                .find(|b| b.label == row.label && b.mu == row.mu && b.n == row.n && b.c == 1.0),
        };
        found.cloned()
    };
    let snapshot = rows.to_vec();
    for row in rows.iter_mut() {
        if let Some(base) = baseline_of(row, &snapshot) {
            if comparable(row, &base) {
                row.stats.normalized_mean = Some(row.stats.mean / base.stats.mean);
                row.stats.normalized_std = Some(row.stats.std_dev / base.stats.mean);
            }
        }
    }
}

/// Column header of the CSV output.
pub const CSV_HEADER: &str =
    "name,algorithm,n,mu,c,runs,mean,std_dev,normalized_mean,normalized_std,capped_count";

/// Writes the plot-ready CSV table: one row per point, the swept variable in
/// its own column.
pub fn write_csv<W: Write>(out: &mut W, name: &str, rows: &[PointSummary]) -> Result<(), Error> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            name,
            row.label,
            row.n,
            row.mu,
            format_significant(row.c),
            row.stats.count,
            format_significant(row.stats.mean),
            format_significant(row.stats.std_dev),
            row.stats.normalized_mean.map(format_significant).unwrap_or_default(),
            row.stats.normalized_std.map(format_significant).unwrap_or_default(),
            row.capped,
        )?;
    }
    Ok(())
}

/// JSON mirror of the CSV table: an array of objects with identical fields.
pub fn to_json(name: &str, rows: &[PointSummary]) -> serde_json::Value {
    let opt = |v: Option<f64>| match v {
        Some(x) if x.is_finite() => json!(round_significant(x)),
        _ => serde_json::Value::Null,
    };
    let num = |x: f64| {
        if x.is_finite() {
            json!(round_significant(x))
        } else {
            serde_json::Value::Null
        }
    };
    serde_json::Value::Array(
        rows.iter()
            .map(|row| {
                json!({
                    "name": name,
                    "algorithm": row.label,
                    "n": row.n,
                    "mu": row.mu,
                    "c": round_significant(row.c),
                    "runs": row.stats.count,
                    "mean": num(row.stats.mean),
                    "std_dev": num(row.stats.std_dev),
                    "normalized_mean": opt(row.stats.normalized_mean),
                    "normalized_std": opt(row.stats.normalized_std),
                    "capped_count": row.capped,
                })
            })
            .collect(),
    )
}

pub fn write_json<W: Write>(out: &mut W, name: &str, rows: &[PointSummary]) -> Result<(), Error> {
    let value = to_json(name, rows);
    writeln!(out, "{}", serde_json::to_string_pretty(&value).expect("serializable"))?;
    Ok(())
}

fn point(
    label: &str,
    variant: Variant,
    selection: SelectionPolicy,
    mu: usize,
    c: f64,
    n: usize,
    runs: u32,
) -> PointSpec {
    PointSpec { label: label.to_string(), variant, selection, n, mu, c, runs, max_evaluations: None }
}

/// Row definitions of the summary table: identifier, variant, selection,
/// μ and mutation constant.
fn table_rows() -> Vec<(&'static str, Variant, SelectionPolicy, usize, f64)> {
    use SelectionPolicy::{Greedy, Uniform};
    use Variant::*;
    let copt = optimal_diversity_rate();
    vec![
        ("one-plus-one-ea", OnePlusOneEa, Uniform, 1, 1.0),
        ("mu-plus-one-ga", MuPlusOneGa, Uniform, 2, 1.0),
        ("greedy-mu-plus-one-ga", MuPlusOneGa, Greedy, 2, 1.0),
        ("mu-plus-one-ga", MuPlusOneGa, Uniform, 5, 1.0),
        ("sudholt-diversity", SudholtDiversity, Uniform, 2, 1.0),
        ("sudholt-diversity", SudholtDiversity, Uniform, 2, copt),
        ("two-plus-one-greedy-s", TwoPlusOneGreedyS, Greedy, 2, 1.0),
        (
            "sudholt-diversity-greedy-selection-greedy-xo",
            SudholtDiversityGreedySelectionGreedyXo,
            Greedy,
            2,
            1.0,
        ),
        (
            "sudholt-diversity-greedy-selection",
            SudholtDiversityGreedySelection,
            Greedy,
            2,
            1.0,
        ),
        ("sudholt-diversity-greedy-xo", SudholtDiversityGreedyXo, Uniform, 2, copt),
        ("one-lambda-lambda", OneLambdaLambdaSelfAdjusting, Uniform, 1, 1.0),
    ]
}

/// The named built-in experiment, or `None` for an unknown name. Known
/// names: `fig1` … `fig5` and `table1`.
pub fn builtin_spec(name: &str, scale: Scale) -> Option<ExperimentSpec> {
    use SelectionPolicy::{Greedy, Uniform};
    use Variant::*;
    let copt = optimal_diversity_rate();
    let spec = match name {
        // Overall comparison: mutation-only baseline, standard GAs with two
        // population sizes, diversity-enforcing GAs at both rates, the
        // greedy-selection diversity GA and the self-adjusting GA.
        "fig1" => {
            let algos: Vec<(&str, Variant, SelectionPolicy, usize, f64)> = vec![
                ("one-plus-one-ea", OnePlusOneEa, Uniform, 1, 1.0),
                ("mu-plus-one-ga", MuPlusOneGa, Uniform, 2, 1.0),
                ("mu-plus-one-ga", MuPlusOneGa, Uniform, 5, 1.0),
                ("sudholt-diversity", SudholtDiversity, Uniform, 2, 1.0),
                ("sudholt-diversity", SudholtDiversity, Uniform, 2, copt),
                ("sudholt-diversity-greedy-selection", SudholtDiversityGreedySelection, Greedy, 2, 1.0),
                ("one-lambda-lambda", OneLambdaLambdaSelfAdjusting, Uniform, 1, 1.0),
            ];
            ExperimentSpec::new("fig1", sweep_n(&algos, scale))
        }
        // Decomposition of greediness and diversity enforcement.
        "fig2" => {
            let algos: Vec<(&str, Variant, SelectionPolicy, usize, f64)> = vec![
                ("mu-plus-one-ga", MuPlusOneGa, Uniform, 2, 1.0),
                ("greedy-mu-plus-one-ga", MuPlusOneGa, Greedy, 2, 1.0),
                ("two-plus-one-greedy-s", TwoPlusOneGreedyS, Greedy, 2, 1.0),
                ("sudholt-diversity", SudholtDiversity, Uniform, 2, 1.0),
                ("sudholt-diversity-greedy-selection", SudholtDiversityGreedySelection, Greedy, 2, 1.0),
                (
                    "sudholt-diversity-greedy-selection-greedy-xo",
                    SudholtDiversityGreedySelectionGreedyXo,
                    Greedy,
                    2,
                    1.0,
                ),
                ("sudholt-diversity-greedy-xo", SudholtDiversityGreedyXo, Uniform, 2, copt),
            ];
            ExperimentSpec::new("fig2", sweep_n(&algos, scale))
        }
        // Population-size sweep, runtimes normalized by the (2+1) GA.
        "fig3" => ExperimentSpec::new("fig3", mu_sweep(scale))
            .with_normalization(Normalization::VsTwoPlusOneGa),
        // Same sweep normalized by the (1+1) EA, which joins as a baseline.
        "fig4" => {
            let mut points = mu_sweep(scale);
            for &n in &[256, 4096, 16384] {
                points.push(point(
                    "one-plus-one-ea",
                    OnePlusOneEa,
                    Uniform,
                    1,
                    1.0,
                    n,
                    scale.runs_for(n),
                ));
            }
            ExperimentSpec::new("fig4", points).with_normalization(Normalization::VsOnePlusOneEa)
        }
        // Mutation-rate sweep of the (5+1) GA at n = 4096, normalized by
        // the c = 1 point. 500 runs per rate keep the minimum resolvable at
        // desk scale.
        "fig5" => {
            let runs = match scale {
                Scale::Desk => 500,
                Scale::Full => 1000,
            };
            let points = (9..=19)
                .map(|tenths| {
                    point(
                        "mu-plus-one-ga",
                        MuPlusOneGa,
                        Uniform,
                        5,
                        tenths as f64 / 10.0,
                        4096,
                        runs,
                    )
                })
                .collect();
            ExperimentSpec::new("fig5", points).with_normalization(Normalization::VsCEqualOne)
        }
        "table1" => {
            let mut points = Vec::new();
            for &n in &N_SWEEP {
                for (label, variant, selection, mu, c) in table_rows() {
                    points.push(point(label, variant, selection, mu, c, n, scale.runs_for(n)));
                }
            }
            ExperimentSpec::new("table1", points)
        }
        _ => return None,
    };
    Some(spec)
}

/// All built-in specs.
pub fn builtin_specs(scale: Scale) -> Vec<ExperimentSpec> {
    ["fig1", "fig2", "fig3", "fig4", "fig5", "table1"]
        .iter()
        .map(|name| builtin_spec(name, scale).expect("known name"))
        .collect()
}

fn sweep_n(
    algos: &[(&str, Variant, SelectionPolicy, usize, f64)],
    scale: Scale,
) -> Vec<PointSpec> {
    let mut points = Vec::new();
    for &n in &N_SWEEP {
        for &(label, variant, selection, mu, c) in algos {
            points.push(point(label, variant, selection, mu, c, n, scale.runs_for(n)));
        }
    }
    points
}

fn mu_sweep(scale: Scale) -> Vec<PointSpec> {
    let mut points = Vec::new();
    for &n in &[256usize, 4096, 16384] {
        for mu in 2..=16 {
            points.push(point(
                "mu-plus-one-ga",
                Variant::MuPlusOneGa,
                SelectionPolicy::Uniform,
                mu,
                1.0,
                n,
                scale.runs_for(n),
            ));
        }
    }
    points
}
