//! Command-line front end: seeded runs, parameter sweeps, closed-form
//! runtime bounds, chain solving, and the built-in experiment datasets.
//!
//! Exit codes: 0 on success, 2 for usage or validation errors, 3 for
//! internal numeric errors (simulation budget, output failures).

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use ssga_core::bounds::{
    greedy_lower_bound, mu_ga_upper_bound, mu_ga_upper_coefficient, optimal_mutation_constant,
    takeover_report, two_plus_one_upper_bound,
};
use ssga_core::format::round_significant;
use ssga_core::harness::{
    builtin_spec, run_experiment, to_json, write_csv, ExperimentSpec, Normalization, PointSpec,
    PointSummary, Scale, DEFAULT_MASTER_SEED,
};
use ssga_core::markov::{
    expected_absorbing_times, simulate_chain, ChainState, MarkovParams, SimulationSummary,
};
use ssga_core::{Error, SelectionPolicy, Variant};

#[derive(Parser)]
#[command(
    name = "ssga",
    version,
    about = "Steady-state genetic algorithms on OneMax: seeded experiments and closed-form runtime bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one algorithm configuration with replicated seeded runs
    Run(RunArgs),
    /// Run a cross-product sweep over comma-separated n, mu and c lists
    Sweep(SweepArgs),
    /// Evaluate a closed-form runtime bound and print it as JSON
    Bounds(BoundsArgs),
    /// Solve the level chain in closed form, optionally cross-checked by simulation
    McSolve(McSolveArgs),
    /// Emit the dataset behind one of the built-in figures or the summary table
    Figs(FigsArgs),
    /// Shorthand for `figs --which table1`
    Table1(Table1Args),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SelectionArg {
    Uniform,
    FitnessProportional,
    Rank,
    Greedy,
}

impl From<SelectionArg> for SelectionPolicy {
    fn from(value: SelectionArg) -> Self {
        match value {
            SelectionArg::Uniform => SelectionPolicy::Uniform,
            SelectionArg::FitnessProportional => SelectionPolicy::FitnessProportional,
            SelectionArg::Rank => SelectionPolicy::Rank,
            SelectionArg::Greedy => SelectionPolicy::Greedy,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum NormalizeArg {
    None,
    #[value(name = "vs-2plus1-ga")]
    Vs2plus1Ga,
    #[value(name = "vs-1plus1-ea")]
    Vs1plus1Ea,
    #[value(name = "vs-c-equal-1")]
    VsCEqual1,
}

impl From<NormalizeArg> for Normalization {
    fn from(value: NormalizeArg) -> Self {
        match value {
            NormalizeArg::None => Normalization::None,
            NormalizeArg::Vs2plus1Ga => Normalization::VsTwoPlusOneGa,
            NormalizeArg::Vs1plus1Ea => Normalization::VsOnePlusOneEa,
            NormalizeArg::VsCEqual1 => Normalization::VsCEqualOne,
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Output file (stdout when omitted); written atomically
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Worker threads for the run scheduler (default: available cores);
    /// the SSGA_WORKERS environment variable overrides this flag
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct RunArgs {
    /// Algorithm identifier, e.g. mu-plus-one-ga or one-plus-one-ea
    #[arg(long)]
    algo: String,
    /// Problem size
    #[arg(long)]
    n: usize,
    /// Mutation-rate numerator (rate c/n)
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    /// Population size (defaults to the algorithm's natural size)
    #[arg(long)]
    mu: Option<usize>,
    #[arg(long, value_enum, default_value_t = SelectionArg::Uniform)]
    selection: SelectionArg,
    #[arg(long, default_value_t = 1000)]
    runs: u32,
    #[arg(long, default_value_t = DEFAULT_MASTER_SEED)]
    seed: u64,
    /// Evaluation-cap override
    #[arg(long = "max-evals")]
    max_evals: Option<u64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    algo: String,
    /// Comma-separated strictly increasing problem sizes, e.g. 64,128,256
    #[arg(long)]
    n: String,
    /// Comma-separated strictly increasing mutation constants
    #[arg(long, default_value = "1.0")]
    c: String,
    /// Comma-separated strictly increasing population sizes
    #[arg(long)]
    mu: Option<String>,
    #[arg(long, value_enum, default_value_t = SelectionArg::Uniform)]
    selection: SelectionArg,
    #[arg(long, default_value_t = 1000)]
    runs: u32,
    #[arg(long, default_value_t = DEFAULT_MASTER_SEED)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = NormalizeArg::None)]
    normalize: NormalizeArg,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BoundKindArg {
    /// (μ+1) GA upper bound, μ ≥ 3
    Upper,
    /// (2+1) GA upper bound
    #[value(name = "upper-2plus1")]
    Upper2plus1,
    /// Greedy (2+1) GA lower bound
    Lower,
    /// Population takeover bound
    Takeover,
    /// Mutation constant minimizing the shared bound coefficient
    OptimalC,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long, value_enum)]
    kind: BoundKindArg,
    #[arg(long)]
    mu: Option<usize>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args)]
struct McSolveArgs {
    /// No diversity → absorbed (improvement by mutation)
    #[arg(long)]
    pm: f64,
    /// No diversity → diversity
    #[arg(long)]
    pd: f64,
    /// Diversity → absorbed (improvement with crossover)
    #[arg(long)]
    pc: f64,
    /// Diversity → no diversity (relapse)
    #[arg(long)]
    pr: f64,
    /// Also simulate this many episodes from each start state and report
    /// the agreement verdict
    #[arg(long)]
    simulate: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_MASTER_SEED)]
    seed: u64,
}

#[derive(Args)]
struct FigsArgs {
    /// Which dataset: 1, 2, 3, 4, 5 or table1
    #[arg(long)]
    which: String,
    #[arg(long, value_enum, default_value_t = ScaleArg::Desk)]
    scale: ScaleArg,
    #[arg(long, default_value_t = DEFAULT_MASTER_SEED)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct Table1Args {
    #[arg(long, value_enum, default_value_t = ScaleArg::Desk)]
    scale: ScaleArg,
    #[arg(long, default_value_t = DEFAULT_MASTER_SEED)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScaleArg {
    Desk,
    Full,
}

impl From<ScaleArg> for Scale {
    fn from(value: ScaleArg) -> Self {
        match value {
            ScaleArg::Desk => Scale::Desk,
            ScaleArg::Full => Scale::Full,
        }
    }
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }

    fn internal(message: impl Into<String>) -> Self {
        CliError { code: 3, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::SimulationBudget(_) | Error::Io(_) => CliError::internal(e.to_string()),
            _ => CliError::usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::internal(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Bounds(args) => cmd_bounds(args),
        Command::McSolve(args) => cmd_mc_solve(args),
        Command::Figs(args) => cmd_figs(args),
        Command::Table1(args) => cmd_figs(FigsArgs {
            which: "table1".to_string(),
            scale: args.scale,
            seed: args.seed,
            output: args.output,
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn worker_count(flag: Option<usize>) -> Option<usize> {
    std::env::var("SSGA_WORKERS")
        .ok()
        .and_then(|v| v.parse().ok())
        .or(flag)
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        None => {
            std::io::stdout().write_all(bytes)?;
            Ok(())
        }
        Some(p) => {
            let dir = match p.parent() {
                Some(d) if !d.as_os_str().is_empty() => d,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(bytes)?;
            tmp.persist(p)
                .map_err(|e| CliError::internal(format!("persisting {}: {e}", p.display())))?;
            Ok(())
        }
    }
}

fn emit_table(
    output: &OutputArgs,
    name: &str,
    rows: &[PointSummary],
) -> Result<(), CliError> {
    let mut bytes = Vec::new();
    match output.format {
        FormatArg::Csv => write_csv(&mut bytes, name, rows)?,
        FormatArg::Json => {
            serde_json::to_writer_pretty(&mut bytes, &to_json(name, rows))
                .map_err(|e| CliError::internal(e.to_string()))?;
            bytes.push(b'\n');
        }
    }
    write_output(output.out.as_deref(), &bytes)?;
    let capped: u32 = rows.iter().map(|r| r.capped).sum();
    if capped > 0 {
        eprintln!("warning: {capped} runs hit the evaluation cap; their rows carry capped_count");
    }
    Ok(())
}

fn run_and_emit(spec: &ExperimentSpec, output: &OutputArgs) -> Result<(), CliError> {
    let rows = run_experiment(spec, worker_count(output.workers))?;
    emit_table(output, &spec.name, &rows)
}

fn cmd_run(args: RunArgs) -> Result<(), CliError> {
    let variant: Variant = args.algo.parse()?;
    let point = PointSpec {
        label: variant.id().to_string(),
        variant,
        selection: args.selection.into(),
        n: args.n,
        mu: args.mu.unwrap_or_else(|| variant.default_mu()),
        c: args.c,
        runs: args.runs,
        max_evaluations: args.max_evals,
    };
    let spec = ExperimentSpec::new("run", vec![point]).with_master_seed(args.seed);
    run_and_emit(&spec, &args.output)
}

fn parse_sweep_values<T: std::str::FromStr + PartialOrd + Copy>(
    flag: &str,
    list: &str,
) -> Result<Vec<T>, CliError> {
    let mut values = Vec::new();
    for part in list.split(',') {
        let v: T = part
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("--{flag}: cannot parse {part:?}")))?;
        values.push(v);
    }
    if values.is_empty() {
        return Err(CliError::usage(format!("--{flag}: empty sweep")));
    }
    if values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::usage(format!(
            "--{flag}: sweep values must be strictly increasing"
        )));
    }
    Ok(values)
}

fn cmd_sweep(args: SweepArgs) -> Result<(), CliError> {
    let variant: Variant = args.algo.parse()?;
    let ns: Vec<usize> = parse_sweep_values("n", &args.n)?;
    let cs: Vec<f64> = parse_sweep_values("c", &args.c)?;
    let mus: Vec<usize> = match &args.mu {
        Some(list) => parse_sweep_values("mu", list)?,
        None => vec![variant.default_mu()],
    };
    let mut points = Vec::new();
    for &n in &ns {
        for &mu in &mus {
            for &c in &cs {
                points.push(PointSpec {
                    label: variant.id().to_string(),
                    variant,
                    selection: args.selection.into(),
                    n,
                    mu,
                    c,
                    runs: args.runs,
                    max_evaluations: None,
                });
            }
        }
    }
    let spec = ExperimentSpec::new("sweep", points)
        .with_master_seed(args.seed)
        .with_normalization(args.normalize.into());
    run_and_emit(&spec, &args.output)
}

fn require<T: Copy>(value: Option<T>, flag: &str, kind: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::usage(format!("--kind {kind} requires --{flag}")))
}

fn cmd_bounds(args: BoundsArgs) -> Result<(), CliError> {
    let value = match args.kind {
        BoundKindArg::Upper => {
            let mu = require(args.mu, "mu", "upper")?;
            let c = require(args.c, "c", "upper")?;
            let n = require(args.n, "n", "upper")?;
            if mu < 3 {
                return Err(CliError::usage(
                    "the (mu+1) GA upper bound needs mu >= 3; use --kind upper-2plus1 for mu = 2",
                ));
            }
            check_bound_params(c, Some(n), 2)?;
            report_json(mu_ga_upper_bound(mu, c, n))
        }
        BoundKindArg::Upper2plus1 => {
            let c = require(args.c, "c", "upper-2plus1")?;
            let n = require(args.n, "n", "upper-2plus1")?;
            check_bound_params(c, Some(n), 2)?;
            report_json(two_plus_one_upper_bound(c, n))
        }
        BoundKindArg::Lower => {
            let c = require(args.c, "c", "lower")?;
            let n = require(args.n, "n", "lower")?;
            check_bound_params(c, Some(n), 3)?;
            report_json(greedy_lower_bound(c, n))
        }
        BoundKindArg::Takeover => {
            let mu = require(args.mu, "mu", "takeover")?;
            let c = require(args.c, "c", "takeover")?;
            check_bound_params(c, None, 0)?;
            if mu < 1 {
                return Err(CliError::usage("--kind takeover requires mu >= 1"));
            }
            report_json(takeover_report(mu, c))
        }
        BoundKindArg::OptimalC => {
            // The search converges to 1e-9; rounding this one value to six
            // significant digits would throw most of that away.
            let c = optimal_mutation_constant();
            json!({
                "kind": "optimal-c",
                "c": (c * 1e9).round() / 1e9,
                "leading_coefficient": round_significant(mu_ga_upper_coefficient(c)),
            })
        }
    };
    let mut bytes = serde_json::to_vec_pretty(&value).expect("serializable report");
    bytes.push(b'\n');
    write_output(None, &bytes)
}

fn check_bound_params(c: f64, n: Option<usize>, min_n: usize) -> Result<(), CliError> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(CliError::usage("--c must be positive"));
    }
    if let Some(n) = n {
        if n < min_n {
            return Err(CliError::usage(format!("--n must be at least {min_n}")));
        }
    }
    Ok(())
}

fn report_json(mut report: ssga_core::BoundReport) -> serde_json::Value {
    report.leading_term_value = round_significant(report.leading_term_value);
    report.c = round_significant(report.c);
    report.per_level_values = None;
    serde_json::to_value(&report).expect("serializable report")
}

fn simulation_json(
    summary: &SimulationSummary,
    expected: f64,
) -> serde_json::Value {
    let agrees = if summary.std_error == 0.0 {
        summary.mean == expected
    } else {
        (summary.mean - expected).abs() <= 4.0 * summary.std_error
    };
    json!({
        "mean": round_significant(summary.mean),
        "std_error": round_significant(summary.std_error),
        "episodes": summary.episodes,
        "agrees_within_4_std_errors": agrees,
    })
}

fn cmd_mc_solve(args: McSolveArgs) -> Result<(), CliError> {
    let params = MarkovParams::new(args.pm, args.pd, args.pc, args.pr)?;
    let times = expected_absorbing_times(&params)?;
    let mut value = json!({
        "params": {
            "p_m": round_significant(args.pm),
            "p_d": round_significant(args.pd),
            "p_c": round_significant(args.pc),
            "p_r": round_significant(args.pr),
        },
        "expected": {
            "from_no_diversity": round_significant(times.from_no_diversity),
            "from_diversity": round_significant(times.from_diversity),
        },
    });
    if let Some(episodes) = args.simulate {
        if episodes == 0 {
            return Err(CliError::usage("--simulate needs at least one episode"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        let s1 = simulate_chain(&params, ChainState::NoDiversity, &mut rng, episodes)?;
        let s2 = simulate_chain(&params, ChainState::Diversity, &mut rng, episodes)?;
        value["simulation"] = json!({
            "from_no_diversity": simulation_json(&s1, times.from_no_diversity),
            "from_diversity": simulation_json(&s2, times.from_diversity),
        });
    }
    let mut bytes = serde_json::to_vec_pretty(&value).expect("serializable");
    bytes.push(b'\n');
    write_output(None, &bytes)
}

fn cmd_figs(args: FigsArgs) -> Result<(), CliError> {
    let name = match args.which.as_str() {
        "1" | "2" | "3" | "4" | "5" => format!("fig{}", args.which),
        "table1" => "table1".to_string(),
        other => {
            return Err(CliError::usage(format!(
                "--which {other:?} is not one of 1, 2, 3, 4, 5, table1"
            )))
        }
    };
    let spec = builtin_spec(&name, args.scale.into())
        .expect("validated name")
        .with_master_seed(args.seed);
    run_and_emit(&spec, &args.output)
}
