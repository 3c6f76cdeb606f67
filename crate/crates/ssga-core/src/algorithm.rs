//! Algorithm configurations and per-generation state machines.
//!
//! All steady-state variants share one loop: select parents, recombine,
//! mutate, evaluate the single offspring, then remove one minimal-fitness
//! individual. The variants differ in how parents are drawn, whether
//! crossover is uniform or replaced by a bitwise-OR shortcut, and how
//! environmental-selection ties are broken. The self-adjusting (1+(λ,λ)) GA
//! has its own two-phase iteration.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::genome::{self, Genome, Mutation};
use crate::population::{Population, SelectionPolicy, TieBreak};

/// Self-adjustment factor of the (1+(λ,λ)) GA's one-fifth success rule.
pub const LAMBDA_UPDATE_FACTOR: f64 = 1.5;

/// The algorithm behaviours the crate implements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// Mutation-only hillclimber with a single individual.
    OnePlusOneEa,
    /// Mutation-only steady state EA with μ individuals: one parent per
    /// generation, no crossover.
    MuPlusOneEa,
    /// Standard steady-state GA: two parents with replacement, uniform
    /// crossover, standard bit mutation, random tie-breaking.
    MuPlusOneGa,
    /// Greedy (2+1) GA with the semi-greedy OR shortcut: parents are drawn
    /// uniformly from the best-fitness subset, and an offspring that ties the
    /// best fitness at Hamming distance above 2 from a best individual is
    /// merged with the most distant one by bitwise OR.
    TwoPlusOneGreedyS,
    /// (μ+1) GA whose environmental selection prefers removing duplicated
    /// genotypes, keeping diversity once created.
    SudholtDiversity,
    /// Diversity-enforcing GA with parents drawn uniformly from the
    /// best-fitness subset.
    SudholtDiversityGreedySelection,
    /// Diversity-enforcing GA with greedy parent selection where crossover
    /// of two distinct best-level parents returns their bitwise OR.
    SudholtDiversityGreedySelectionGreedyXo,
    /// Diversity-enforcing GA with standard parent selection where crossover
    /// of two distinct best-level parents returns their bitwise OR.
    SudholtDiversityGreedyXo,
    /// Self-adjusting (1+(λ,λ)) GA: λ mutants at rate λ/n, best mutant
    /// crossed λ times with the parent at bias 1/λ, λ driven by the
    /// one-fifth rule.
    OneLambdaLambdaSelfAdjusting,
}

impl Variant {
    /// All variants, in a stable order.
    pub const ALL: [Variant; 9] = [
        Variant::OnePlusOneEa,
        Variant::MuPlusOneEa,
        Variant::MuPlusOneGa,
        Variant::TwoPlusOneGreedyS,
        Variant::SudholtDiversity,
        Variant::SudholtDiversityGreedySelection,
        Variant::SudholtDiversityGreedySelectionGreedyXo,
        Variant::SudholtDiversityGreedyXo,
        Variant::OneLambdaLambdaSelfAdjusting,
    ];

    /// Stable kebab-case identifier, used on the command line and in output
    /// tables.
    pub fn id(self) -> &'static str {
        match self {
            Variant::OnePlusOneEa => "one-plus-one-ea",
            Variant::MuPlusOneEa => "mu-plus-one-ea",
            Variant::MuPlusOneGa => "mu-plus-one-ga",
            Variant::TwoPlusOneGreedyS => "two-plus-one-greedy-s",
            Variant::SudholtDiversity => "sudholt-diversity",
            Variant::SudholtDiversityGreedySelection => "sudholt-diversity-greedy-selection",
            Variant::SudholtDiversityGreedySelectionGreedyXo => {
                "sudholt-diversity-greedy-selection-greedy-xo"
            }
            Variant::SudholtDiversityGreedyXo => "sudholt-diversity-greedy-xo",
            Variant::OneLambdaLambdaSelfAdjusting => "one-lambda-lambda",
        }
    }

    /// Smallest legal population size.
    pub fn min_mu(self) -> usize {
        match self {
            Variant::OnePlusOneEa | Variant::OneLambdaLambdaSelfAdjusting => 1,
            Variant::MuPlusOneEa => 1,
            _ => 2,
        }
    }

    /// Default population size when none is given.
    pub fn default_mu(self) -> usize {
        match self {
            Variant::OnePlusOneEa | Variant::OneLambdaLambdaSelfAdjusting => 1,
            Variant::MuPlusOneEa => 1,
            _ => 2,
        }
    }

    fn tie_break(self) -> TieBreak {
        match self {
            Variant::SudholtDiversity
            | Variant::SudholtDiversityGreedySelection
            | Variant::SudholtDiversityGreedySelectionGreedyXo
            | Variant::SudholtDiversityGreedyXo => TieBreak::PreferDuplicates,
            _ => TieBreak::WorstIncumbent,
        }
    }

    fn forces_greedy_selection(self) -> bool {
        matches!(
            self,
            Variant::TwoPlusOneGreedyS
                | Variant::SudholtDiversityGreedySelection
                | Variant::SudholtDiversityGreedySelectionGreedyXo
        )
    }

    fn uses_crossover(self) -> bool {
        !matches!(self, Variant::OnePlusOneEa | Variant::MuPlusOneEa)
    }

    fn greedy_crossover(self) -> bool {
        matches!(
            self,
            Variant::SudholtDiversityGreedySelectionGreedyXo | Variant::SudholtDiversityGreedyXo
        )
    }

    fn or_shortcut(self) -> bool {
        matches!(self, Variant::TwoPlusOneGreedyS)
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.id())
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Variant::ALL
            .into_iter()
            .find(|v| v.id() == s)
            .ok_or_else(|| {
                let known: Vec<&str> = Variant::ALL.iter().map(|v| v.id()).collect();
                Error::InvalidConfig(format!(
                    "unknown algorithm {s:?}; expected one of {}",
                    known.join(", ")
                ))
            })
    }
}

/// A complete, seedable algorithm configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmConfig {
    pub variant: Variant,
    /// Problem size: bitstring length.
    pub n: usize,
    /// Population size μ (1 for the single-individual algorithms).
    pub mu: usize,
    /// Mutation-rate numerator: bits flip with probability `c/n`.
    pub c: f64,
    pub parent_selection: SelectionPolicy,
    /// Safety cap on fitness evaluations; reaching it flags the run instead
    /// of looping forever.
    pub max_evaluations: u64,
    pub seed: u64,
}

impl AlgorithmConfig {
    /// Configuration with the variant's default μ, `c = 1`, uniform parent
    /// selection, the default evaluation cap and seed 0.
    pub fn new(variant: Variant, n: usize) -> Self {
        AlgorithmConfig {
            variant,
            n,
            mu: variant.default_mu(),
            c: 1.0,
            parent_selection: SelectionPolicy::Uniform,
            max_evaluations: Self::default_max_evaluations(n),
            seed: 0,
        }
    }

    pub fn with_mu(mut self, mu: usize) -> Self {
        self.mu = mu;
        self
    }

    pub fn with_c(mut self, c: f64) -> Self {
        self.c = c;
        self
    }

    pub fn with_selection(mut self, policy: SelectionPolicy) -> Self {
        self.parent_selection = policy;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_max_evaluations(mut self, cap: u64) -> Self {
        self.max_evaluations = cap;
        self
    }

    /// Default evaluation cap, `⌈100·e·n·max(ln n, 1)⌉`: generous against
    /// every known bound, so hitting it signals something unexpected.
    pub fn default_max_evaluations(n: usize) -> u64 {
        let n = n.max(1) as f64;
        (100.0 * std::f64::consts::E * n * (n.ln().max(1.0))).ceil() as u64
    }

    /// Validates all invariants; every run entry point calls this first.
    pub fn validate(&self) -> Result<(), Error> {
        if self.n < 1 {
            return Err(Error::InvalidConfig("problem size n must be at least 1".into()));
        }
        if !(self.c > 0.0 && self.c <= self.n as f64) {
            return Err(Error::InvalidConfig(format!(
                "mutation constant must satisfy 0 < c <= n, got c = {}, n = {}",
                self.c, self.n
            )));
        }
        if self.max_evaluations == 0 {
            return Err(Error::InvalidConfig("max_evaluations must be positive".into()));
        }
        let min_mu = self.variant.min_mu();
        if self.mu < min_mu {
            return Err(Error::InvalidConfig(format!(
                "{} requires mu >= {min_mu}, got {}",
                self.variant, self.mu
            )));
        }
        match self.variant {
            Variant::OnePlusOneEa | Variant::OneLambdaLambdaSelfAdjusting if self.mu != 1 => {
                Err(Error::InvalidConfig(format!(
                    "{} uses a single individual; set mu = 1",
                    self.variant
                )))
            }
            Variant::TwoPlusOneGreedyS if self.mu != 2 => Err(Error::InvalidConfig(
                "the greedy OR-shortcut GA is defined for mu = 2".into(),
            )),
            _ => Ok(()),
        }
    }
}

/// Outcome of one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    /// Fitness evaluations until the first optimal genome was evaluated
    /// (including the μ initialization evaluations), or until the cap.
    pub evaluations: u64,
    /// Completed iterations of the algorithm's loop.
    pub generations: u64,
    pub seed: u64,
    /// The evaluation cap was reached before an optimum was sampled.
    pub hit_cap: bool,
    /// Best fitness in the terminal population.
    pub best_fitness: u32,
}

/// Scratch state of a (1+(λ,λ)) run.
#[derive(Clone, Debug)]
struct LambdaState {
    lambda: f64,
    flips: Vec<usize>,
    best_flips: Vec<usize>,
    mutant: Genome,
    best_mutant: Genome,
    child: Genome,
    best_child: Genome,
}

impl LambdaState {
    fn new(n: usize) -> Self {
        LambdaState {
            lambda: 1.0,
            flips: Vec::new(),
            best_flips: Vec::new(),
            mutant: Genome::zeros(n),
            best_mutant: Genome::zeros(n),
            child: Genome::zeros(n),
            best_child: Genome::zeros(n),
        }
    }
}

/// One-fifth-rule update of λ: divide by the factor on improvement,
/// multiply by its fourth root otherwise, clamped to `[1, n]`.
pub fn lambda_update(lambda: f64, improved: bool, n: usize) -> f64 {
    if improved {
        (lambda / LAMBDA_UPDATE_FACTOR).max(1.0)
    } else {
        (lambda * LAMBDA_UPDATE_FACTOR.powf(0.25)).min(n as f64)
    }
}

/// Live state of a run: population, counters and reusable buffers.
#[derive(Clone, Debug)]
pub struct RunState {
    config: AlgorithmConfig,
    population: Population,
    evaluations: u64,
    generations: u64,
    best_fitness: u32,
    sampled_optimum: bool,
    offspring: Option<Genome>,
    mutation: Mutation,
    lambda: Option<LambdaState>,
}

impl RunState {
    /// Draws the initial population uniformly at random, charging μ
    /// evaluations.
    pub fn initialize<R: Rng + ?Sized>(
        config: AlgorithmConfig,
        rng: &mut R,
    ) -> Result<Self, Error> {
        config.validate()?;
        let population = Population::random(config.mu, config.n, rng);
        Ok(Self::with_population(config, population))
    }

    /// Starts from an explicit population, treating its members as already
    /// evaluated (μ evaluations on the counter). Lets tests and oracles
    /// drive the chain from chosen states.
    pub fn from_population(config: AlgorithmConfig, population: Population) -> Result<Self, Error> {
        config.validate()?;
        if population.capacity() != config.mu || population.genome_len() != config.n {
            return Err(Error::InvalidConfig(
                "population shape does not match the configuration".into(),
            ));
        }
        Ok(Self::with_population(config, population))
    }

    fn with_population(config: AlgorithmConfig, population: Population) -> Self {
        let best = population.best_fitness();
        let sampled_optimum = best as usize == config.n;
        let lambda = matches!(config.variant, Variant::OneLambdaLambdaSelfAdjusting)
            .then(|| LambdaState::new(config.n));
        RunState {
            evaluations: config.mu as u64,
            generations: 0,
            best_fitness: best,
            sampled_optimum,
            offspring: Some(Genome::zeros(config.n)),
            mutation: Mutation::new(config.n, config.c),
            lambda,
            config,
            population,
        }
    }

    pub fn config(&self) -> &AlgorithmConfig {
        &self.config
    }

    pub fn population(&self) -> &Population {
        &self.population
    }

    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    pub fn generations(&self) -> u64 {
        self.generations
    }

    pub fn best_fitness(&self) -> u32 {
        self.best_fitness
    }

    /// Whether an optimal genome has been evaluated.
    pub fn sampled_optimum(&self) -> bool {
        self.sampled_optimum
    }

    /// Current λ of a (1+(λ,λ)) run.
    pub fn lambda(&self) -> Option<f64> {
        self.lambda.as_ref().map(|l| l.lambda)
    }

    /// Whether the run is over: an optimum was sampled or the cap is spent.
    pub fn finished(&self) -> bool {
        self.sampled_optimum || self.evaluations >= self.config.max_evaluations
    }

    /// Runs one generation. Steady-state variants charge exactly one
    /// evaluation; the (1+(λ,λ)) GA charges 2λ (stopping early if it samples
    /// an optimum or exhausts the cap mid-phase).
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        match self.config.variant {
            Variant::OneLambdaLambdaSelfAdjusting => self.step_one_lambda_lambda(rng),
            _ => self.step_steady_state(rng),
        }
    }

    fn selection_policy(&self) -> SelectionPolicy {
        if self.config.variant.forces_greedy_selection() {
            SelectionPolicy::Greedy
        } else {
            self.config.parent_selection
        }
    }

    fn step_steady_state<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let variant = self.config.variant;
        let best = self.population.best_fitness();
        let policy = self.selection_policy();
        let mut off = self.offspring.take().expect("offspring buffer present");

        if variant.uses_crossover() {
            let a = self.population.select_parent_index(policy, rng);
            let b = self.population.select_parent_index(policy, rng);
            let (x, y) = (&self.population.members()[a], &self.population.members()[b]);
            if variant.greedy_crossover()
                && x.fitness() == best
                && y.fitness() == best
                && x != y
            {
                // Greedy crossover: the best offspring two distinct
                // best-level parents can produce is their bitwise OR.
                off.clone_from_genome(x);
                off.or_assign(y);
            } else {
                genome::uniform_crossover_into(x, y, &mut off, rng);
            }
        } else {
            let a = self.population.select_parent_index(policy, rng);
            off.clone_from_genome(&self.population.members()[a]);
        }

        self.mutation.apply(&mut off, rng);

        if variant.or_shortcut() && off.fitness() == best {
            self.apply_or_shortcut(&mut off, best, rng);
        }

        self.evaluations += 1;
        self.generations += 1;
        if off.is_optimal() {
            self.sampled_optimum = true;
        }
        self.best_fitness = self.best_fitness.max(off.fitness());
        let removed =
            self.population
                .environmental_selection(off, variant.tie_break(), rng);
        self.offspring = Some(removed);
    }

    /// OR shortcut of the greedy (2+1) GA: an offspring that ties the best
    /// fitness and lies at Hamming distance above 2 from some best-level
    /// individual is replaced by its OR with a most distant such individual,
    /// ties broken uniformly at random.
    fn apply_or_shortcut<R: Rng + ?Sized>(&self, off: &mut Genome, best: u32, rng: &mut R) {
        let mut max_hd = 0;
        let mut ties = 0;
        for m in self.population.members().iter().filter(|m| m.fitness() == best) {
            let hd = off.hamming(m);
            if hd > max_hd {
                max_hd = hd;
                ties = 1;
            } else if hd == max_hd {
                ties += 1;
            }
        }
        if max_hd > 2 {
            let r = rng.random_range(0..ties);
            let partner = self
                .population
                .members()
                .iter()
                .filter(|m| m.fitness() == best && off.hamming(m) == max_hd)
                .nth(r)
                .expect("tie index within count");
            off.or_assign(partner);
        }
    }

    fn step_one_lambda_lambda<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let n = self.config.n;
        let cap = self.config.max_evaluations;
        let ls = self.lambda.as_mut().expect("lambda state present");
        let x = &self.population.members()[0];
        let fx = x.fitness();

        let lam = ls.lambda.round().clamp(1.0, n as f64) as usize;
        let rate = lam as f64 / n as f64;
        let ell = Binomial::new(n as u64, rate)
            .expect("valid binomial parameters")
            .sample(rng) as usize;

        self.generations += 1;

        // Mutation phase: λ offspring, each flipping the same number ℓ of
        // distinct positions, drawn fresh per offspring.
        let mut best_fit = 0u32;
        let mut ties = 0u32;
        for _ in 0..lam {
            if self.evaluations >= cap {
                return;
            }
            ls.mutant.clone_from_genome(x);
            genome::sample_distinct(n, ell, &mut ls.flips, rng);
            for &p in &ls.flips {
                ls.mutant.flip(p);
            }
            self.evaluations += 1;
            let f = ls.mutant.fitness();
            if ls.mutant.is_optimal() {
                self.sampled_optimum = true;
                self.best_fitness = self.best_fitness.max(f);
                return;
            }
            let replace = if ties == 0 || f > best_fit {
                ties = 1;
                true
            } else if f == best_fit {
                ties += 1;
                rng.random_range(0..ties) == 0
            } else {
                false
            };
            if replace {
                best_fit = f;
                std::mem::swap(&mut ls.best_mutant, &mut ls.mutant);
                std::mem::swap(&mut ls.best_flips, &mut ls.flips);
            }
        }

        // Crossover phase: λ biased crossovers between x and the best
        // mutant; each differing position takes the mutant's bit with
        // probability 1/λ.
        let bias = 1.0 / lam as f64;
        let mut best_child_fit = 0u32;
        ties = 0;
        for _ in 0..lam {
            if self.evaluations >= cap {
                return;
            }
            ls.child.clone_from_genome(x);
            for &p in &ls.best_flips {
                if rng.random_bool(bias) {
                    ls.child.flip(p);
                }
            }
            self.evaluations += 1;
            let f = ls.child.fitness();
            if ls.child.is_optimal() {
                self.sampled_optimum = true;
                self.best_fitness = self.best_fitness.max(f);
                return;
            }
            let replace = if ties == 0 || f > best_child_fit {
                ties = 1;
                true
            } else if f == best_child_fit {
                ties += 1;
                rng.random_range(0..ties) == 0
            } else {
                false
            };
            if replace {
                best_child_fit = f;
                std::mem::swap(&mut ls.best_child, &mut ls.child);
            }
        }

        // Selection: the best crossover offspring competes with the parent;
        // equal fitness moves to the offspring.
        let improved = best_child_fit > fx;
        if best_child_fit >= fx {
            self.population.member_mut(0).clone_from_genome(&ls.best_child);
        }
        ls.lambda = lambda_update(ls.lambda, improved, n);
        self.best_fitness = self.best_fitness.max(best_child_fit);
    }
}

/// Runs `config` to the first evaluation of an optimal genome (or to the
/// evaluation cap). Identical seeds produce bit-identical results.
pub fn run_to_optimum(config: &AlgorithmConfig) -> Result<RunResult, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut state = RunState::initialize(config.clone(), &mut rng)?;
    run_state_to_optimum(&mut state, &mut rng)
}

/// Drives an existing state to completion with the supplied generator.
pub fn run_state_to_optimum<R: Rng + ?Sized>(
    state: &mut RunState,
    rng: &mut R,
) -> Result<RunResult, Error> {
    while !state.finished() {
        state.step(rng);
    }
    Ok(RunResult {
        evaluations: state.evaluations(),
        generations: state.generations(),
        seed: state.config().seed,
        hit_cap: !state.sampled_optimum(),
        best_fitness: state.best_fitness(),
    })
}
