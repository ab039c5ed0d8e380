//! Mutation-only genetic algorithm over kernel genomes.
//!
//! Each generation every individual is rolled out from the run's initial
//! board and scored by the configured fitness function. The top `elites`
//! individuals pass unchanged into the next generation; the remaining slots
//! are filled with mutated copies of roulette-selected parents. There is no
//! crossover.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, RngCore};
use rayon::prelude::*;

use crate::cax::{random_board, Board, GrowthParams, Simulator};
use crate::complexity::FitnessSpec;
use crate::error::{Error, Result};
use crate::genome::{random_genome_with_side, KernelGenome};
use crate::rng::{derive, stream_rng, Stream};

/// Which initial board each fitness evaluation starts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoardSeedPolicy {
    /// One board per run, shared by every evaluation. Makes fitness a pure
    /// function of the genome, so the elite's fitness never drops.
    #[default]
    FixedPerRun,
    /// A fresh board every generation.
    PerGeneration,
}

impl fmt::Display for BoardSeedPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::FixedPerRun => "fixed",
            Self::PerGeneration => "per_generation",
        })
    }
}

impl FromStr for BoardSeedPolicy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "fixed" => Ok(Self::FixedPerRun),
            "per_generation" => Ok(Self::PerGeneration),
            _ => Err(format!("`{s}` is not one of fixed, per_generation")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaConfig {
    pub population_size: usize,
    pub generations: usize,
    pub mutation_rate: f64,
    pub elites: usize,
    pub board_seed_policy: BoardSeedPolicy,
    pub master_seed: u64,
    pub board_size: usize,
    pub kernel_size: usize,
    /// Simulation steps per fitness evaluation.
    pub steps: usize,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population_size: 10,
            generations: 500,
            mutation_rate: 0.02,
            elites: 1,
            board_seed_policy: BoardSeedPolicy::FixedPerRun,
            master_seed: 0,
            board_size: 64,
            kernel_size: 16,
            steps: 100,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population_size < 2 {
            return Err(Error::param("population_size", "must be >= 2"));
        }
        if self.elites < 1 || self.elites >= self.population_size {
            return Err(Error::param(
                "elites",
                format!("{} is not in [1, population_size)", self.elites),
            ));
        }
        if !(0.0..=1.0).contains(&self.mutation_rate) {
            return Err(Error::param(
                "mutation_rate",
                format!("{} is not in [0, 1]", self.mutation_rate),
            ));
        }
        if self.generations == 0 {
            return Err(Error::param("generations", "must be >= 1"));
        }
        if self.kernel_size == 0 || self.kernel_size > self.board_size {
            return Err(Error::param(
                "kernel_size",
                format!("{} must be in [1, board_size]", self.kernel_size),
            ));
        }
        Ok(())
    }

    /// Initial board for `generation` (1-based) under the seed policy.
    pub fn board_for(&self, generation: usize) -> Board {
        let index = match self.board_seed_policy {
            BoardSeedPolicy::FixedPerRun => 0,
            BoardSeedPolicy::PerGeneration => generation as u64,
        };
        random_board(
            self.board_size,
            self.board_size,
            derive(self.master_seed, Stream::Board, index),
        )
    }
}

/// Fitness-proportionate selection; uniform when every fitness is zero.
pub fn roulette_select<R: Rng + ?Sized>(fitnesses: &[f64], rng: &mut R) -> Result<usize> {
    if fitnesses.is_empty() {
        return Err(Error::param("fitnesses", "roulette over an empty population"));
    }
    if let Some(i) = fitnesses.iter().position(|f| !(*f >= 0.0 && f.is_finite())) {
        return Err(Error::NegativeFitness {
            index: i,
            value: fitnesses[i],
        });
    }
    let total: f64 = fitnesses.iter().sum();
    if total <= 0.0 {
        return Ok(rng.gen_range(0..fitnesses.len()));
    }
    let spin = rng.gen::<f64>() * total;
    let mut acc = 0.0;
    for (i, f) in fitnesses.iter().enumerate() {
        acc += f;
        if spin < acc {
            return Ok(i);
        }
    }
    // rounding left the spin past the last cumulative sum
    Ok(fitnesses.iter().rposition(|f| *f > 0.0).unwrap())
}

/// Rollout-plus-fitness for a fixed growth mapping and rollout length.
#[derive(Debug, Clone)]
pub struct Evaluator {
    pub spec: FitnessSpec,
    pub growth: GrowthParams,
    pub steps: usize,
}

impl Evaluator {
    pub fn evaluate(&self, genome: &KernelGenome, board: &Board) -> Result<f64> {
        let sim = Simulator::new(board.width(), board.height(), &genome.to_conv_kernel(), self.growth)?;
        let seq = sim.simulate(board, self.steps)?;
        self.spec.evaluate(&seq)
    }
}

/// Fitness of `genome` rolled out for `steps` from the 64x64 board seeded by `board_seed`.
pub fn evaluate_individual(
    genome: &KernelGenome,
    spec: &FitnessSpec,
    growth: &GrowthParams,
    board_seed: u64,
    steps: usize,
) -> Result<f64> {
    let evaluator = Evaluator {
        spec: spec.clone(),
        growth: *growth,
        steps,
    };
    evaluator.evaluate(genome, &random_board(64, 64, board_seed))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerationRow {
    /// 1-based
    pub generation: usize,
    pub best_fitness: f64,
    pub mean_fitness: f64,
    pub best_index: usize,
    pub best_genome: KernelGenome,
    pub fitnesses: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub rows: Vec<GenerationRow>,
    pub final_population: Vec<KernelGenome>,
}

impl RunRecord {
    /// Best genome of the last generation.
    pub fn best_genome(&self) -> &KernelGenome {
        &self.rows.last().expect("a run has at least one generation").best_genome
    }

    pub fn best_fitness(&self) -> f64 {
        self.rows.last().map(|r| r.best_fitness).unwrap_or(0.0)
    }
}

/// Index of the maximum, lowest index on ties.
fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

type Observer<'a> = Box<dyn FnMut(&GenerationRow) -> Result<()> + 'a>;

/// A configured GA run.
pub struct Evolution<'a> {
    config: GaConfig,
    evaluator: Evaluator,
    initial_population: Option<Vec<KernelGenome>>,
    threads: usize,
    observer: Option<Observer<'a>>,
}

impl<'a> Evolution<'a> {
    pub fn new(config: GaConfig, spec: FitnessSpec, growth: GrowthParams) -> Self {
        let steps = config.steps;
        Self {
            config,
            evaluator: Evaluator { spec, growth, steps },
            initial_population: None,
            threads: 1,
            observer: None,
        }
    }

    pub fn initial_population(mut self, population: Vec<KernelGenome>) -> Self {
        self.initial_population = Some(population);
        self
    }

    /// Worker threads for fitness evaluation; results do not depend on it.
    pub fn threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }

    /// Called on the calling thread after each generation is scored.
    pub fn on_generation(mut self, f: impl FnMut(&GenerationRow) -> Result<()> + 'a) -> Self {
        self.observer = Some(Box::new(f));
        self
    }

    fn seed_population(&self) -> Result<Vec<KernelGenome>> {
        let c = &self.config;
        match &self.initial_population {
            Some(pop) => {
                if pop.len() != c.population_size {
                    return Err(Error::param(
                        "initial_population",
                        format!("{} genomes for population_size {}", pop.len(), c.population_size),
                    ));
                }
                if let Some(g) = pop.iter().find(|g| g.side() != c.kernel_size) {
                    return Err(Error::param(
                        "initial_population",
                        format!("genome side {} differs from kernel_size {}", g.side(), c.kernel_size),
                    ));
                }
                Ok(pop.clone())
            }
            None => Ok((0..c.population_size)
                .map(|i| {
                    random_genome_with_side(
                        c.kernel_size,
                        derive(c.master_seed, Stream::InitialPopulation, i as u64),
                    )
                })
                .collect()),
        }
    }

    fn score(
        evaluator: &Evaluator,
        pool: Option<&rayon::ThreadPool>,
        population: &[KernelGenome],
        known: &[Option<f64>],
        board: &Board,
    ) -> Result<Vec<f64>> {
        let eval = |(g, k): (&KernelGenome, &Option<f64>)| match k {
            Some(f) => Ok(*f),
            None => evaluator.evaluate(g, board),
        };
        match pool {
            Some(pool) => pool.install(|| {
                population
                    .par_iter()
                    .zip(known.par_iter())
                    .map(eval)
                    .collect::<Result<Vec<f64>>>()
            }),
            None => population.iter().zip(known).map(eval).collect(),
        }
    }

    pub fn run(mut self) -> Result<RunRecord> {
        self.config.validate()?;
        self.evaluator.spec.validate()?;
        let pool = if self.threads > 1 {
            Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(self.threads)
                    .build()
                    .map_err(|e| Error::param("threads", e.to_string()))?,
            )
        } else {
            None
        };
        let mut observer = self.observer.take();
        let c = self.config.clone();
        let mut population = self.seed_population()?;
        let mut known: Vec<Option<f64>> = vec![None; c.population_size];
        let mut rows = Vec::with_capacity(c.generations);
        let mut fixed_board = None;

        for generation in 1..=c.generations {
            let ctx = |e: Error| Error::Generation {
                generation,
                source: Box::new(e),
            };
            let board = match c.board_seed_policy {
                BoardSeedPolicy::FixedPerRun => fixed_board.get_or_insert_with(|| c.board_for(1)).clone(),
                BoardSeedPolicy::PerGeneration => c.board_for(generation),
            };
            let fitnesses = Self::score(&self.evaluator, pool.as_ref(), &population, &known, &board)
                .map_err(ctx)?;
            let best_index = argmax(&fitnesses);
            let row = GenerationRow {
                generation,
                best_fitness: fitnesses[best_index],
                mean_fitness: fitnesses.iter().sum::<f64>() / fitnesses.len() as f64,
                best_index,
                best_genome: population[best_index].clone(),
                fitnesses: fitnesses.clone(),
            };
            if let Some(f) = observer.as_mut() {
                f(&row).map_err(ctx)?;
            }
            rows.push(row);
            if generation == c.generations {
                break;
            }

            let mut rng = stream_rng(c.master_seed, Stream::Generation, generation as u64);
            let mut order: Vec<usize> = (0..population.len()).collect();
            // stable: equal fitness keeps the lower index first
            order.sort_by(|&a, &b| fitnesses[b].total_cmp(&fitnesses[a]));
            let reuse = c.board_seed_policy == BoardSeedPolicy::FixedPerRun;
            let mut next = Vec::with_capacity(c.population_size);
            let mut next_known = Vec::with_capacity(c.population_size);
            for &i in order.iter().take(c.elites) {
                next.push(population[i].clone());
                next_known.push(reuse.then_some(fitnesses[i]));
            }
            while next.len() < c.population_size {
                let parent = roulette_select(&fitnesses, &mut rng).map_err(ctx)?;
                let child = population[parent]
                    .mutate(c.mutation_rate, rng.next_u64())
                    .map_err(ctx)?;
                next.push(child);
                next_known.push(None);
            }
            population = next;
            known = next_known;
        }
        Ok(RunRecord {
            rows,
            final_population: population,
        })
    }
}

/// Runs the GA serially. `initial_population`, when given, must hold
/// `population_size` genomes of side `kernel_size`.
pub fn evolve(
    config: &GaConfig,
    spec: &FitnessSpec,
    growth: &GrowthParams,
    initial_population: Option<Vec<KernelGenome>>,
) -> Result<RunRecord> {
    let mut evo = Evolution::new(config.clone(), spec.clone(), *growth);
    if let Some(pop) = initial_population {
        evo = evo.initial_population(pop);
    }
    evo.run()
}
