//! Flat `key=value` experiment configuration.
//!
//! One setting per line, `#` starts a comment, blank lines are ignored.
//! Omitted keys take their defaults; unknown keys are rejected. The
//! canonical rendering ([`ExperimentConfig::to_text`]) lists every key in a
//! fixed order and re-parses to an identical config.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use crate::autoencoder::{AeModel, DatasetSpec, TrainConfig, DEFAULT_LEARNING_RATE};
use crate::cax::GrowthParams;
use crate::complexity::{FitnessKind, FitnessSpec, SamplingStrategy};
use crate::error::{Error, Result};
use crate::evolution::{BoardSeedPolicy, GaConfig};
use crate::genome::RingSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitKind {
    Random,
    Ring,
}

impl FromStr for InitKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "random" => Ok(Self::Random),
            "ring" => Ok(Self::Ring),
            _ => Err(format!("`{s}` is not one of random, ring")),
        }
    }
}

impl std::fmt::Display for InitKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Random => "random",
            Self::Ring => "ring",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub board_size: usize,
    pub kernel_size: usize,
    pub mu: f64,
    pub sigma: f64,
    pub dt: f64,
    pub steps: usize,

    pub dataset_size: usize,
    pub dataset_seed: u64,
    pub dataset_path: PathBuf,
    pub ae_hidden: usize,
    pub epochs: usize,
    pub batch_size: usize,
    pub test_fraction: f64,
    pub learning_rate: f64,
    pub ae_seed: u64,
    pub model_path: PathBuf,

    pub population_size: usize,
    pub generations: usize,
    pub mutation_rate: f64,
    pub elites: usize,
    pub board_seed_policy: BoardSeedPolicy,
    pub master_seed: u64,
    pub fitness: FitnessKind,
    pub sampling: SamplingStrategy,
    pub alive_threshold: f64,
    pub init: InitKind,
    pub ring_radius: f64,
    pub ring_width: f64,

    pub checkpoint_interval: usize,
    pub render_scale: usize,
    pub output_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let growth = GrowthParams::default();
        let ga = GaConfig::default();
        let train = TrainConfig::default();
        let ring = RingSpec::default();
        Self {
            board_size: ga.board_size,
            kernel_size: ga.kernel_size,
            mu: growth.mu,
            sigma: growth.sigma,
            dt: growth.dt,
            steps: ga.steps,
            dataset_size: DatasetSpec::default().count,
            dataset_seed: 0,
            dataset_path: PathBuf::from("dataset.lds"),
            ae_hidden: train.hidden_size,
            epochs: train.epochs,
            batch_size: train.batch_size,
            test_fraction: train.test_fraction,
            learning_rate: DEFAULT_LEARNING_RATE,
            ae_seed: 0,
            model_path: PathBuf::from("model.aev1"),
            population_size: ga.population_size,
            generations: ga.generations,
            mutation_rate: ga.mutation_rate,
            elites: ga.elites,
            board_seed_policy: ga.board_seed_policy,
            master_seed: ga.master_seed,
            fitness: FitnessKind::VoT,
            sampling: SamplingStrategy::EveryNth(10),
            alive_threshold: 0.1,
            init: InitKind::Random,
            ring_radius: ring.radius_center,
            ring_width: ring.shell_width,
            checkpoint_interval: 50,
            render_scale: 8,
            output_dir: PathBuf::from("runs/default"),
        }
    }
}

/// Keys in canonical order.
pub const KEYS: &[&str] = &[
    "board_size",
    "kernel_size",
    "mu",
    "sigma",
    "dt",
    "steps",
    "dataset_size",
    "dataset_seed",
    "dataset_path",
    "ae_hidden",
    "epochs",
    "batch_size",
    "test_fraction",
    "learning_rate",
    "ae_seed",
    "model_path",
    "population_size",
    "generations",
    "mutation_rate",
    "elites",
    "board_seed_policy",
    "master_seed",
    "fitness",
    "sampling",
    "alive_threshold",
    "init",
    "ring_radius",
    "ring_width",
    "checkpoint_interval",
    "render_scale",
    "output_dir",
];

fn num<T: FromStr>(v: &str) -> std::result::Result<T, String> {
    v.parse()
        .map_err(|_| format!("`{v}` is not a valid {}", std::any::type_name::<T>()))
}

fn positive(v: &str) -> std::result::Result<usize, String> {
    let n: usize = num(v)?;
    if n == 0 {
        return Err("must be >= 1".into());
    }
    Ok(n)
}

fn real(v: &str) -> std::result::Result<f64, String> {
    let x: f64 = num(v)?;
    if !x.is_finite() {
        return Err(format!("`{v}` is not finite"));
    }
    Ok(x)
}

fn unit(v: &str) -> std::result::Result<f64, String> {
    let x = real(v)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(format!("{x} is not in [0, 1]"));
    }
    Ok(x)
}

impl ExperimentConfig {
    /// Applies one setting, checking the single-key invariants.
    pub fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        match key {
            "board_size" => self.board_size = positive(value)?,
            "kernel_size" => self.kernel_size = positive(value)?,
            "mu" => self.mu = real(value)?,
            "sigma" => {
                self.sigma = real(value)?;
                if self.sigma <= 0.0 {
                    return Err("must be > 0".into());
                }
            }
            "dt" => {
                self.dt = real(value)?;
                if self.dt < 0.0 {
                    return Err("must be >= 0".into());
                }
            }
            "steps" => self.steps = positive(value)?,
            "dataset_size" => self.dataset_size = positive(value)?,
            "dataset_seed" => self.dataset_seed = num(value)?,
            "dataset_path" => self.dataset_path = PathBuf::from(value),
            "ae_hidden" => self.ae_hidden = positive(value)?,
            "epochs" => self.epochs = positive(value)?,
            "batch_size" => self.batch_size = positive(value)?,
            "test_fraction" => {
                self.test_fraction = real(value)?;
                if !(self.test_fraction > 0.0 && self.test_fraction < 1.0) {
                    return Err(format!("{} is not in (0, 1)", self.test_fraction));
                }
            }
            "learning_rate" => {
                self.learning_rate = real(value)?;
                if self.learning_rate <= 0.0 {
                    return Err("must be > 0".into());
                }
            }
            "ae_seed" => self.ae_seed = num(value)?,
            "model_path" => self.model_path = PathBuf::from(value),
            "population_size" => self.population_size = positive(value)?,
            "generations" => self.generations = positive(value)?,
            "mutation_rate" => self.mutation_rate = unit(value)?,
            "elites" => self.elites = positive(value)?,
            "board_seed_policy" => self.board_seed_policy = value.parse()?,
            "master_seed" => self.master_seed = num(value)?,
            "fitness" => self.fitness = value.parse()?,
            "sampling" => self.sampling = value.parse()?,
            "alive_threshold" => self.alive_threshold = unit(value)?,
            "init" => self.init = value.parse()?,
            "ring_radius" => {
                self.ring_radius = real(value)?;
                if !(self.ring_radius > 0.0 && self.ring_radius <= 1.0) {
                    return Err(format!("{} is not in (0, 1]", self.ring_radius));
                }
            }
            "ring_width" => {
                self.ring_width = real(value)?;
                if self.ring_width <= 0.0 {
                    return Err("must be > 0".into());
                }
            }
            "checkpoint_interval" => self.checkpoint_interval = positive(value)?,
            "render_scale" => self.render_scale = positive(value)?,
            "output_dir" => self.output_dir = PathBuf::from(value),
            _ => return Err("unknown key".into()),
        }
        Ok(())
    }

    fn get(&self, key: &str) -> String {
        match key {
            "board_size" => self.board_size.to_string(),
            "kernel_size" => self.kernel_size.to_string(),
            "mu" => self.mu.to_string(),
            "sigma" => self.sigma.to_string(),
            "dt" => self.dt.to_string(),
            "steps" => self.steps.to_string(),
            "dataset_size" => self.dataset_size.to_string(),
            "dataset_seed" => self.dataset_seed.to_string(),
            "dataset_path" => self.dataset_path.display().to_string(),
            "ae_hidden" => self.ae_hidden.to_string(),
            "epochs" => self.epochs.to_string(),
            "batch_size" => self.batch_size.to_string(),
            "test_fraction" => self.test_fraction.to_string(),
            "learning_rate" => self.learning_rate.to_string(),
            "ae_seed" => self.ae_seed.to_string(),
            "model_path" => self.model_path.display().to_string(),
            "population_size" => self.population_size.to_string(),
            "generations" => self.generations.to_string(),
            "mutation_rate" => self.mutation_rate.to_string(),
            "elites" => self.elites.to_string(),
            "board_seed_policy" => self.board_seed_policy.to_string(),
            "master_seed" => self.master_seed.to_string(),
            "fitness" => self.fitness.to_string(),
            "sampling" => self.sampling.to_string(),
            "alive_threshold" => self.alive_threshold.to_string(),
            "init" => self.init.to_string(),
            "ring_radius" => self.ring_radius.to_string(),
            "ring_width" => self.ring_width.to_string(),
            "checkpoint_interval" => self.checkpoint_interval.to_string(),
            "render_scale" => self.render_scale.to_string(),
            "output_dir" => self.output_dir.display().to_string(),
            _ => unreachable!("`{key}` is not a config key"),
        }
    }

    /// Invariants spanning several keys, as `(key, reason)`.
    fn cross_check(&self) -> std::result::Result<(), (&'static str, String)> {
        if self.kernel_size > self.board_size {
            return Err(("kernel_size", format!("{} exceeds board_size {}", self.kernel_size, self.board_size)));
        }
        if self.population_size < 2 {
            return Err(("population_size", "must be >= 2".into()));
        }
        if self.elites >= self.population_size {
            return Err(("elites", format!("{} is not below population_size {}", self.elites, self.population_size)));
        }
        match self.sampling {
            SamplingStrategy::EveryNth(n) if n > self.steps => {
                Err(("sampling", format!("every:{n} selects no frame of a {}-step rollout", self.steps)))
            }
            _ => Ok(()),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut config = Self::default();
        let mut lines: HashMap<&'static str, usize> = HashMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let err = |key: &str, reason: String| Error::Config {
                line: i + 1,
                key: key.to_string(),
                reason,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(line, "expected key=value".into()))?;
            let (key, value) = (key.trim(), value.trim());
            let canonical = KEYS
                .iter()
                .find(|k| **k == key)
                .ok_or_else(|| err(key, "unknown key".into()))?;
            if let Some(prev) = lines.insert(canonical, i + 1) {
                return Err(err(key, format!("already set on line {prev}")));
            }
            config.set(key, value).map_err(|reason| err(key, reason))?;
        }
        config.cross_check().map_err(|(key, reason)| Error::Config {
            line: lines.get(key).copied().unwrap_or(0),
            key: key.to_string(),
            reason,
        })?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
    }

    /// Every key, one per line, in canonical order.
    pub fn to_text(&self) -> String {
        self.render(KEYS.iter().copied())
    }

    /// Canonical text without `output_dir`: the part that determines results.
    pub fn to_manifest_text(&self) -> String {
        self.render(KEYS.iter().copied().filter(|k| *k != "output_dir"))
    }

    fn render<'k>(&self, keys: impl Iterator<Item = &'k str>) -> String {
        keys.map(|k| format!("{k}={}\n", self.get(k))).collect()
    }

    pub fn growth(&self) -> GrowthParams {
        GrowthParams {
            mu: self.mu,
            sigma: self.sigma,
            dt: self.dt,
        }
    }

    pub fn ring_spec(&self) -> RingSpec {
        RingSpec {
            radius_center: self.ring_radius,
            shell_width: self.ring_width,
        }
    }

    pub fn dataset_spec(&self) -> DatasetSpec {
        DatasetSpec {
            count: self.dataset_size,
            board_size: self.board_size,
            kernel_size: self.kernel_size,
            growth: self.growth(),
            rollout_steps: self.steps,
        }
    }

    pub fn train_config(&self) -> TrainConfig {
        TrainConfig {
            epochs: self.epochs,
            batch_size: self.batch_size,
            test_fraction: self.test_fraction,
            learning_rate: self.learning_rate,
            hidden_size: self.ae_hidden,
            seed: self.ae_seed,
        }
    }

    pub fn ga_config(&self) -> GaConfig {
        GaConfig {
            population_size: self.population_size,
            generations: self.generations,
            mutation_rate: self.mutation_rate,
            elites: self.elites,
            board_seed_policy: self.board_seed_policy,
            master_seed: self.master_seed,
            board_size: self.board_size,
            kernel_size: self.kernel_size,
            steps: self.steps,
        }
    }

    pub fn fitness_spec(&self, model: Option<Arc<AeModel>>) -> FitnessSpec {
        FitnessSpec {
            kind: self.fitness,
            alive_threshold: self.alive_threshold,
            sampling: self.sampling,
            model,
        }
    }
}

/// Reads and validates a config file.
pub fn parse_config(path: &Path) -> Result<ExperimentConfig> {
    ExperimentConfig::load(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_text_gives_defaults() {
        let c = ExperimentConfig::parse("").unwrap();
        assert_eq!(c, ExperimentConfig::default());
        assert_eq!((c.population_size, c.generations, c.mutation_rate), (10, 500, 0.02));
        assert_eq!((c.board_size, c.kernel_size), (64, 16));
        assert_eq!((c.mu, c.sigma, c.dt), (0.31, 0.057, 0.1));
        assert_eq!((c.dataset_size, c.ae_hidden, c.epochs, c.batch_size), (3000, 36, 300, 128));
        assert_eq!(c.test_fraction, 0.3);
        assert_eq!(c.elites, 1);
    }

    #[test]
    fn comments_and_whitespace() {
        let c = ExperimentConfig::parse("# header\n\n  generations = 5  # short\nsampling=last:10\n").unwrap();
        assert_eq!(c.generations, 5);
        assert_eq!(c.sampling, SamplingStrategy::LastK(10));
    }

    fn config_err(text: &str) -> (usize, String) {
        match ExperimentConfig::parse(text).unwrap_err() {
            Error::Config { line, key, .. } => (line, key),
            e => panic!("unexpected error {e}"),
        }
    }

    #[test]
    fn errors_name_key_and_line() {
        assert_eq!(config_err("mutation_rate=1.5"), (1, "mutation_rate".into()));
        assert_eq!(config_err("\nbogus=1"), (2, "bogus".into()));
        assert_eq!(config_err("generations=ten"), (1, "generations".into()));
        assert_eq!(config_err("fitness=entropy"), (1, "fitness".into()));
        assert_eq!(config_err("no equals sign").0, 1);
        assert_eq!(config_err("generations=3\ngenerations=4"), (2, "generations".into()));
    }

    #[test]
    fn cross_key_errors_point_at_the_key() {
        assert_eq!(config_err("population_size=4\n\nelites=4"), (3, "elites".into()));
        assert_eq!(config_err("board_size=8"), (0, "kernel_size".into()));
        assert_eq!(config_err("steps=5\nsampling=every:10"), (2, "sampling".into()));
    }

    #[test]
    fn canonical_text_round_trips() {
        let text = "fitness=aevot\nalive_threshold=0.5\nmaster_seed=99\ninit=ring\nring_width=0.2\nmu=0.3\n";
        let c = ExperimentConfig::parse(text).unwrap();
        assert_eq!(ExperimentConfig::parse(&c.to_text()).unwrap(), c);
        assert_eq!(c.to_text().lines().count(), KEYS.len());
        assert!(!c.to_manifest_text().contains("output_dir"));
    }
}
