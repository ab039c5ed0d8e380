//! Complexity measures over rollouts: Variation over Time (VoT), autoencoder
//! reconstruction-loss deviation (AE), and VoT on reconstructions (AEVoT).

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::autoencoder::{mse, AeModel};
use crate::cax::{Board, FrameSequence};
use crate::error::{Error, Result};

/// Which frames of a rollout feed a fitness measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplingStrategy {
    AllFrames,
    /// Frames at steps n, 2n, 3n, ...; the initial frame is never included.
    EveryNth(usize),
    /// The final `k` frames (fewer if the rollout is shorter).
    LastK(usize),
}

impl SamplingStrategy {
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::EveryNth(0) | Self::LastK(0) => {
                Err(Error::param("sampling", "stride and count must be >= 1"))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for SamplingStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::AllFrames => write!(f, "all"),
            Self::EveryNth(n) => write!(f, "every:{n}"),
            Self::LastK(k) => write!(f, "last:{k}"),
        }
    }
}

impl FromStr for SamplingStrategy {
    type Err = String;

    /// `all`, `every:<n>` or `last:<k>`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parse_n = |v: &str| {
            v.parse::<usize>()
                .ok()
                .filter(|n| *n >= 1)
                .ok_or_else(|| format!("`{v}` is not a positive integer"))
        };
        match s.split_once(':') {
            None if s == "all" => Ok(Self::AllFrames),
            Some(("every", n)) => Ok(Self::EveryNth(parse_n(n)?)),
            Some(("last", k)) => Ok(Self::LastK(parse_n(k)?)),
            _ => Err(format!("`{s}` is not one of all, every:<n>, last:<k>")),
        }
    }
}

pub fn sample_frames(seq: &FrameSequence, strategy: SamplingStrategy) -> Vec<&Board> {
    let frames = &seq.frames;
    match strategy {
        SamplingStrategy::AllFrames => frames.iter().collect(),
        SamplingStrategy::EveryNth(n) => frames.iter().skip(n.max(1)).step_by(n.max(1)).collect(),
        SamplingStrategy::LastK(k) => frames[frames.len().saturating_sub(k)..].iter().collect(),
    }
}

/// Number of cells with value `>= threshold`.
pub fn alive_count(board: &Board, threshold: f64) -> usize {
    alive_in(board.cells(), threshold)
}

fn alive_in(cells: &[f64], threshold: f64) -> usize {
    cells.iter().filter(|&&v| v >= threshold).count()
}

/// Standard deviation with divisor N.
pub fn population_stddev(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::param("values", "standard deviation of an empty list"));
    }
    // the mean of n equal floats need not equal them exactly
    if values.iter().all(|v| *v == values[0]) {
        return Ok(0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    Ok(var.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitnessKind {
    VoT,
    Ae,
    AeVoT,
}

impl FitnessKind {
    pub fn needs_model(self) -> bool {
        !matches!(self, Self::VoT)
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::VoT => "vot",
            Self::Ae => "ae",
            Self::AeVoT => "aevot",
        }
    }
}

impl fmt::Display for FitnessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FitnessKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "vot" => Ok(Self::VoT),
            "ae" => Ok(Self::Ae),
            "aevot" => Ok(Self::AeVoT),
            _ => Err(format!("`{s}` is not one of vot, ae, aevot")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FitnessSpec {
    pub kind: FitnessKind,
    pub alive_threshold: f64,
    pub sampling: SamplingStrategy,
    pub model: Option<Arc<AeModel>>,
}

impl FitnessSpec {
    pub fn vot(alive_threshold: f64, sampling: SamplingStrategy) -> Self {
        Self {
            kind: FitnessKind::VoT,
            alive_threshold,
            sampling,
            model: None,
        }
    }

    pub fn ae(model: Arc<AeModel>, sampling: SamplingStrategy) -> Self {
        Self {
            kind: FitnessKind::Ae,
            alive_threshold: 0.0,
            sampling,
            model: Some(model),
        }
    }

    pub fn aevot(model: Arc<AeModel>, alive_threshold: f64, sampling: SamplingStrategy) -> Self {
        Self {
            kind: FitnessKind::AeVoT,
            alive_threshold,
            sampling,
            model: Some(model),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.alive_threshold) {
            return Err(Error::param(
                "alive_threshold",
                format!("{} is not in [0, 1]", self.alive_threshold),
            ));
        }
        self.sampling.validate()?;
        if self.kind.needs_model() && self.model.is_none() {
            return Err(Error::MissingModel(self.kind.name()));
        }
        Ok(())
    }

    fn model(&self) -> Result<&AeModel> {
        self.model
            .as_deref()
            .ok_or(Error::MissingModel(self.kind.name()))
    }

    /// Dispatches on `kind`.
    pub fn evaluate(&self, seq: &FrameSequence) -> Result<f64> {
        match self.kind {
            FitnessKind::VoT => vot_fitness(seq, self),
            FitnessKind::Ae => ae_fitness(seq, self),
            FitnessKind::AeVoT => aevot_fitness(seq, self),
        }
    }
}

fn sampled<'a>(seq: &'a FrameSequence, spec: &FitnessSpec) -> Result<Vec<&'a Board>> {
    let frames = sample_frames(seq, spec.sampling);
    if frames.is_empty() {
        return Err(Error::param(
            "sampling",
            format!("`{}` selects no frames from a {}-step rollout", spec.sampling, seq.steps()),
        ));
    }
    Ok(frames)
}

/// Spread of alive-cell counts across the sampled frames.
pub fn vot_fitness(seq: &FrameSequence, spec: &FitnessSpec) -> Result<f64> {
    let counts: Vec<f64> = sampled(seq, spec)?
        .iter()
        .map(|b| alive_count(b, spec.alive_threshold) as f64)
        .collect();
    population_stddev(&counts)
}

/// Spread of per-frame reconstruction MSE across the sampled frames.
pub fn ae_fitness(seq: &FrameSequence, spec: &FitnessSpec) -> Result<f64> {
    let model = spec.model()?;
    let losses = sampled(seq, spec)?
        .iter()
        .map(|b| mse(b.cells(), &model.reconstruct(b.cells())?))
        .collect::<Result<Vec<_>>>()?;
    population_stddev(&losses)
}

/// VoT computed on autoencoder reconstructions of the sampled frames.
pub fn aevot_fitness(seq: &FrameSequence, spec: &FitnessSpec) -> Result<f64> {
    let model = spec.model()?;
    let counts = sampled(seq, spec)?
        .iter()
        .map(|b| Ok(alive_in(&model.reconstruct(b.cells())?, spec.alive_threshold) as f64))
        .collect::<Result<Vec<_>>>()?;
    population_stddev(&counts)
}
