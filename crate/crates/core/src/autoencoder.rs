//! Fully connected autoencoder with one sigmoid hidden layer, trained by
//! plain minibatch SGD on mean squared reconstruction error.

use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::cax::{random_board, Board, GrowthParams, Simulator};
use crate::error::{Error, Result};
use crate::genome::random_genome_with_side;
use crate::rng::{derive, rng_from_seed, stream_rng, Stream};

pub const DEFAULT_HIDDEN_SIZE: usize = 36;
const MODEL_MAGIC: &[u8; 4] = b"AEV1";
const MODEL_VERSION: u32 = 1;
const MODEL_HEADER_LEN: usize = 16;
const DATASET_MAGIC: &[u8; 4] = b"LDS1";

pub fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Mean of squared element differences.
pub fn mse(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Dimension(format!("mse of lengths {} and {}", a.len(), b.len())));
    }
    if a.is_empty() {
        return Err(Error::Dimension("mse of empty vectors".into()));
    }
    let s: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    Ok(s / a.len() as f64)
}

/// Encoder `input -> hidden` and decoder `hidden -> input`, both sigmoid.
///
/// `w_enc` is `hidden x input` and `w_dec` is `input x hidden`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct AeModel {
    input_size: usize,
    hidden_size: usize,
    pub w_enc: Vec<f64>,
    pub b_enc: Vec<f64>,
    pub w_dec: Vec<f64>,
    pub b_dec: Vec<f64>,
}

/// Activations of one forward pass.
#[derive(Debug, Clone, PartialEq)]
pub struct Activations {
    pub hidden: Vec<f64>,
    pub output: Vec<f64>,
}

/// Gradient with the same layout as [`AeModel`].
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub w_enc: Vec<f64>,
    pub b_enc: Vec<f64>,
    pub w_dec: Vec<f64>,
    pub b_dec: Vec<f64>,
}

impl Gradients {
    fn zeros(input: usize, hidden: usize) -> Self {
        Self {
            w_enc: vec![0.0; input * hidden],
            b_enc: vec![0.0; hidden],
            w_dec: vec![0.0; input * hidden],
            b_dec: vec![0.0; input],
        }
    }

    pub fn slices(&self) -> [&[f64]; 4] {
        [&self.w_enc, &self.b_enc, &self.w_dec, &self.b_dec]
    }

    pub fn is_finite(&self) -> bool {
        self.slices().iter().all(|s| s.iter().all(|v| v.is_finite()))
    }

    pub fn max_abs(&self) -> f64 {
        self.slices()
            .iter()
            .flat_map(|s| s.iter())
            .fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl AeModel {
    pub fn zeros(input_size: usize, hidden_size: usize) -> Self {
        Self {
            input_size,
            hidden_size,
            w_enc: vec![0.0; input_size * hidden_size],
            b_enc: vec![0.0; hidden_size],
            w_dec: vec![0.0; input_size * hidden_size],
            b_dec: vec![0.0; input_size],
        }
    }

    /// Weights uniform in `±sqrt(6 / (fan_in + fan_out))`, biases zero.
    pub fn random(input_size: usize, hidden_size: usize, seed: u64) -> Self {
        let mut rng = rng_from_seed(seed);
        let r = (6.0 / (input_size + hidden_size) as f64).sqrt();
        let mut m = Self::zeros(input_size, hidden_size);
        for w in m.w_enc.iter_mut().chain(m.w_dec.iter_mut()) {
            *w = rng.gen_range(-r..=r);
        }
        m
    }

    pub fn input_size(&self) -> usize {
        self.input_size
    }

    pub fn hidden_size(&self) -> usize {
        self.hidden_size
    }

    pub fn parameter_count(&self) -> usize {
        2 * self.input_size * self.hidden_size + self.input_size + self.hidden_size
    }

    /// Parameter arrays in file order.
    pub fn slices(&self) -> [&[f64]; 4] {
        [&self.w_enc, &self.b_enc, &self.w_dec, &self.b_dec]
    }

    pub fn slices_mut(&mut self) -> [&mut [f64]; 4] {
        [&mut self.w_enc, &mut self.b_enc, &mut self.w_dec, &mut self.b_dec]
    }

    pub fn is_finite(&self) -> bool {
        self.slices().iter().all(|s| s.iter().all(|v| v.is_finite()))
    }

    fn check_input(&self, input: &[f64]) -> Result<()> {
        if input.len() != self.input_size {
            return Err(Error::Dimension(format!(
                "autoencoder input has {} values, model expects {}",
                input.len(),
                self.input_size
            )));
        }
        Ok(())
    }

    fn forward_unchecked(&self, input: &[f64]) -> Activations {
        let n = self.input_size;
        let hidden: Vec<f64> = self
            .w_enc
            .chunks_exact(n)
            .zip(&self.b_enc)
            .map(|(row, b)| sigmoid(dot(row, input) + b))
            .collect();
        let output = self
            .w_dec
            .chunks_exact(self.hidden_size)
            .zip(&self.b_dec)
            .map(|(row, b)| sigmoid(dot(row, &hidden) + b))
            .collect();
        Activations { hidden, output }
    }

    pub fn forward(&self, input: &[f64]) -> Result<Activations> {
        self.check_input(input)?;
        Ok(self.forward_unchecked(input))
    }

    pub fn reconstruct(&self, input: &[f64]) -> Result<Vec<f64>> {
        Ok(self.forward(input)?.output)
    }

    /// Reconstruction MSE of one sample.
    pub fn loss(&self, input: &[f64]) -> Result<f64> {
        mse(&self.reconstruct(input)?, input)
    }

    pub fn batch_loss(&self, batch: &[&[f64]]) -> Result<f64> {
        let mut total = 0.0;
        for x in batch {
            total += self.loss(x)?;
        }
        Ok(total / batch.len() as f64)
    }

    /// Batch-mean MSE and its exact gradient by backpropagation.
    pub fn gradient(&self, batch: &[&[f64]]) -> Result<(f64, Gradients)> {
        if batch.is_empty() {
            return Err(Error::Dimension("gradient of an empty batch".into()));
        }
        let (n, h) = (self.input_size, self.hidden_size);
        let mut g = Gradients::zeros(n, h);
        let scale = 2.0 / (n as f64 * batch.len() as f64);
        let mut loss = 0.0;
        let mut delta_out = vec![0.0; n];
        let mut delta_hidden = vec![0.0; h];
        for x in batch {
            self.check_input(x)?;
            let act = self.forward_unchecked(x);
            let mut sq = 0.0;
            for i in 0..n {
                let o = act.output[i];
                let e = o - x[i];
                sq += e * e;
                delta_out[i] = scale * e * o * (1.0 - o);
            }
            loss += sq / n as f64;

            delta_hidden.fill(0.0);
            for ((d, w_row), (gw_row, gb)) in delta_out
                .iter()
                .zip(self.w_dec.chunks_exact(h))
                .zip(g.w_dec.chunks_exact_mut(h).zip(g.b_dec.iter_mut()))
            {
                *gb += d;
                for j in 0..h {
                    gw_row[j] += d * act.hidden[j];
                    delta_hidden[j] += w_row[j] * d;
                }
            }
            for j in 0..h {
                let hj = act.hidden[j];
                let d = delta_hidden[j] * hj * (1.0 - hj);
                g.b_enc[j] += d;
                for (gw, xk) in g.w_enc[j * n..(j + 1) * n].iter_mut().zip(x.iter()) {
                    *gw += d * xk;
                }
            }
        }
        Ok((loss / batch.len() as f64, g))
    }

    /// `params -= learning_rate · grads`
    pub fn apply(&mut self, grads: &Gradients, learning_rate: f64) {
        for (p, g) in self.slices_mut().into_iter().zip(grads.slices()) {
            for (pi, gi) in p.iter_mut().zip(g) {
                *pi -= learning_rate * gi;
            }
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(MODEL_HEADER_LEN + 8 * self.parameter_count());
        out.extend_from_slice(MODEL_MAGIC);
        out.extend_from_slice(&MODEL_VERSION.to_le_bytes());
        out.extend_from_slice(&(self.input_size as u32).to_le_bytes());
        out.extend_from_slice(&(self.hidden_size as u32).to_le_bytes());
        for s in self.slices() {
            for v in s {
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 4 || &bytes[..4] != MODEL_MAGIC {
            let shown = String::from_utf8_lossy(&bytes[..bytes.len().min(4)]).into_owned();
            return Err(Error::ModelFormat(format!("bad magic {shown:?}, expected \"AEV1\"")));
        }
        if bytes.len() < MODEL_HEADER_LEN {
            return Err(Error::Truncated {
                expected: MODEL_HEADER_LEN,
                found: bytes.len(),
            });
        }
        let word = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().unwrap());
        let version = word(4);
        if version != MODEL_VERSION {
            return Err(Error::ModelFormat(format!("unsupported version {version}")));
        }
        let (input, hidden) = (word(8) as usize, word(12) as usize);
        if input == 0 || hidden == 0 {
            return Err(Error::ModelFormat(format!("degenerate dimensions {input}x{hidden}")));
        }
        let mut model = Self::zeros(input, hidden);
        let expected = MODEL_HEADER_LEN + 8 * model.parameter_count();
        if bytes.len() < expected {
            return Err(Error::Truncated {
                expected,
                found: bytes.len(),
            });
        }
        if bytes.len() > expected {
            return Err(Error::ModelFormat(format!(
                "{} trailing bytes after payload",
                bytes.len() - expected
            )));
        }
        let mut values = bytes[MODEL_HEADER_LEN..]
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()));
        for s in model.slices_mut() {
            for v in s.iter_mut() {
                *v = values.next().unwrap();
            }
        }
        Ok(model)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_bytes()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_bytes(&std::fs::read(path).map_err(|e| Error::io(path, e))?)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Frames used to train the autoencoder, all of one board shape.
#[derive(Debug, Clone, PartialEq)]
pub struct AeDataset {
    pub frames: Vec<Board>,
}

/// How training frames are produced.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSpec {
    pub count: usize,
    pub board_size: usize,
    pub kernel_size: usize,
    pub growth: GrowthParams,
    /// Steps per rollout; each rollout contributes frames 1..=steps.
    pub rollout_steps: usize,
}

impl Default for DatasetSpec {
    fn default() -> Self {
        Self {
            count: 3000,
            board_size: 64,
            kernel_size: 16,
            growth: GrowthParams::default(),
            rollout_steps: 100,
        }
    }
}

impl AeDataset {
    /// Concatenates rollouts from fresh random boards and random genomes until
    /// `spec.count` frames are collected. Rollout `i` draws its board and
    /// genome from sub-streams `i` of `seed`.
    pub fn generate(spec: &DatasetSpec, seed: u64) -> Result<Self> {
        if spec.count == 0 {
            return Err(Error::param("dataset_size", "must be >= 1"));
        }
        if spec.rollout_steps == 0 {
            return Err(Error::param("steps", "must be >= 1"));
        }
        let mut frames = Vec::with_capacity(spec.count);
        let mut rollout = 0u64;
        while frames.len() < spec.count {
            let board = random_board(
                spec.board_size,
                spec.board_size,
                derive(seed, Stream::DatasetBoard, rollout),
            );
            let genome = random_genome_with_side(
                spec.kernel_size,
                derive(seed, Stream::DatasetGenome, rollout),
            );
            let sim = Simulator::new(
                spec.board_size,
                spec.board_size,
                &genome.to_conv_kernel(),
                spec.growth,
            )?;
            let seq = sim.simulate(&board, spec.rollout_steps)?;
            let need = spec.count - frames.len();
            frames.extend(seq.frames.into_iter().skip(1).take(need));
            rollout += 1;
        }
        Ok(Self { frames })
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    /// `"LDS1"`, count, width, height (u32 LE), then cells as f64 LE.
    pub fn to_bytes(&self) -> Vec<u8> {
        let (w, h) = self
            .frames
            .first()
            .map(|b| (b.width(), b.height()))
            .unwrap_or((0, 0));
        let mut out = Vec::with_capacity(16 + self.frames.len() * w * h * 8);
        out.extend_from_slice(DATASET_MAGIC);
        for v in [self.frames.len(), w, h] {
            out.extend_from_slice(&(v as u32).to_le_bytes());
        }
        for f in &self.frames {
            for v in f.cells() {
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 16 || &bytes[..4] != DATASET_MAGIC {
            return Err(Error::Parse("dataset file lacks the \"LDS1\" header".into()));
        }
        let word = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().unwrap()) as usize;
        let (count, w, h) = (word(4), word(8), word(12));
        let cells = w * h;
        if bytes.len() != 16 + count * cells * 8 {
            return Err(Error::Parse(format!(
                "dataset payload is {} bytes, header implies {}",
                bytes.len() - 16,
                count * cells * 8
            )));
        }
        let frames = bytes[16..]
            .chunks_exact(cells * 8)
            .map(|chunk| {
                let v = chunk
                    .chunks_exact(8)
                    .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
                    .collect();
                Board::from_cells(w, h, v)
            })
            .collect::<Result<_>>()?;
        Ok(Self { frames })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_bytes()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_bytes(&std::fs::read(path).map_err(|e| Error::io(path, e))?)
    }
}

/// Dataset of `count` frames with the default board, kernel and growth settings.
pub fn generate_dataset(count: usize, seed: u64) -> Result<AeDataset> {
    AeDataset::generate(
        &DatasetSpec {
            count,
            ..Default::default()
        },
        seed,
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub test_fraction: f64,
    pub learning_rate: f64,
    pub hidden_size: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 300,
            batch_size: 128,
            test_fraction: 0.30,
            learning_rate: DEFAULT_LEARNING_RATE,
            hidden_size: DEFAULT_HIDDEN_SIZE,
            seed: 0,
        }
    }
}

/// Loss is averaged over all 4096 outputs, so per-weight gradients are small.
pub const DEFAULT_LEARNING_RATE: f64 = 500.0;

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.epochs == 0 {
            return Err(Error::param("epochs", "must be >= 1"));
        }
        if self.batch_size == 0 {
            return Err(Error::param("batch_size", "must be >= 1"));
        }
        if !(self.test_fraction > 0.0 && self.test_fraction < 1.0) {
            return Err(Error::param(
                "test_fraction",
                format!("{} is not in (0, 1)", self.test_fraction),
            ));
        }
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::param("learning_rate", "must be > 0"));
        }
        if self.hidden_size == 0 {
            return Err(Error::param("ae_hidden", "must be >= 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochLoss {
    /// 1-based
    pub epoch: usize,
    /// Mean of the minibatch losses seen during the epoch.
    pub train_loss: f64,
    /// Loss on the held-out split after the epoch; `None` if the split is empty.
    pub test_loss: Option<f64>,
}

/// Renders history as `epoch,train_loss,test_loss` CSV; an empty held-out
/// split leaves the last column blank.
pub fn history_csv(history: &[EpochLoss]) -> String {
    let mut out = String::from("epoch,train_loss,test_loss\n");
    for h in history {
        let test = h.test_loss.map(|t| format!("{t:.9}")).unwrap_or_default();
        out.push_str(&format!("{},{:.9},{}\n", h.epoch, h.train_loss, test));
    }
    out
}

/// Deterministic split: a seeded permutation whose trailing
/// `floor(n · test_fraction)` indices (capped at `n - 1`) are held out.
pub fn split_indices(n: usize, test_fraction: f64, seed: u64) -> (Vec<usize>, Vec<usize>) {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut stream_rng(seed, Stream::AeSplit, 0));
    let n_test = ((n as f64 * test_fraction).floor() as usize).min(n.saturating_sub(1));
    let test = idx.split_off(n - n_test);
    (idx, test)
}

pub fn train(dataset: &AeDataset, config: &TrainConfig) -> Result<(AeModel, Vec<EpochLoss>)> {
    config.validate()?;
    let first = dataset
        .frames
        .first()
        .ok_or_else(|| Error::param("dataset", "is empty"))?;
    let input = first.cells().len();
    if dataset.frames.iter().any(|f| f.cells().len() != input) {
        return Err(Error::Dimension("dataset frames differ in size".into()));
    }
    let (mut train_idx, test_idx) = split_indices(dataset.len(), config.test_fraction, config.seed);
    let mut model = AeModel::random(
        input,
        config.hidden_size,
        derive(config.seed, Stream::AeInit, 0),
    );
    let mut shuffle_rng = stream_rng(config.seed, Stream::AeShuffle, 0);
    let test: Vec<&[f64]> = test_idx.iter().map(|&i| dataset.frames[i].cells()).collect();
    let mut history = Vec::with_capacity(config.epochs);

    for epoch in 1..=config.epochs {
        train_idx.shuffle(&mut shuffle_rng);
        let mut weighted = 0.0;
        for (b, chunk) in train_idx.chunks(config.batch_size).enumerate() {
            let batch: Vec<&[f64]> = chunk.iter().map(|&i| dataset.frames[i].cells()).collect();
            let (loss, grads) = model.gradient(&batch)?;
            if !loss.is_finite() || !grads.is_finite() {
                return Err(Error::NonFiniteLoss { epoch, batch: b + 1 });
            }
            model.apply(&grads, config.learning_rate);
            if !model.is_finite() {
                return Err(Error::NonFiniteLoss { epoch, batch: b + 1 });
            }
            weighted += loss * chunk.len() as f64;
        }
        let test_loss = if test.is_empty() {
            None
        } else {
            Some(model.batch_loss(&test)?)
        };
        history.push(EpochLoss {
            epoch,
            train_loss: weighted / train_idx.len() as f64,
            test_loss,
        });
    }
    Ok((model, history))
}
