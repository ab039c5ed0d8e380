use crate::cax::{Board, ConvKernel, FftConvolver, FftScratch};
use crate::error::{Error, Result};

/// Parameters of the Gaussian growth mapping and the integration step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthParams {
    pub mu: f64,
    pub sigma: f64,
    pub dt: f64,
}

impl Default for GrowthParams {
    fn default() -> Self {
        Self {
            mu: 0.31,
            sigma: 0.057,
            dt: 0.1,
        }
    }
}

impl GrowthParams {
    pub fn new(mu: f64, sigma: f64, dt: f64) -> Result<Self> {
        let p = Self { mu, sigma, dt };
        p.validate()?;
        Ok(p)
    }

    /// `dt = 0` is accepted and makes `step` the identity.
    pub fn validate(&self) -> Result<()> {
        if !self.mu.is_finite() {
            return Err(Error::param("mu", "must be finite"));
        }
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(Error::param("sigma", format!("{} is not > 0", self.sigma)));
        }
        if !(self.dt.is_finite() && self.dt >= 0.0) {
            return Err(Error::param("dt", format!("{} is negative", self.dt)));
        }
        Ok(())
    }

    /// `2·exp(-(u - mu)² / (2·sigma²)) - 1`, in `[-1, 1]`.
    pub fn growth(&self, u: f64) -> f64 {
        let d = u - self.mu;
        2.0 * (-(d * d) / (2.0 * self.sigma * self.sigma)).exp() - 1.0
    }
}

/// An ordered rollout; `frames[0]` is the initial board.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameSequence {
    pub frames: Vec<Board>,
}

impl FrameSequence {
    pub fn steps(&self) -> usize {
        self.frames.len() - 1
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn last(&self) -> &Board {
        self.frames.last().expect("a rollout always holds its initial frame")
    }
}

/// Stepper bound to one kernel and board shape. Cheap to clone and safe to
/// share between threads.
#[derive(Debug, Clone)]
pub struct Simulator {
    convolver: FftConvolver,
    params: GrowthParams,
}

impl Simulator {
    pub fn new(width: usize, height: usize, kernel: &ConvKernel, params: GrowthParams) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            convolver: FftConvolver::new(width, height, kernel)?,
            params,
        })
    }

    pub fn params(&self) -> &GrowthParams {
        &self.params
    }

    fn check_shape(&self, board: &Board) -> Result<()> {
        if board.width() != self.convolver.width() || board.height() != self.convolver.height() {
            return Err(Error::Dimension(format!(
                "board is {}x{}, simulator expects {}x{}",
                board.width(),
                board.height(),
                self.convolver.width(),
                self.convolver.height()
            )));
        }
        Ok(())
    }

    fn advance(&self, board: &Board, potential: &mut [f64], scratch: &mut FftScratch) -> Board {
        self.convolver.convolve_into(board.cells(), potential, scratch);
        let p = &self.params;
        let cells = board
            .cells()
            .iter()
            .zip(potential.iter())
            .map(|(&a, &u)| (a + p.dt * p.growth(u)).clamp(0.0, 1.0))
            .collect();
        Board::from_cells_unchecked(board.width(), board.height(), cells)
    }

    pub fn step(&self, board: &Board) -> Result<Board> {
        self.check_shape(board)?;
        let mut potential = vec![0.0; board.cells().len()];
        Ok(self.advance(board, &mut potential, &mut FftScratch::default()))
    }

    pub fn simulate(&self, initial: &Board, steps: usize) -> Result<FrameSequence> {
        self.check_shape(initial)?;
        let mut frames = Vec::with_capacity(steps + 1);
        frames.push(initial.clone());
        let mut potential = vec![0.0; initial.cells().len()];
        let mut scratch = FftScratch::default();
        for _ in 0..steps {
            let next = self.advance(frames.last().unwrap(), &mut potential, &mut scratch);
            frames.push(next);
        }
        Ok(FrameSequence { frames })
    }
}

/// One Lenia update: `clamp(A + dt·G(K∗A), 0, 1)` on the torus.
pub fn step(board: &Board, kernel: &ConvKernel, params: &GrowthParams) -> Result<Board> {
    Simulator::new(board.width(), board.height(), kernel, *params)?.step(board)
}

pub fn simulate(
    initial: &Board,
    kernel: &ConvKernel,
    params: &GrowthParams,
    steps: usize,
) -> Result<FrameSequence> {
    Simulator::new(initial.width(), initial.height(), kernel, *params)?.simulate(initial, steps)
}
