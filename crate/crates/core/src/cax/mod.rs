//! Lenia simulation: boards, kernel convolution, growth mapping and time stepping.

mod board;
mod fft;
mod kernel;
mod lenia;

pub use board::{random_board, Board};
pub use fft::{convolve, FftConvolver, FftScratch};
pub use kernel::{convolve_direct, ConvKernel, Field};
pub use lenia::{simulate, step, FrameSequence, GrowthParams, Simulator};
