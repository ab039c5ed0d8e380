//! Evolution of Lenia kernels under complexity-based fitness functions.
//!
//! The crate is organized along the experiment pipeline:
//!
//! - [`cax`]: the Lenia world (boards, FFT convolution, growth, stepping)
//! - [`genome`]: kernel genotypes, mutation, ring kernels, shape analytics
//! - [`autoencoder`]: the reconstruction model used by the AE-based measures
//! - [`complexity`]: Variation over Time, AE and AEVoT fitness functions
//! - [`evolution`]: mutation-only GA with roulette selection and elitism
//! - [`experiment`]: config files, run orchestration, aggregation, rendering

pub mod autoencoder;
pub mod cax;
pub mod complexity;
pub mod error;
pub mod evolution;
pub mod experiment;
pub mod genome;
pub mod pgm;
pub mod rng;

pub use error::{Error, Result};
