//! Score one rollout under VoT, AE and AEVoT with each sampling strategy.
//! The AE measures use an untrained model unless a model path is given.
//!
//! cargo run --release --example fitness_measures -- [model.aev1]

use std::sync::Arc;

use lenia_evolab::autoencoder::AeModel;
use lenia_evolab::cax::{random_board, simulate, GrowthParams};
use lenia_evolab::complexity::{FitnessSpec, SamplingStrategy};
use lenia_evolab::genome::random_genome;

fn main() -> lenia_evolab::Result<()> {
    let model = match std::env::args().nth(1) {
        Some(p) => AeModel::load(p.as_ref())?,
        None => AeModel::random(4096, 36, 0),
    };
    let model = Arc::new(model);
    let seq = simulate(&random_board(64, 64, 5), &random_genome(5).to_conv_kernel(), &GrowthParams::default(), 100)?;

    for sampling in [SamplingStrategy::AllFrames, SamplingStrategy::EveryNth(10), SamplingStrategy::LastK(10)] {
        let vot = FitnessSpec::vot(0.1, sampling).evaluate(&seq)?;
        let ae = FitnessSpec::ae(model.clone(), sampling).evaluate(&seq)?;
        let aevot = FitnessSpec::aevot(model.clone(), 0.5, sampling).evaluate(&seq)?;
        println!("{:<9} vot {vot:>9.3}  ae {ae:.6}  aevot {aevot:>9.3}", sampling.to_string());
    }
    Ok(())
}
