//! Start the whole population from the ring kernel and evolve under VoT.
//! The ring is already a working Lenia kernel, so generation 1 scores above 0.
//!
//! cargo run --release --example known_kernel_run -- [generations]

use lenia_evolab::cax::GrowthParams;
use lenia_evolab::complexity::{FitnessSpec, SamplingStrategy};
use lenia_evolab::evolution::{Evolution, GaConfig};
use lenia_evolab::genome::{ring_kernel, RingSpec};

fn main() -> lenia_evolab::Result<()> {
    let generations = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20);
    let config = GaConfig { generations, ..Default::default() };
    let ring = ring_kernel(&RingSpec::default());
    let record = Evolution::new(config.clone(), FitnessSpec::vot(0.1, SamplingStrategy::EveryNth(10)), GrowthParams::default())
        .initial_population(vec![ring.clone(); config.population_size])
        .threads(4)
        .run()?;
    for row in &record.rows {
        println!("gen {:>4}  best {:>9.3}  mean {:>9.3}", row.generation, row.best_fitness, row.mean_fitness);
    }
    let changed = ring.genes().iter().zip(record.best_genome().genes()).filter(|(a, b)| a != b).count();
    println!("best genome differs from the ring in {changed} of 256 genes");
    Ok(())
}
