//! Evolve kernels under VoT and print the best and mean fitness per generation.
//!
//! cargo run --release --example evolve_vot -- [generations] [seed]

use lenia_evolab::cax::GrowthParams;
use lenia_evolab::complexity::{FitnessSpec, SamplingStrategy};
use lenia_evolab::evolution::{Evolution, GaConfig};

fn main() -> lenia_evolab::Result<()> {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<u64>().ok());
    let generations = args.next().flatten().unwrap_or(20) as usize;
    let seed = args.next().flatten().unwrap_or(0);
    let config = GaConfig {
        generations,
        master_seed: seed,
        ..Default::default()
    };
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let record = Evolution::new(config, FitnessSpec::vot(0.1, SamplingStrategy::EveryNth(10)), GrowthParams::default())
        .threads(threads)
        .on_generation(|row| {
            println!("gen {:>4}  best {:>9.3}  mean {:>9.3}", row.generation, row.best_fitness, row.mean_fitness);
            Ok(())
        })
        .run()?;
    let c = record.best_genome().center_mass_density();
    println!(
        "best kernel: center of mass ({:.2}, {:.2}), central mass fraction {:.3}",
        c.center.0, c.center.1, c.central_mass_fraction
    );
    Ok(())
}
