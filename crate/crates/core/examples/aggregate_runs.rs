//! Run a short experiment for three seeds into a temporary directory, then
//! aggregate the fitness CSVs across seeds.

use lenia_evolab::experiment::{aggregate_runs, run_experiment, ExperimentConfig};

fn main() -> lenia_evolab::Result<()> {
    let root = std::env::temp_dir().join(format!("lenia-evolab-aggregate-{}", std::process::id()));
    let mut dirs = Vec::new();
    for seed in 0..3 {
        let dir = root.join(format!("seed{seed}"));
        let config = ExperimentConfig::parse(&format!(
            "generations=10\nmaster_seed={seed}\ncheckpoint_interval=5\noutput_dir={}\n",
            dir.display()
        ))?;
        let out = run_experiment(&config, 4)?;
        println!("seed {seed}: final best {:.3} -> {}", out.record.best_fitness(), dir.display());
        dirs.push(dir);
    }
    print!("{}", aggregate_runs(&dirs)?.to_csv());
    Ok(())
}
