use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lenia_evolab::experiment::{
    aggregate_runs, history_path, load_config_or_manifest, render_kernel_heatmap, run_experiment,
    run_gen_dataset, run_train_ae, ExperimentConfig,
};
use lenia_evolab::genome::KernelGenome;

#[derive(Parser)]
#[command(name = "lenia-evolab", about = "Evolve Lenia kernels under complexity-based fitness")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// key=value config file (or a run manifest); defaults apply when omitted
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output path: dataset file, model file, run directory, report CSV or PGM
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Overrides the stage's seed (dataset_seed, ae_seed or master_seed)
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads for fitness evaluation
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the autoencoder training frames
    GenDataset,
    /// Train the autoencoder on a generated dataset
    TrainAe,
    /// Run the genetic algorithm
    Evolve,
    /// Cross-run mean and stddev of fitness curves
    Aggregate {
        #[arg(required = true, num_args = 2..)]
        runs: Vec<PathBuf>,
    },
    /// Render a genome snapshot as a PGM heatmap
    Render { genome: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> lenia_evolab::Result<()> {
    let mut config = match &cli.config {
        Some(path) => load_config_or_manifest(path)?,
        None => ExperimentConfig::default(),
    };
    match cli.command {
        Command::GenDataset => {
            if let Some(seed) = cli.seed {
                config.dataset_seed = seed;
            }
            let path = cli.out.unwrap_or_else(|| config.dataset_path.clone());
            let ds = run_gen_dataset(&config, &path)?;
            println!("wrote {} frames to {}", ds.len(), path.display());
        }
        Command::TrainAe => {
            if let Some(seed) = cli.seed {
                config.ae_seed = seed;
            }
            let path = cli.out.unwrap_or_else(|| config.model_path.clone());
            let (_, history) = run_train_ae(&config, &path)?;
            if let (Some(first), Some(last)) = (history.first(), history.last()) {
                println!(
                    "train loss {:.6} -> {:.6}; model {}, history {}",
                    first.train_loss,
                    last.train_loss,
                    path.display(),
                    history_path(&path).display()
                );
            }
        }
        Command::Evolve => {
            if let Some(seed) = cli.seed {
                config.master_seed = seed;
            }
            if let Some(out) = cli.out {
                config.output_dir = out;
            }
            let run = run_experiment(&config, cli.threads)?;
            println!(
                "{} generations, best fitness {:.6}; results in {}",
                run.record.rows.len(),
                run.record.best_fitness(),
                run.output_dir.display()
            );
        }
        Command::Aggregate { runs } => {
            let report = aggregate_runs(&runs)?;
            match cli.out {
                Some(path) => report.write(&path)?,
                None => print!("{}", report.to_csv()),
            }
        }
        Command::Render { genome } => {
            let g = KernelGenome::read(&genome)?;
            let path = cli.out.unwrap_or_else(|| genome.with_extension("pgm"));
            render_kernel_heatmap(&g, &path, config.render_scale)?;
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}
