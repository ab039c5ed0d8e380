//! Experiment orchestration: configuration, pipeline stages, run records,
//! multi-run aggregation and kernel rendering.

mod aggregate;
mod config;
mod records;
mod render;
mod run;

pub use aggregate::{aggregate_fitness, aggregate_runs, AggregateReport, AggregateRow, AGGREGATE_CSV_HEADER};
pub use config::{parse_config, ExperimentConfig, InitKind, KEYS};
pub use records::{sha256_hex, FitnessCsv, FitnessRow, Manifest, FITNESS_CSV_HEADER};
pub use render::{kernel_heatmap, render_kernel_heatmap};
pub use run::{
    history_path, load_config_or_manifest, run_experiment, run_gen_dataset, run_train_ae, RunOutput,
    BEST_GENOME, BEST_KERNEL_PGM, FITNESS_CSV, MANIFEST,
};
