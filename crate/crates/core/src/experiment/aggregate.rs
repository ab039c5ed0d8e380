use std::path::{Path, PathBuf};

use crate::complexity::population_stddev;
use crate::error::{Error, Result};
use crate::experiment::records::{FitnessCsv, Manifest};

pub const AGGREGATE_CSV_HEADER: &str =
    "generation,best_fitness_mean,best_fitness_std,mean_fitness_mean,mean_fitness_std";

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub generation: usize,
    pub best_mean: f64,
    pub best_std: f64,
    pub mean_mean: f64,
    pub mean_std: f64,
}

/// Cross-run statistics per generation (population standard deviation).
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateReport {
    pub runs: usize,
    pub rows: Vec<AggregateRow>,
}

impl AggregateReport {
    pub fn to_csv(&self) -> String {
        let mut out = format!("{AGGREGATE_CSV_HEADER}\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{:.6},{:.6},{:.6},{:.6}\n",
                r.generation, r.best_mean, r.best_std, r.mean_mean, r.mean_std
            ));
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv()).map_err(|e| Error::io(path, e))
    }
}

/// Mean and population stddev with the values sorted first, so the result
/// does not depend on run order.
fn stats(values: &mut [f64]) -> Result<(f64, f64)> {
    values.sort_by(f64::total_cmp);
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    Ok((mean, population_stddev(values)?))
}

/// Aggregates fitness CSVs from runs that differ only in `master_seed`.
pub fn aggregate_fitness(runs: &[(PathBuf, Manifest, FitnessCsv)]) -> Result<AggregateReport> {
    if runs.len() < 2 {
        return Err(Error::param("run_dirs", format!("need at least 2 runs, got {}", runs.len())));
    }
    let (ref_dir, ref_manifest, ref_csv) = &runs[0];
    let mut reference = ref_manifest.config.clone();
    reference.master_seed = 0;
    for (dir, manifest, csv) in &runs[1..] {
        let mut c = manifest.config.clone();
        c.master_seed = 0;
        if c != reference {
            return Err(Error::Aggregate {
                run: dir.clone(),
                reason: format!("config differs from {} beyond master_seed", ref_dir.display()),
            });
        }
        if csv.rows.len() != ref_csv.rows.len() {
            return Err(Error::Aggregate {
                run: dir.clone(),
                reason: format!(
                    "{} generations, {} has {}",
                    csv.rows.len(),
                    ref_dir.display(),
                    ref_csv.rows.len()
                ),
            });
        }
    }
    let mut rows = Vec::with_capacity(ref_csv.rows.len());
    for g in 0..ref_csv.rows.len() {
        let mut best: Vec<f64> = runs.iter().map(|(_, _, c)| c.rows[g].best_fitness).collect();
        let mut mean: Vec<f64> = runs.iter().map(|(_, _, c)| c.rows[g].mean_fitness).collect();
        let (best_mean, best_std) = stats(&mut best)?;
        let (mean_mean, mean_std) = stats(&mut mean)?;
        rows.push(AggregateRow {
            generation: g + 1,
            best_mean,
            best_std,
            mean_mean,
            mean_std,
        });
    }
    Ok(AggregateReport {
        runs: runs.len(),
        rows,
    })
}

/// Reads `manifest.txt` and `fitness.csv` from each run directory and aggregates them.
pub fn aggregate_runs(run_dirs: &[PathBuf]) -> Result<AggregateReport> {
    let runs = run_dirs
        .iter()
        .map(|dir| {
            let wrap = |e: Error| Error::Aggregate {
                run: dir.clone(),
                reason: e.to_string(),
            };
            let manifest = Manifest::read(&dir.join("manifest.txt")).map_err(wrap)?;
            let csv = FitnessCsv::read(&dir.join("fitness.csv")).map_err(wrap)?;
            Ok((dir.clone(), manifest, csv))
        })
        .collect::<Result<Vec<_>>>()?;
    aggregate_fitness(&runs)
}
