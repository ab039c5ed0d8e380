use std::cell::RefCell;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::autoencoder::{history_csv, AeDataset, AeModel, EpochLoss};
use crate::cax::simulate;
use crate::error::{Error, Result};
use crate::evolution::{Evolution, GenerationRow, RunRecord};
use crate::experiment::config::{ExperimentConfig, InitKind};
use crate::experiment::records::{sha256_hex, FitnessRow, Manifest, FITNESS_CSV_HEADER};
use crate::experiment::render::render_kernel_heatmap;
use crate::pgm::GrayImage;

pub const FITNESS_CSV: &str = "fitness.csv";
pub const MANIFEST: &str = "manifest.txt";
pub const BEST_GENOME: &str = "best_genome.txt";
pub const BEST_KERNEL_PGM: &str = "best_kernel.pgm";

/// Loads a config file, or the config section of a run manifest.
pub fn load_config_or_manifest(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    if Manifest::is_manifest(&text) {
        Ok(Manifest::parse(&text)?.config)
    } else {
        ExperimentConfig::parse(&text)
    }
}

/// `gen-dataset`: generates the training frames and writes them to `path`.
pub fn run_gen_dataset(config: &ExperimentConfig, path: &Path) -> Result<AeDataset> {
    let dataset = AeDataset::generate(&config.dataset_spec(), config.dataset_seed)?;
    create_parent(path)?;
    dataset.save(path)?;
    Ok(dataset)
}

/// History CSV path for a model file: `model.aev1` -> `model.history.csv`.
pub fn history_path(model_path: &Path) -> PathBuf {
    model_path.with_extension("history.csv")
}

/// `train-ae`: trains on the dataset at `config.dataset_path` and writes the
/// model plus its loss history.
pub fn run_train_ae(config: &ExperimentConfig, model_path: &Path) -> Result<(AeModel, Vec<EpochLoss>)> {
    if !config.dataset_path.exists() {
        return Err(Error::Preflight(format!(
            "dataset {} not found; run `lenia-evolab gen-dataset` first",
            config.dataset_path.display()
        )));
    }
    let dataset = AeDataset::load(&config.dataset_path)?;
    let cells = config.board_size * config.board_size;
    if dataset.frames.iter().any(|f| f.cells().len() != cells) {
        return Err(Error::Dimension(format!(
            "dataset frames do not match board_size {}",
            config.board_size
        )));
    }
    let (model, history) = crate::autoencoder::train(&dataset, &config.train_config())?;
    create_parent(model_path)?;
    model.save(model_path)?;
    let hist = history_path(model_path);
    std::fs::write(&hist, history_csv(&history)).map_err(|e| Error::io(&hist, e))?;
    Ok((model, history))
}

fn create_parent(path: &Path) -> Result<()> {
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => std::fs::create_dir_all(p).map_err(|e| Error::io(p, e)),
        _ => Ok(()),
    }
}

/// Checks everything that can fail before compute starts. Returns the model
/// when the fitness kind needs one.
fn preflight(config: &ExperimentConfig, out: &Path) -> Result<Option<Arc<AeModel>>> {
    let model = if config.fitness.needs_model() {
        if !config.model_path.exists() {
            return Err(Error::Preflight(format!(
                "fitness `{}` needs model {}; run `lenia-evolab train-ae` first",
                config.fitness,
                config.model_path.display()
            )));
        }
        let model = AeModel::load(&config.model_path)?;
        let cells = config.board_size * config.board_size;
        if model.input_size() != cells {
            return Err(Error::Preflight(format!(
                "model input size {} does not match a {}x{} board",
                model.input_size(),
                config.board_size,
                config.board_size
            )));
        }
        Some(Arc::new(model))
    } else {
        None
    };
    if out.exists() {
        let mut entries = std::fs::read_dir(out).map_err(|e| Error::io(out, e))?;
        if entries.next().is_some() {
            return Err(Error::Preflight(format!(
                "output directory {} is not empty",
                out.display()
            )));
        }
    }
    std::fs::create_dir_all(out)
        .map_err(|e| Error::Preflight(format!("cannot create {}: {e}", out.display())))?;
    let probe = out.join(".write-probe");
    std::fs::write(&probe, b"")
        .and_then(|_| std::fs::remove_file(&probe))
        .map_err(|e| Error::Preflight(format!("{} is not writable: {e}", out.display())))?;
    Ok(model)
}

fn pad_width(n: usize) -> usize {
    n.to_string().len().max(4)
}

/// Output of [`run_experiment`].
#[derive(Debug)]
pub struct RunOutput {
    pub record: RunRecord,
    pub manifest: Manifest,
    pub output_dir: PathBuf,
}

/// `evolve`: runs the GA and writes
///
/// ```text
/// fitness.csv            generation,best_fitness,mean_fitness,best_genome_file
/// genomes/best_gen_*.txt best genome at each checkpoint and at the end
/// best_genome.txt        best genome of the final generation
/// best_kernel.pgm        its heatmap
/// frames/frame_*.pgm     its rollout from the run's initial board
/// manifest.txt           config, seeds and artifact hashes
/// ```
pub fn run_experiment(config: &ExperimentConfig, threads: usize) -> Result<RunOutput> {
    let out = config.output_dir.clone();
    let model = preflight(config, &out)?;
    let model_sha256 = model.as_ref().map(|m| sha256_hex(&m.to_bytes()));
    let genomes_dir = out.join("genomes");
    std::fs::create_dir_all(&genomes_dir).map_err(|e| Error::io(&genomes_dir, e))?;

    let mut written: Vec<String> = Vec::new();
    let csv_path = out.join(FITNESS_CSV);
    let csv = File::create(&csv_path).map_err(|e| Error::io(&csv_path, e))?;
    let csv = RefCell::new(BufWriter::new(csv));
    writeln!(csv.borrow_mut(), "{FITNESS_CSV_HEADER}").map_err(|e| Error::io(&csv_path, e))?;
    written.push(FITNESS_CSV.into());

    let generations = config.generations;
    let width = pad_width(generations);
    let snapshots = RefCell::new(Vec::new());
    let observer = |row: &GenerationRow| -> Result<()> {
        let g = row.generation;
        let mut genome_file = String::new();
        if g.is_multiple_of(config.checkpoint_interval) || g == generations {
            genome_file = format!("genomes/best_gen_{g:0width$}.txt");
            row.best_genome.write(&out.join(&genome_file))?;
            snapshots.borrow_mut().push(genome_file.clone());
        }
        let line = FitnessRow {
            generation: g,
            best_fitness: row.best_fitness,
            mean_fitness: row.mean_fitness,
            best_genome_file: genome_file,
        }
        .to_line();
        let mut w = csv.borrow_mut();
        writeln!(w, "{line}")
            .and_then(|_| w.flush())
            .map_err(|e| Error::io(&csv_path, e))
    };

    let ga = config.ga_config();
    let mut evolution = Evolution::new(ga.clone(), config.fitness_spec(model), config.growth())
        .threads(threads)
        .on_generation(observer);
    if config.init == InitKind::Ring {
        let ring = config.ring_spec().kernel(config.kernel_size);
        evolution = evolution.initial_population(vec![ring; config.population_size]);
    }
    let record = evolution.run()?;
    csv.into_inner().flush().map_err(|e| Error::io(&csv_path, e))?;
    written.extend(snapshots.into_inner());

    let best = record.best_genome();
    best.write(&out.join(BEST_GENOME))?;
    written.push(BEST_GENOME.into());
    render_kernel_heatmap(best, &out.join(BEST_KERNEL_PGM), config.render_scale)?;
    written.push(BEST_KERNEL_PGM.into());

    let frames_dir = out.join("frames");
    std::fs::create_dir_all(&frames_dir).map_err(|e| Error::io(&frames_dir, e))?;
    let rollout = simulate(&ga.board_for(generations), &best.to_conv_kernel(), &config.growth(), config.steps)?;
    let fw = rollout.len().to_string().len().max(3);
    for (i, frame) in rollout.frames.iter().enumerate() {
        let name = format!("frames/frame_{i:0fw$}.pgm");
        GrayImage::from_board(frame).write(&out.join(&name))?;
        written.push(name);
    }

    written.sort();
    let artifacts = written
        .into_iter()
        .map(|rel| {
            let path = out.join(&rel);
            let bytes = std::fs::read(&path).map_err(|e| Error::io(&path, e))?;
            Ok((rel, sha256_hex(&bytes)))
        })
        .collect::<Result<Vec<_>>>()?;
    let manifest = Manifest {
        config: config.clone(),
        master_seed: config.master_seed,
        model_sha256,
        artifacts,
    };
    let manifest_path = out.join(MANIFEST);
    std::fs::write(&manifest_path, manifest.to_text()).map_err(|e| Error::io(&manifest_path, e))?;
    Ok(RunOutput {
        record,
        manifest,
        output_dir: out,
    })
}
