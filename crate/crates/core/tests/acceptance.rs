//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::path::Path;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use lenia_evolab::autoencoder::{generate_dataset, train, AeModel, TrainConfig};
use lenia_evolab::cax::{convolve, convolve_direct, random_board, step, Board, FrameSequence, GrowthParams, Simulator};
use lenia_evolab::complexity::{population_stddev, FitnessSpec, SamplingStrategy};
use lenia_evolab::evolution::{roulette_select, Evolution, GaConfig, GenerationRow};
use lenia_evolab::experiment::{run_experiment, ExperimentConfig, FitnessCsv, FITNESS_CSV};
use lenia_evolab::genome::{random_genome, ring_kernel, RingSpec};
use lenia_evolab::rng::rng_from_seed;
use rand::Rng;

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
}

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c1_convolution() -> Outcome {
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let board = random_board(64, 64, 10_000 + i);
        let kernel = random_genome(20_000 + i).to_conv_kernel();
        let fft = convolve(&board, &kernel).map_err(|e| e.to_string())?;
        let direct = convolve_direct(&board, &kernel).map_err(|e| e.to_string())?;
        worst = worst.max(fft.max_abs_diff(&direct));
    }
    check(worst < 1e-9, format!("max |fft - direct| = {worst:.3e}"))
}

fn c2_lenia_range() -> Outcome {
    let params = GrowthParams::default();
    let mut steps = 0;
    for i in 0..10 {
        let kernel = random_genome(30_000 + i).to_conv_kernel();
        let sim = Simulator::new(64, 64, &kernel, params).map_err(|e| e.to_string())?;
        let mut board = random_board(64, 64, 40_000 + i);
        for _ in 0..100 {
            board = sim.step(&board).map_err(|e| e.to_string())?;
            steps += 1;
            if board.cells().iter().any(|v| !(0.0..=1.0).contains(v)) {
                return Err(format!("left [0,1] after {steps} steps"));
            }
        }
    }
    let zero = Board::zeros(64, 64);
    let next = step(&zero, &random_genome(1).to_conv_kernel(), &params).map_err(|e| e.to_string())?;
    check(next == zero, format!("{steps} steps in range; zero board fixed: {}", next == zero))
}

fn fd_error(model: &AeModel, batch: &[&[f64]], h: f64) -> f64 {
    let (_, grads) = model.gradient(batch).unwrap();
    let mut worst: f64 = 0.0;
    for (s, g) in grads.slices().iter().enumerate() {
        for i in 0..g.len() {
            let mut plus = model.clone();
            plus.slices_mut()[s][i] += h;
            let mut minus = model.clone();
            minus.slices_mut()[s][i] -= h;
            let numeric = (plus.batch_loss(batch).unwrap() - minus.batch_loss(batch).unwrap()) / (2.0 * h);
            let denom = g[i].abs().max(numeric.abs()).max(1e-7);
            worst = worst.max((g[i] - numeric).abs() / denom);
        }
    }
    worst
}

fn c3_gradient_check() -> Outcome {
    let mut worst: f64 = 0.0;
    for seed in 0..20 {
        let model = AeModel::random(8, 3, seed);
        let mut rng = rng_from_seed(500 + seed);
        let batch: Vec<Vec<f64>> = (0..4).map(|_| (0..8).map(|_| rng.gen()).collect()).collect();
        let refs: Vec<&[f64]> = batch.iter().map(|v| v.as_slice()).collect();
        worst = worst.max(fd_error(&model, &refs, 1e-5));
    }
    check(worst < 1e-4, format!("max relative error {worst:.3e}"))
}

fn c4_training(model_out: &mut Option<AeModel>) -> Outcome {
    let dataset = generate_dataset(100, 0).map_err(|e| e.to_string())?;
    let cfg = TrainConfig::default();
    let (model, history) = train(&dataset, &cfg).map_err(|e| e.to_string())?;
    let first = history[0].train_loss;
    let last = history.last().unwrap().train_loss;
    *model_out = Some(model);
    check(
        history.len() == 300 && last < 0.5 * first,
        format!("{} epochs, train loss {first:.5} -> {last:.5} (lr {})", history.len(), cfg.learning_rate),
    )
}

fn c5_fitness_oracles() -> Outcome {
    let sd = population_stddev(&[10.0, 20.0, 30.0]).map_err(|e| e.to_string())?;
    if (sd - 8.164966).abs() > 1e-6 {
        return Err(format!("stddev(10,20,30) = {sd}"));
    }
    let model = Arc::new(AeModel::random(4096, 36, 3));
    let specs = [
        FitnessSpec::vot(0.1, SamplingStrategy::AllFrames),
        FitnessSpec::ae(model.clone(), SamplingStrategy::AllFrames),
        FitnessSpec::aevot(model.clone(), 0.5, SamplingStrategy::AllFrames),
    ];
    for v in [0.0, 0.3, 1.0] {
        let seq = FrameSequence {
            frames: vec![Board::filled(64, 64, v); 11],
        };
        for spec in &specs {
            let f = spec.evaluate(&seq).map_err(|e| e.to_string())?;
            if f != 0.0 {
                return Err(format!("{} on constant {v} frames = {f}", spec.kind));
            }
        }
    }
    let vot = FitnessSpec::vot(0.1, SamplingStrategy::EveryNth(10));
    let ae = FitnessSpec::ae(model, SamplingStrategy::EveryNth(10));
    let (mut vmax, mut amax): (f64, f64) = (0.0, 0.0);
    for i in 0..50 {
        let sim = Simulator::new(64, 64, &random_genome(60_000 + i).to_conv_kernel(), GrowthParams::default())
            .map_err(|e| e.to_string())?;
        let seq = sim.simulate(&random_board(64, 64, 70_000 + i), 100).map_err(|e| e.to_string())?;
        let v = vot.evaluate(&seq).map_err(|e| e.to_string())?;
        let a = ae.evaluate(&seq).map_err(|e| e.to_string())?;
        if !(0.0..=2048.0).contains(&v) || !(0.0..=0.5).contains(&a) {
            return Err(format!("rollout {i}: vot {v}, ae {a}"));
        }
        vmax = vmax.max(v);
        amax = amax.max(a);
    }
    Ok(format!("stddev {sd:.6}; constants score 0; max vot {vmax:.2}, max ae {amax:.4}"))
}

fn c6_roulette_and_mutation() -> Outcome {
    let mut rng = rng_from_seed(6);
    let draws = 100_000;
    let hits = (0..draws)
        .filter(|_| roulette_select(&[3.0, 1.0], &mut rng).unwrap() == 0)
        .count();
    let p = hits as f64 / draws as f64;
    let parent = random_genome(6);
    let mut changed = 0usize;
    for i in 0..10_000 {
        let child = parent.mutate(0.02, 80_000 + i).map_err(|e| e.to_string())?;
        changed += parent.genes().iter().zip(child.genes()).filter(|(a, b)| a != b).count();
    }
    let mean = changed as f64 / 10_000.0;
    check(
        (p - 0.75).abs() <= 0.01 && (4.5..=5.7).contains(&mean),
        format!("index-0 frequency {p:.4}; changed genes per mutation {mean:.3}"),
    )
}

fn ga_config(seed: u64) -> GaConfig {
    GaConfig {
        population_size: 10,
        generations: 50,
        master_seed: seed,
        ..Default::default()
    }
}

fn run_dir(cfg_seed: u64, threads: usize, root: &Path, name: &str) -> Result<Vec<u8>, String> {
    let text = format!(
        "population_size=10\ngenerations=50\nfitness=vot\nalive_threshold=0.1\nsampling=every:10\n\
         master_seed={cfg_seed}\noutput_dir={}\n",
        root.join(name).display()
    );
    let cfg = ExperimentConfig::parse(&text).map_err(|e| e.to_string())?;
    run_experiment(&cfg, threads).map_err(|e| e.to_string())?;
    std::fs::read(root.join(name).join(FITNESS_CSV)).map_err(|e| e.to_string())
}

fn c7_elitism_determinism() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let a = run_dir(0, 1, tmp.path(), "serial")?;
    let b = run_dir(0, 1, tmp.path(), "rerun")?;
    let c = run_dir(0, 4, tmp.path(), "threads4")?;
    let csv = FitnessCsv::parse(&String::from_utf8_lossy(&a)).map_err(|e| e.to_string())?;
    let monotone = csv.rows.windows(2).all(|w| w[1].best_fitness >= w[0].best_fitness);
    check(
        monotone && a == b && a == c && csv.rows.len() == 50,
        format!("best non-decreasing: {monotone}; rerun identical: {}; 4 threads identical: {}", a == b, a == c),
    )
}

fn threads() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// (generation-1 best, final best) per seed.
fn best_curve(rows: &[GenerationRow]) -> (f64, f64) {
    (rows[0].best_fitness, rows.last().unwrap().best_fitness)
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}

const TREND_SEEDS: std::ops::Range<u64> = 0..5;

fn c8_trend(curves: &mut Vec<(f64, f64)>) -> Outcome {
    let spec = FitnessSpec::vot(0.1, SamplingStrategy::EveryNth(10));
    for seed in TREND_SEEDS {
        let record = Evolution::new(ga_config(seed), spec.clone(), GrowthParams::default())
            .threads(threads())
            .run()
            .map_err(|e| e.to_string())?;
        curves.push(best_curve(&record.rows));
    }
    let first = median(curves.iter().map(|c| c.0).collect());
    let last = median(curves.iter().map(|c| c.1).collect());
    let growth = last / first - 1.0;
    check(
        growth >= 0.25,
        format!("median best {first:.2} -> {last:.2} ({:+.1}%, need >= +25%)", growth * 100.0),
    )
}

fn c9_known_kernel(model: Option<&AeModel>, random_curves: &[(f64, f64)]) -> Outcome {
    let model = Arc::new(model.ok_or("no trained model from criterion 4")?.clone());
    if random_curves.len() != TREND_SEEDS.count() {
        return Err("criterion 8 did not produce its runs".into());
    }
    let spec = FitnessSpec::aevot(model, 0.5, SamplingStrategy::EveryNth(10));
    let ring = ring_kernel(&RingSpec::new(0.5, 0.15).map_err(|e| e.to_string())?);
    let mut curves = Vec::new();
    for seed in TREND_SEEDS {
        let record = Evolution::new(ga_config(seed), spec.clone(), GrowthParams::default())
            .initial_population(vec![ring.clone(); 10])
            .threads(threads())
            .run()
            .map_err(|e| e.to_string())?;
        curves.push(best_curve(&record.rows));
    }
    // growth from a zero start is unbounded
    let rel = |c: &[(f64, f64)]| {
        median(
            c.iter()
                .map(|(a, b)| if *a > 0.0 { b / a - 1.0 } else if *b > 0.0 { f64::INFINITY } else { 0.0 })
                .collect(),
        )
    };
    let first_min = curves.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
    let per_seed: Vec<String> = curves.iter().map(|(a, b)| format!("{a:.2}->{b:.2}")).collect();
    let (ring_growth, random_growth) = (rel(&curves), rel(random_curves));
    check(
        first_min > 0.0 && ring_growth < random_growth,
        format!(
            "ring best per seed [{}]; median relative growth ring {:+.1}% vs random {:+.1}%",
            per_seed.join(", "),
            ring_growth * 100.0,
            random_growth * 100.0
        ),
    )
}

fn c10_golden() -> Outcome {
    // the golden suite lives in tests/golden.rs; rerun its fixtures here
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let mut checked = 0;
    let genome = std::fs::read(dir.join("genome_seed7.txt")).map_err(|e| e.to_string())?;
    if genome != random_genome(7).to_text().into_bytes() {
        return Err("genome text differs".into());
    }
    checked += 1;
    let pgm = std::fs::read(dir.join("ring_kernel.pgm")).map_err(|e| e.to_string())?;
    let img = lenia_evolab::experiment::kernel_heatmap(&ring_kernel(&RingSpec::default()), 1);
    if pgm != img.encode() || lenia_evolab::pgm::GrayImage::decode(&pgm).map_err(|e| e.to_string())? != img {
        return Err("PGM differs".into());
    }
    checked += 1;
    let model = std::fs::read(dir.join("model_8x3.aev1")).map_err(|e| e.to_string())?;
    let parsed = AeModel::from_bytes(&model).map_err(|e| e.to_string())?;
    if model != AeModel::random(8, 3, 5).to_bytes() || parsed.to_bytes() != model {
        return Err("AEV1 model differs".into());
    }
    checked += 1;
    let csv = std::fs::read_to_string(dir.join("small_run_fitness.csv")).map_err(|e| e.to_string())?;
    if FitnessCsv::parse(&csv).map_err(|e| e.to_string())?.to_text() != csv {
        return Err("fitness CSV does not round-trip".into());
    }
    checked += 1;
    let manifest = std::fs::read_to_string(dir.join("small_run_manifest.txt")).map_err(|e| e.to_string())?;
    if lenia_evolab::experiment::Manifest::parse(&manifest).map_err(|e| e.to_string())?.to_text() != manifest {
        return Err("manifest does not round-trip".into());
    }
    checked += 1;
    Ok(format!("{checked} formats round-trip bit-exactly"))
}

fn main() -> ExitCode {
    let mut model = None;
    let mut curves = Vec::new();
    let mut failures = 0;
    let secs = Duration::from_secs;
    let mut run = |c: Criterion, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let outcome = f();
        let took = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if took <= c.budget => (true, d),
            Ok(d) => (false, format!("{d}; over the {}s budget", c.budget.as_secs())),
            Err(d) => (false, d),
        };
        if !ok {
            failures += 1;
        }
        println!(
            "{} [{:>2}] {:<36} {} ({:.1}s)",
            if ok { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            detail,
            took.as_secs_f64()
        );
    };
    let crit = |id, name, budget| Criterion { id, name, budget };

    run(crit(1, "convolution backends agree", secs(10)), &mut c1_convolution);
    run(crit(2, "lenia range and zero fixed point", secs(10)), &mut c2_lenia_range);
    run(crit(3, "autoencoder gradient check", secs(5)), &mut c3_gradient_check);
    run(crit(4, "autoencoder training descent", secs(120)), &mut || c4_training(&mut model));
    run(crit(5, "stddev and fitness oracles", secs(600)), &mut c5_fitness_oracles);
    run(crit(6, "roulette and mutation statistics", secs(30)), &mut c6_roulette_and_mutation);
    run(crit(7, "elitism and determinism", secs(600)), &mut c7_elitism_determinism);
    run(crit(8, "best fitness rises over 50 generations", secs(3600)), &mut || c8_trend(&mut curves));
    run(crit(9, "ring kernel starts high, grows slowly", secs(3600)), &mut || {
        c9_known_kernel(model.as_ref(), &curves)
    });
    run(crit(10, "file formats match golden files", secs(600)), &mut c10_golden);

    println!("acceptance: {} of 10 criteria passed", 10 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
