use std::path::{Path, PathBuf};

use lenia_evolab::complexity::{FitnessKind, SamplingStrategy};
use lenia_evolab::error::Error;
use lenia_evolab::experiment::*;
use lenia_evolab::genome::ring_kernel;
use lenia_evolab::genome::RingSpec;
use lenia_evolab::pgm::GrayImage;

fn small_config(out: &Path, seed: u64) -> ExperimentConfig {
    let text = format!(
        "board_size=24\nkernel_size=8\nsteps=20\npopulation_size=4\ngenerations=5\n\
         sampling=every:2\ncheckpoint_interval=2\nrender_scale=2\nmaster_seed={seed}\n\
         output_dir={}\n",
        out.display()
    );
    ExperimentConfig::parse(&text).unwrap()
}

fn fitness_row(g: usize, best: f64, mean: f64) -> FitnessRow {
    FitnessRow {
        generation: g,
        best_fitness: best,
        mean_fitness: mean,
        best_genome_file: String::new(),
    }
}

fn manifest_with_seed(seed: u64) -> Manifest {
    let config = ExperimentConfig {
        master_seed: seed,
        ..Default::default()
    };
    Manifest {
        config,
        master_seed: seed,
        model_sha256: None,
        artifacts: vec![],
    }
}

fn fake_run(name: &str, seed: u64, rows: &[(f64, f64)]) -> (PathBuf, Manifest, FitnessCsv) {
    let csv = FitnessCsv {
        rows: rows
            .iter()
            .enumerate()
            .map(|(i, (b, m))| fitness_row(i + 1, *b, *m))
            .collect(),
    };
    (PathBuf::from(name), manifest_with_seed(seed), csv)
}

#[test]
fn config_defaults_and_overrides() {
    let c = ExperimentConfig::parse("").unwrap();
    assert_eq!(c, ExperimentConfig::default());
    assert_eq!((c.board_size, c.kernel_size, c.population_size), (64, 16, 10));
    assert_eq!(c.fitness, FitnessKind::VoT);
    assert_eq!(c.sampling, SamplingStrategy::EveryNth(10));

    let c = ExperimentConfig::parse("# comment\n  mu = 0.2  # trailing\n\nfitness=aevot\nsampling=last:5\n").unwrap();
    assert_eq!(c.mu, 0.2);
    assert_eq!(c.fitness, FitnessKind::AeVoT);
    assert_eq!(c.sampling, SamplingStrategy::LastK(5));
}

#[test]
fn config_errors_carry_line_and_key() {
    let cases = [
        ("steps=10\nbogus=1\n", 2, "bogus"),
        ("mu=0.1\nmu=0.2\n", 2, "mu"),
        ("\n\nsigma=abc\n", 3, "sigma"),
        ("board_size=8\nkernel_size=16\n", 2, "kernel_size"),
        ("population_size=3\nelites=3\n", 2, "elites"),
        ("steps=5\nsampling=every:10\n", 2, "sampling"),
        ("no equals sign\n", 1, "no equals sign"),
    ];
    for (text, want_line, want_key) in cases {
        match ExperimentConfig::parse(text) {
            Err(Error::Config { line, key, .. }) => {
                assert_eq!((line, key.as_str()), (want_line, want_key), "{text:?}")
            }
            other => panic!("{text:?}: {other:?}"),
        }
    }
}

#[test]
fn config_text_round_trip() {
    let c = ExperimentConfig {
        learning_rate: 12.5,
        init: InitKind::Ring,
        master_seed: 77,
        ..Default::default()
    };
    assert_eq!(ExperimentConfig::parse(&c.to_text()).unwrap(), c);
    assert!(!c.to_manifest_text().contains("output_dir"));
    assert_eq!(KEYS.len(), c.to_text().lines().count());
}

#[test]
fn parse_config_reads_files() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("run.cfg");
    std::fs::write(&p, "generations=7\n").unwrap();
    assert_eq!(parse_config(&p).unwrap().generations, 7);
    assert!(matches!(parse_config(&dir.path().join("missing.cfg")), Err(Error::Io { .. })));
}

#[test]
fn evolve_run_writes_all_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let cfg = small_config(&out, 3);
    let res = run_experiment(&cfg, 2).unwrap();

    let csv = FitnessCsv::read(&out.join(FITNESS_CSV)).unwrap();
    assert_eq!(csv.rows.len(), 5);
    let snapshots: Vec<&str> = csv
        .rows
        .iter()
        .map(|r| r.best_genome_file.as_str())
        .filter(|f| !f.is_empty())
        .collect();
    assert_eq!(snapshots, ["genomes/best_gen_0002.txt", "genomes/best_gen_0004.txt", "genomes/best_gen_0005.txt"]);
    for (row, rec) in csv.rows.iter().zip(&res.record.rows) {
        assert!((row.best_fitness - rec.best_fitness).abs() <= 5e-7);
    }

    let img = GrayImage::read(&out.join(BEST_KERNEL_PGM)).unwrap();
    assert_eq!((img.width, img.height), (16, 16));
    assert_eq!(std::fs::read_dir(out.join("frames")).unwrap().count(), 21);

    let manifest = Manifest::read(&out.join(MANIFEST)).unwrap();
    // output_dir is not part of the recorded config
    assert_eq!(manifest.to_text(), res.manifest.to_text());
    assert_eq!(manifest.master_seed, 3);
    for (rel, hash) in &manifest.artifacts {
        assert_eq!(&sha256_hex(&std::fs::read(out.join(rel)).unwrap()), hash, "{rel}");
    }
    assert!(manifest.artifacts.iter().any(|(p, _)| p == BEST_GENOME));
}

#[test]
fn rerun_from_manifest_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a");
    run_experiment(&small_config(&first, 9), 1).unwrap();

    let mut cfg = load_config_or_manifest(&first.join(MANIFEST)).unwrap();
    let second = dir.path().join("b");
    cfg.output_dir = second.clone();
    run_experiment(&cfg, 3).unwrap();
    for f in [FITNESS_CSV, MANIFEST, BEST_GENOME, BEST_KERNEL_PGM] {
        assert_eq!(std::fs::read(first.join(f)).unwrap(), std::fs::read(second.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn preflight_failures() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ae");
    let mut cfg = small_config(&out, 0);
    cfg.fitness = FitnessKind::AeVoT;
    cfg.model_path = dir.path().join("none.aev1");
    match run_experiment(&cfg, 1) {
        Err(Error::Preflight(msg)) => assert!(msg.contains("train-ae"), "{msg}"),
        other => panic!("{other:?}"),
    }
    assert!(!out.exists());

    let busy = dir.path().join("busy");
    std::fs::create_dir_all(&busy).unwrap();
    std::fs::write(busy.join("x"), "").unwrap();
    assert!(matches!(run_experiment(&small_config(&busy, 0), 1), Err(Error::Preflight(_))));
}

#[test]
fn aggregate_hand_fixture() {
    let runs = [
        fake_run("r1", 1, &[(1.0, 0.5), (2.0, 1.0), (4.0, 2.0)]),
        fake_run("r2", 2, &[(3.0, 1.5), (2.0, 2.0), (6.0, 2.0)]),
    ];
    let report = aggregate_fitness(&runs).unwrap();
    assert_eq!(report.runs, 2);
    assert_eq!(
        report.to_csv(),
        format!(
            "{AGGREGATE_CSV_HEADER}\n\
             1,2.000000,1.000000,1.000000,0.500000\n\
             2,2.000000,0.000000,1.500000,0.500000\n\
             3,5.000000,1.000000,2.000000,0.000000\n"
        )
    );
}

#[test]
fn aggregate_properties() {
    let a = fake_run("a", 1, &[(1.25, 1.0), (7.5, 3.0)]);
    let b = fake_run("b", 2, &[(3.0, 2.0), (8.0, 4.0)]);
    let c = fake_run("c", 3, &[(0.5, 0.1), (9.0, 5.0)]);
    let fwd = aggregate_fitness(&[a.clone(), b.clone(), c.clone()]).unwrap();
    let rev = aggregate_fitness(&[c.clone(), a.clone(), b.clone()]).unwrap();
    assert_eq!(fwd, rev);
    assert_eq!(fwd.rows.len(), 2);

    let same = aggregate_fitness(&[a.clone(), fake_run("a2", 5, &[(1.25, 1.0), (7.5, 3.0)])]).unwrap();
    assert!(same.rows.iter().all(|r| r.best_std == 0.0 && r.mean_std == 0.0));
}

#[test]
fn aggregate_rejects_mismatched_runs() {
    let a = fake_run("a", 1, &[(1.0, 1.0), (2.0, 2.0)]);
    assert!(aggregate_fitness(std::slice::from_ref(&a)).is_err());

    let short = fake_run("short", 2, &[(1.0, 1.0)]);
    match aggregate_fitness(&[a.clone(), short]) {
        Err(Error::Aggregate { run, .. }) => assert_eq!(run, PathBuf::from("short")),
        other => panic!("{other:?}"),
    }

    let mut other_cfg = fake_run("other", 3, &[(1.0, 1.0), (2.0, 2.0)]);
    other_cfg.1.config.mu = 0.2;
    match aggregate_fitness(&[a, other_cfg]) {
        Err(Error::Aggregate { run, .. }) => assert_eq!(run, PathBuf::from("other")),
        other => panic!("{other:?}"),
    }
}

#[test]
fn aggregate_real_runs() {
    let dir = tempfile::tempdir().unwrap();
    let dirs: Vec<PathBuf> = (0..2)
        .map(|s| {
            let out = dir.path().join(format!("s{s}"));
            run_experiment(&small_config(&out, s), 1).unwrap();
            out
        })
        .collect();
    let report = aggregate_runs(&dirs).unwrap();
    assert_eq!(report.rows.len(), 5);
    assert!(aggregate_runs(&[dirs[0].clone(), dir.path().join("nope")]).is_err());
}

#[test]
fn ring_heatmap_brightest_on_the_ring() {
    let genome = ring_kernel(&RingSpec::default());
    let img = kernel_heatmap(&genome, 1);
    let max = *img.pixels.iter().max().unwrap();
    assert!(max > 240);
    for y in 0..16 {
        for x in 0..16 {
            if img.pixels[y * 16 + x] == max {
                let r = genome.normalized_radius(y, x);
                assert!((r - 0.5).abs() < 0.1, "({y},{x}) r={r}");
            }
        }
    }
    let big = kernel_heatmap(&genome, 4);
    assert_eq!((big.width, big.height), (64, 64));
    assert_eq!(big.pixels[0], img.pixels[0]);
}
