//! On-disk run records: the fitness CSV and the run manifest.

use std::fmt::Write as _;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::experiment::ExperimentConfig;

pub const FITNESS_CSV_HEADER: &str = "generation,best_fitness,mean_fitness,best_genome_file";
const MANIFEST_HEADER: &str = "# lenia-evolab run manifest";
const MANIFEST_FORMAT: u32 = 1;

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// One fitness CSV row. Fitness values are stored with six decimals.
#[derive(Debug, Clone, PartialEq)]
pub struct FitnessRow {
    pub generation: usize,
    pub best_fitness: f64,
    pub mean_fitness: f64,
    /// Relative path of the genome snapshot written at this generation, or empty.
    pub best_genome_file: String,
}

impl FitnessRow {
    pub fn to_line(&self) -> String {
        format!(
            "{},{:.6},{:.6},{}",
            self.generation, self.best_fitness, self.mean_fitness, self.best_genome_file
        )
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FitnessCsv {
    pub rows: Vec<FitnessRow>,
}

impl FitnessCsv {
    pub fn to_text(&self) -> String {
        let mut out = format!("{FITNESS_CSV_HEADER}\n");
        for r in &self.rows {
            out.push_str(&r.to_line());
            out.push('\n');
        }
        out
    }

    /// Parses and checks that generations run 1, 2, 3, ... without gaps.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        if lines.next() != Some(FITNESS_CSV_HEADER) {
            return Err(Error::Parse(format!("fitness CSV must start with `{FITNESS_CSV_HEADER}`")));
        }
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            let bad = |what: &str| Error::Parse(format!("fitness CSV line {}: {what}", i + 2));
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 4 {
                return Err(bad("expected 4 columns"));
            }
            let generation: usize = fields[0].parse().map_err(|_| bad("bad generation"))?;
            if generation != rows.len() + 1 {
                return Err(bad(&format!("generation {generation} out of sequence")));
            }
            rows.push(FitnessRow {
                generation,
                best_fitness: fields[1].parse().map_err(|_| bad("bad best_fitness"))?,
                mean_fitness: fields[2].parse().map_err(|_| bad("bad mean_fitness"))?,
                best_genome_file: fields[3].to_string(),
            });
        }
        Ok(Self { rows })
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
    }
}

/// Everything needed to reproduce a run: the result-determining config,
/// its hash, the seed, the model hash when one was used, and a hash of
/// every artifact the run wrote.
#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    pub config: ExperimentConfig,
    pub master_seed: u64,
    pub model_sha256: Option<String>,
    /// `(relative path, sha256)`, sorted by path.
    pub artifacts: Vec<(String, String)>,
}

impl Manifest {
    pub fn config_sha256(&self) -> String {
        sha256_hex(self.config.to_manifest_text().as_bytes())
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{MANIFEST_HEADER}\nformat={MANIFEST_FORMAT}\n");
        writeln!(out, "config_sha256={}", self.config_sha256()).unwrap();
        writeln!(out, "master_seed={}", self.master_seed).unwrap();
        if let Some(h) = &self.model_sha256 {
            writeln!(out, "model_sha256={h}").unwrap();
        }
        out.push_str("[config]\n");
        out.push_str(&self.config.to_manifest_text());
        out.push_str("[artifacts]\n");
        for (path, hash) in &self.artifacts {
            writeln!(out, "{hash}  {path}").unwrap();
        }
        out
    }

    pub fn is_manifest(text: &str) -> bool {
        text.starts_with(MANIFEST_HEADER)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bad = |what: String| Error::Parse(format!("manifest: {what}"));
        if !Self::is_manifest(text) {
            return Err(bad("missing header line".into()));
        }
        let (head, rest) = text
            .split_once("[config]\n")
            .ok_or_else(|| bad("missing [config] section".into()))?;
        let (config_text, artifacts_text) = rest
            .split_once("[artifacts]\n")
            .ok_or_else(|| bad("missing [artifacts] section".into()))?;

        let mut fields = std::collections::HashMap::new();
        for line in head.lines().skip(1) {
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("bad header line `{line}`")))?;
            fields.insert(k, v);
        }
        match fields.get("format") {
            Some(v) if *v == MANIFEST_FORMAT.to_string() => {}
            other => return Err(bad(format!("unsupported format {other:?}"))),
        }
        let config = ExperimentConfig::parse(config_text)?;
        let master_seed: u64 = fields
            .get("master_seed")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| bad("missing or bad master_seed".into()))?;
        if master_seed != config.master_seed {
            return Err(bad("master_seed disagrees with [config]".into()));
        }
        let mut artifacts = Vec::new();
        for line in artifacts_text.lines() {
            let (hash, path) = line
                .split_once("  ")
                .ok_or_else(|| bad(format!("bad artifact line `{line}`")))?;
            artifacts.push((path.to_string(), hash.to_string()));
        }
        let manifest = Self {
            config,
            master_seed,
            model_sha256: fields.get("model_sha256").map(|s| s.to_string()),
            artifacts,
        };
        match fields.get("config_sha256") {
            Some(h) if *h == manifest.config_sha256() => Ok(manifest),
            _ => Err(bad("config_sha256 does not match [config]".into())),
        }
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
    }
}
