//! Kernel genotypes: random initialization, point mutation, handcrafted ring
//! kernels and kernel-shape analytics.

use std::fmt::Write as _;
use std::path::Path;

use rand::Rng;

use crate::cax::ConvKernel;
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

pub const DEFAULT_KERNEL_SIZE: usize = 16;

/// Round half away from zero to three decimals.
pub fn round3(x: f64) -> f64 {
    (x * 1000.0).round() / 1000.0
}

fn is_gene(v: f64) -> bool {
    (0.0..=1.0).contains(&v) && round3(v) == v
}

/// A square grid of genes in `[0, 1]`, each carrying at most three decimals.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelGenome {
    side: usize,
    genes: Vec<f64>,
}

impl KernelGenome {
    pub fn from_genes(side: usize, genes: Vec<f64>) -> Result<Self> {
        if side == 0 || genes.len() != side * side {
            return Err(Error::Dimension(format!(
                "{} genes for a {side}x{side} genome",
                genes.len()
            )));
        }
        if let Some(i) = genes.iter().position(|&g| !is_gene(g)) {
            return Err(Error::param(
                "genes",
                format!("gene {i} = {} is outside [0, 1] or has more than 3 decimals", genes[i]),
            ));
        }
        Ok(Self { side, genes })
    }

    pub fn zeros(side: usize) -> Self {
        Self {
            side,
            genes: vec![0.0; side * side],
        }
    }

    /// Every gene set to `value` after clamping and rounding.
    pub fn filled(side: usize, value: f64) -> Self {
        Self {
            side,
            genes: vec![round3(value.clamp(0.0, 1.0)); side * side],
        }
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn genes(&self) -> &[f64] {
        &self.genes
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.genes[row * self.side + col]
    }

    pub fn mass(&self) -> f64 {
        self.genes.iter().sum()
    }

    /// Geometric center in 0-indexed cell coordinates; (7.5, 7.5) for 16x16.
    pub fn geometric_center(&self) -> f64 {
        (self.side as f64 - 1.0) / 2.0
    }

    pub fn half_width(&self) -> f64 {
        self.side as f64 / 2.0
    }

    /// Distance of cell `(row, col)` from the geometric center, in half-widths.
    pub fn normalized_radius(&self, row: usize, col: usize) -> f64 {
        let c = self.geometric_center();
        let (dy, dx) = (row as f64 - c, col as f64 - c);
        (dy * dy + dx * dx).sqrt() / self.half_width()
    }

    /// Point mutation: each gene is independently replaced, with probability
    /// `rate`, by a fresh uniform value rounded to three decimals. The fresh
    /// value may coincide with the old one.
    pub fn mutate(&self, rate: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&rate) {
            return Err(Error::param("mutation_rate", format!("{rate} is not in [0, 1]")));
        }
        let mut rng = rng_from_seed(seed);
        let genes = self
            .genes
            .iter()
            .map(|&g| {
                if rng.gen::<f64>() < rate {
                    round3(rng.gen::<f64>())
                } else {
                    g
                }
            })
            .collect();
        Ok(Self {
            side: self.side,
            genes,
        })
    }

    pub fn to_conv_kernel(&self) -> ConvKernel {
        ConvKernel::new(self.side, self.genes.clone()).expect("genes are valid kernel weights")
    }

    /// Weighted center of mass and the fraction of mass within half a
    /// half-width of the geometric center.
    pub fn center_mass_density(&self) -> CenterMass {
        let total = self.mass();
        let c = self.geometric_center();
        if total <= 0.0 {
            return CenterMass {
                center: (c, c),
                central_mass_fraction: 0.0,
            };
        }
        let (mut sr, mut sc, mut central) = (0.0, 0.0, 0.0);
        for r in 0..self.side {
            for col in 0..self.side {
                let g = self.get(r, col);
                sr += g * r as f64;
                sc += g * col as f64;
                if self.normalized_radius(r, col) <= 0.5 {
                    central += g;
                }
            }
        }
        CenterMass {
            center: (sr / total, sc / total),
            central_mass_fraction: central / total,
        }
    }

    /// `side` lines of `side` space-separated 3-decimal values.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.genes.len() * 6);
        for row in self.genes.chunks(self.side) {
            for (i, g) in row.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                write!(out, "{g:.3}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    /// Parses a square genome snapshot.
    pub fn from_text(text: &str) -> Result<Self> {
        let rows: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
        let side = rows.len();
        if side == 0 {
            return Err(Error::Parse("genome file is empty".into()));
        }
        let mut genes = Vec::with_capacity(side * side);
        for (i, line) in rows.iter().enumerate() {
            let before = genes.len();
            for tok in line.split_whitespace() {
                let g: f64 = tok
                    .parse()
                    .map_err(|_| Error::Parse(format!("genome row {}: bad value `{tok}`", i + 1)))?;
                if !(0.0..=1.0).contains(&g) {
                    return Err(Error::Parse(format!(
                        "genome row {}: value {tok} outside [0, 1]",
                        i + 1
                    )));
                }
                genes.push(round3(g));
            }
            let n = genes.len() - before;
            if n != side {
                return Err(Error::Parse(format!(
                    "genome row {}: {n} values, expected {side}",
                    i + 1
                )));
            }
        }
        Self::from_genes(side, genes)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CenterMass {
    /// (row, col)
    pub center: (f64, f64),
    pub central_mass_fraction: f64,
}

pub fn random_genome(seed: u64) -> KernelGenome {
    random_genome_with_side(DEFAULT_KERNEL_SIZE, seed)
}

pub fn random_genome_with_side(side: usize, seed: u64) -> KernelGenome {
    let mut rng = rng_from_seed(seed);
    KernelGenome {
        side,
        genes: (0..side * side).map(|_| round3(rng.gen::<f64>())).collect(),
    }
}

/// Single Gaussian shell, radii measured in kernel half-widths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingSpec {
    pub radius_center: f64,
    pub shell_width: f64,
}

impl Default for RingSpec {
    fn default() -> Self {
        Self {
            radius_center: 0.5,
            shell_width: 0.15,
        }
    }
}

impl RingSpec {
    pub fn new(radius_center: f64, shell_width: f64) -> Result<Self> {
        let spec = Self {
            radius_center,
            shell_width,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius_center > 0.0 && self.radius_center <= 1.0) {
            return Err(Error::param(
                "ring_radius",
                format!("{} is not in (0, 1]", self.radius_center),
            ));
        }
        if !(self.shell_width.is_finite() && self.shell_width > 0.0) {
            return Err(Error::param("ring_width", format!("{} is not > 0", self.shell_width)));
        }
        Ok(())
    }

    /// Gene value at normalized radius `r`, before rounding.
    pub fn profile(&self, r: f64) -> f64 {
        if r > 1.0 {
            return 0.0;
        }
        let d = r - self.radius_center;
        (-(d * d) / (2.0 * self.shell_width * self.shell_width)).exp()
    }

    pub fn kernel(&self, side: usize) -> KernelGenome {
        let mut g = KernelGenome::zeros(side);
        for r in 0..side {
            for c in 0..side {
                let v = round3(self.profile(g.normalized_radius(r, c)));
                g.genes[r * side + c] = v;
            }
        }
        g
    }
}

/// Handcrafted ring kernel at the default 16x16 size.
pub fn ring_kernel(spec: &RingSpec) -> KernelGenome {
    spec.kernel(DEFAULT_KERNEL_SIZE)
}
