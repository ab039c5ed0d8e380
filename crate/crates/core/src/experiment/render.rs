use std::path::Path;

use crate::error::Result;
use crate::genome::KernelGenome;
use crate::pgm::GrayImage;

/// Grayscale heatmap of a genome, one pixel per gene (`round(gene·255)`),
/// upscaled by `scale` with nearest-neighbor sampling.
pub fn kernel_heatmap(genome: &KernelGenome, scale: usize) -> GrayImage {
    GrayImage::from_values(genome.side(), genome.side(), genome.genes()).upscaled(scale)
}

pub fn render_kernel_heatmap(genome: &KernelGenome, path: &Path, scale: usize) -> Result<()> {
    kernel_heatmap(genome, scale).write(path)
}
