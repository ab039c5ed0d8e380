//! Write a genome file as an upscaled PGM heatmap.
//!
//! cargo run --example render_kernel -- <genome.txt> [out.pgm] [scale]
//! Without arguments, renders the ring kernel to ring.pgm.

use lenia_evolab::experiment::render_kernel_heatmap;
use lenia_evolab::genome::{ring_kernel, KernelGenome, RingSpec};

fn main() -> lenia_evolab::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let genome = match args.first() {
        Some(p) => KernelGenome::read(p.as_ref())?,
        None => ring_kernel(&RingSpec::default()),
    };
    let out = args.get(1).map(String::as_str).unwrap_or("ring.pgm");
    let scale = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(8);
    render_kernel_heatmap(&genome, out.as_ref(), scale)?;
    println!("wrote {out} ({0}x{0})", genome.side() * scale);
    Ok(())
}
