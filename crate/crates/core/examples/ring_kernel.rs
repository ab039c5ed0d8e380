//! Build the handcrafted ring kernel and print its genes as ASCII shades.
//!
//! cargo run --example ring_kernel -- [radius_center] [shell_width]

use lenia_evolab::genome::{ring_kernel, RingSpec};

fn main() -> lenia_evolab::Result<()> {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<f64>().ok());
    let rc = args.next().flatten().unwrap_or(0.5);
    let w = args.next().flatten().unwrap_or(0.15);
    let genome = ring_kernel(&RingSpec::new(rc, w)?);
    let shades = [' ', '.', ':', '-', '=', '+', '*', '#', '%', '@'];
    for y in 0..genome.side() {
        let row: String = (0..genome.side())
            .map(|x| shades[((genome.get(y, x) * 9.0).round() as usize).min(9)])
            .flat_map(|c| [c, c])
            .collect();
        println!("{row}");
    }
    println!("mass {:.3}", genome.mass());
    Ok(())
}
