//! Roll out a random kernel on a random board and print the alive-cell count
//! every 10 steps.
//!
//! cargo run --release --example simulate_lenia -- [seed]

use lenia_evolab::cax::{random_board, simulate, GrowthParams};
use lenia_evolab::complexity::alive_count;
use lenia_evolab::genome::random_genome;

fn main() -> lenia_evolab::Result<()> {
    let seed: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let kernel = random_genome(seed).to_conv_kernel();
    let board = random_board(64, 64, seed);
    let seq = simulate(&board, &kernel, &GrowthParams::default(), 100)?;
    for (t, frame) in seq.frames.iter().enumerate().step_by(10) {
        println!("step {t:>3}  alive {:>4}  mean {:.4}", alive_count(frame, 0.1), frame.mean());
    }
    Ok(())
}
