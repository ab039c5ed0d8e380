//! Compare the FFT and direct convolution backends on one board and time them.

use std::time::Instant;

use lenia_evolab::cax::{convolve, convolve_direct, random_board};
use lenia_evolab::genome::random_genome;

fn main() -> lenia_evolab::Result<()> {
    let board = random_board(64, 64, 1);
    let kernel = random_genome(2).to_conv_kernel();

    let t = Instant::now();
    let fft = convolve(&board, &kernel)?;
    let fft_time = t.elapsed();
    let t = Instant::now();
    let direct = convolve_direct(&board, &kernel)?;
    let direct_time = t.elapsed();

    println!("fft     {fft_time:?}");
    println!("direct  {direct_time:?}");
    println!("max |fft - direct| = {:.3e}", fft.max_abs_diff(&direct));
    Ok(())
}
