use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::cax::{Board, ConvKernel, Field};
use crate::error::Result;

/// FFT backend for the normalized circular cross-correlation.
///
/// Holds the FFT plans and the kernel spectrum for one board shape, so a
/// rollout pays for planning and the kernel transform once. The spectrum is
/// stored in column-major (transposed) order, which is the layout the forward
/// transform leaves the data in.
#[derive(Clone)]
pub struct FftConvolver {
    width: usize,
    height: usize,
    row_fwd: Arc<dyn Fft<f64>>,
    row_inv: Arc<dyn Fft<f64>>,
    col_fwd: Arc<dyn Fft<f64>>,
    col_inv: Arc<dyn Fft<f64>>,
    /// `None` when the kernel sums to zero.
    spectrum: Option<Vec<Complex64>>,
}

impl std::fmt::Debug for FftConvolver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FftConvolver")
            .field("width", &self.width)
            .field("height", &self.height)
            .field("zero_kernel", &self.spectrum.is_none())
            .finish()
    }
}

/// Reusable buffers for [`FftConvolver::convolve_into`].
#[derive(Debug, Default)]
pub struct FftScratch {
    a: Vec<Complex64>,
    b: Vec<Complex64>,
    fft: Vec<Complex64>,
}

impl FftConvolver {
    pub fn new(width: usize, height: usize, kernel: &ConvKernel) -> Result<Self> {
        kernel.check_fits(width, height)?;
        let mut planner = FftPlanner::<f64>::new();
        let mut conv = Self {
            width,
            height,
            row_fwd: planner.plan_fft_forward(width),
            row_inv: planner.plan_fft_inverse(width),
            col_fwd: planner.plan_fft_forward(height),
            col_inv: planner.plan_fft_inverse(height),
            spectrum: None,
        };
        if kernel.sum() > 0.0 {
            // Place weight (ky, kx) at the negated offset so that circular
            // convolution with this field reads board[r + oy][c + ox].
            let mut field = vec![Complex64::new(0.0, 0.0); width * height];
            let k = kernel.size();
            for ky in 0..k {
                let r = (-kernel.offset(ky)).rem_euclid(height as isize) as usize;
                for kx in 0..k {
                    let c = (-kernel.offset(kx)).rem_euclid(width as isize) as usize;
                    field[r * width + c].re += kernel.weights()[ky * k + kx];
                }
            }
            let mut scratch = FftScratch::default();
            let mut spectrum = vec![Complex64::new(0.0, 0.0); width * height];
            conv.forward(&mut field, &mut spectrum, &mut scratch.fft);
            // Fold the kernel normalization and the inverse-FFT 1/N into the spectrum.
            let scale = 1.0 / (kernel.sum() * (width * height) as f64);
            spectrum.iter_mut().for_each(|z| *z *= scale);
            conv.spectrum = Some(spectrum);
        }
        Ok(conv)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Row transforms on `data` (row-major), then column transforms into `out` (column-major).
    fn forward(&self, data: &mut [Complex64], out: &mut [Complex64], fft: &mut Vec<Complex64>) {
        let (w, h) = (self.width, self.height);
        self.ensure_scratch(fft);
        self.row_fwd.process_with_scratch(data, fft);
        transpose(data, out, w, h);
        self.col_fwd.process_with_scratch(out, fft);
    }

    fn ensure_scratch(&self, fft: &mut Vec<Complex64>) {
        let need = [&self.row_fwd, &self.row_inv, &self.col_fwd, &self.col_inv]
            .iter()
            .map(|p| p.get_inplace_scratch_len())
            .max()
            .unwrap_or(0);
        if fft.len() < need {
            fft.resize(need, Complex64::new(0.0, 0.0));
        }
    }

    pub fn convolve(&self, board: &Board) -> Result<Field> {
        let mut values = vec![0.0; self.width * self.height];
        self.convolve_into(board.cells(), &mut values, &mut FftScratch::default());
        Ok(Field {
            width: self.width,
            height: self.height,
            values,
        })
    }

    /// Writes the normalized potential of `cells` into `out`. Both slices are
    /// row-major with this convolver's shape.
    pub fn convolve_into(&self, cells: &[f64], out: &mut [f64], scratch: &mut FftScratch) {
        let n = self.width * self.height;
        assert_eq!(cells.len(), n, "board shape does not match convolver");
        assert_eq!(out.len(), n, "output shape does not match convolver");
        let Some(spectrum) = &self.spectrum else {
            out.fill(0.0);
            return;
        };
        let (w, h) = (self.width, self.height);
        scratch.a.clear();
        scratch.a.extend(cells.iter().map(|&v| Complex64::new(v, 0.0)));
        scratch.b.resize(n, Complex64::new(0.0, 0.0));
        self.forward(&mut scratch.a, &mut scratch.b, &mut scratch.fft);
        for (z, s) in scratch.b.iter_mut().zip(spectrum) {
            *z *= s;
        }
        self.col_inv.process_with_scratch(&mut scratch.b, &mut scratch.fft);
        transpose(&scratch.b, &mut scratch.a, h, w);
        self.row_inv.process_with_scratch(&mut scratch.a, &mut scratch.fft);
        for (o, z) in out.iter_mut().zip(&scratch.a) {
            *o = z.re;
        }
    }
}

/// `src` is `rows` x `cols` row-major; `dst` receives the `cols` x `rows` transpose.
fn transpose(src: &[Complex64], dst: &mut [Complex64], cols: usize, rows: usize) {
    for r in 0..rows {
        for c in 0..cols {
            dst[c * rows + r] = src[r * cols + c];
        }
    }
}

/// Normalized circular cross-correlation through the FFT backend.
pub fn convolve(board: &Board, kernel: &ConvKernel) -> Result<Field> {
    FftConvolver::new(board.width(), board.height(), kernel)?.convolve(board)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cax::{convolve_direct, random_board};

    #[test]
    fn matches_direct_on_non_square_board() {
        let b = random_board(24, 16, 5);
        let w: Vec<f64> = (0..25).map(|i| (i % 7) as f64).collect();
        let k = ConvKernel::new(5, w).unwrap();
        let d = convolve_direct(&b, &k).unwrap();
        let f = convolve(&b, &k).unwrap();
        assert!(d.max_abs_diff(&f) < 1e-12);
    }

    #[test]
    fn uniform_board_stays_uniform() {
        let b = Board::filled(64, 64, 0.5);
        let w: Vec<f64> = (0..256).map(|i| ((i * 37) % 11) as f64 / 10.0).collect();
        let k = ConvKernel::new(16, w).unwrap();
        for v in convolve(&b, &k).unwrap().values {
            assert!((v - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn convolver_is_send_and_sync() {
        fn check<T: Send + Sync>() {}
        check::<FftConvolver>();
    }
}
