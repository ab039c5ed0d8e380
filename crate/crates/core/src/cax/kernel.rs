use crate::cax::Board;
use crate::error::{Error, Result};

/// Square convolution kernel with non-negative weights and a cached weight sum.
///
/// The kernel is anchored so that weight `(ky, kx)` reads the neighbor at
/// offset `(ky - size/2, kx - size/2)` from the target cell. For a 16x16 kernel
/// the offsets run from -8 to 7 on each axis.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvKernel {
    size: usize,
    weights: Vec<f64>,
    sum: f64,
}

impl ConvKernel {
    pub fn new(size: usize, weights: Vec<f64>) -> Result<Self> {
        if size == 0 || weights.len() != size * size {
            return Err(Error::Dimension(format!(
                "{} weights for a {size}x{size} kernel",
                weights.len()
            )));
        }
        if let Some(i) = weights.iter().position(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::param(
                "weights",
                format!("weight {i} = {} is not a finite non-negative value", weights[i]),
            ));
        }
        let sum = weights.iter().sum();
        Ok(Self { size, weights, sum })
    }

    /// Single unit weight at the anchor cell; convolving with it is the identity.
    pub fn delta(size: usize) -> Self {
        let mut weights = vec![0.0; size * size];
        weights[(size / 2) * size + size / 2] = 1.0;
        Self {
            size,
            weights,
            sum: 1.0,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn sum(&self) -> f64 {
        self.sum
    }

    pub fn set_weight(&mut self, row: usize, col: usize, value: f64) -> Result<()> {
        if !(value.is_finite() && value >= 0.0) {
            return Err(Error::param("weight", format!("{value} is negative or non-finite")));
        }
        self.weights[row * self.size + col] = value;
        self.sum = self.weights.iter().sum();
        Ok(())
    }

    /// Offset of kernel row/column `k` relative to the target cell.
    pub fn offset(&self, k: usize) -> isize {
        k as isize - (self.size / 2) as isize
    }

    pub(crate) fn check_fits(&self, width: usize, height: usize) -> Result<()> {
        if self.size > width || self.size > height {
            return Err(Error::Dimension(format!(
                "{0}x{0} kernel does not fit a {width}x{height} board",
                self.size
            )));
        }
        Ok(())
    }
}

/// Real-valued field with the shape of a board; values are unbounded.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub width: usize,
    pub height: usize,
    pub values: Vec<f64>,
}

impl Field {
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.width + col]
    }

    pub fn max_abs_diff(&self, other: &Field) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Circular cross-correlation by direct summation, normalized by the kernel sum.
///
/// O(W·H·K²). Used as the reference backend.
pub fn convolve_direct(board: &Board, kernel: &ConvKernel) -> Result<Field> {
    let (w, h) = (board.width(), board.height());
    kernel.check_fits(w, h)?;
    let mut values = vec![0.0; w * h];
    if kernel.sum() > 0.0 {
        let k = kernel.size();
        let cells = board.cells();
        for r in 0..h {
            for c in 0..w {
                let mut acc = 0.0;
                for ky in 0..k {
                    let nr = (r as isize + kernel.offset(ky)).rem_euclid(h as isize) as usize;
                    for kx in 0..k {
                        let nc = (c as isize + kernel.offset(kx)).rem_euclid(w as isize) as usize;
                        acc += kernel.weights()[ky * k + kx] * cells[nr * w + nc];
                    }
                }
                values[r * w + c] = acc / kernel.sum();
            }
        }
    }
    Ok(Field {
        width: w,
        height: h,
        values,
    })
}
