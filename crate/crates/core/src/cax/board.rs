use std::fmt::Write as _;

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// A toroidal grid of cell states in `[0, 1]`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Board {
    width: usize,
    height: usize,
    cells: Vec<f64>,
}

impl Board {
    pub const DEFAULT_SIZE: usize = 64;

    pub fn zeros(width: usize, height: usize) -> Self {
        Self::filled(width, height, 0.0)
    }

    /// Every cell set to `value`, which is clamped into `[0, 1]`.
    pub fn filled(width: usize, height: usize, value: f64) -> Self {
        Self {
            width,
            height,
            cells: vec![value.clamp(0.0, 1.0); width * height],
        }
    }

    pub fn from_cells(width: usize, height: usize, cells: Vec<f64>) -> Result<Self> {
        if cells.len() != width * height {
            return Err(Error::Dimension(format!(
                "{} cells for a {width}x{height} board",
                cells.len()
            )));
        }
        if let Some(i) = cells.iter().position(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::param(
                "cells",
                format!("cell {i} = {} outside [0, 1]", cells[i]),
            ));
        }
        Ok(Self {
            width,
            height,
            cells,
        })
    }

    /// Callers guarantee every value is already in `[0, 1]`.
    pub(crate) fn from_cells_unchecked(width: usize, height: usize, cells: Vec<f64>) -> Self {
        debug_assert_eq!(cells.len(), width * height);
        Self {
            width,
            height,
            cells,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn cells(&self) -> &[f64] {
        &self.cells
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.cells[row * self.width + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.cells[row * self.width + col] = value.clamp(0.0, 1.0);
    }

    pub fn mean(&self) -> f64 {
        self.cells.iter().sum::<f64>() / self.cells.len() as f64
    }

    /// Cyclic shift: the cell at `(r, c)` moves to `(r + dy, c + dx)` modulo the board size.
    pub fn rolled(&self, dy: isize, dx: isize) -> Self {
        let (w, h) = (self.width as isize, self.height as isize);
        let mut cells = vec![0.0; self.cells.len()];
        for r in 0..h {
            for c in 0..w {
                let nr = (r + dy).rem_euclid(h);
                let nc = (c + dx).rem_euclid(w);
                cells[(nr * w + nc) as usize] = self.cells[(r * w + c) as usize];
            }
        }
        Self::from_cells_unchecked(self.width, self.height, cells)
    }

    /// Text form: one row per line, cells as space-separated 6-decimal fixed point.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.cells.len() * 9);
        for row in self.cells.chunks(self.width) {
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                write!(out, "{v:.6}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut width = None;
        let mut cells = Vec::new();
        let mut height = 0;
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let before = cells.len();
            for tok in line.split_whitespace() {
                let v: f64 = tok.parse().map_err(|_| {
                    Error::Parse(format!("board line {}: bad value `{tok}`", lineno + 1))
                })?;
                cells.push(v);
            }
            let n = cells.len() - before;
            match width {
                None => width = Some(n),
                Some(w) if w != n => {
                    return Err(Error::Parse(format!(
                        "board line {}: {n} values, expected {w}",
                        lineno + 1
                    )))
                }
                _ => {}
            }
            height += 1;
        }
        let width = width.ok_or_else(|| Error::Parse("empty board text".into()))?;
        Self::from_cells(width, height, cells)
    }
}

/// Board with every cell drawn independently and uniformly from `[0, 1)` by a
/// ChaCha8 generator seeded with `seed`.
pub fn random_board(width: usize, height: usize, seed: u64) -> Board {
    let mut rng = rng_from_seed(seed);
    let cells = (0..width * height).map(|_| rng.gen::<f64>()).collect();
    Board::from_cells_unchecked(width, height, cells)
}
