//! Periodic boxes and complex fields sampled on them.
//!
//! Storage is row-major with the last axis fastest. Node `i` on an axis of
//! extent `L` with `M` points sits at `x_i = −L/2 + i L/M`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_POINTS: usize = 8;
pub const MAX_DIM: usize = 3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub dim: usize,
    pub extent: Vec<f64>,
    pub points: Vec<usize>,
}

/// Cubic box with the same extent and point count on every axis.
pub fn make_grid(dim: usize, extent: f64, points: usize) -> Result<Grid> {
    Grid::new(vec![extent; dim], vec![points; dim])
}

impl Grid {
    pub fn new(extent: Vec<f64>, points: Vec<usize>) -> Result<Self> {
        let dim = points.len();
        if dim == 0 || dim > MAX_DIM || extent.len() != dim {
            return Err(Error::InvalidGrid(format!("dim must be 1, 2 or 3 (got {dim})")));
        }
        for (&l, &m) in extent.iter().zip(&points) {
            if !(l > 0.0 && l.is_finite()) {
                return Err(Error::InvalidGrid(format!("extent must be positive (got {l})")));
            }
            if m < MIN_POINTS || !m.is_power_of_two() {
                return Err(Error::InvalidGrid(format!("points must be a power of two >= {MIN_POINTS} (got {m})")));
            }
        }
        Ok(Grid { dim, extent, points })
    }

    /// Same box with every axis refined by `factor` (a power of two).
    pub fn refined(&self, factor: usize) -> Result<Grid> {
        Grid::new(self.extent.clone(), self.points.iter().map(|m| m * factor).collect())
    }

    pub fn len(&self) -> usize {
        self.points.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        self.extent[axis] / self.points[axis] as f64
    }

    /// Smallest spacing over all axes.
    pub fn min_spacing(&self) -> f64 {
        (0..self.dim).map(|a| self.spacing(a)).fold(f64::INFINITY, f64::min)
    }

    pub fn cell_volume(&self) -> f64 {
        (0..self.dim).map(|a| self.spacing(a)).product()
    }

    /// Distance in memory between neighbours along `axis`.
    pub fn stride(&self, axis: usize) -> usize {
        self.points[axis + 1..].iter().product()
    }

    pub fn coords(&self, axis: usize) -> Vec<f64> {
        let (l, h) = (self.extent[axis], self.spacing(axis));
        (0..self.points[axis]).map(|i| -0.5 * l + i as f64 * h).collect()
    }

    /// Wavenumbers in FFT order: `2πk/L` for `k = 0, 1, …, M/2−1, −M/2, …, −1`.
    pub fn wavenumbers(&self, axis: usize) -> Vec<f64> {
        let (m, l) = (self.points[axis] as i64, self.extent[axis]);
        (0..m).map(|i| TAU * (if i < m / 2 { i } else { i - m }) as f64 / l).collect()
    }

    /// Multi-index of the flat node `idx`.
    pub fn unravel(&self, mut idx: usize) -> [usize; MAX_DIM] {
        let mut out = [0; MAX_DIM];
        for a in (0..self.dim).rev() {
            out[a] = idx % self.points[a];
            idx /= self.points[a];
        }
        out
    }

    /// `f(c₀, c₁, …)` evaluated at every node from per-axis tables, in storage order.
    pub fn tabulate<T, F>(&self, tables: &[Vec<f64>], f: F) -> Vec<T>
    where
        F: Fn(&[f64]) -> T,
    {
        let mut out = Vec::with_capacity(self.len());
        let mut c = [0.0; MAX_DIM];
        for idx in 0..self.len() {
            let m = self.unravel(idx);
            for a in 0..self.dim {
                c[a] = tables[a][m[a]];
            }
            out.push(f(&c[..self.dim]));
        }
        out
    }

    /// `|x|²` at every node.
    pub fn radius_sq(&self) -> Vec<f64> {
        let tables: Vec<_> = (0..self.dim).map(|a| self.coords(a)).collect();
        self.tabulate(&tables, |c| c.iter().map(|x| x * x).sum())
    }

    /// `|ξ|²` at every mode, in FFT order.
    pub fn wavenumber_sq(&self) -> Vec<f64> {
        let tables: Vec<_> = (0..self.dim).map(|a| self.wavenumbers(a)).collect();
        self.tabulate(&tables, |k| k.iter().map(|x| x * x).sum())
    }

    /// True on modes carrying a Nyquist wavenumber on some axis.
    pub fn nyquist_mask(&self) -> Vec<bool> {
        let tables: Vec<Vec<f64>> = (0..self.dim)
            .map(|a| (0..self.points[a]).map(|i| if i == self.points[a] / 2 { 1.0 } else { 0.0 }).collect())
            .collect();
        self.tabulate(&tables, |c| c.iter().any(|&v| v > 0.0))
    }

    /// True on nodes within `1/16` of the box edge along some axis.
    pub fn boundary_shell(&self) -> Vec<bool> {
        let tables: Vec<Vec<f64>> = (0..self.dim)
            .map(|a| {
                let m = self.points[a];
                let w = (m / 16).max(1);
                (0..m).map(|i| if i < w || i >= m - w { 1.0 } else { 0.0 }).collect()
            })
            .collect();
        self.tabulate(&tables, |c| c.iter().any(|&v| v > 0.0))
    }
}

/// Complex scalar field on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    pub grid: Grid,
    pub values: Vec<Complex64>,
}

impl Field {
    pub fn zeros(grid: &Grid) -> Self {
        Field { grid: grid.clone(), values: vec![Complex64::new(0.0, 0.0); grid.len()] }
    }

    pub fn from_values(grid: &Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "field has {} values, grid has {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(Field { grid: grid.clone(), values })
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Pointwise difference; panics on mismatched grids.
    pub fn sub(&self, other: &Field) -> Field {
        assert_eq!(self.grid, other.grid, "fields live on different grids");
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Field { grid: self.grid.clone(), values }
    }

    pub fn scale(&mut self, c: Complex64) {
        self.values.iter_mut().for_each(|z| *z *= c);
    }
}
