//! Multidimensional FFTs and Fourier multipliers on a grid.
//!
//! The forward transform is unnormalized and the inverse divides by the
//! node count, so `inverse(forward(u)) = u` to roundoff.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use super::grid::Grid;

/// Work below this many values stays on the calling thread.
pub const PAR_MIN_LEN: usize = 1 << 14;

pub struct Spectral {
    grid: Grid,
    forward: Vec<Arc<dyn Fft<f64>>>,
    inverse: Vec<Arc<dyn Fft<f64>>>,
}

impl Spectral {
    pub fn new(grid: &Grid) -> Self {
        let mut planner = FftPlanner::new();
        let forward = grid.points.iter().map(|&m| planner.plan_fft_forward(m)).collect();
        let inverse = grid.points.iter().map(|&m| planner.plan_fft_inverse(m)).collect();
        Spectral { grid: grid.clone(), forward, inverse }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        for axis in 0..self.grid.dim {
            transform_axis(&self.grid, axis, &*self.forward[axis], data);
        }
    }

    pub fn inverse(&self, data: &mut [Complex64]) {
        for axis in 0..self.grid.dim {
            transform_axis(&self.grid, axis, &*self.inverse[axis], data);
        }
        let inv = 1.0 / data.len() as f64;
        for_each_mut(data, |z| *z *= inv);
    }

    /// `data ← F⁻¹[m · F data]` for a complex multiplier in FFT order.
    pub fn apply(&self, data: &mut [Complex64], multiplier: &[Complex64]) {
        self.forward(data);
        mul_assign(data, multiplier);
        self.inverse(data);
    }

    /// `data ← F⁻¹[m · F data]` for a real multiplier in FFT order.
    pub fn apply_real(&self, data: &mut [Complex64], multiplier: &[f64]) {
        self.forward(data);
        if data.len() >= PAR_MIN_LEN {
            data.par_iter_mut().zip(multiplier.par_iter()).for_each(|(z, m)| *z *= m);
        } else {
            data.iter_mut().zip(multiplier).for_each(|(z, m)| *z *= m);
        }
        self.inverse(data);
    }
}

/// Pointwise `data ← data · m`.
pub fn mul_assign(data: &mut [Complex64], m: &[Complex64]) {
    if data.len() >= PAR_MIN_LEN {
        data.par_iter_mut().zip(m.par_iter()).for_each(|(z, w)| *z *= w);
    } else {
        data.iter_mut().zip(m).for_each(|(z, w)| *z *= w);
    }
}

/// Apply `f` to every value, in parallel on large arrays.
pub fn for_each_mut<F>(data: &mut [Complex64], f: F)
where
    F: Fn(&mut Complex64) + Sync + Send,
{
    if data.len() >= PAR_MIN_LEN {
        data.par_iter_mut().for_each(f);
    } else {
        data.iter_mut().for_each(f);
    }
}

/// 1D transforms along `axis`: each block of `M·stride` values holds `stride` lines.
fn transform_axis(grid: &Grid, axis: usize, fft: &dyn Fft<f64>, data: &mut [Complex64]) {
    let m = grid.points[axis];
    let stride = grid.stride(axis);
    if stride == 1 {
        let run = |chunk: &mut [Complex64]| fft.process(chunk);
        if data.len() >= PAR_MIN_LEN {
            data.par_chunks_mut(m * (PAR_MIN_LEN / m).max(1)).for_each(run);
        } else {
            run(data);
        }
        return;
    }
    let block = m * stride;
    let run = |chunk: &mut [Complex64]| {
        let mut line = vec![Complex64::new(0.0, 0.0); m];
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        for k in 0..stride {
            for (j, z) in line.iter_mut().enumerate() {
                *z = chunk[j * stride + k];
            }
            fft.process_with_scratch(&mut line, &mut scratch);
            for (j, z) in line.iter().enumerate() {
                chunk[j * stride + k] = *z;
            }
        }
    };
    if data.len() >= PAR_MIN_LEN && data.len() > block {
        data.par_chunks_mut(block).for_each(run);
    } else {
        data.chunks_mut(block).for_each(run);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::grid::make_grid;
    use std::f64::consts::TAU;

    #[test]
    fn round_trip_is_identity() {
        let g = make_grid(3, 5.0, 8).unwrap();
        let sp = Spectral::new(&g);
        let orig: Vec<_> = (0..g.len()).map(|i| Complex64::new((i as f64).sin(), (i as f64 * 0.3).cos())).collect();
        let mut u = orig.clone();
        sp.forward(&mut u);
        sp.inverse(&mut u);
        let err = u.iter().zip(&orig).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-13);
    }

    #[test]
    fn plane_wave_lands_on_its_mode() {
        let g = make_grid(2, TAU, 16).unwrap();
        let (x, y) = (g.coords(0), g.coords(1));
        let mut u = g.tabulate(&[x, y], |c| Complex64::from_polar(1.0, 3.0 * c[0] - 2.0 * c[1]));
        Spectral::new(&g).forward(&mut u);
        let peak = u.iter().enumerate().max_by(|a, b| a.1.norm().total_cmp(&b.1.norm())).unwrap().0;
        let k0 = g.wavenumbers(0)[g.unravel(peak)[0]];
        let k1 = g.wavenumbers(1)[g.unravel(peak)[1]];
        assert_eq!((k0, k1), (3.0, -2.0));
        assert!((u[peak].norm() - 256.0).abs() < 1e-9);
    }
}
