//! The scaling `u₀ ↦ δ^{(2−b)/α}u₀(δx)` by spectral interpolation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::{Field, Grid};
use super::norms::{boundary_fraction, sobolev_norm, BOUNDARY_TOL};
use super::potential::PotentialSpec;
use super::spectral::Spectral;
use crate::error::{Error, Result};

/// Critical regularity `N/2 − (2−b)/α` in floating point.
pub fn critical_regularity(dim: usize, spec: &PotentialSpec) -> f64 {
    0.5 * dim as f64 - (2.0 - spec.b) / spec.alpha
}

/// Exponent `s − s_c` of `δ` in `‖u_{0,δ}‖_{Ḣ^s} = δ^{s−s_c}‖u₀‖_{Ḣ^s}`.
pub fn rescale_norm_exponent(dim: usize, s: f64, spec: &PotentialSpec) -> f64 {
    s - critical_regularity(dim, spec)
}

/// Rescaled data on the same grid.
pub fn rescale(u0: &Field, delta: f64, spec: &PotentialSpec) -> Result<Field> {
    if delta == 1.0 {
        return Ok(u0.clone());
    }
    rescale_onto(u0, delta, spec, &u0.grid)
}

/// Rescaled data sampled on `target`, which must have the same box as `u0`.
///
/// The trigonometric interpolant of `u₀` (Nyquist mode dropped) is evaluated
/// at `δx`; points with `δx` outside the box get zero.
pub fn rescale_onto(u0: &Field, delta: f64, spec: &PotentialSpec, target: &Grid) -> Result<Field> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidArgument(format!("delta must be positive (got {delta})")));
    }
    let src = &u0.grid;
    if target.dim != src.dim || target.extent.iter().zip(&src.extent).any(|(a, b)| (a - b).abs() > 1e-12 * b) {
        return Err(Error::InvalidGrid("rescale target must share the source box".into()));
    }
    let source_fraction = boundary_fraction(u0);
    if source_fraction > BOUNDARY_TOL {
        return Err(Error::BoxTooSmall(source_fraction));
    }
    let mut hat = u0.values.clone();
    Spectral::new(src).forward(&mut hat);
    let mut shape = src.points.clone();
    let mut data = hat;
    for axis in 0..src.dim {
        let matrix = eval_matrix(src, target, axis, delta);
        data = map_axis(&data, &shape, axis, target.points[axis], &matrix);
        shape[axis] = target.points[axis];
    }
    let factor = delta.powf((2.0 - spec.b) / spec.alpha);
    data.iter_mut().for_each(|z| *z *= factor);
    let out = Field::from_values(target, data)?;
    let fraction = boundary_fraction(&out);
    if fraction > BOUNDARY_TOL {
        return Err(Error::BoxTooSmall(fraction));
    }
    Ok(out)
}

/// Row `j` maps the DFT coefficients on `axis` to the interpolant at `δ·y_j`.
fn eval_matrix(src: &Grid, target: &Grid, axis: usize, delta: f64) -> Vec<Vec<Complex64>> {
    let (m, l) = (src.points[axis], src.extent[axis]);
    let ks = src.wavenumbers(axis);
    let x0 = -0.5 * l;
    target
        .coords(axis)
        .iter()
        .map(|&y| {
            let p = delta * y;
            if p < x0 || p >= -x0 {
                return vec![Complex64::new(0.0, 0.0); m];
            }
            ks.iter()
                .enumerate()
                .map(|(i, &k)| if i == m / 2 { Complex64::new(0.0, 0.0) } else { Complex64::from_polar(1.0 / m as f64, k * (p - x0)) })
                .collect()
        })
        .collect()
}

/// Apply a dense `m_new × m` matrix along `axis` of a row-major array.
fn map_axis(data: &[Complex64], shape: &[usize], axis: usize, m_new: usize, matrix: &[Vec<Complex64>]) -> Vec<Complex64> {
    let m = shape[axis];
    let inner: usize = shape[axis + 1..].iter().product();
    let outer: usize = shape[..axis].iter().product();
    let mut out = vec![Complex64::new(0.0, 0.0); outer * m_new * inner];
    let mut line = vec![Complex64::new(0.0, 0.0); m];
    for o in 0..outer {
        for i in 0..inner {
            for (k, z) in line.iter_mut().enumerate() {
                *z = data[(o * m + k) * inner + i];
            }
            for (j, row) in matrix.iter().enumerate() {
                out[(o * m_new + j) * inner + i] = row.iter().zip(&line).map(|(a, b)| a * b).sum();
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub delta: f64,
    pub s: f64,
    pub measured: f64,
    pub predicted: f64,
    pub rel_error: f64,
}

/// Measured `‖u_{0,δ}‖_{Ḣ^s}/‖u₀‖_{Ḣ^s}` against `δ^{s−s_c}`, both fields on the
/// grid refined by `refine`.
pub fn scaling_table(u0: &Field, deltas: &[f64], s_list: &[f64], spec: &PotentialSpec, refine: usize) -> Result<Vec<ScalingRow>> {
    let fine = u0.grid.refined(refine)?;
    let base = rescale_onto(u0, 1.0, spec, &fine)?;
    let mut rows = Vec::new();
    for &delta in deltas {
        let scaled = rescale_onto(u0, delta, spec, &fine)?;
        for &s in s_list {
            let measured = sobolev_norm(&scaled, s, true) / sobolev_norm(&base, s, true);
            let predicted = delta.powf(rescale_norm_exponent(u0.grid.dim, s, spec));
            rows.push(ScalingRow { delta, s, measured, predicted, rel_error: (measured / predicted - 1.0).abs() });
        }
    }
    Ok(rows)
}
