//! Picard iteration of the Duhamel operator
//! `G(u)(t) = U(t)u₀ + iλ∫₀ᵗ U(t−t′) w|u|^α u(t′) dt′`.
//!
//! The integral is taken in the interaction picture: each integrand is pulled
//! back by `U(−t′)` in Fourier space, accumulated with the trapezoid rule over
//! uniform nodes, and pushed forward by `U(t)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::Field;
use super::norms::{l2_norm, strichartz_norm_of};
use super::potential::{potential_weights, PotentialSpec};
use super::spectral::Spectral;
use crate::error::{Error, Result};
use crate::exponent::Pair;
use crate::lemma::contraction_time;
use crate::rational::{rat, Rational};

pub const MIN_TIME_NODES: usize = 8;
pub const MIN_ITERATIONS: usize = 2;
/// Growth of `d_k` over two iterations that counts as divergence.
pub const DIVERGENCE_FACTOR: f64 = 10.0;
pub const NO_CONTRACTION: &str = "no contraction at this T";

/// `(∞,2)`, `(8,4)` and `(4,∞)`.
pub fn default_pairs() -> Vec<Pair> {
    vec![
        Pair::new(Rational::inf(), rat(2, 1)),
        Pair::new(rat(8, 1), rat(4, 1)),
        Pair::new(rat(4, 1), Rational::inf()),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PicardStatus {
    Contracting,
    NoContraction,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PicardReport {
    #[serde(rename = "T")]
    pub t_final: f64,
    pub n_time: usize,
    pub pairs: Vec<Pair>,
    /// `d_k = max_pairs ‖u⁽ᵏ⁺¹⁾ − u⁽ᵏ⁾‖`.
    pub distances: Vec<f64>,
    /// `d_{k+1}/d_k`, zero where `d_k = 0`.
    pub ratios: Vec<f64>,
    pub diverged: bool,
    pub status: PicardStatus,
    pub message: String,
}

impl PicardReport {
    pub fn max_ratio(&self) -> f64 {
        self.ratios.iter().copied().fold(0.0, f64::max)
    }
}

fn phase_table(xi2: &[f64], t: f64) -> impl Iterator<Item = Complex64> + '_ {
    xi2.iter().map(move |k| Complex64::from_polar(1.0, -k * t))
}

/// Iterates `u⁽ᵏ⁺¹⁾ = G(u⁽ᵏ⁾)` from `u⁽⁰⁾(t) = U(t)u₀` and records the distances.
pub fn picard_iterate(
    u0: &Field,
    t_final: f64,
    n_time: usize,
    n_iter: usize,
    spec: &PotentialSpec,
    pairs: &[Pair],
) -> Result<PicardReport> {
    if !(t_final > 0.0 && t_final.is_finite()) {
        return Err(Error::InvalidArgument(format!("T must be positive (got {t_final})")));
    }
    if n_time < MIN_TIME_NODES {
        return Err(Error::InvalidArgument(format!("n_time must be at least {MIN_TIME_NODES}")));
    }
    if n_iter < MIN_ITERATIONS {
        return Err(Error::InvalidArgument(format!("n_iter must be at least {MIN_ITERATIONS}")));
    }
    if pairs.is_empty() {
        return Err(Error::InvalidArgument("at least one norm pair is required".into()));
    }
    spec.validate()?;
    let grid = &u0.grid;
    let sp = Spectral::new(grid);
    let xi2 = grid.wavenumber_sq();
    let w = potential_weights(grid, spec);
    let times: Vec<f64> = (0..n_time).map(|j| t_final * j as f64 / (n_time - 1) as f64).collect();
    let dt = times[1];
    let mut u0_hat = u0.values.clone();
    sp.forward(&mut u0_hat);

    // Map interaction-picture coefficients to physical fields at each node.
    let push = |coeffs: &[Vec<Complex64>]| -> Vec<Field> {
        coeffs
            .iter()
            .zip(&times)
            .map(|(c, &t)| {
                let mut v: Vec<Complex64> = c.iter().zip(phase_table(&xi2, t)).map(|(a, p)| a * p).collect();
                sp.inverse(&mut v);
                Field { grid: grid.clone(), values: v }
            })
            .collect()
    };
    let mut current = push(&vec![u0_hat.clone(); n_time]);

    let (c, half_alpha) = (Complex64::new(0.0, spec.lambda), 0.5 * spec.alpha);
    let mut distances = Vec::with_capacity(n_iter);
    let mut diverged = false;
    for _ in 0..n_iter {
        let mut acc = vec![Complex64::new(0.0, 0.0); grid.len()];
        let mut prev: Option<Vec<Complex64>> = None;
        let mut coeffs = Vec::with_capacity(n_time);
        for (u, &t) in current.iter().zip(&times) {
            let mut v: Vec<Complex64> =
                u.values.iter().zip(&w).map(|(z, wi)| z * (wi * z.norm_sqr().powf(half_alpha))).collect();
            sp.forward(&mut v);
            // U(−t) in Fourier space is the conjugate phase.
            v.iter_mut().zip(phase_table(&xi2, t)).for_each(|(a, p)| *a *= p.conj());
            if let Some(p) = &prev {
                acc.iter_mut().zip(p.iter().zip(&v)).for_each(|(s, (a, b))| *s += 0.5 * dt * (a + b));
            }
            coeffs.push(u0_hat.iter().zip(&acc).map(|(a, i)| a + c * i).collect::<Vec<_>>());
            prev = Some(v);
        }
        let next = push(&coeffs);
        let diffs: Vec<Field> = next.iter().zip(&current).map(|(a, b)| a.sub(b)).collect();
        let refs: Vec<&Field> = diffs.iter().collect();
        let d = pairs.iter().map(|p| strichartz_norm_of(&times, &refs, p)).fold(0.0, f64::max);
        distances.push(d);
        current = next;
        let k = distances.len();
        if !d.is_finite() || (k >= 3 && d > DIVERGENCE_FACTOR * distances[k - 3]) {
            diverged = true;
            break;
        }
    }
    let ratios: Vec<f64> = distances.windows(2).map(|p| if p[0] == 0.0 { 0.0 } else { p[1] / p[0] }).collect();
    let contracting = !diverged && ratios.iter().all(|r| *r < 1.0);
    let (status, message) = if contracting {
        (PicardStatus::Contracting, "contraction".to_string())
    } else {
        (PicardStatus::NoContraction, NO_CONTRACTION.to_string())
    };
    Ok(PicardReport { t_final, n_time, pairs: pairs.to_vec(), distances, ratios, diverged, status, message })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    /// Empirical Strichartz constant.
    pub c: f64,
    /// Data size `a = ‖u₀‖_{L²}`.
    pub a: f64,
    /// Existence time from the contraction condition with the calibrated `c`.
    #[serde(rename = "T")]
    pub t: f64,
    /// `(T, d₁/d₀)` at each probe time.
    pub probes: Vec<(f64, f64)>,
}

/// Fit `c` so that `d₁/d₀ ≤ c a^α (T^θ₁ + T^θ₂)` at every probe time, then solve
/// the contraction condition for `T`. Probes double from `t_min` until they pass
/// the resulting `T`.
#[allow(clippy::too_many_arguments)]
pub fn calibrate_contraction(
    u0: &Field,
    spec: &PotentialSpec,
    alpha: &Rational,
    theta1: &Rational,
    theta2: &Rational,
    t_min: f64,
    n_time: usize,
    pairs: &[Pair],
) -> Result<Calibration> {
    let a = l2_norm(u0);
    if a == 0.0 {
        return Err(Error::InvalidArgument("calibration needs nonzero data".into()));
    }
    let (t1, t2, al) = (theta1.to_f64(), theta2.to_f64(), alpha.to_f64());
    let mut probes = Vec::new();
    let mut c = 0.0f64;
    let mut t = t_min;
    loop {
        let rep = picard_iterate(u0, t, n_time, MIN_ITERATIONS, spec, pairs)?;
        let rho = rep.ratios[0];
        probes.push((t, rho));
        c = c.max(rho / (a.powf(al) * (t.powf(t1) + t.powf(t2))));
        let bound = contraction_time(a, theta1, theta2, c, alpha)?;
        if t >= bound.t {
            return Ok(Calibration { c, a, t: bound.t, probes });
        }
        t *= 2.0;
    }
}
