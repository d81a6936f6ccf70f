//! Conserved quantities, Sobolev and Lebesgue norms, and discrete Strichartz norms.

use std::f64::consts::PI;

use super::grid::{Field, Grid};
use super::potential::{potential_weights, PotentialSpec};
use super::spectral::Spectral;
use crate::exponent::Pair;

/// Boundary-shell mass fraction above which a run is flagged.
pub const BOUNDARY_TOL: f64 = 1e-8;

/// `Σ|u|²·dV`.
pub fn mass(u: &Field) -> f64 {
    u.values.iter().map(|z| z.norm_sqr()).sum::<f64>() * u.grid.cell_volume()
}

pub fn l2_norm(u: &Field) -> f64 {
    mass(u).sqrt()
}

/// Discrete `L^r` norm; `r = ∞` is the max modulus.
pub fn lr_norm(u: &Field, r: f64) -> f64 {
    if r.is_infinite() {
        return u.max_abs();
    }
    if r == 2.0 {
        return l2_norm(u);
    }
    let sum: f64 = u.values.iter().map(|z| z.norm().powf(r)).sum();
    (sum * u.grid.cell_volume()).powf(1.0 / r)
}

/// Fraction of the mass sitting in the outer shell of the box.
pub fn boundary_fraction(u: &Field) -> f64 {
    let total: f64 = u.values.iter().map(|z| z.norm_sqr()).sum();
    if total == 0.0 {
        return 0.0;
    }
    let shell: f64 = u
        .values
        .iter()
        .zip(u.grid.boundary_shell())
        .filter(|(_, s)| *s)
        .map(|(z, _)| z.norm_sqr())
        .sum();
    shell / total
}

/// `Σ m(ξ)|û(ξ)|²` scaled so that `m ≡ 1` gives the mass.
fn spectral_quadratic(sp: &Spectral, u: &Field, weight: &[f64]) -> f64 {
    let mut hat = u.values.clone();
    sp.forward(&mut hat);
    let g = &u.grid;
    let sum: f64 = hat.iter().zip(weight).map(|(z, w)| w * z.norm_sqr()).sum();
    sum * g.cell_volume() / g.len() as f64
}

/// `½∫|∇u|² − λ/(α+2)∫w|u|^{α+2}` with a spectral gradient.
pub fn energy(u: &Field, spec: &PotentialSpec) -> f64 {
    let sp = Spectral::new(&u.grid);
    let w = potential_weights(&u.grid, spec);
    energy_with(&sp, &u.grid.wavenumber_sq(), &w, u, spec)
}

pub(crate) fn energy_with(sp: &Spectral, xi2: &[f64], w: &[f64], u: &Field, spec: &PotentialSpec) -> f64 {
    let kinetic = 0.5 * spectral_quadratic(sp, u, xi2);
    let p = spec.alpha + 2.0;
    let pot: f64 = u.values.iter().zip(w).map(|(z, wi)| wi * z.norm().powf(p)).sum();
    kinetic - spec.lambda / p * pot * u.grid.cell_volume()
}

fn unit_ball_volume(n: usize) -> f64 {
    match n {
        1 => 2.0,
        2 => PI,
        _ => 4.0 * PI / 3.0,
    }
}

/// Squared Sobolev multiplier at every mode.
///
/// For integer `s ≥ 0` the weight is a polynomial and the plain mode sum is
/// spectrally accurate. Otherwise `|ξ|^{2s}` is not smooth at the origin, so the
/// zero mode carries its average over a ball with the volume of one frequency
/// cell; this is finite exactly when `2s > −N`.
pub fn sobolev_weight(grid: &Grid, s: f64, homogeneous: bool) -> Vec<f64> {
    let xi2 = grid.wavenumber_sq();
    if !homogeneous {
        return xi2.iter().map(|k| (1.0 + k).powf(s)).collect();
    }
    let n = grid.dim as f64;
    let zero_weight = if s >= 0.0 && s.fract() == 0.0 {
        if s == 0.0 { 1.0 } else { 0.0 }
    } else if 2.0 * s <= -n {
        f64::INFINITY
    } else {
        let cell: f64 = (0..grid.dim).map(|a| std::f64::consts::TAU / grid.extent[a]).product();
        let radius = (cell / unit_ball_volume(grid.dim)).powf(1.0 / n);
        n / (n + 2.0 * s) * radius.powf(2.0 * s)
    };
    xi2.iter().map(|&k| if k == 0.0 { zero_weight } else { k.powf(s) }).collect()
}

/// `‖D^s u‖_{L²}` (homogeneous) or `‖⟨D⟩^s u‖_{L²}` (inhomogeneous).
pub fn sobolev_norm(u: &Field, s: f64, homogeneous: bool) -> f64 {
    if homogeneous && s == 0.0 {
        return l2_norm(u);
    }
    let sp = Spectral::new(&u.grid);
    sobolev_norm_with(&sp, &sobolev_weight(&u.grid, s, homogeneous), u)
}

pub(crate) fn sobolev_norm_with(sp: &Spectral, weight: &[f64], u: &Field) -> f64 {
    spectral_quadratic(sp, u, weight).sqrt()
}

/// `D^s u` with multiplier `|ξ|^s`; the Nyquist mode is zeroed for `s > 0`.
pub fn fractional_derivative(u: &Field, s: f64) -> Field {
    assert!(s >= 0.0, "fractional derivative needs s >= 0");
    let g = &u.grid;
    let sp = Spectral::new(g);
    let mut out = u.values.clone();
    if s == 0.0 {
        sp.forward(&mut out);
        sp.inverse(&mut out);
    } else {
        let m: Vec<f64> = g
            .wavenumber_sq()
            .iter()
            .zip(g.nyquist_mask())
            .map(|(&k, nyq)| if nyq { 0.0 } else { k.powf(0.5 * s) })
            .collect();
        sp.apply_real(&mut out, &m);
    }
    Field { grid: g.clone(), values: out }
}

/// Trapezoid weights for samples at `times`; a single sample gets weight 0.
pub fn trapezoid_weights(times: &[f64]) -> Vec<f64> {
    let n = times.len();
    let mut w = vec![0.0; n];
    for i in 1..n {
        let dt = 0.5 * (times[i] - times[i - 1]);
        w[i - 1] += dt;
        w[i] += dt;
    }
    w
}

/// `(Σ Δt ‖u(t)‖_{L^r}^q)^{1/q}` over the samples, or the sup when `q = ∞`.
pub fn strichartz_norm(trajectory: &[(f64, Field)], pair: &Pair) -> f64 {
    let fields: Vec<&Field> = trajectory.iter().map(|(_, u)| u).collect();
    let times: Vec<f64> = trajectory.iter().map(|(t, _)| *t).collect();
    strichartz_norm_of(&times, &fields, pair)
}

pub(crate) fn strichartz_norm_of(times: &[f64], fields: &[&Field], pair: &Pair) -> f64 {
    assert!(!fields.is_empty(), "empty trajectory");
    assert!(times.windows(2).all(|w| w[0] < w[1]), "times must increase");
    let r = pair.r.to_f64();
    let inner: Vec<f64> = fields.iter().map(|u| lr_norm(u, r)).collect();
    if pair.q.is_inf() {
        return inner.iter().copied().fold(0.0, f64::max);
    }
    let q = pair.q.to_f64();
    let w = trapezoid_weights(times);
    inner.iter().zip(&w).map(|(v, wt)| wt * v.powf(q)).sum::<f64>().powf(1.0 / q)
}
