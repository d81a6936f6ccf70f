//! Free propagator, Strang split step and the time loop with diagnostics.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::{Field, Grid};
use super::norms::{boundary_fraction, energy_with, mass, sobolev_norm_with, sobolev_weight, BOUNDARY_TOL};
use super::potential::{potential_weights, PotentialSpec};
use super::spectral::{mul_assign, Spectral};
use crate::error::{Error, Result};

/// Default blow-up ceiling as a multiple of the initial max modulus.
pub const DEFAULT_AMPLITUDE_CEILING: f64 = 1e6;

/// `exp(−i|ξ|²t)` at every mode.
pub fn propagator_symbol(grid: &Grid, t: f64) -> Vec<Complex64> {
    grid.wavenumber_sq().iter().map(|k| Complex64::from_polar(1.0, -k * t)).collect()
}

/// `U(t)u`: solution of `i∂ₜu + Δu = 0` at time `t`.
pub fn linear_propagate(u: &Field, t: f64) -> Field {
    let sp = Spectral::new(&u.grid);
    let mut out = u.values.clone();
    sp.apply(&mut out, &propagator_symbol(&u.grid, t));
    Field { grid: u.grid.clone(), values: out }
}

/// Pointwise `u ← u·exp(iλτ w|u|^α)`; the modulus is untouched.
pub fn nonlinear_phase(values: &mut [Complex64], w: &[f64], spec: &PotentialSpec, tau: f64) {
    let (c, half_alpha) = (spec.lambda * tau, 0.5 * spec.alpha);
    if values.len() >= super::spectral::PAR_MIN_LEN {
        use rayon::prelude::*;
        values.par_iter_mut().zip(w.par_iter()).for_each(|(z, wi)| {
            *z *= Complex64::from_polar(1.0, c * wi * z.norm_sqr().powf(half_alpha));
        });
    } else {
        for (z, wi) in values.iter_mut().zip(w) {
            *z *= Complex64::from_polar(1.0, c * wi * z.norm_sqr().powf(half_alpha));
        }
    }
}

/// Precomputed tables for repeated Strang steps of a fixed size.
pub struct Stepper {
    sp: Spectral,
    weights: Vec<f64>,
    symbol: Vec<Complex64>,
    spec: PotentialSpec,
    dt: f64,
}

impl Stepper {
    pub fn new(grid: &Grid, spec: &PotentialSpec, dt: f64) -> Self {
        Stepper {
            sp: Spectral::new(grid),
            weights: potential_weights(grid, spec),
            symbol: propagator_symbol(grid, dt),
            spec: spec.clone(),
            dt,
        }
    }

    /// Half nonlinear step, full linear step, half nonlinear step.
    pub fn step(&self, values: &mut [Complex64]) {
        let half = 0.5 * self.dt;
        nonlinear_phase(values, &self.weights, &self.spec, half);
        self.sp.forward(values);
        mul_assign(values, &self.symbol);
        self.sp.inverse(values);
        nonlinear_phase(values, &self.weights, &self.spec, half);
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn spectral(&self) -> &Spectral {
        &self.sp
    }
}

/// One Strang step of size `dt`.
pub fn split_step(u: &Field, dt: f64, spec: &PotentialSpec) -> Field {
    let mut out = u.values.clone();
    Stepper::new(&u.grid, spec, dt).step(&mut out);
    Field { grid: u.grid.clone(), values: out }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvolveOptions {
    /// Record diagnostics every this many steps (and at the final step).
    pub sample_every: usize,
    /// Blow-up ceiling as a multiple of the initial max modulus.
    pub amplitude_ceiling: f64,
    /// Orders `s` of the homogeneous Sobolev norms to trace.
    pub hs_orders: Vec<f64>,
    /// Keep the field at every sample.
    pub keep_trajectory: bool,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions { sample_every: 1, amplitude_ceiling: DEFAULT_AMPLITUDE_CEILING, hs_orders: Vec::new(), keep_trajectory: false }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum RunStatus {
    Completed,
    SuspectedBlowUp { step: usize, time: f64, max_amplitude: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HsTrace {
    pub s: f64,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub times: Vec<f64>,
    pub mass: Vec<f64>,
    pub energy: Vec<f64>,
    pub l2: Vec<f64>,
    pub hs: Vec<HsTrace>,
    pub status: RunStatus,
    /// Step actually taken: `T / ⌈T/dt⌉`.
    pub dt: f64,
    pub steps: usize,
    pub regularization: String,
    /// Largest boundary-shell mass fraction over the samples.
    pub boundary_fraction: f64,
    pub boundary_flagged: bool,
    #[serde(skip)]
    pub trajectory: Vec<(f64, Field)>,
}

impl Diagnostics {
    /// Largest `|M(t) − M(0)| / M(0)`; zero for zero data.
    pub fn relative_mass_drift(&self) -> f64 {
        relative_drift(&self.mass)
    }

    /// Largest `|E(t) − E(0)|`.
    pub fn energy_drift(&self) -> f64 {
        let e0 = self.energy[0];
        self.energy.iter().map(|e| (e - e0).abs()).fold(0.0, f64::max)
    }
}

fn relative_drift(trace: &[f64]) -> f64 {
    let m0 = trace[0];
    if m0 == 0.0 {
        return 0.0;
    }
    trace.iter().map(|m| ((m - m0) / m0).abs()).fold(0.0, f64::max)
}

/// Evolve for time `T` with steps of at most `dt`, sampling every `sample_every` steps.
pub fn evolve(u0: &Field, t_final: f64, dt: f64, spec: &PotentialSpec, sample_every: usize) -> Result<(Field, Diagnostics)> {
    let opts = EvolveOptions { sample_every, ..EvolveOptions::default() };
    evolve_with(u0, t_final, dt, spec, &opts)
}

pub fn evolve_with(u0: &Field, t_final: f64, dt: f64, spec: &PotentialSpec, opts: &EvolveOptions) -> Result<(Field, Diagnostics)> {
    if !(t_final > 0.0 && t_final.is_finite()) {
        return Err(Error::InvalidArgument(format!("T must be positive (got {t_final})")));
    }
    if !(dt > 0.0 && dt <= t_final * (1.0 + 1e-12)) {
        return Err(Error::InvalidArgument(format!("dt must lie in (0, T] (got {dt})")));
    }
    if opts.sample_every == 0 {
        return Err(Error::InvalidArgument("sample_every must be at least 1".into()));
    }
    if opts.amplitude_ceiling.is_nan() || opts.amplitude_ceiling <= 1.0 {
        return Err(Error::InvalidArgument("amplitude_ceiling must exceed 1".into()));
    }
    spec.validate()?;
    if !u0.is_finite() {
        return Err(Error::NonFinite { step: 0 });
    }
    let grid = &u0.grid;
    let steps = (t_final / dt - 1e-9).ceil().max(1.0) as usize;
    let dt = t_final / steps as f64;
    let stepper = Stepper::new(grid, spec, dt);
    let xi2 = grid.wavenumber_sq();
    let hs_weights: Vec<Vec<f64>> = opts.hs_orders.iter().map(|&s| sobolev_weight(grid, s, true)).collect();
    let ceiling = opts.amplitude_ceiling * u0.max_abs();

    let mut diag = Diagnostics {
        times: Vec::new(),
        mass: Vec::new(),
        energy: Vec::new(),
        l2: Vec::new(),
        hs: opts.hs_orders.iter().map(|&s| HsTrace { s, values: Vec::new() }).collect(),
        status: RunStatus::Completed,
        dt,
        steps: 0,
        regularization: spec.describe_regularization(grid),
        boundary_fraction: 0.0,
        boundary_flagged: false,
        trajectory: Vec::new(),
    };
    let record = |u: &Field, t: f64, diag: &mut Diagnostics| {
        let m = mass(u);
        diag.times.push(t);
        diag.mass.push(m);
        diag.l2.push(m.sqrt());
        diag.energy.push(energy_with(stepper.spectral(), &xi2, stepper.weights(), u, spec));
        for (trace, w) in diag.hs.iter_mut().zip(&hs_weights) {
            trace.values.push(sobolev_norm_with(stepper.spectral(), w, u));
        }
        diag.boundary_fraction = diag.boundary_fraction.max(boundary_fraction(u));
        if opts.keep_trajectory {
            diag.trajectory.push((t, u.clone()));
        }
    };

    let mut u = u0.clone();
    record(&u, 0.0, &mut diag);
    for n in 1..=steps {
        stepper.step(&mut u.values);
        let mut peak = 0.0f64;
        for z in &u.values {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::NonFinite { step: n });
            }
            peak = peak.max(z.norm_sqr());
        }
        let peak = peak.sqrt();
        let t = n as f64 * dt;
        diag.steps = n;
        if peak > ceiling {
            record(&u, t, &mut diag);
            diag.status = RunStatus::SuspectedBlowUp { step: n, time: t, max_amplitude: peak };
            break;
        }
        if n % opts.sample_every == 0 || n == steps {
            record(&u, t, &mut diag);
        }
    }
    diag.boundary_flagged = diag.boundary_fraction > BOUNDARY_TOL;
    Ok((u, diag))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::grid::make_grid;
    use crate::solver::initial::{sample_initial, Amplitude, Profile};
    use crate::solver::norms::l2_norm;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::TAU;

    fn random_field(grid: &Grid, seed: u64) -> Field {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = (0..grid.len()).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        Field::from_values(grid, v).unwrap()
    }

    fn gaussian(grid: &Grid, a: f64) -> Field {
        sample_initial(&Profile::Gaussian { width: 1.0, amplitude: Amplitude::Value(a) }, grid).unwrap()
    }

    #[test]
    fn plane_wave_picks_up_phase() {
        let g = make_grid(1, TAU, 32).unwrap();
        let u = sample_initial(&Profile::PlaneWave { k: vec![3.0] }, &g).unwrap();
        let t = 0.37;
        let v = linear_propagate(&u, t);
        for (a, b) in v.values.iter().zip(&u.values) {
            assert!((a - b * Complex64::from_polar(1.0, -9.0 * t)).norm() < 1e-13);
        }
    }

    #[test]
    fn propagator_is_unitary_and_a_group() {
        let g = make_grid(2, 9.0, 32).unwrap();
        let u = random_field(&g, 1);
        let (s, t) = (0.7, 2.9);
        let a = linear_propagate(&linear_propagate(&u, s), t);
        let b = linear_propagate(&u, s + t);
        assert!(((l2_norm(&a) - l2_norm(&u)) / l2_norm(&u)).abs() < 1e-12);
        assert!(l2_norm(&a.sub(&b)) / l2_norm(&b) < 1e-10);
    }

    #[test]
    fn nonlinear_substep_keeps_modulus() {
        let g = make_grid(1, 10.0, 16).unwrap();
        let mut v = vec![Complex64::new(0.8, 0.0); g.len()];
        let spec = PotentialSpec::new(0.3, 2.0, 1).unwrap();
        nonlinear_phase(&mut v, &potential_weights(&g, &spec), &spec, 0.1);
        for z in &v {
            assert!((z.norm() - 0.8).abs() < 1e-15);
            assert!(z.im != 0.0);
        }
    }

    #[test]
    fn zero_data_stays_zero() {
        let g = make_grid(1, 20.0, 64).unwrap();
        let spec = PotentialSpec::new(0.25, 3.0, -1).unwrap();
        let (u, d) = evolve(&Field::zeros(&g), 0.1, 0.01, &spec, 2).unwrap();
        assert_eq!(u.max_abs(), 0.0);
        assert!(d.mass.iter().chain(&d.energy).all(|&x| x == 0.0));
        assert_eq!(d.status, RunStatus::Completed);
    }

    #[test]
    fn samples_are_increasing_and_include_end() {
        let g = make_grid(1, 20.0, 64).unwrap();
        let spec = PotentialSpec::new(0.25, 3.0, -1).unwrap();
        let opts = EvolveOptions { sample_every: 3, hs_orders: vec![1.0], ..Default::default() };
        let (_, d) = evolve_with(&gaussian(&g, 1.0), 0.1, 0.01, &spec, &opts).unwrap();
        assert_eq!(d.times.len(), 5);
        assert!(d.times.windows(2).all(|w| w[0] < w[1]));
        assert!((d.times.last().unwrap() - 0.1).abs() < 1e-15);
        assert_eq!(d.hs[0].values.len(), d.times.len());
    }

    #[test]
    fn defocusing_run_conserves_mass() {
        let g = make_grid(1, 32.0, 256).unwrap();
        let spec = PotentialSpec::new(0.25, 3.0, -1).unwrap();
        let (_, d) = evolve(&gaussian(&g, 1.0), 0.2, 1e-3, &spec, 10).unwrap();
        assert!(d.relative_mass_drift() < 1e-12);
        assert!(!d.boundary_flagged);
    }

    #[test]
    fn focusing_large_data_trips_ceiling() {
        let g = make_grid(2, 10.0, 64).unwrap();
        let spec = PotentialSpec::new(0.5, 2.0, 1).unwrap();
        let opts = EvolveOptions { amplitude_ceiling: 4.0, ..Default::default() };
        let (_, d) = evolve_with(&gaussian(&g, 6.0), 0.5, 1e-3, &spec, &opts).unwrap();
        assert!(matches!(d.status, RunStatus::SuspectedBlowUp { .. }), "{:?}", d.status);
    }

    #[test]
    fn nan_reports_step() {
        let g = make_grid(1, 10.0, 16).unwrap();
        let mut u = gaussian(&g, 1.0);
        u.values[3] = Complex64::new(f64::NAN, 0.0);
        let spec = PotentialSpec::new(0.25, 3.0, -1).unwrap();
        assert!(matches!(evolve(&u, 0.1, 0.01, &spec, 1), Err(Error::NonFinite { step: 0 })));
    }

    #[test]
    fn rejects_bad_times() {
        let g = make_grid(1, 10.0, 16).unwrap();
        let spec = PotentialSpec::new(0.25, 3.0, -1).unwrap();
        let u = gaussian(&g, 1.0);
        assert!(evolve(&u, 0.1, 0.2, &spec, 1).is_err());
        assert!(evolve(&u, -1.0, 0.1, &spec, 1).is_err());
        assert!(evolve(&u, 1.0, 0.1, &spec, 0).is_err());
    }
}
