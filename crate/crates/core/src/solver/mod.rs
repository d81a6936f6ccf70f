//! Pseudospectral solver on a periodic box.
//!
//! The equation is `i∂ₜu + Δu + λ w(x)|u|^α u = 0` with `w` a regularized
//! `|x|^{−b}`; the free flow is `û(t) = e^{−i|ξ|²t}û₀`.

pub mod grid;
pub mod initial;
pub mod io;
pub mod norms;
pub mod picard;
pub mod potential;
pub mod rescale;
pub mod spectral;
pub mod step;

pub use grid::{make_grid, Field, Grid};
pub use initial::{sample_initial, Amplitude, Profile};
pub use norms::{
    boundary_fraction, energy, fractional_derivative, l2_norm, lr_norm, mass, sobolev_norm, strichartz_norm,
    BOUNDARY_TOL,
};
pub use picard::{calibrate_contraction, default_pairs, picard_iterate, Calibration, PicardReport, PicardStatus};
pub use potential::{potential_weights, PotentialSpec, Regularization};
pub use rescale::{critical_regularity, rescale, rescale_norm_exponent, rescale_onto, scaling_table, ScalingRow};
pub use step::{evolve, evolve_with, linear_propagate, split_step, Diagnostics, EvolveOptions, RunStatus, Stepper};
