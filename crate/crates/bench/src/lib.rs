//! Shared fixtures for the benchmarks.

use inls_core::lemma::region::sample;
use inls_core::solver::{make_grid, sample_initial, Amplitude, Field, Profile};
use inls_core::{LemmaId, ParamSet};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Reproducible parameter sets drawn inside the hypothesis region of `id`.
pub fn params(id: LemmaId, count: u64) -> Vec<ParamSet> {
    (0..count).map(|i| sample(id, &mut ChaCha8Rng::seed_from_u64(0xbe4c ^ (i << 8) ^ id as u64))).collect()
}

/// Unit-width Gaussian on a cube of side 64.
pub fn gaussian(dim: usize, points: usize, amplitude: f64) -> Field {
    let g = make_grid(dim, 64.0, points).expect("valid grid");
    sample_initial(&Profile::Gaussian { width: 1.0, amplitude: Amplitude::Value(amplitude) }, &g).expect("gaussian")
}
