//! Exact exponent calculus and a pseudospectral solver for the focusing and
//! defocusing inhomogeneous nonlinear Schrödinger equation
//! `i∂ₜu + Δu + λ|x|^{−b}|u|^α u = 0`.

pub mod error;
pub mod exponent;
pub mod lemma;
pub mod rational;
pub mod solver;

pub use error::{Error, Result};
pub use exponent::{
    alpha_upper, b_upper, classify_pair, critical_index, hs_dual_window, hs_window, l2_window, scaling_defect,
    Pair, PairClass, ParamSet, Region, Window,
};
pub use lemma::{verify_lemma, LemmaId, LemmaReport};
pub use num_complex::Complex64;
pub use rational::{rat, Rational};
