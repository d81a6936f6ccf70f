//! Local existence time from the contraction condition
//! `c a^α (T^θ₁ + T^θ₂) ≤ 1/4`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Relative tolerance of the bisection in `log T`.
pub const TIME_RTOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeBound {
    /// Largest admissible existence time.
    #[serde(rename = "T")]
    pub t: f64,
    /// Size of the data.
    pub a: f64,
    /// Strichartz constant used.
    pub c: f64,
    /// Exponent `d = α/min(θ₁, θ₂)` of the large-data law `T ∼ C/a^d`.
    pub d_exponent: Rational,
}

fn lhs(log_t: f64, scale: f64, t1: f64, t2: f64) -> f64 {
    scale * ((t1 * log_t).exp() + (t2 * log_t).exp())
}

/// Largest `T` with `c a^α (T^θ₁ + T^θ₂) ≤ 1/4`, found by bisection in `log T`.
pub fn contraction_time(a: f64, theta1: &Rational, theta2: &Rational, c: f64, alpha: &Rational) -> Result<TimeBound> {
    if !(a > 0.0 && a.is_finite()) || !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidArgument("a and c must be positive".into()));
    }
    if !theta1.is_positive() || !theta2.is_positive() || theta1.is_inf() || theta2.is_inf() {
        return Err(Error::InvalidArgument("theta1, theta2 must be positive".into()));
    }
    if !alpha.is_positive() || alpha.is_inf() {
        return Err(Error::InvalidArgument("alpha must be positive".into()));
    }
    let (t1, t2) = (theta1.to_f64(), theta2.to_f64());
    let scale = c * a.powf(alpha.to_f64());
    let target = 0.25;
    // Bracket the root of the increasing map log T -> lhs.
    let (mut lo, mut hi) = (-1.0f64, 1.0f64);
    while lhs(lo, scale, t1, t2) > target {
        lo *= 2.0;
        if lo < -1e6 {
            return Err(Error::Arithmetic("existence time underflows".into()));
        }
    }
    while lhs(hi, scale, t1, t2) <= target {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::Arithmetic("existence time overflows".into()));
        }
    }
    // Relative tolerance on T is an absolute tolerance on log T.
    while hi - lo > TIME_RTOL {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if lhs(mid, scale, t1, t2) <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let d_exponent = alpha / std::cmp::min(theta1, theta2);
    Ok(TimeBound { t: lo.exp(), a, c, d_exponent })
}
