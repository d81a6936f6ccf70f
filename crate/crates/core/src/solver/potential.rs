//! The inhomogeneous weight `|x|^{−b}` regularized at the origin.

use serde::{Deserialize, Serialize};

use super::grid::Grid;
use crate::error::{Error, Result};
use crate::exponent::ParamSet;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regularization {
    /// `(|x|² + ε²)^{−b/2}`; `None` takes `ε` equal to the smallest grid spacing.
    EpsilonShift(Option<f64>),
    /// `min(|x|^{−b}, h^{−b})` with `h` the smallest grid spacing.
    GridCap,
}

impl Default for Regularization {
    fn default() -> Self {
        Regularization::EpsilonShift(None)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PotentialSpec {
    pub b: f64,
    pub alpha: f64,
    /// `+1` focusing, `−1` defocusing.
    pub lambda: f64,
    pub regularization: Regularization,
}

impl PotentialSpec {
    pub fn new(b: f64, alpha: f64, lambda_sign: i8) -> Result<Self> {
        let spec = PotentialSpec { b, alpha, lambda: lambda_sign as f64, regularization: Regularization::default() };
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_params(p: &ParamSet) -> Result<Self> {
        PotentialSpec::new(p.b.to_f64(), p.alpha.to_f64(), p.lambda_sign)
    }

    pub fn with_regularization(mut self, reg: Regularization) -> Result<Self> {
        self.regularization = reg;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.b >= 0.0 && self.b.is_finite()) {
            return Err(Error::InvalidArgument(format!("b must be nonnegative (got {})", self.b)));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidArgument(format!("alpha must be positive (got {})", self.alpha)));
        }
        if self.lambda != 1.0 && self.lambda != -1.0 {
            return Err(Error::InvalidArgument(format!("lambda must be +1 or -1 (got {})", self.lambda)));
        }
        if let Regularization::EpsilonShift(Some(eps)) = self.regularization {
            if !(eps > 0.0 && eps.is_finite()) {
                return Err(Error::InvalidArgument(format!("regularization epsilon must be positive (got {eps})")));
            }
        }
        Ok(())
    }

    /// Human-readable regularization, resolved against `grid`.
    pub fn describe_regularization(&self, grid: &Grid) -> String {
        match self.regularization {
            Regularization::EpsilonShift(eps) => {
                format!("epsilon_shift({:e})", eps.unwrap_or_else(|| grid.min_spacing()))
            }
            Regularization::GridCap => format!("grid_cap({:e})", grid.min_spacing()),
        }
    }
}

/// Weight `w(x)` at every node.
pub fn potential_weights(grid: &Grid, spec: &PotentialSpec) -> Vec<f64> {
    let r2 = grid.radius_sq();
    if spec.b == 0.0 {
        return vec![1.0; r2.len()];
    }
    let h = grid.min_spacing();
    match spec.regularization {
        Regularization::EpsilonShift(eps) => {
            let e2 = eps.unwrap_or(h).powi(2);
            r2.iter().map(|&r| (r + e2).powf(-0.5 * spec.b)).collect()
        }
        Regularization::GridCap => {
            let cap = h.powf(-spec.b);
            r2.iter().map(|&r| if r == 0.0 { cap } else { r.powf(-0.5 * spec.b).min(cap) }).collect()
        }
    }
}
