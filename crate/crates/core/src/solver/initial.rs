//! Initial data sampled on a grid.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::{Field, Grid};
use super::norms::mass;
use crate::error::{Error, Result};

/// Relative distance from the lattice still accepted for a plane-wave `k`.
const LATTICE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Amplitude {
    Value(f64),
    /// Rescale the sampled profile to unit discrete mass.
    UnitMass,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "profile", rename_all = "kebab-case")]
pub enum Profile {
    /// `A·exp(−|x|²/(2w²))`.
    Gaussian { width: f64, amplitude: Amplitude },
    /// `exp(−(|x|−R)²/(2w²))`.
    Ring { radius: f64, width: f64 },
    /// `exp(i k·x)`.
    PlaneWave { k: Vec<f64> },
}

pub fn sample_initial(profile: &Profile, grid: &Grid) -> Result<Field> {
    let r2 = grid.radius_sq();
    let values = match profile {
        Profile::Gaussian { width, amplitude } => {
            positive("width", *width)?;
            let a = match amplitude {
                Amplitude::Value(a) => *a,
                Amplitude::UnitMass => 1.0,
            };
            let mut u = Field::from_values(
                grid,
                r2.iter().map(|r| Complex64::new(a * (-0.5 * r / (width * width)).exp(), 0.0)).collect(),
            )?;
            if *amplitude == Amplitude::UnitMass {
                let m = mass(&u);
                u.scale(Complex64::new(m.sqrt().recip(), 0.0));
            }
            return Ok(u);
        }
        Profile::Ring { radius, width } => {
            if grid.dim < 2 {
                return Err(Error::RingDimension);
            }
            positive("radius", *radius)?;
            positive("width", *width)?;
            r2.iter()
                .map(|r| Complex64::new((-0.5 * (r.sqrt() - radius).powi(2) / (width * width)).exp(), 0.0))
                .collect()
        }
        Profile::PlaneWave { k } => {
            if k.len() != grid.dim {
                return Err(Error::InvalidArgument(format!("k has {} components on a {}D grid", k.len(), grid.dim)));
            }
            for (a, &ka) in k.iter().enumerate() {
                let n = ka * grid.extent[a] / TAU;
                let half = (grid.points[a] / 2) as f64;
                if (n - n.round()).abs() > LATTICE_TOL * n.abs().max(1.0) || n.round() < -half || n.round() >= half {
                    return Err(Error::OffLattice);
                }
            }
            let tables: Vec<_> = (0..grid.dim).map(|a| grid.coords(a)).collect();
            grid.tabulate(&tables, |x| Complex64::from_polar(1.0, x.iter().zip(k).map(|(xi, ki)| xi * ki).sum()))
        }
    };
    Field::from_values(grid, values)
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must be positive (got {v})")))
    }
}
