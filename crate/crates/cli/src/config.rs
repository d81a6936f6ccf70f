//! TOML run configuration. Unknown keys are rejected; command-line flags
//! override file values key by key.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use inls_core::exponent::Pair;
use inls_core::solver::{make_grid, Amplitude, Grid, PotentialSpec, Profile};
use inls_core::{ParamSet, Rational};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub params: ParamsSection,
    pub grid: GridSection,
    pub run: RunSection,
    pub output: OutputSection,
    pub initial: InitialSection,
    pub picard: PicardSection,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ParamsSection {
    #[serde(rename = "N", alias = "n")]
    pub n: Option<u32>,
    pub alpha: Option<Rational>,
    pub b: Option<Rational>,
    pub s: Option<Rational>,
    pub theta: Option<Rational>,
    pub mu: Option<Rational>,
    pub epsilon: Option<Rational>,
    pub lambda: Option<i8>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSection {
    pub dim: Option<usize>,
    pub extent: Option<f64>,
    pub points: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunSection {
    #[serde(rename = "T", alias = "t")]
    pub t_final: Option<f64>,
    pub dt: Option<f64>,
    pub sample_every: Option<usize>,
    /// Multiple of the initial max modulus that counts as blow-up.
    pub amplitude_ceiling: Option<f64>,
    /// Orders of the traced homogeneous Sobolev norms.
    pub hs: Option<Vec<Rational>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Bin,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
    pub formats: Option<Vec<Format>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AmplitudeValue {
    Value(f64),
    /// Only `"unit-mass"` is accepted.
    Token(String),
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InitialSection {
    /// `gaussian`, `ring` or `plane-wave`.
    pub profile: Option<String>,
    pub width: Option<f64>,
    pub amplitude: Option<AmplitudeValue>,
    pub radius: Option<f64>,
    pub k: Option<Vec<f64>>,
    /// Relative size of a uniform complex perturbation drawn from `--seed`.
    pub noise: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PicardSection {
    pub n_time: Option<usize>,
    pub n_iter: Option<usize>,
    /// Pairs as `["q", "r"]` rational strings.
    pub pairs: Option<Vec<[Rational; 2]>>,
    /// Take `T` from the contraction condition with an empirically fitted constant.
    pub calibrate: Option<bool>,
    /// First probe time of the calibration.
    pub t_min: Option<f64>,
    /// Multiplier applied to the calibrated `T`.
    pub t_scale: Option<f64>,
}

pub const DEFAULT_EXTENT: f64 = 64.0;
pub const DEFAULT_T: f64 = 1.0;
pub const DEFAULT_DT: f64 = 1e-3;
pub const DEFAULT_SAMPLE_EVERY: usize = 10;
pub const DEFAULT_N_TIME: usize = 32;
pub const DEFAULT_N_ITER: usize = 6;
pub const DEFAULT_T_MIN: f64 = 1e-3;

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| anyhow!("config: {}", e.message().trim_end()).context(e.to_string()))
    }

    /// Exact parameters; `N`, `alpha` and `b` are required.
    pub fn param_set(&self) -> Result<ParamSet> {
        let p = &self.params;
        let n = p.n.ok_or_else(|| anyhow!("missing key params.N"))?;
        let alpha = p.alpha.clone().ok_or_else(|| anyhow!("missing key params.alpha"))?;
        let b = p.b.clone().ok_or_else(|| anyhow!("missing key params.b"))?;
        let mut ps = ParamSet::new(n, alpha, b, p.s.clone().unwrap_or_else(Rational::zero)).with_lambda(self.lambda()?);
        ps.theta = p.theta.clone();
        ps.epsilon = p.epsilon.clone();
        ps.mu = p.mu.clone();
        Ok(ps)
    }

    /// `λ`, defocusing unless set.
    pub fn lambda(&self) -> Result<i8> {
        match self.params.lambda.unwrap_or(-1) {
            l @ (1 | -1) => Ok(l),
            l => bail!("params.lambda must be +1 or -1 (got {l})"),
        }
    }

    pub fn potential(&self) -> Result<PotentialSpec> {
        let p = self.param_set()?;
        Ok(PotentialSpec::from_params(&p)?)
    }

    pub fn grid(&self) -> Result<Grid> {
        let dim = match (self.grid.dim, self.params.n) {
            (Some(d), _) => d,
            (None, Some(n)) if (1..=3).contains(&n) => n as usize,
            _ => bail!("missing key grid.dim"),
        };
        let default_points = match dim {
            1 => 512,
            2 => 128,
            _ => 32,
        };
        let extent = self.grid.extent.unwrap_or(DEFAULT_EXTENT);
        Ok(make_grid(dim, extent, self.grid.points.unwrap_or(default_points))?)
    }

    pub fn profile(&self) -> Result<Profile> {
        let i = &self.initial;
        let width = i.width.unwrap_or(1.0);
        Ok(match i.profile.as_deref().unwrap_or("gaussian") {
            "gaussian" => {
                let amplitude = match &i.amplitude {
                    None => Amplitude::Value(1.0),
                    Some(AmplitudeValue::Value(a)) => Amplitude::Value(*a),
                    Some(AmplitudeValue::Token(t)) if t == "unit-mass" => Amplitude::UnitMass,
                    Some(AmplitudeValue::Token(t)) => bail!("initial.amplitude: expected a number or \"unit-mass\", got {t:?}"),
                };
                Profile::Gaussian { width, amplitude }
            }
            "ring" => Profile::Ring { radius: i.radius.ok_or_else(|| anyhow!("missing key initial.radius"))?, width },
            "plane-wave" => Profile::PlaneWave { k: i.k.clone().ok_or_else(|| anyhow!("missing key initial.k"))? },
            other => bail!("initial.profile: unknown profile {other:?}"),
        })
    }

    pub fn t_final(&self) -> f64 {
        self.run.t_final.unwrap_or(DEFAULT_T)
    }

    pub fn dt(&self) -> f64 {
        self.run.dt.unwrap_or(DEFAULT_DT)
    }

    pub fn formats(&self) -> Vec<Format> {
        self.output.formats.clone().unwrap_or_else(|| vec![Format::Csv])
    }

    pub fn picard_pairs(&self) -> Vec<Pair> {
        match &self.picard.pairs {
            Some(list) => list.iter().map(|[q, r]| Pair::new(q.clone(), r.clone())).collect(),
            None => inls_core::solver::default_pairs(),
        }
    }
}
