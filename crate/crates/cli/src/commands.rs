//! Subcommand bodies. Each returns a serializable report whose content alone
//! determines the exit code.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use inls_core::exponent::{hs_dual_window, hs_window, l2_window, Pair, PairClass};
use inls_core::lemma::{global_deriv_system, local_hs_system, local_l2_system};
use inls_core::solver::io::{dump_field, write_csv};
use inls_core::solver::{
    calibrate_contraction, evolve_with, picard_iterate, sample_initial, scaling_table, Calibration, EvolveOptions,
    Field, PicardReport, PicardStatus, RunStatus,
};
use inls_core::{classify_pair, critical_index, verify_lemma, Error, LemmaId, LemmaReport, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::{Format, RunConfig, DEFAULT_N_ITER, DEFAULT_N_TIME, DEFAULT_SAMPLE_EVERY, DEFAULT_T_MIN};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BLOW_UP: i32 = 3;
pub const EXIT_NON_FINITE: i32 = 4;

/// Relative error allowed in every scaling-test row.
pub const SCALING_TOL: f64 = 1e-2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ClassArg {
    Any,
    L2,
    Hs,
    HsDual,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowCheck {
    pub window: String,
    pub contains_r: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckPairReport {
    pub q: Rational,
    pub r: Rational,
    #[serde(rename = "N")]
    pub n: u32,
    pub s: Rational,
    pub eps: Rational,
    pub requested: ClassArg,
    pub class: String,
    pub reason: Option<String>,
    /// `2/q`.
    pub scaling_lhs: Rational,
    /// `N/2 − N/r`, shifted by `∓s` for the Ḣ^{±s} classes.
    pub scaling_rhs: Rational,
    pub window_check: WindowCheck,
    pub admissible: bool,
}

impl CheckPairReport {
    pub fn exit_code(&self) -> i32 {
        if self.admissible {
            EXIT_OK
        } else {
            EXIT_FAIL
        }
    }
}

pub fn cmd_check_pair(q: &Rational, r: &Rational, n: u32, s: &Rational, eps: &Rational, requested: ClassArg) -> Result<CheckPairReport> {
    if n == 0 {
        bail!("N must be positive");
    }
    let pair = Pair::new(q.clone(), r.clone());
    let class = classify_pair(&pair, n, s, eps);
    let nr = Rational::int(n as i64);
    let scaling_lhs = q.recip()? * 2;
    let base_rhs = &nr / 2 - &nr * r.recip()?;
    let (label, reason, scaling_rhs, window) = match &class {
        PairClass::L2Admissible => ("L2Admissible".to_string(), None, base_rhs, Some(l2_window(n))),
        PairClass::HsAdmissible(s) => (format!("HsAdmissible({s})"), None, base_rhs - s, hs_window(n, s, eps)),
        PairClass::HsDualAdmissible(s) => (format!("HsDualAdmissible({s})"), None, base_rhs + s, hs_dual_window(n, s, eps)),
        PairClass::NotAdmissible(why) => {
            let w = match requested {
                ClassArg::Hs => hs_window(n, s, eps),
                ClassArg::HsDual => hs_dual_window(n, s, eps),
                _ => Some(l2_window(n)),
            };
            ("NotAdmissible".to_string(), Some(why.clone()), base_rhs, w)
        }
    };
    let window_check = match window {
        Some(w) => WindowCheck { window: w.to_string(), contains_r: w.contains(r) },
        None => WindowCheck { window: "none".into(), contains_r: false },
    };
    let admissible = match requested {
        ClassArg::Any => class.is_admissible(),
        ClassArg::L2 => class == PairClass::L2Admissible,
        ClassArg::Hs => matches!(class, PairClass::HsAdmissible(_)),
        ClassArg::HsDual => matches!(class, PairClass::HsDualAdmissible(_)),
    };
    Ok(CheckPairReport {
        q: q.clone(),
        r: r.clone(),
        n,
        s: s.clone(),
        eps: eps.clone(),
        requested,
        class: label,
        reason,
        scaling_lhs,
        scaling_rhs,
        window_check,
        admissible,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaCmdReport {
    pub lemma: String,
    pub pass: bool,
    pub error: Option<String>,
    pub report: Option<LemmaReport>,
}

impl LemmaCmdReport {
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            EXIT_OK
        } else {
            EXIT_FAIL
        }
    }
}

/// Names accepted by `lemma`: every catalog id plus the dispatching
/// `local-hs` and `global-deriv`.
pub fn lemma_names() -> Vec<&'static str> {
    let mut names: Vec<_> = LemmaId::ALL.iter().map(|id| id.cli_name()).collect();
    names.extend(["local-hs", "global-deriv"]);
    names
}

pub fn cmd_lemma(name: &str, cfg: &RunConfig) -> Result<LemmaCmdReport> {
    let p = cfg.param_set()?;
    let result: std::result::Result<LemmaReport, Error> = match name {
        "local-hs" => local_hs_system(&p),
        "global-deriv" => global_deriv_system(&p),
        _ => {
            let id: LemmaId = name.parse().map_err(|_| anyhow!("unknown lemma {name:?}; expected one of {}", lemma_names().join(", ")))?;
            verify_lemma(id, &p)
        }
    };
    Ok(match result {
        Ok(rep) => LemmaCmdReport { lemma: name.into(), pass: rep.pass, error: None, report: Some(rep) },
        Err(e) => LemmaCmdReport { lemma: name.into(), pass: false, error: Some(e.to_string()), report: None },
    })
}

/// Initial data from the config, with an optional seeded complex perturbation.
pub fn initial_field(cfg: &RunConfig, seed: u64) -> Result<Field> {
    let mut u = sample_initial(&cfg.profile()?, &cfg.grid()?)?;
    if let Some(noise) = cfg.initial.noise.filter(|&x| x != 0.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let scale = noise * u.max_abs();
        for z in &mut u.values {
            z.re += scale * rng.gen_range(-1.0..1.0);
            z.im += scale * rng.gen_range(-1.0..1.0);
        }
    }
    Ok(u)
}

/// Fields that have no meaning after a non-finite step are `None`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulateReport {
    /// `completed`, `suspected-blow-up` or `non-finite`.
    pub status: String,
    pub error: Option<String>,
    #[serde(rename = "T")]
    pub t_final: f64,
    pub dt: f64,
    pub steps: usize,
    pub seed: u64,
    pub regularization: String,
    pub initial_mass: f64,
    pub final_mass: Option<f64>,
    pub relative_mass_drift: Option<f64>,
    pub energy_drift: Option<f64>,
    pub boundary_fraction: Option<f64>,
    pub boundary_flagged: bool,
    pub blow_up_time: Option<f64>,
    pub files: Vec<String>,
}

impl SimulateReport {
    pub fn exit_code(&self) -> i32 {
        match self.status.as_str() {
            "completed" => EXIT_OK,
            "suspected-blow-up" => EXIT_BLOW_UP,
            _ => EXIT_NON_FINITE,
        }
    }
}

pub fn cmd_simulate(cfg: &RunConfig, seed: u64) -> Result<SimulateReport> {
    let spec = cfg.potential()?;
    let u0 = initial_field(cfg, seed)?;
    let opts = EvolveOptions {
        sample_every: cfg.run.sample_every.unwrap_or(DEFAULT_SAMPLE_EVERY),
        amplitude_ceiling: cfg.run.amplitude_ceiling.unwrap_or(inls_core::solver::step::DEFAULT_AMPLITUDE_CEILING),
        hs_orders: cfg.run.hs.iter().flatten().map(Rational::to_f64).collect(),
        keep_trajectory: false,
    };
    let (t_final, dt) = (cfg.t_final(), cfg.dt());
    let (u, diag) = match evolve_with(&u0, t_final, dt, &spec, &opts) {
        Ok(r) => r,
        Err(Error::NonFinite { step }) => {
            return Ok(SimulateReport {
                status: "non-finite".into(),
                error: Some(format!("non-finite value at step {step}")),
                t_final,
                dt,
                steps: step,
                seed,
                regularization: spec.describe_regularization(&u0.grid),
                initial_mass: inls_core::solver::mass(&u0),
                final_mass: None,
                relative_mass_drift: None,
                energy_drift: None,
                boundary_fraction: None,
                boundary_flagged: true,
                blow_up_time: None,
                files: Vec::new(),
            })
        }
        Err(e) => return Err(e.into()),
    };
    let mut files = Vec::new();
    if let Some(dir) = &cfg.output.dir {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for f in cfg.formats() {
            files.extend(write_output(f, dir, &u, &diag, t_final)?);
        }
    }
    let (status, blow_up_time) = match diag.status {
        RunStatus::Completed => ("completed", None),
        RunStatus::SuspectedBlowUp { time, .. } => ("suspected-blow-up", Some(time)),
    };
    Ok(SimulateReport {
        status: status.into(),
        error: None,
        t_final,
        dt: diag.dt,
        steps: diag.steps,
        seed,
        regularization: diag.regularization.clone(),
        initial_mass: diag.mass[0],
        final_mass: diag.mass.last().copied(),
        relative_mass_drift: Some(diag.relative_mass_drift()),
        energy_drift: Some(diag.energy_drift()),
        boundary_fraction: Some(diag.boundary_fraction),
        boundary_flagged: diag.boundary_flagged,
        blow_up_time,
        files,
    })
}

fn write_output(f: Format, dir: &Path, u: &Field, diag: &inls_core::solver::Diagnostics, t: f64) -> Result<Vec<String>> {
    Ok(match f {
        Format::Csv => {
            let path = dir.join("diagnostics.csv");
            write_csv(diag, std::io::BufWriter::new(fs::File::create(&path)?))?;
            vec![path.display().to_string()]
        }
        Format::Json => {
            let path = dir.join("diagnostics.json");
            fs::write(&path, serde_json::to_string_pretty(diag)? + "\n")?;
            vec![path.display().to_string()]
        }
        Format::Bin => {
            dump_field(u, t, dir, "final")?;
            vec![dir.join("final.bin").display().to_string(), dir.join("final.json").display().to_string()]
        }
    })
}

/// An order `s` given as a rational or relative to `s_c` (`sc`, `sc+1/2`, `sc-1/2`).
pub fn parse_order(token: &str, sc: &Rational) -> Result<Rational> {
    let t = token.trim();
    match t.strip_prefix("sc") {
        Some("") => Ok(sc.clone()),
        Some(rest) => {
            let (sign, off) = rest.split_at(1);
            let off: Rational = off.parse()?;
            match sign {
                "+" => Ok(sc + off),
                "-" => Ok(sc - off),
                _ => bail!("bad order {token:?}"),
            }
        }
        None => Ok(t.parse()?),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingRowReport {
    pub delta: Rational,
    pub s: Rational,
    pub measured: f64,
    pub predicted: f64,
    pub rel_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub s_c: Rational,
    pub refine: usize,
    pub tolerance: f64,
    pub rows: Vec<ScalingRowReport>,
    pub pass: bool,
}

impl ScalingReport {
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            EXIT_OK
        } else {
            EXIT_FAIL
        }
    }
}

pub fn cmd_scaling_test(cfg: &RunConfig, deltas: &[Rational], orders: &[String], refine: usize, seed: u64) -> Result<ScalingReport> {
    let p = cfg.param_set()?;
    let sc = critical_index(p.n, &p.alpha, &p.b)?;
    let grid = cfg.grid()?;
    if grid.dim != p.n as usize {
        bail!("grid.dim = {} does not match params.N = {}", grid.dim, p.n);
    }
    let orders = orders.iter().map(|t| parse_order(t, &sc)).collect::<Result<Vec<_>>>()?;
    let u0 = initial_field(cfg, seed)?;
    let spec = cfg.potential()?;
    let dl: Vec<f64> = deltas.iter().map(Rational::to_f64).collect();
    let sl: Vec<f64> = orders.iter().map(Rational::to_f64).collect();
    let table = scaling_table(&u0, &dl, &sl, &spec, refine)?;
    let rows: Vec<ScalingRowReport> = table
        .iter()
        .enumerate()
        .map(|(i, r)| ScalingRowReport {
            delta: deltas[i / orders.len()].clone(),
            s: orders[i % orders.len()].clone(),
            measured: r.measured,
            predicted: r.predicted,
            rel_error: r.rel_error,
        })
        .collect();
    let pass = rows.iter().all(|r| r.rel_error < SCALING_TOL);
    Ok(ScalingReport { s_c: sc, refine, tolerance: SCALING_TOL, rows, pass })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PicardCmdReport {
    pub calibration: Option<Calibration>,
    pub theta1: Option<Rational>,
    pub theta2: Option<Rational>,
    pub t_scale: f64,
    pub picard: PicardReport,
    pub pass: bool,
}

impl PicardCmdReport {
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            EXIT_OK
        } else {
            EXIT_FAIL
        }
    }
}

pub fn cmd_picard(cfg: &RunConfig, n_iter: Option<usize>, seed: u64) -> Result<PicardCmdReport> {
    let spec = cfg.potential()?;
    let u0 = initial_field(cfg, seed)?;
    let pairs = cfg.picard_pairs();
    let n_time = cfg.picard.n_time.unwrap_or(DEFAULT_N_TIME);
    let n_iter = n_iter.or(cfg.picard.n_iter).unwrap_or(DEFAULT_N_ITER);
    let t_scale = cfg.picard.t_scale.unwrap_or(1.0);
    let (calibration, theta1, theta2, t_base) = if cfg.picard.calibrate.unwrap_or(false) {
        let p = cfg.param_set()?;
        let local = local_l2_system(&p)?;
        let (t1, t2) = (local.theta.t1.clone(), local.theta.t2.clone());
        let t_min = cfg.picard.t_min.unwrap_or(DEFAULT_T_MIN);
        let cal = calibrate_contraction(&u0, &spec, &p.alpha, &t1, &t2, t_min, n_time, &pairs)?;
        let t = cal.t;
        (Some(cal), Some(t1), Some(t2), t)
    } else {
        (None, None, None, cfg.t_final())
    };
    let picard = picard_iterate(&u0, t_base * t_scale, n_time, n_iter, &spec, &pairs)?;
    let pass = picard.status == PicardStatus::Contracting;
    Ok(PicardCmdReport { calibration, theta1, theta2, t_scale, picard, pass })
}
