//! Library side of the `inls-lab` binary: argument parsing, config merging
//! and dispatch. Every command prints one JSON report on stdout.

pub mod commands;
pub mod config;

use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use inls_core::Rational;
use serde::Serialize;

use commands::ClassArg;
use config::{Format, RunConfig};

const AFTER_HELP: &str = "\
Precedence: command-line flags override values from --config, which override built-in defaults.
Rationals are written as p/q, integers or `inf`.
Exit codes: 0 success, 1 check failed, 2 usage or config error, 3 suspected blow-up, 4 non-finite values.
Set INLS_LAB_THREADS to size the worker pool.";

#[derive(Debug, Parser)]
#[command(name = "inls-lab", version, about = "Exponent checks, lemma verification and simulations for the inhomogeneous NLS", after_help = AFTER_HELP)]
pub struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Output directory for simulation files.
    #[arg(long, global = true, value_name = "DIR")]
    pub output: Option<PathBuf>,
    /// Output file format; repeat for several.
    #[arg(long, global = true, value_enum)]
    pub format: Vec<Format>,
    /// Seed for the optional initial-data perturbation.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify an exponent pair (q, r).
    CheckPair {
        #[arg(long)]
        q: Rational,
        #[arg(long)]
        r: Rational,
        #[arg(long = "n", value_name = "N")]
        n: u32,
        #[arg(long, default_value = "0")]
        s: Rational,
        #[arg(long, default_value = "1/1000")]
        eps: Rational,
        /// Require a specific class.
        #[arg(long, value_enum, default_value = "any")]
        class: ClassArg,
    },
    /// Verify one lemma's exponent system for the given parameters.
    Lemma {
        /// Catalog name, or `local-hs` / `global-deriv` to dispatch on dimension.
        name: String,
        #[command(flatten)]
        params: ParamFlags,
    },
    /// Run the split-step solver.
    Simulate {
        #[command(flatten)]
        params: ParamFlags,
        #[command(flatten)]
        run: RunFlags,
    },
    /// Compare rescaled Sobolev norms with their predicted powers of delta.
    ScalingTest {
        #[command(flatten)]
        params: ParamFlags,
        #[command(flatten)]
        run: RunFlags,
        /// Scaling factors.
        #[arg(long, num_args = 1.., default_values = ["1/2", "2"])]
        delta: Vec<Rational>,
        /// Orders as rationals or `sc`, `sc+1/2`, `sc-1/2`.
        #[arg(long, num_args = 1.., allow_hyphen_values = true, default_values = ["sc-1/2", "sc", "sc+1/2"])]
        s: Vec<String>,
        /// Grid refinement factor for the comparison.
        #[arg(long, default_value_t = 2)]
        refine: usize,
    },
    /// Iterate the Duhamel map and report contraction ratios.
    Picard {
        #[command(flatten)]
        params: ParamFlags,
        #[command(flatten)]
        run: RunFlags,
        /// Number of Picard iterates.
        #[arg(long)]
        n_iter: Option<usize>,
        /// Take T from the contraction condition.
        #[arg(long)]
        calibrate: bool,
        /// Multiplier applied to the calibrated T.
        #[arg(long)]
        t_scale: Option<f64>,
    },
}

/// Equation parameters; each overrides the `[params]` key of the same name.
#[derive(Debug, Default, Args)]
pub struct ParamFlags {
    #[arg(long = "n", value_name = "N")]
    pub n: Option<u32>,
    #[arg(long)]
    pub alpha: Option<Rational>,
    #[arg(long)]
    pub b: Option<Rational>,
    /// Sobolev index s.
    #[arg(long, value_name = "S")]
    pub s_index: Option<Rational>,
    #[arg(long)]
    pub theta: Option<Rational>,
    #[arg(long)]
    pub mu: Option<Rational>,
    #[arg(long)]
    pub epsilon: Option<Rational>,
    /// +1 focusing, -1 defocusing.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<i8>,
}

/// Grid and time-stepping overrides.
#[derive(Debug, Default, Args)]
pub struct RunFlags {
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub extent: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long = "T", value_name = "T")]
    pub t_final: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub sample_every: Option<usize>,
    /// Multiple of the initial max modulus treated as blow-up.
    #[arg(long)]
    pub amplitude_ceiling: Option<f64>,
}

impl ParamFlags {
    fn apply(&self, c: &mut RunConfig) {
        let p = &mut c.params;
        set(&mut p.n, self.n);
        set(&mut p.alpha, self.alpha.clone());
        set(&mut p.b, self.b.clone());
        set(&mut p.s, self.s_index.clone());
        set(&mut p.theta, self.theta.clone());
        set(&mut p.mu, self.mu.clone());
        set(&mut p.epsilon, self.epsilon.clone());
        set(&mut p.lambda, self.lambda);
    }
}

impl RunFlags {
    fn apply(&self, c: &mut RunConfig) {
        set(&mut c.grid.dim, self.dim);
        set(&mut c.grid.extent, self.extent);
        set(&mut c.grid.points, self.points);
        set(&mut c.run.t_final, self.t_final);
        set(&mut c.run.dt, self.dt);
        set(&mut c.run.sample_every, self.sample_every);
        set(&mut c.run.amplitude_ceiling, self.amplitude_ceiling);
    }
}

fn set<T>(slot: &mut Option<T>, flag: Option<T>) {
    if flag.is_some() {
        *slot = flag;
    }
}

/// Exit code plus the JSON text to print.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub json: String,
}

impl Outcome {
    fn of<T: Serialize>(code: i32, report: &T) -> Result<Self> {
        Ok(Outcome { code, json: serde_json::to_string_pretty(report)? })
    }

    /// Report for a usage or config error.
    pub fn usage_error(err: &anyhow::Error) -> Self {
        let json = serde_json::json!({ "error": format!("{err:#}") });
        Outcome { code: commands::EXIT_USAGE, json: serde_json::to_string_pretty(&json).expect("plain JSON") }
    }
}

/// Config file, then global flags, then per-command flags.
fn merged(cli: &Cli, params: &ParamFlags, run: Option<&RunFlags>) -> Result<RunConfig> {
    let mut c = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    set(&mut c.output.dir, cli.output.clone());
    if !cli.format.is_empty() {
        c.output.formats = Some(cli.format.clone());
    }
    params.apply(&mut c);
    if let Some(r) = run {
        r.apply(&mut c);
    }
    Ok(c)
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::CheckPair { q, r, n, s, eps, class } => {
            let rep = commands::cmd_check_pair(q, r, *n, s, eps, *class)?;
            Outcome::of(rep.exit_code(), &rep)
        }
        Command::Lemma { name, params } => {
            let rep = commands::cmd_lemma(name, &merged(cli, params, None)?)?;
            Outcome::of(rep.exit_code(), &rep)
        }
        Command::Simulate { params, run } => {
            let rep = commands::cmd_simulate(&merged(cli, params, Some(run))?, cli.seed)?;
            Outcome::of(rep.exit_code(), &rep)
        }
        Command::ScalingTest { params, run, delta, s, refine } => {
            let rep = commands::cmd_scaling_test(&merged(cli, params, Some(run))?, delta, s, *refine, cli.seed)?;
            Outcome::of(rep.exit_code(), &rep)
        }
        Command::Picard { params, run, n_iter, calibrate, t_scale } => {
            let mut c = merged(cli, params, Some(run))?;
            if *calibrate {
                c.picard.calibrate = Some(true);
            }
            set(&mut c.picard.t_scale, *t_scale);
            let rep = commands::cmd_picard(&c, *n_iter, cli.seed)?;
            Outcome::of(rep.exit_code(), &rep)
        }
    }
}
