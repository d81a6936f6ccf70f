//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails. Tolerances are pinned as constants below.

use std::time::{Duration, Instant};

use inls_cli::commands::{cmd_picard, cmd_scaling_test, SCALING_TOL};
use inls_cli::config::RunConfig;
use inls_core::exponent::classify_pair;
use inls_core::lemma::region::sample;
use inls_core::lemma::{global_pairs, high_dim_theta2, local_l2_theta2, low_dim_theta2};
use inls_core::solver::{
    boundary_fraction, evolve_with, l2_norm, linear_propagate, make_grid, mass, sample_initial, strichartz_norm,
    Amplitude, EvolveOptions, Field, PicardStatus, PotentialSpec, Profile,
};
use inls_core::{alpha_upper, rat, verify_lemma, Complex64, LemmaId, Pair, PairClass, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const SWEEP_PER_BRANCH: u64 = 1000;
const SWEEP_BUDGET: Duration = Duration::from_secs(10);
const UNITARITY_TOL: f64 = 1e-12;
const MASS_DRIFT_TOL: f64 = 1e-10;
const CONSERVATION_BUDGET: Duration = Duration::from_secs(5);
const ORDER_RANGE: (f64, f64) = (1.8, 2.2);
const GAUSSIAN_TOL: f64 = 1e-8;
const GAUSSIAN_BOUNDARY_TOL: f64 = 1e-12;
const PICARD_RATIO: f64 = 0.5;
const PICARD_BUDGET: Duration = Duration::from_secs(30);
const STRICHARTZ_REFINE_TOL: f64 = 1e-2;

type Check = fn() -> Verdict;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

/// Failure messages for one branch of the soundness sweep.
fn sweep_branch(id: LemmaId) -> Vec<String> {
    (0..SWEEP_PER_BRANCH)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(0xacce ^ (i << 8) ^ id as u64);
            let p = sample(id, &mut rng);
            let rep = match verify_lemma(id, &p) {
                Ok(r) => r,
                Err(e) => return Some(format!("{id} {p:?}: {e}")),
            };
            if !rep.pass {
                return Some(format!("{id} {p:?}: {:?}", rep.failures()));
            }
            None
        })
        .collect()
}

fn c1_soundness_sweep() -> Verdict {
    let t0 = Instant::now();
    let failures: Vec<String> = LemmaId::ALL.iter().flat_map(|&id| sweep_branch(id)).collect();
    let elapsed = t0.elapsed();
    let n = SWEEP_PER_BRANCH * LemmaId::ALL.len() as u64;
    let detail = format!("{n} parameter sets, {} failures, {elapsed:.2?} (budget {SWEEP_BUDGET:?})", failures.len());
    for f in failures.iter().take(3) {
        eprintln!("  {f}");
    }
    verdict(failures.is_empty() && elapsed < SWEEP_BUDGET, detail)
}

fn c2_boundary_sharpness() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut checked = 0;
    let mut bad = Vec::new();
    for _ in 0..200 {
        let b = inls_core::lemma::region::rational_in(&mut rng, &Rational::zero(), &Rational::one());
        // Local L² bound (4 − 2b)/N.
        for n in 1..=6u32 {
            let bound = (4 - &b * 2) / n as i64;
            if !local_l2_theta2(n, &bound, &b).is_zero() {
                bad.push(format!("local-l2 N={n} b={b}"));
            }
            checked += 1;
        }
        // Ḣ^s bounds: α_s for N ≥ 3, then N = 1, 2.
        for n in [1u32, 2, 3, 4, 5] {
            let s_hi = if n >= 3 { Rational::one() } else { rat(n as i64, 2) };
            let s = inls_core::lemma::region::rational_in(&mut rng, &Rational::zero(), &s_hi);
            let b_n = inls_core::lemma::region::rational_in(&mut rng, &Rational::zero(), &inls_core::b_upper(n));
            let a_s = alpha_upper(n, &s, &b_n).expect("finite bound");
            let t2 = if n >= 3 { high_dim_theta2(n, &a_s, &b_n, &s) } else { low_dim_theta2(n, &a_s, &b_n, &s) };
            if !t2.is_zero() {
                bad.push(format!("hs N={n} b={b_n} s={s}"));
            }
            checked += 1;
        }
    }
    verdict(bad.is_empty(), format!("{checked} boundary evaluations, {} nonzero", bad.len()))
}

fn c3_edp_and_reclassification() -> Verdict {
    let failures: Vec<String> = (0..SWEEP_PER_BRANCH)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(0xed9 ^ (i << 8));
            let p = sample(LemmaId::GlobalBase, &mut rng);
            let rep = match global_pairs(&p) {
                Ok(r) => r,
                Err(e) => return Some(format!("{p:?}: {e}")),
            };
            let inv = |name: &str| rep.pair(name).map(|pr| pr.q.recip().expect("finite q"));
            let (Some(qhat), Some(ahat), Some(atilde)) = (inv("(qhat, rhat)"), inv("(ahat, rhat)"), inv("(atilde, rhat)")) else {
                return Some(format!("missing pair in {p:?}"));
            };
            if ahat + atilde != qhat * 2 {
                return Some(format!("EDP fails at {p:?}"));
            }
            let eps = rep.params.eps();
            for pr in &rep.pairs {
                let s = match &pr.claimed_class {
                    PairClass::HsAdmissible(s) | PairClass::HsDualAdmissible(s) => s.clone(),
                    _ => Rational::zero(),
                };
                if classify_pair(&Pair::new(pr.q.clone(), pr.r.clone()), p.n, &s, &eps) != pr.claimed_class {
                    return Some(format!("{} does not re-classify at {p:?}", pr.name));
                }
            }
            None
        })
        .collect();
    for f in failures.iter().take(3) {
        eprintln!("  {f}");
    }
    verdict(failures.is_empty(), format!("{SWEEP_PER_BRANCH} GlobalBase sets, {} failures", failures.len()))
}

fn gaussian(extent: f64, points: usize, amplitude: f64) -> Field {
    let g = make_grid(1, extent, points).unwrap();
    sample_initial(&Profile::Gaussian { width: 1.0, amplitude: Amplitude::Value(amplitude) }, &g).unwrap()
}

fn conservation_spec() -> PotentialSpec {
    PotentialSpec::new(0.25, 3.0, -1).unwrap()
}

fn c4_unitarity_and_mass() -> Verdict {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let g = make_grid(1, 64.0, 512).unwrap();
    let mut worst_unitarity = 0.0f64;
    for _ in 0..20 {
        let v = (0..g.len()).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let u = Field::from_values(&g, v).unwrap();
        let t = rng.gen_range(0.0..10.0);
        worst_unitarity = worst_unitarity.max(((l2_norm(&linear_propagate(&u, t)) - l2_norm(&u)) / l2_norm(&u)).abs());
    }
    let opts = EvolveOptions { sample_every: 10, ..EvolveOptions::default() };
    let (_, diag) = evolve_with(&gaussian(64.0, 512, 1.0), 1.0, 1e-3, &conservation_spec(), &opts).unwrap();
    let drift = diag.relative_mass_drift();
    let elapsed = t0.elapsed();
    verdict(
        worst_unitarity < UNITARITY_TOL && drift < MASS_DRIFT_TOL && diag.steps == 1000 && elapsed < CONSERVATION_BUDGET,
        format!(
            "L2 change {worst_unitarity:.1e} (tol {UNITARITY_TOL:.0e}), mass drift {drift:.1e} over {} steps (tol {MASS_DRIFT_TOL:.0e}), {elapsed:.2?}",
            diag.steps
        ),
    )
}

fn c5_energy_order() -> Verdict {
    let h = 1e-3;
    let drifts: Vec<f64> = [4usize, 2, 1]
        .iter()
        .map(|&m| {
            // Sample every 0.04 at each step size so the drifts compare the same times.
            let opts = EvolveOptions { sample_every: 40 / m, ..EvolveOptions::default() };
            let (_, diag) = evolve_with(&gaussian(64.0, 512, 1.0), 1.0, m as f64 * h, &conservation_spec(), &opts).unwrap();
            diag.energy_drift()
        })
        .collect();
    let orders = [(drifts[0] / drifts[1]).log2(), (drifts[1] / drifts[2]).log2()];
    let ok = orders.iter().all(|o| (ORDER_RANGE.0..=ORDER_RANGE.1).contains(o));
    verdict(
        ok,
        format!(
            "drifts {:.2e} {:.2e} {:.2e} at dt = 4h, 2h, h (h = {h:.0e}); orders {:.3} {:.3} (range {:?})",
            drifts[0], drifts[1], drifts[2], orders[0], orders[1], ORDER_RANGE
        ),
    )
}

fn c6_free_gaussian() -> Verdict {
    let t = 0.1;
    let u0 = gaussian(64.0, 512, 1.0);
    let num = linear_propagate(&u0, t);
    let z = Complex64::new(1.0, 2.0 * t);
    let coords = u0.grid.coords(0);
    let exact = coords.iter().map(|&x| z.powf(-0.5) * (-(x * x) / (2.0 * z)).exp()).collect();
    let exact = Field::from_values(&u0.grid, exact).unwrap();
    let rel = l2_norm(&num.sub(&exact)) / l2_norm(&exact);
    let boundary = boundary_fraction(&u0).max(boundary_fraction(&exact));
    verdict(
        rel < GAUSSIAN_TOL && boundary < GAUSSIAN_BOUNDARY_TOL,
        format!("relative error {rel:.1e} (tol {GAUSSIAN_TOL:.0e}), boundary mass {boundary:.1e} (tol {GAUSSIAN_BOUNDARY_TOL:.0e})"),
    )
}

fn c7_scaling() -> Verdict {
    // s_c = 1/4 keeps s_c − 1/2 above −N/2.
    let cfg = RunConfig::parse("[params]\nN = 1\nalpha = \"7\"\nb = \"1/4\"\n[grid]\nextent = 40.0\npoints = 256\n").unwrap();
    let orders = ["sc-1/2", "sc", "sc+1/2"].map(String::from);
    let rep = cmd_scaling_test(&cfg, &[rat(1, 2), rat(2, 1)], &orders, 2, 0).unwrap();
    let worst = rep.rows.iter().map(|r| r.rel_error).fold(0.0, f64::max);
    let at_sc = rep.rows.iter().filter(|r| r.s == rep.s_c).map(|r| (r.measured - 1.0).abs()).fold(0.0, f64::max);
    verdict(
        rep.pass && rep.rows.len() == 6 && at_sc < SCALING_TOL,
        format!("{} rows, worst relative error {worst:.2e}, |ratio − 1| at s_c {at_sc:.2e} (tol {SCALING_TOL:.0e})", rep.rows.len()),
    )
}

fn c8_picard() -> Verdict {
    let t0 = Instant::now();
    let text = "[params]\nN = 1\nalpha = \"1\"\nb = \"1/4\"\n[grid]\nextent = 40.0\npoints = 256\n\
                [initial]\namplitude = 0.2\n[picard]\ncalibrate = true\nn_iter = 6\n";
    let mut cfg = RunConfig::parse(text).unwrap();
    let short = cmd_picard(&cfg, None, 0).unwrap();
    cfg.picard.t_scale = Some(100.0);
    let long = cmd_picard(&cfg, None, 0).unwrap();
    let elapsed = t0.elapsed();
    let r = &short.picard.ratios;
    let ok_short = r.len() >= 5 && r[1..=4].iter().all(|&x| x < PICARD_RATIO);
    let ok_long = long.picard.status == PicardStatus::NoContraction && long.picard.message == "no contraction at this T";
    let cal = short.calibration.as_ref().expect("calibrated");
    verdict(
        ok_short && ok_long && elapsed < PICARD_BUDGET,
        format!(
            "c = {:.3}, T = {:.3}, ratios {:?}; at 100T: {:?}; {elapsed:.2?}",
            cal.c,
            cal.t,
            r.iter().map(|x| (x * 1000.0).round() / 1000.0).collect::<Vec<_>>(),
            long.picard.message
        ),
    )
}

fn c9_strichartz() -> Verdict {
    let spec = PotentialSpec::new(0.25, 3.0, -1).unwrap();
    let trajectory = |dt: f64| {
        let opts = EvolveOptions { sample_every: 1, keep_trajectory: true, ..EvolveOptions::default() };
        let (_, d) = evolve_with(&gaussian(64.0, 512, 1.0), 0.5, dt, &spec, &opts).unwrap();
        d.trajectory
    };
    let coarse = trajectory(2e-3);
    let fine = trajectory(1e-3);
    let energy_pair = Pair::new(Rational::inf(), rat(2, 1));
    let sup = strichartz_norm(&coarse, &energy_pair);
    let max_mass = coarse.iter().map(|(_, u)| mass(u).sqrt()).fold(0.0, f64::max);
    let exact = sup == max_mass;
    let mut worst = 0.0f64;
    for pair in [Pair::new(rat(8, 1), rat(4, 1)), Pair::new(rat(4, 1), Rational::inf()), Pair::new(rat(6, 1), rat(6, 1))] {
        let (a, b) = (strichartz_norm(&coarse, &pair), strichartz_norm(&fine, &pair));
        worst = worst.max(((a - b) / b).abs());
    }
    verdict(
        exact && worst < STRICHARTZ_REFINE_TOL,
        format!("(inf, 2) norm equals max sqrt(mass): {exact}; finite-q change under dt halving {worst:.1e} (tol {STRICHARTZ_REFINE_TOL:.0e})"),
    )
}

fn main() {
    let criteria: [(&str, Check); 9] = [
        ("exponent soundness sweep", c1_soundness_sweep),
        ("boundary sharpness", c2_boundary_sharpness),
        ("EDP identity and re-classification", c3_edp_and_reclassification),
        ("unitarity and mass conservation", c4_unitarity_and_mass),
        ("energy drift convergence order", c5_energy_order),
        ("free Gaussian oracle", c6_free_gaussian),
        ("scaling invariance at s_c", c7_scaling),
        ("Picard contraction", c8_picard),
        ("discrete Strichartz norms", c9_strichartz),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        println!("criterion {}: {} {name}: {}", i + 1, if v.pass { "PASS" } else { "FAIL" }, v.detail);
        failed += usize::from(!v.pass);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
