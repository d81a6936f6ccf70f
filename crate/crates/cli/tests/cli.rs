//! End-to-end runs of the `inls-lab` binary: exit codes, JSON shape and
//! report round-trips.

use std::path::Path;
use std::process::{Command, Output};

use inls_cli::commands::{CheckPairReport, LemmaCmdReport, PicardCmdReport, ScalingReport, SimulateReport};
use serde::de::DeserializeOwned;
use serde::Serialize;

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_inls-lab")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

/// Parses stdout into `T` and checks that re-serializing gives the same JSON.
fn report<T: Serialize + DeserializeOwned>(out: &Output) -> T {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let rep: T = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
    let a: serde_json::Value = serde_json::from_str(&text).unwrap();
    let b = serde_json::to_value(&rep).unwrap();
    assert_eq!(a, b, "report does not round-trip");
    rep
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn check_pair_classes_and_exit_codes() {
    let out = lab(&["check-pair", "--q", "inf", "--r", "2", "--n", "3"]);
    assert_eq!(code(&out), 0);
    let rep: CheckPairReport = report(&out);
    assert_eq!(rep.class, "L2Admissible");
    assert_eq!(rep.scaling_lhs, rep.scaling_rhs);

    let out = lab(&["check-pair", "--q", "2", "--r", "6", "--n", "3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(report::<CheckPairReport>(&out).class, "L2Admissible");

    let out = lab(&["check-pair", "--q", "2", "--r", "7", "--n", "3"]);
    assert_eq!(code(&out), 1);
    let rep: CheckPairReport = report(&out);
    assert_eq!(rep.class, "NotAdmissible");
    assert!(!rep.window_check.contains_r);
}

#[test]
fn check_pair_parse_errors_exit_2() {
    assert_eq!(code(&lab(&["check-pair", "--q", "two", "--r", "6", "--n", "3"])), 2);
    assert_eq!(code(&lab(&["check-pair", "--q", "1/0", "--r", "6", "--n", "3"])), 2);
    assert_eq!(code(&lab(&["check-pair", "--r", "6", "--n", "3"])), 2);
}

#[test]
fn lemma_local_l2_theta() {
    let out = lab(&["lemma", "local-l2", "--n", "2", "--b", "1/2", "--alpha", "1"]);
    assert_eq!(code(&out), 0);
    let rep: LemmaCmdReport = report(&out);
    let theta = rep.report.unwrap().theta;
    assert_eq!(theta.t2.to_string(), "1/7");
}

#[test]
fn lemma_failures_exit_1() {
    let base = ["lemma", "global-base", "--n", "3", "--b", "1/2", "--alpha", "5/4", "--s-index", "1/2"];
    let out = lab(&base);
    assert_eq!(code(&out), 0);

    let mut args = base.to_vec();
    args.extend(["--theta", "5"]);
    let out = lab(&args);
    assert_eq!(code(&out), 1);
    let rep: LemmaCmdReport = report(&out);
    assert!(rep.error.unwrap().contains("theta outside window"));

    // alpha_s = 3 for N = 3, b = 1/2, s = 1.
    let out = lab(&["lemma", "local-hs", "--n", "3", "--b", "1/2", "--alpha", "3", "--s-index", "1"]);
    assert_eq!(code(&out), 1);
    assert!(!report::<LemmaCmdReport>(&out).pass);
}

#[test]
fn lemma_usage_errors_exit_2() {
    assert_eq!(code(&lab(&["lemma", "no-such-lemma", "--n", "2", "--b", "1/2", "--alpha", "1"])), 2);
    assert_eq!(code(&lab(&["lemma", "local-l2", "--n", "2", "--b", "1/2"])), 2);
}

#[test]
fn simulate_zero_data_and_output_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "zero.toml",
        "[params]\nN = 1\nalpha = \"2\"\nb = \"1/4\"\n[grid]\npoints = 64\n[run]\nT = 0.01\n[initial]\namplitude = 0.0\n",
    );
    let out = lab(&["--config", &cfg, "simulate"]);
    assert_eq!(code(&out), 0);
    let rep: SimulateReport = report(&out);
    assert_eq!(rep.final_mass, Some(0.0));
    assert!(rep.files.is_empty());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);

    let out_dir = dir.path().join("out");
    let out = lab(&[
        "--config", &cfg, "--output", out_dir.to_str().unwrap(), "--format", "csv", "--format", "json", "--format", "bin",
        "simulate",
    ]);
    assert_eq!(code(&out), 0);
    let rep: SimulateReport = report(&out);
    assert_eq!(rep.files.len(), 4);
    for name in ["diagnostics.csv", "diagnostics.json", "final.bin", "final.json"] {
        assert!(out_dir.join(name).exists(), "{name}");
    }
    let csv = std::fs::read_to_string(out_dir.join("diagnostics.csv")).unwrap();
    assert!(csv.starts_with("time,mass,energy,l2"));
}

#[test]
fn simulate_blow_up_and_non_finite_codes() {
    let dir = tempfile::tempdir().unwrap();
    let focusing = write(
        dir.path(),
        "focus.toml",
        "[params]\nN = 1\nalpha = \"6\"\nb = \"1/4\"\nlambda = 1\n[grid]\nextent = 20.0\npoints = 1024\n\
         [run]\nT = 0.5\ndt = 1e-4\namplitude_ceiling = 1.5\n[initial]\namplitude = 3.0\n",
    );
    let out = lab(&["--config", &focusing, "simulate"]);
    assert_eq!(code(&out), 3);
    let rep: SimulateReport = report(&out);
    assert_eq!(rep.status, "suspected-blow-up");
    assert!(rep.blow_up_time.unwrap() < 0.5);

    let huge = write(
        dir.path(),
        "huge.toml",
        "[params]\nN = 1\nalpha = \"6\"\nb = \"1/4\"\n[grid]\npoints = 64\n[run]\nT = 0.01\n[initial]\namplitude = 1e100\n",
    );
    let out = lab(&["--config", &huge, "simulate"]);
    assert_eq!(code(&out), 4);
    assert_eq!(report::<SimulateReport>(&out).status, "non-finite");
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.toml", "[params]\nalpah = \"1\"\n");
    let out = lab(&["--config", &bad, "simulate"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("alpah"));
    assert_eq!(code(&lab(&["--config", "/nonexistent/run.toml", "simulate"])), 2);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "p.toml", "[params]\nN = 2\nalpha = \"3\"\nb = \"1/2\"\n");
    // alpha = 3 is above the local bound; the flag brings it back inside.
    assert_eq!(code(&lab(&["--config", &cfg, "lemma", "local-l2"])), 1);
    assert_eq!(code(&lab(&["--config", &cfg, "lemma", "local-l2", "--alpha", "1"])), 0);
}

#[test]
fn seeded_noise_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "noise.toml",
        "[params]\nN = 1\nalpha = \"2\"\nb = \"1/4\"\n[grid]\npoints = 64\n[run]\nT = 0.01\n[initial]\nnoise = 0.1\n",
    );
    let mass = |seed: &str| report::<SimulateReport>(&lab(&["--config", &cfg, "--seed", seed, "simulate"])).initial_mass;
    assert_eq!(mass("7"), mass("7"));
    assert_ne!(mass("7"), mass("8"));
}

#[test]
fn scaling_test_passes_on_resolved_grid() {
    let out = lab(&["scaling-test", "--n", "1", "--alpha", "7", "--b", "1/4", "--extent", "40", "--points", "256"]);
    assert_eq!(code(&out), 0);
    let rep: ScalingReport = report(&out);
    assert_eq!(rep.rows.len(), 6);
    assert_eq!(rep.s_c.to_string(), "1/4");
}

#[test]
fn picard_contracts_then_fails_at_long_times() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "picard.toml",
        "[params]\nN = 1\nalpha = \"1\"\nb = \"1/4\"\n[grid]\nextent = 40.0\npoints = 256\n\
         [initial]\namplitude = 0.2\n[picard]\ncalibrate = true\n",
    );
    let out = lab(&["--config", &cfg, "picard"]);
    assert_eq!(code(&out), 0);
    let rep: PicardCmdReport = report(&out);
    assert!(rep.picard.max_ratio() < 0.5);

    let out = lab(&["--config", &cfg, "picard", "--t-scale", "100"]);
    assert_eq!(code(&out), 1);
    let rep: PicardCmdReport = report(&out);
    assert_eq!(rep.picard.message, "no contraction at this T");
}

#[test]
fn help_states_precedence() {
    let out = lab(&["--help"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("flags override values from --config"));
}
