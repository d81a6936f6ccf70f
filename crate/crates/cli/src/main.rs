use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use inls_cli::{run, Cli, Outcome};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("INLS_LAB_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("inls-lab: ignoring INLS_LAB_THREADS: {e}");
        }
    }
    let outcome = run(&cli).unwrap_or_else(|e| {
        eprintln!("inls-lab: {e:#}");
        Outcome::usage_error(&e)
    });
    // A closed pipe downstream is not an error of ours.
    let _ = writeln!(std::io::stdout().lock(), "{}", outcome.json);
    ExitCode::from(outcome.code as u8)
}
