//! `hschur`: batch verification of asymptotic Schur orthogonality and
//! braiding convergence for Heisenberg groups over local fields.
//!
//! Exit codes: 0 = all experiments PASS, 1 = at least one FAIL (or oracle
//! mismatch), 2 = invalid configuration, 3 = resource cap exceeded.

mod config;
mod oracle_cmd;
mod plot;
mod runner;

use clap::{Parser, Subcommand};
use hschur_core::{Caps, Error, Verdict};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "hschur",
    about = "Folner-box verification of Schur orthogonality for Heisenberg groups over R and Q_p",
    version
)]
struct Cli {
    /// Number of worker threads (default: all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Output directory for reports and plots
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Seed recorded in the report (reserved for randomized probes)
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every experiment in a suite config and write report.json,
    /// report.csv and one SVG convergence plot per experiment
    Run { config: PathBuf },
    /// Re-evaluate each experiment with the brute-force oracle and compare
    Oracle { config: PathBuf },
    /// List the supported experiment kinds
    ListExperiments,
}

const EXIT_FAIL: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_CAP: u8 = 3;

fn caps_from_env() -> Caps {
    match std::env::var("HSCHUR_CAP_MB")
        .ok()
        .and_then(|s| s.parse::<u64>().ok())
    {
        Some(mb) => Caps::from_cap_mb(mb),
        None => Caps::default(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .is_err()
        {
            eprintln!("warning: thread pool already initialized; --jobs ignored");
        }
    }
    let caps = caps_from_env();
    match &cli.command {
        Command::ListExperiments => {
            println!("schur_diag          diagonal Schur pairing for pi_t, limit mod(t)^-n <f1,f3> conj(<f2,f4>)");
            println!("schur_cross_tt      cross pairing pi_t1 vs pi_t2 (t1 != t2), limit 0");
            println!("schur_cross_pi_rho  cross pairing pi_t vs a one-dimensional character, limit 0");
            println!("schur_onedim        pairing of two one-dimensional characters (1 if equal, else 0)");
            println!("braiding_pairing    tensor-pair operator average, limit mod(t)^-n <flip(phi1), phi2>");
            println!("ctemp_condition_ii  conjugation-robustness gap over sandwich boxes, limit 0");
            ExitCode::SUCCESS
        }
        Command::Run { config } => {
            let suite = match config::load(config) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("invalid config: {e:#}");
                    return ExitCode::from(EXIT_CONFIG);
                }
            };
            let reports = match runner::run_suite(&suite, &caps) {
                Ok(r) => r,
                Err(e) => return report_core_error(e),
            };
            if let Err(e) = runner::write_outputs(&cli.out, &suite, &reports, cli.seed) {
                eprintln!("failed to write outputs: {e:#}");
                return ExitCode::from(EXIT_CONFIG);
            }
            let mut all_pass = true;
            for r in &reports {
                let status = if r.verdict == Verdict::Pass { "PASS" } else { "FAIL" };
                println!("{:<30} {status}", r.id);
                if r.verdict != Verdict::Pass {
                    all_pass = false;
                    for note in &r.notes {
                        println!("    note: {note}");
                    }
                }
            }
            if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAIL)
            }
        }
        Command::Oracle { config } => {
            let suite = match config::load(config) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("invalid config: {e:#}");
                    return ExitCode::from(EXIT_CONFIG);
                }
            };
            let rows = match oracle_cmd::oracle_suite(&suite, &caps) {
                Ok(r) => r,
                Err(e) => return report_core_error(e),
            };
            let json = serde_json::json!({
                "suite": suite.name,
                "rows": rows,
            });
            if let Err(e) = runner::write_atomic(
                &cli.out,
                "oracle.json",
                serde_json::to_string_pretty(&json).unwrap().as_bytes(),
            ) {
                eprintln!("failed to write outputs: {e:#}");
                return ExitCode::from(EXIT_CONFIG);
            }
            let mut all_match = true;
            for row in &rows {
                let status = if row.matches { "MATCH" } else { "MISMATCH" };
                println!(
                    "{:<30} r={:<10} {status} ({})",
                    row.experiment_id, row.r, row.note
                );
                all_match &= row.matches;
            }
            if all_match {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAIL)
            }
        }
    }
}

fn report_core_error(e: Error) -> ExitCode {
    match e {
        Error::ResourceCap(msg) => {
            eprintln!("resource cap exceeded: {msg}");
            ExitCode::from(EXIT_CAP)
        }
        other => {
            eprintln!("invalid configuration for this engine: {other}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}
