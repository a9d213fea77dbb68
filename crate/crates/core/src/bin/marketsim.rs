//! Scenario runner CLI.
//!
//! `run` executes a scenario file and writes a report, `check` parses
//! without executing, `fuzz` generates random workloads and hunts for
//! invariant violations.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use multichain_sim::batch::run_batch;
use multichain_sim::fuzz::fuzz_run;
use multichain_sim::scenario::{parse_scenario, run_scenario};

#[derive(Parser)]
#[command(
    name = "marketsim",
    about = "Deterministic multichain NFT marketplace simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a scenario file and emit a report.
    Run {
        scenario: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Abort on the first invariant violation.
        #[arg(long)]
        strict: bool,
        /// Write the report into this directory instead of stdout.
        #[arg(long)]
        report_dir: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Parse a scenario file without executing it.
    Check { scenario: PathBuf },
    /// Run randomized workloads and check invariants after every step.
    Fuzz {
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of independent runs (seeds seed..seed+runs).
        #[arg(long, default_value_t = 1)]
        runs: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Cmd::Run {
            scenario,
            seed,
            strict,
            report_dir,
            format,
        } => {
            let name = scenario
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "scenario".to_string());
            let source = match std::fs::read_to_string(&scenario) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("cannot read {}: {e}", scenario.display());
                    return ExitCode::from(3);
                }
            };
            let report = match run_scenario(&source, &name, seed, strict) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("{e}");
                    return ExitCode::from(3);
                }
            };
            let (rendered, ext) = match format {
                Format::Text => (report.to_text(), "txt"),
                Format::Structured => (report.to_structured(), "json"),
            };
            if let Some(dir) = report_dir {
                if let Err(e) = std::fs::create_dir_all(&dir) {
                    eprintln!("cannot create {}: {e}", dir.display());
                    return ExitCode::from(3);
                }
                let path = dir.join(format!("{name}.{ext}"));
                if let Err(e) = std::fs::write(&path, rendered) {
                    eprintln!("cannot write {}: {e}", path.display());
                    return ExitCode::from(3);
                }
                println!("report written to {}", path.display());
            } else {
                print!("{rendered}");
            }
            ExitCode::from(report.exit_status)
        }
        Cmd::Check { scenario } => {
            let source = match std::fs::read_to_string(&scenario) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("cannot read {}: {e}", scenario.display());
                    return ExitCode::from(3);
                }
            };
            match parse_scenario(&source) {
                Ok(cmds) => {
                    println!("ok: {} commands", cmds.len());
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("{e}");
                    ExitCode::from(3)
                }
            }
        }
        Cmd::Fuzz { steps, seed, runs } => {
            let seeds: Vec<u64> = (seed..seed + runs).collect();
            let outcomes = run_batch(&seeds, |&s| fuzz_run(s, steps));
            let mut bad = false;
            for o in outcomes {
                match o.violation {
                    Some(v) => {
                        bad = true;
                        println!(
                            "seed {}: VIOLATION after {} steps: {v}",
                            o.seed, o.steps_run
                        );
                    }
                    None => println!("seed {}: ok ({} steps)", o.seed, o.steps_run),
                }
            }
            if bad {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
    }
}
