//! `qmc`: command-line front end for the quantum Markov chain toolkit.
//!
//! Results go to stdout as JSON or CSV. Failures print one JSON line
//! `{"kind": ..., "detail": ...}` on stderr and exit with 2 when the channel is
//! not irreducible, 1 otherwise. `QMC_THREADS` bounds the trial parallelism.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use commands::{ReportLevel, SimulateArgs, TangentSource};
use config::{IsoSource, RunConfig};
use qmc::QmcError;

#[derive(Debug, Parser)]
#[command(name = "qmc", version, about = "Stationary output analysis of quantum Markov chains")]
struct Cli {
    #[command(flatten)]
    cfg: RunConfig,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Spectral profile: period, stationary state, peripheral modes, residuals.
    Analyze {
        #[command(flatten)]
        src: IsoSource,
    },
    /// Decide output equivalence of two isometries and print a witness.
    Equiv {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Split a tangent into gauge and identifiable parts, with its modes.
    Tangent {
        #[command(flatten)]
        src: IsoSource,
        #[command(flatten)]
        tan: TangentSource,
    },
    /// Finite-n quantum Fisher information against its linear rate.
    Qfi {
        #[command(flatten)]
        src: IsoSource,
        #[command(flatten)]
        tan: TangentSource,
        /// Comma separated output lengths.
        #[arg(long, default_value = "1,2,5,10,20,50,100,200,400")]
        n: String,
        /// Basis state the system starts in.
        #[arg(long, default_value_t = 0)]
        initial: usize,
    },
    /// Asymptotic variance of a local observable and the finite-window values.
    Variance {
        #[command(flatten)]
        src: IsoSource,
        /// Observable matrix JSON on `block` units; defaults to the family's standard one.
        #[arg(long)]
        observable: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        block: usize,
        #[arg(long, default_value_t = 64)]
        n_max: usize,
    },
    /// Finite-n overlaps against the Gaussian prediction on n = 2^e.
    Converge {
        #[command(flatten)]
        src: IsoSource,
        /// Seed of the two random identifiable directions.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        n_min_exp: u32,
        #[arg(long, default_value_t = 12)]
        n_max_exp: u32,
        /// Keep the trivial phase from the pure-phase component.
        #[arg(long)]
        no_phase_correction: bool,
    },
    /// Limit-model quantities on a grid of tangent scales.
    LimitModel {
        #[command(flatten)]
        src: IsoSource,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "0.25,0.5,1,1.5,2")]
        scales: String,
    },
    /// Sample measurement records and report block averages per trial.
    Simulate(SimulateArgs),
    /// Analysis bundle for one of the qubit families.
    Example {
        #[arg(long)]
        model: String,
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long, value_enum, default_value = "summary")]
        report: ReportLevel,
    },
}

fn run(cli: &Cli) -> qmc::Result<()> {
    let cfg = &cli.cfg;
    cfg.tol()?;
    match &cli.cmd {
        Command::Analyze { src } => commands::cmd_analyze(cfg, src),
        Command::Equiv { a, b, tol } => commands::cmd_equiv(cfg, a, b, *tol),
        Command::Tangent { src, tan } => commands::cmd_tangent(cfg, src, tan),
        Command::Qfi { src, tan, n, initial } => commands::cmd_qfi(cfg, src, tan, n, *initial),
        Command::Variance { src, observable, block, n_max } => {
            commands::cmd_variance(cfg, src, observable, *block, *n_max)
        }
        Command::Converge { src, seed, n_min_exp, n_max_exp, no_phase_correction } => {
            commands::cmd_converge(cfg, src, *seed, *n_min_exp, *n_max_exp, *no_phase_correction)
        }
        Command::LimitModel { src, seed, scales } => commands::cmd_limit_model(cfg, src, *seed, scales),
        Command::Simulate(a) => commands::cmd_simulate(cfg, a),
        Command::Example { model, theta, report } => commands::cmd_example(cfg, model, *theta, *report),
    }
}

fn error_line(kind: &str, detail: String) {
    eprintln!("{}", json!({ "kind": kind, "detail": detail }));
}

fn init_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("QMC_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| format!("QMC_THREADS must be a positive integer, got '{v}'"))?;
    if n == 0 {
        return Err("QMC_THREADS must be positive".into());
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            error_line("Usage", e.to_string().trim().replace('\n', " "));
            return ExitCode::from(1);
        }
    };
    if let Err(msg) = init_threads() {
        error_line("InvalidInput", msg);
        return ExitCode::from(1);
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if let QmcError::NotIrreducible { check, detail, eigenvalues } = &e {
                let verdict = json!({
                    "irreducible": false,
                    "check": format!("{check:?}"),
                    "detail": detail,
                    "eigenvalues": eigenvalues,
                    "settings": cli.cfg.settings(),
                });
                println!("{}", serde_json::to_string_pretty(&verdict).unwrap_or_default());
            }
            error_line(e.kind(), e.to_string());
            if matches!(e, QmcError::NotIrreducible { .. }) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
