use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lampspec_core::cli_io::{cmd_algebra_checks, cmd_spectrum, cmd_verify, init_threads, Outcome, RunConfig};
use lampspec_core::Result;

/// Spectra of lamplighter walks and absorbing walks on percolation clusters.
#[derive(Parser)]
#[command(name = "lampspec", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compare lamplighter return probabilities with annealed cluster return
    /// probabilities at p = 1/|H| (moments.csv, report.json).
    Verify(Options),
    /// Point spectrum and annealed spectral measure from finite animals
    /// (lambda.csv, ids.json, animals.json).
    Spectrum(Options),
    /// Projection, intertwining and diagonalization checks (algebra.json).
    Algebra(Options),
}

#[derive(Args)]
struct Options {
    /// `key = value` file applied before the flags below.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Z, Z2-square (alias Z2), Z2-tri, Zn:<m>, free:<k> or tree:<d> (degree d+1).
    #[arg(long)]
    group: Option<String>,
    /// Order of the cyclic lamp group.
    #[arg(long)]
    lamp: Option<String>,
    /// Percolation parameter, as a fraction or decimal.
    #[arg(long)]
    p: Option<String>,
    /// site or bond.
    #[arg(long)]
    mode: Option<String>,
    /// Largest moment index.
    #[arg(long = "N")]
    n: Option<String>,
    #[arg(long)]
    max_animal: Option<String>,
    /// 0 disables Monte Carlo.
    #[arg(long)]
    mc_samples: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// rational or double.
    #[arg(long)]
    arith: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<String>,
}

impl Options {
    fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            cfg.apply_file(&std::fs::read_to_string(path)?)?;
        }
        let flags = [
            ("group", &self.group),
            ("lamp", &self.lamp),
            ("p", &self.p),
            ("mode", &self.mode),
            ("N", &self.n),
            ("max-animal", &self.max_animal),
            ("mc-samples", &self.mc_samples),
            ("seed", &self.seed),
            ("arith", &self.arith),
            ("out", &self.out),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                cfg.set(key, v)?;
            }
        }
        Ok(cfg)
    }
}

fn report(outcome: &Outcome) {
    for line in &outcome.summary {
        println!("{line}");
    }
    for f in &outcome.files {
        println!("wrote {}", f.display());
    }
}

fn run(cli: Cli) -> Result<i32> {
    init_threads()?;
    match cli.command {
        Command::Verify(opts) => {
            let outcome = cmd_verify(&opts.resolve()?)?;
            report(&outcome);
            Ok(outcome.exit_code())
        }
        Command::Algebra(opts) => {
            let outcome = cmd_algebra_checks(&opts.resolve()?)?;
            report(&outcome);
            Ok(outcome.exit_code())
        }
        Command::Spectrum(opts) => {
            for f in cmd_spectrum(&opts.resolve()?)? {
                println!("wrote {}", f.display());
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
