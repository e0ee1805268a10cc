//! `relspin` command-line front end.
//!
//! Exit codes: 0 on success, 2 on usage or input errors, 3 when a numerical
//! invariant is violated (output is still written first).

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{ScanArgs, ScanConfig};

#[derive(Debug, Parser)]
#[command(
    name = "relspin",
    version,
    about = "Relativistic spin operators, spin algebra and Bell correlations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Commutator defect of the restricted spin triple along a momentum grid.
    ///
    /// Columns: p_mag, defect. Exits 3 if the pl defect decreases along the grid.
    CommutatorScan(ScanArgs),
    /// Positive eigenvalue of a·S over momentum and angle between axis and momentum.
    ///
    /// Columns: p_mag, theta, s_plus. Exits 3 if a value misses the closed form by more than --tol.
    EigenScan(ScanArgs),
    /// Optimized and closed-form maximal CHSH value for a moving singlet.
    ///
    /// Both particles carry momentum |p|·dir. Columns: p_mag, kind, chsh_opt, chsh_oracle,
    /// converged. Rows are written first, then the command exits 3 if any row did not converge.
    BellScan(ScanArgs),
    /// Seeded joint outcome counts for a singlet measured along two axes.
    ///
    /// Both particles carry momentum --p. Columns: outcome_a, outcome_b, count, probability.
    Sample(ScanArgs),
    /// Expectation table, operator reconstruction and algebra check.
    ///
    /// JSON keys: source, table, operators, lemma2. CSV columns: component, state, value,
    /// followed by verdict and defect rows. Exits 3 if the two algebra verdicts disagree.
    Table(ScanArgs),
}

type Runner = fn(&ScanConfig) -> anyhow::Result<commands::Outcome>;

const EXIT_USAGE: u8 = 2;
const EXIT_INVARIANT: u8 = 3;

fn run(cmd: &Command) -> Result<commands::Outcome, anyhow::Error> {
    let (args, default_tol, f): (&ScanArgs, f64, Runner) = match cmd {
        Command::CommutatorScan(a) => (a, 1e-12, commands::commutator_scan),
        Command::EigenScan(a) => (a, 1e-12, commands::eigen_scan),
        Command::BellScan(a) => (a, 1e-6, commands::bell_scan),
        Command::Sample(a) => (a, 1e-9, commands::sample),
        Command::Table(a) => (a, 1e-9, commands::table),
    };
    let cfg = ScanConfig::resolve(args, default_tol)?;
    if matches!(cmd, Command::Sample(_)) && cfg.shots == 0 {
        anyhow::bail!("shots must be at least 1");
    }
    let outcome = f(&cfg)?;
    output::emit(&outcome.text, cfg.out.as_deref())?;
    Ok(outcome)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli.command) {
        Ok(outcome) if outcome.violations.is_empty() => ExitCode::SUCCESS,
        Ok(outcome) => {
            for v in &outcome.violations {
                eprintln!("invariant violated: {v}");
            }
            ExitCode::from(EXIT_INVARIANT)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
