use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use credal::ToleranceSpec;
use credal_cli::{cmd_compare, cmd_cp, cmd_decide, cmd_ds_threshold, cmd_replicate, Example};

#[derive(Parser)]
#[command(name = "credal", version, about = "Decisions from sequences of credal levels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Explore the file's credal levels and report the mandated act.
    Decide {
        file: PathBuf,
        /// Emit the full report as JSON.
        #[arg(long)]
        json: bool,
        /// Largest tolerable level error (overrides the file).
        #[arg(long, conflicts_with = "odds_derived")]
        tolerance: Option<f64>,
        /// Derive the tolerable error from the problem's odds.
        #[arg(long)]
        odds_derived: bool,
    },
    /// Show every decision criterion at one level.
    Compare {
        file: PathBuf,
        /// Level index (default: the first level).
        #[arg(long)]
        level: Option<usize>,
        /// Hurwicz optimism weight.
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        /// Apply the secondary criteria to every act, not just the maximal set.
        #[arg(long)]
        all_acts: bool,
    },
    /// Run one of the built-in berry examples and check the results.
    Replicate {
        #[arg(value_parser = parse_example)]
        example: Example,
    },
    /// Two-sided Clopper-Pearson interval.
    Cp { successes: u64, trials: u64, confidence: f64 },
    /// Discount rate at which the combined belief in G reaches a target.
    DsThreshold {
        /// Masses `g,ng` of the undiscounted source.
        #[arg(long)]
        m1: String,
        /// Masses `g,ng` of the discounted source.
        #[arg(long)]
        m2: String,
        #[arg(long)]
        target: f64,
    },
}

fn parse_example(s: &str) -> Result<Example, String> {
    s.parse()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Decide { file, json, tolerance, odds_derived } => {
            let spec = match (tolerance, odds_derived) {
                (Some(e), _) => Some(ToleranceSpec::Explicit(e)),
                (None, true) => Some(ToleranceSpec::OddsDerived),
                (None, false) => None,
            };
            cmd_decide(&file, spec, json)
        }
        Command::Compare { file, level, alpha, all_acts } => cmd_compare(&file, level, alpha, all_acts),
        Command::Replicate { example } => cmd_replicate(example),
        Command::Cp { successes, trials, confidence } => cmd_cp(successes, trials, confidence),
        Command::DsThreshold { m1, m2, target } => cmd_ds_threshold(&m1, &m2, target),
    };
    match result {
        Ok(out) => {
            print!("{}", out.text);
            let _ = std::io::stdout().flush();
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
