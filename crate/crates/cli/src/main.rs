use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use plueckerlab::bundle_pairs::PairDescription;
use plueckerlab::scalars::DEFAULT_PRIME;
use plueckerlab_cli::{run, Command, ExperimentConfig, FieldTag, Format};

/// Exact verification suites for Plücker forms and bundle pairs on P^1.
#[derive(Parser, Debug)]
#[command(name = "plueckerlab", version)]
struct Cli {
    /// Suite to run: taylor-check, expand-check, multiplicity-bound,
    /// theorem31, lemma33, prop32, thm38, p1-divisor, p1-detmap, p1-lambda,
    /// p1-no-form
    command: Command,
    /// Degree r (restricts the suite to one case)
    #[arg(long = "r")]
    r: Option<usize>,
    /// Number of slots m
    #[arg(long = "m")]
    m: Option<usize>,
    /// Splitting type d_1,…,d_r of a bundle on P^1
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    splitting: Option<Vec<i64>>,
    /// JSON pair description {"r","m","splitting","field"}
    #[arg(long)]
    pair: Option<PathBuf>,
    #[arg(long, default_value = "fp")]
    field: FieldTag,
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    prime: u64,
    #[arg(long, env = "PLUECKERLAB_SEED", default_value_t = 0)]
    seed: u64,
    /// Samples per check (defaults differ per suite)
    #[arg(long)]
    trials: Option<usize>,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: Format,
    /// Print per-check tallies to stderr
    #[arg(short, long)]
    verbose: bool,
}

fn config(cli: Cli) -> Result<ExperimentConfig, String> {
    let pair = match &cli.pair {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            Some(PairDescription::from_json(&text).map_err(|e| e.to_string())?)
        }
        None => None,
    };
    // a pair file fixes the field
    let field = match &pair {
        Some(d) => d.field.parse().map_err(|e: plueckerlab::Error| e.to_string())?,
        None => cli.field,
    };
    Ok(ExperimentConfig {
        command: cli.command,
        r: cli.r,
        m: cli.m,
        splitting: cli.splitting,
        field,
        prime: cli.prime,
        seed: cli.seed,
        trials: cli.trials,
        pair,
        out: cli.out,
        format: cli.format,
        verbose: cli.verbose,
    })
}

fn main() -> ExitCode {
    let cfg = match config(Cli::parse()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let report = match run(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {}: {e}", cfg.command);
            return ExitCode::from(2);
        }
    };
    if cfg.verbose {
        for (check, case, p, f) in report.tally() {
            eprintln!("{check:<24} {case:<20} pass {p:>5}  fail {f:>3}");
        }
    }
    let text = match cfg.format {
        Format::Json => report.to_json() + "\n",
        Format::Csv => report.to_csv(),
    };
    match &cfg.out {
        Some(path) => {
            if let Err(e) = fs::write(path, text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    eprintln!(
        "{}: {} passed, {} failed ({:.1} s)",
        report.command,
        report.summary.passes,
        report.summary.failures,
        report.wall_time_ms / 1e3
    );
    if report.success() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
