//! Experiment runner: every verification suite as a command producing a
//! JSON (or CSV) report.

pub mod config;
pub mod report;
pub mod suites;

use std::time::Instant;

pub use config::{Command, ExperimentConfig, FieldTag, Format};
pub use report::{Report, Sample, Summary};

/// Runs the suite named by `config.command`.
pub fn run(config: &ExperimentConfig) -> plueckerlab::Result<Report> {
    let start = Instant::now();
    let mut b = report::Builder::default();
    let suite = match config.command {
        Command::TaylorCheck => suites::taylor_check,
        Command::ExpandCheck => suites::expand_check,
        Command::MultiplicityBound => suites::multiplicity_bound,
        Command::Theorem31 => suites::theorem31,
        Command::Lemma33 => suites::lemma33,
        Command::Prop32 => suites::prop32,
        Command::Thm38 => suites::thm38,
        Command::P1Divisor => suites::p1_divisor,
        Command::P1Detmap => suites::p1_detmap,
        Command::P1Lambda => suites::p1_lambda,
        Command::P1NoForm => suites::p1_no_form,
    };
    suite(config, &mut b)?;
    Ok(b.finish(config, start.elapsed().as_secs_f64() * 1e3))
}
