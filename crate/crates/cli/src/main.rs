//! `holonomy` command-line tool.
//!
//! Representations travel between subcommands as representation files on
//! standard streams, so `holonomy polygon --genus 2 --cone-angle 2 | holonomy
//! euler` works. Exit status is 0 on success, 1 on a domain error and 2 on a
//! usage error.

mod commands;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use holonomy::cosets::DEFAULT_MAX_COSETS;
use holonomy::isom2::{Tolerance, DEFAULT_CLASSIFY_TOLERANCE};
use holonomy::suite::RunReport;

#[derive(Parser, Debug)]
#[command(
    name = "holonomy",
    version,
    about = "Surface-group representations into PSL(2,R)"
)]
pub struct Cli {
    /// Width of the parabolic band around |trace| = 2.
    #[arg(long, global = true, default_value_t = DEFAULT_CLASSIFY_TOLERANCE)]
    tolerance: f64,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = ReportFormat::Text)]
    report: ReportFormat,

    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify a single matrix `a b c d`.
    Classify {
        /// Matrix file; standard input when omitted or `-`.
        file: Option<String>,
    },
    /// Euler number of a representation file.
    Euler { file: Option<String> },
    /// Reduce a word with Dehn's algorithm.
    Reduce {
        #[arg(long)]
        genus: usize,
        /// Word tokens such as `a1 b1 a1^-1 b1^-1`.
        word: Vec<String>,
    },
    /// Classify the images of all reduced words up to a length.
    Scan {
        file: Option<String>,
        #[arg(long)]
        max_length: usize,
        /// Stop after the first length with a non-hyperbolic image.
        #[arg(long)]
        stop_early: bool,
    },
    /// Homomorphism files.
    Hom {
        #[command(subcommand)]
        action: HomAction,
    },
    /// Index of the subgroup generated by the given words.
    Index {
        #[arg(long)]
        genus: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_COSETS)]
        max_cosets: usize,
        /// File with one subgroup generator word per line.
        #[arg(long)]
        generators_file: Option<String>,
        /// One quoted word per subgroup generator.
        #[arg(required_unless_present = "generators_file")]
        generators: Vec<String>,
    },
    /// Regular 4g-gon with one cone point; prints its holonomy.
    Polygon {
        #[arg(long)]
        genus: usize,
        /// Total vertex angle as a multiple of 2π, or `complete`.
        #[arg(long, default_value = "complete")]
        cone_angle: String,
    },
    /// Geometrisability verdict for base ∘ hom.
    Gate {
        #[arg(long)]
        base: String,
        #[arg(long)]
        hom: String,
        #[arg(long, default_value_t = 6)]
        max_length: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_COSETS)]
        max_cosets: usize,
    },
    /// Rebuild a worked example and check its numbers.
    Examples(ExamplesArgs),
}

#[derive(Subcommand, Debug)]
pub enum HomAction {
    /// Check that the relator maps to the identity.
    Validate { file: Option<String> },
    /// Apply a homomorphism to a word of the source group.
    Apply { file: String, word: Vec<String> },
}

#[derive(Args, Debug)]
pub struct ExamplesArgs {
    /// One of octagon-complete, octagon-right, tan, doubling, handle-attach,
    /// ex4-scan, or `all`.
    pub name: String,
    #[arg(long)]
    pub genus: Option<usize>,
    #[arg(long)]
    pub handles: Option<usize>,
    #[arg(long, default_value_t = 6)]
    pub max_length: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_COSETS)]
    pub max_cosets: usize,
}

/// What a subcommand produced. `ok == false` exits with status 1 after the
/// output is written.
pub struct Outcome {
    pub text: String,
    pub json: serde_json::Value,
    pub ok: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let tolerance = Tolerance::with_classify(cli.tolerance);
    let start = Instant::now();
    let outcome = match commands::run(&cli.command, tolerance) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let mut stdout = std::io::stdout().lock();
    let written = match cli.report {
        ReportFormat::Text => stdout.write_all(outcome.text.as_bytes()),
        ReportFormat::Json => {
            let report = RunReport {
                command: std::env::args().collect(),
                tolerances: tolerance.into(),
                results: outcome.json,
                wall_time_seconds: start.elapsed().as_secs_f64(),
            };
            let text = serde_json::to_string_pretty(&report).expect("reports serialise");
            writeln!(stdout, "{text}")
        }
    };
    if written.is_err() {
        return ExitCode::from(1);
    }
    if outcome.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
