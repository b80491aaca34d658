//! Batch CLI: parse a problem file, run geometry queries or optimality
//! certifications, emit one JSON report.
//!
//! Exit codes: 0 = completed (regardless of verdict), 2 = input error,
//! 3 = internal contract violation.

mod problem;
mod report;

use clap::{Parser, Subcommand};
use std::process::ExitCode;
use vargeo::error::Error;
use vargeo::optimality::CheckMode;
use vargeo::rat::{parse_rat_vec, RatVec};

#[derive(Parser)]
#[command(name = "vargeo", version, about = "Exact variational geometry and second-order optimality certification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute tangent/normal/second-order objects at a candidate point
    Geometry {
        #[arg(long)]
        problem: String,
        /// Candidate point, comma-separated rationals "p/q,..."
        #[arg(long)]
        point: String,
        /// One of: tangent, normal_dir, second_tangent, curvature
        #[arg(long)]
        query: String,
        /// Tangent direction of the constraint set (comma-separated)
        #[arg(long)]
        direction: Option<String>,
        /// Covector for curvature queries (comma-separated)
        #[arg(long)]
        covector: Option<String>,
        #[arg(long)]
        out: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Certify second-order necessary or sufficient conditions
    Check {
        #[arg(long)]
        problem: String,
        #[arg(long)]
        point: String,
        /// "necessary" or "sufficient"
        #[arg(long)]
        mode: String,
        /// Optional semicolon-separated direction list "a,b;c,d"
        #[arg(long)]
        directions: Option<String>,
        /// Random critical directions sampled per stratum
        #[arg(long, default_value_t = 2)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also run the quadratic-growth grid oracle from the fixtures
        #[arg(long)]
        with_oracle: bool,
        #[arg(long)]
        out: Option<String>,
    },
    /// Run the sampling oracles against the exact results for the file's
    /// fixtures
    Validate {
        #[arg(long)]
        problem: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<String>,
    },
}

fn parse_point(s: &str) -> Result<RatVec, Error> {
    parse_rat_vec(s).map_err(Error::Parse)
}

fn parse_direction_list(s: &str) -> Result<Vec<RatVec>, Error> {
    s.split(';')
        .map(|d| parse_point(d.trim()))
        .collect::<Result<Vec<_>, _>>()
}

fn emit(report: serde_json::Value, out: Option<&str>) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    match out {
        Some(path) => std::fs::write(path, text.as_bytes())
            .map_err(|e| Error::Parse(format!("cannot write `{path}`: {e}"))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn load(path: &str) -> Result<problem::ProblemFile, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read `{path}`: {e}")))?;
    problem::parse_problem(&text)
}

fn run() -> Result<i32, Error> {
    let cli = Cli::parse();
    match cli.command {
        Command::Geometry {
            problem,
            point,
            query,
            direction,
            covector,
            out,
            seed,
        } => {
            let file = load(&problem)?;
            let args = report::GeometryArgs {
                point: parse_point(&point)?,
                query,
                direction: direction.as_deref().map(parse_point).transpose()?,
                covector: covector.as_deref().map(parse_point).transpose()?,
            };
            let (rep, code) = report::run_geometry(&file, &args, seed);
            emit(rep, out.as_deref())?;
            Ok(code)
        }
        Command::Check {
            problem,
            point,
            mode,
            directions,
            samples,
            seed,
            with_oracle,
            out,
        } => {
            let file = load(&problem)?;
            let mode = match mode.as_str() {
                "necessary" => CheckMode::Necessary,
                "sufficient" => CheckMode::Sufficient,
                other => return Err(Error::Parse(format!("unknown mode `{other}`"))),
            };
            let args = report::CheckArgs {
                point: parse_point(&point)?,
                mode,
                directions: directions
                    .as_deref()
                    .map(parse_direction_list)
                    .transpose()?,
                samples,
                seed,
                with_oracle,
            };
            let (rep, code) = report::run_check(&file, &args);
            emit(rep, out.as_deref())?;
            Ok(code)
        }
        Command::Validate { problem, seed, out } => {
            let file = load(&problem)?;
            let (rep, code) = report::run_validate(&file, seed);
            emit(rep, out.as_deref())?;
            Ok(code)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::ContractViolation(_) => 3,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}
