use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;
use thomae_cli::render::{error_line, render};
use thomae_cli::{malformed, run_job, CommandKind, Format, JobSpec, ResultRecord, Settings, Status};
use thomae_core::Rational;

/// Evaluate, transform and certify ₂F₁ / ₃F₂ hypergeometric series.
#[derive(Parser, Debug)]
#[command(name = "thomae", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Relative series tolerance
    #[arg(long, global = true)]
    tol_rel: Option<f64>,
    /// Absolute series tolerance
    #[arg(long, global = true)]
    tol_abs: Option<f64>,
    /// Term budget per series
    #[arg(long, global = true)]
    max_terms: Option<u64>,
    /// Absolute error target for quadrature
    #[arg(long, global = true)]
    quad_error: Option<f64>,
    /// Maximum step-halving levels for quadrature
    #[arg(long, global = true)]
    quad_levels: Option<u32>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for --random sampling
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Route ₃F₂ evaluation through the representation with the largest excess
    #[arg(long, global = true)]
    auto_transform: bool,
    /// Report the raw partial sum instead of the extrapolated one
    #[arg(long, global = true)]
    no_tail_correction: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate ₃F₂(a,b,c;d,e;1) or ₂F₁(a,b;c;x)
    Eval {
        /// a,b,c,d,e
        #[arg(long = "3f2", value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "f21", required_unless_present = "f21")]
        f32: Option<Vec<f64>>,
        /// a,b,c
        #[arg(long = "2f1", value_delimiter = ',', allow_hyphen_values = true)]
        f21: Option<Vec<f64>>,
        /// Argument of ₂F₁ (default 1)
        #[arg(long, allow_hyphen_values = true, requires = "f21")]
        x: Option<f64>,
    },
    /// Map parameters through a transformation and evaluate the result
    Transform {
        #[arg(value_enum)]
        kind: TransformArg,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        params: Vec<f64>,
    },
    /// Check an identity on given or sampled parameters
    Verify {
        #[arg(value_enum)]
        identity: IdentityArg,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        params: Option<Vec<f64>>,
        #[arg(long, allow_hyphen_values = true)]
        x: Option<f64>,
        #[command(flatten)]
        exact: ExactArgs,
        /// Number of sampled parameter sets
        #[arg(long)]
        random: Option<u32>,
    },
    /// Certify every stage of the Thomae derivation chain
    Prove {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        params: Vec<f64>,
        /// Allowed spread between any two stages
        #[arg(long)]
        chain_tol: Option<f64>,
    },
    /// Evaluate a closed-form summation
    ClosedForm {
        #[arg(value_enum)]
        name: ClosedFormArg,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        params: Option<Vec<f64>>,
        #[command(flatten)]
        exact: ExactArgs,
    },
    /// Run line-delimited JSON jobs from a file
    Batch { file: PathBuf },
}

#[derive(Args, Debug)]
struct ExactArgs {
    #[arg(long)]
    n: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<Rational>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<Rational>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<Rational>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TransformArg {
    Thomae,
    Kummer,
    Euler2,
    Auto,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum IdentityArg {
    Thomae,
    Kummer,
    Gauss,
    Saalschutz,
    Euler2,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ClosedFormArg {
    Gauss,
    Saalschutz,
}

fn name_of<T: ValueEnum>(v: T) -> String {
    v.to_possible_value().expect("no skipped variants").get_name().to_string()
}

fn settings(g: &GlobalArgs) -> Settings {
    let mut s = Settings::default();
    s.tol_rel = g.tol_rel.unwrap_or(s.tol_rel);
    s.tol_abs = g.tol_abs.unwrap_or(s.tol_abs);
    s.max_terms = g.max_terms.unwrap_or(s.max_terms);
    s.quad_error = g.quad_error.unwrap_or(s.quad_error);
    s.quad_levels = g.quad_levels.unwrap_or(s.quad_levels);
    s.seed = g.seed.unwrap_or(s.seed);
    s.auto_transform = g.auto_transform;
    s.tail_correction = !g.no_tail_correction;
    s
}

fn job_from(command: Command) -> JobSpec {
    match command {
        Command::Eval { f32, f21, x } => JobSpec {
            params: f32.or(f21),
            x,
            ..JobSpec::new(CommandKind::Eval)
        },
        Command::Transform { kind, params } => JobSpec {
            name: Some(name_of(kind)),
            params: Some(params),
            ..JobSpec::new(CommandKind::Transform)
        },
        Command::Verify { identity, params, x, exact, random } => JobSpec {
            name: Some(name_of(identity)),
            params,
            x,
            n: exact.n,
            a: exact.a,
            b: exact.b,
            c: exact.c,
            random,
            ..JobSpec::new(CommandKind::Verify)
        },
        Command::Prove { params, chain_tol } => JobSpec {
            params: Some(params),
            tolerance: chain_tol.map(|t| thomae_cli::ToleranceOverrides {
                chain_tol: Some(t),
                ..Default::default()
            }),
            ..JobSpec::new(CommandKind::Prove)
        },
        Command::ClosedForm { name, params, exact } => JobSpec {
            name: Some(name_of(name)),
            params,
            n: exact.n,
            a: exact.a,
            b: exact.b,
            c: exact.c,
            ..JobSpec::new(CommandKind::ClosedForm)
        },
        Command::Batch { .. } => unreachable!("batch is not a single job"),
    }
}

fn json_line(r: &ResultRecord) -> String {
    serde_json::to_string(r).expect("records contain only finite floats")
}

fn emit(out: &mut impl Write, r: &ResultRecord, format: Format) -> io::Result<()> {
    match format {
        Format::Json => writeln!(out, "{}", json_line(r)),
        Format::Text => {
            if let Some(line) = error_line(r) {
                eprintln!("{line}");
            }
            write!(out, "{}", render(r))
        }
    }
}

fn batch(path: &PathBuf, settings: &Settings, format: Format) -> io::Result<ExitCode> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error kind=io: {}: {e}", path.display());
            return Ok(ExitCode::from(2));
        }
    };
    let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    let records: Vec<ResultRecord> = lines
        .par_iter()
        .map(|line| match serde_json::from_str::<JobSpec>(line) {
            Ok(job) => run_job(&job, settings),
            Err(e) => malformed(line, &e),
        })
        .collect();

    let mut out = io::stdout().lock();
    for r in &records {
        writeln!(out, "{}", json_line(r))?;
    }
    let pass = records.iter().filter(|r| r.status == Status::Pass).count();
    let fail = records.len() - pass;
    match format {
        Format::Json => writeln!(out, "{}", json!({ "jobs": records.len(), "pass": pass, "fail": fail }))?,
        Format::Text if records.is_empty() => writeln!(out, "0 jobs")?,
        Format::Text => writeln!(out, "{} jobs: {pass} pass / {fail} fail", records.len())?,
    }
    Ok(if fail == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let settings = settings(&cli.global);
    let format = cli.global.format;
    let result = match cli.command {
        Command::Batch { file } => batch(&file, &settings, format),
        command => {
            let record = run_job(&job_from(command), &settings);
            emit(&mut io::stdout().lock(), &record, format).map(|_| ExitCode::from(record.exit_code()))
        }
    };
    result.unwrap_or_else(|e| {
        eprintln!("error kind=io: {e}");
        ExitCode::from(2)
    })
}
