//! `dgl`: build, verify, measure and export double groupoid instances.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 usage error, 3 the
//! question cannot be decided inside the enumerated window.

mod commands;
mod source;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dgl_core::groupoid::Structure;

#[derive(Parser)]
#[command(name = "dgl", version, about = "Double groupoids of admissible group pairs: build, verify, norms, export")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate an instance and write Ω and the fragment.
    Build(BuildArgs),
    /// Run verification suites; exit 0 iff nothing failed.
    Verify(VerifyArgs),
    /// I-norm, reduced norm and C*-identity residual of one element.
    Norm(NormArgs),
    /// Write a fragment as DOT or JSON.
    Export(ExportArgs),
    /// Names, parameters and one-line descriptions of the built-in examples.
    ListExamples {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

/// Where the instance comes from.
#[derive(Args)]
pub struct SourceArgs {
    /// Built-in example name (see `list-examples`).
    #[arg(long)]
    pub example: Option<String>,
    /// Example parameter, repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE", value_parser = parse_param)]
    pub params: Vec<(String, String)>,
    /// JSON multiplication table with optional `h` and `k` index lists.
    #[arg(long, value_name = "FILE")]
    pub table: Option<PathBuf>,
    /// Corrupt one entry of the multiplication table before building.
    #[arg(long)]
    pub inject_fault: bool,
}

#[derive(Args)]
pub struct OutputArgs {
    /// Write here instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args)]
pub struct BuildArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub out: OutputArgs,
    #[arg(long, value_parser = parse_structure, default_value = "G")]
    pub structure: Structure,
    /// Largest fragment, in arrows, that will be written.
    #[arg(long, default_value_t = 20_000)]
    pub cap: usize,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub out: OutputArgs,
    /// Suites to run, repeatable or comma-separated.
    #[arg(long = "suite", value_enum, value_delimiter = ',', default_value = "all")]
    pub suites: Vec<Suite>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random samples per sampled check.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
}

#[derive(Args)]
pub struct NormArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub out: OutputArgs,
    #[arg(long, value_parser = parse_structure, default_value = "G")]
    pub structure: Structure,
    /// Fragment JSON written by `export`, instead of enumerating.
    #[arg(long, value_name = "FILE")]
    pub fragment: Option<PathBuf>,
    /// Element JSON: a list of `{h, k, re, im}` entries. Defaults to the
    /// indicator of the unit space.
    #[arg(long, value_name = "FILE", conflicts_with = "random")]
    pub element: Option<PathBuf>,
    /// Use a seeded random element instead.
    #[arg(long)]
    pub random: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args)]
pub struct ExportArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub out: OutputArgs,
    #[arg(long, value_parser = parse_structure, default_value = "G")]
    pub structure: Structure,
    /// Fragment JSON to re-export instead of enumerating.
    #[arg(long, value_name = "FILE")]
    pub fragment: Option<PathBuf>,
    /// Largest fragment, in arrows, that will be exported.
    #[arg(long, default_value_t = 20_000)]
    pub cap: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum Suite {
    /// Everything below; undecidable parts are skipped, not errors.
    All,
    Identities,
    Axioms,
    Example,
    Exactness,
    Algebra,
}

fn parse_param(s: &str) -> Result<(String, String), String> {
    match s.split_once('=') {
        Some((k, v)) if !k.is_empty() => Ok((k.to_string(), v.to_string())),
        _ => Err(format!("expected KEY=VALUE, got {s:?}")),
    }
}

fn parse_structure(s: &str) -> Result<Structure, String> {
    Structure::parse(s).map_err(|e| e.to_string())
}

/// A failed run: exit code and message.
#[derive(Debug)]
pub struct Fail {
    pub code: u8,
    pub message: String,
}

impl Fail {
    pub fn usage(message: impl Into<String>) -> Self {
        Fail { code: 2, message: message.into() }
    }

    /// Coverage and capability errors exit 3, anything else `otherwise`.
    pub fn from_core(e: dgl_core::Error, otherwise: u8) -> Self {
        Fail { code: if e.is_coverage() { 3 } else { otherwise }, message: e.to_string() }
    }
}

fn configure_threads() -> Result<(), Fail> {
    let Ok(raw) = std::env::var("DGL_THREADS") else { return Ok(()) };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| Fail::usage(format!("DGL_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Fail::usage(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = configure_threads().and_then(|()| match cli.command {
        Command::Build(a) => commands::build(&a),
        Command::Verify(a) => commands::verify(&a),
        Command::Norm(a) => commands::norm(&a),
        Command::Export(a) => commands::export(&a),
        Command::ListExamples { format } => commands::list_examples(format),
    });
    match run {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("dgl: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
