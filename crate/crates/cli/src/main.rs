//! `mkt`: JSON front end for exact Milnor K-theory computations.

mod commands;
mod error;
mod json;
mod suites;

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use error::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "mkt",
    version,
    about = "Exact Milnor K-theory symbols, transfers and joint determinants"
)]
struct Cli {
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Input {
    /// JSON input file, or `-` for stdin.
    #[arg(default_value = "-")]
    input: String,

    /// Field used when the input has no `field` block: `Q`, `F<q>`, or JSON.
    #[arg(long)]
    field: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Canonical class of a Milnor expression.
    Canon(Input),
    /// Tame symbols of a function-field symbol at one place or at its whole support.
    Tame(Input),
    /// The transferred tame symbols summed over all places; exit 2 if nonzero.
    Reciprocity(Input),
    /// Transfer of an expression over the residue field of a place down to k.
    Transfer(Input),
    /// Composition factors of a commuting tuple and its image in Milnor K-theory.
    Reduce(Input),
    /// Evaluate a joint determinant on a commuting tuple.
    Jointdet {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = SpecArg::Universal)]
        spec: SpecArg,
        /// Comma-separated places for rational-hilbert, e.g. `inf,2,3`.
        #[arg(long)]
        places: Option<String>,
    },
    /// Run a reproducible randomized property suite.
    Check(CheckArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecArg {
    Universal,
    RealSign,
    RationalHilbert,
    FiniteFieldTrivial,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Reciprocity,
    Norm,
    Vanishing,
    Hilbert,
    Homotopy,
    Relations,
    Axioms,
    Projection,
    KeyRelation,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    /// Base field order; shorthand for `--field F<q>`.
    #[arg(long)]
    pub q: Option<u64>,
    /// Base field: `Q`, `F<q>`, or a JSON field block.
    #[arg(long)]
    pub field: Option<String>,
    /// Symbol weight.
    #[arg(long, default_value_t = 2)]
    pub l: usize,
    /// Extension degree for the norm, vanishing and projection suites.
    #[arg(long, default_value_t = 2)]
    pub deg: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Determinant for the axioms suite.
    #[arg(long, value_enum, default_value_t = SpecArg::Universal)]
    pub spec: SpecArg,
    #[arg(long)]
    pub places: Option<String>,
}

/// A finished report; `violated` selects exit code 2.
pub struct Report {
    pub body: Value,
    pub violated: bool,
}

fn read_input(path: &str) -> Result<Value, CliError> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Parse(format!("reading stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| CliError::Parse(format!("reading {path}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("invalid JSON: {e}")))
}

fn load(input: &Input) -> Result<(Value, mkt_core::Field), CliError> {
    let doc = read_input(&input.input)?;
    let k = commands::resolve_field(&doc, input.field.as_deref())?;
    Ok((doc, k))
}

fn run(cmd: &Command) -> Result<Report, CliError> {
    match cmd {
        Command::Canon(i) => load(i).and_then(|(d, k)| commands::canon(&d, &k)),
        Command::Tame(i) => load(i).and_then(|(d, k)| commands::tame(&d, &k)),
        Command::Reciprocity(i) => load(i).and_then(|(d, k)| commands::reciprocity(&d, &k)),
        Command::Transfer(i) => load(i).and_then(|(d, k)| commands::transfer(&d, &k)),
        Command::Reduce(i) => load(i).and_then(|(d, k)| commands::reduce(&d, &k)),
        Command::Jointdet {
            input,
            spec,
            places,
        } => load(input).and_then(|(d, k)| commands::jointdet(&d, &k, *spec, places.as_deref())),
        Command::Check(args) => suites::run(args),
    }
}

fn emit(out: Option<&PathBuf>, body: &Value) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(body).expect("JSON values serialize");
    text.push('\n');
    match out {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn finish(out: Option<&PathBuf>, body: &Value, code: u8) -> ExitCode {
    if let Err(e) = emit(out, body) {
        let err = CliError::Parse(format!("writing report: {e}"));
        let _ = emit(None, &err.to_json());
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::Parse(e.render().to_string().trim_end().to_string());
            let _ = emit(None, &err.to_json());
            return ExitCode::from(1);
        }
    };
    match run(&cli.command) {
        Ok(r) => finish(cli.out.as_ref(), &r.body, if r.violated { 2 } else { 0 }),
        Err(e) => finish(cli.out.as_ref(), &e.to_json(), e.exit_code()),
    }
}
