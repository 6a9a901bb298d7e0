//! `fidsolve` command surface, kept as a library so it can be driven in
//! process by tests.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use fidsolve_core::ingest::{
    export_dot, generate_random, parse_diagram, serialize_diagram, GeneratorParams,
};
use fidsolve_core::oracle::{Oracle, OracleError, DEFAULT_CAP};
use fidsolve_core::trace::format_significant;
use fidsolve_core::{FaultDiagram, SolveError, SolveOptions, TieOrder};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_NOT_REDUCIBLE: u8 = 2;
pub const EXIT_ORACLE_CAP: u8 = 3;

/// Absolute tolerance for `check`.
pub const CHECK_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Solve,
    Oracle,
    Check,
    Gen,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TieArg {
    Lex,
    Paper,
}

#[derive(Debug, Parser)]
#[command(
    name = "fidsolve",
    version,
    about = "Top event probability of generalized fault diagrams"
)]
struct Args {
    command: Command,
    /// Diagram file, or `-` for standard input.
    file: Option<PathBuf>,
    /// Write the reduction trace to standard error.
    #[arg(long)]
    trace: bool,
    #[arg(long, value_enum, default_value = "lex")]
    tie_order: TieArg,
    /// Hand unreducible diagrams to the brute-force evaluator.
    #[arg(long)]
    fallback_oracle: bool,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    oracle_cap: usize,
    /// Number of generated diagrams for `check`.
    #[arg(long)]
    random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    chance: usize,
    #[arg(long, default_value_t = 6)]
    logical: usize,
    #[arg(long, default_value_t = 0.5)]
    bias: f64,
    #[arg(long, default_value_t = 3)]
    max_parents: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CliOutput {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        let code = match &e {
            SolveError::ModuleNotReducible { .. } => EXIT_NOT_REDUCIBLE,
            SolveError::Oracle(OracleError::TooLargeForOracle { .. }) => EXIT_ORACLE_CAP,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        SolveError::Oracle(e).into()
    }
}

/// Runs one invocation. `argv` includes the program name.
pub fn run_cli<I, T>(argv: I, stdin: &mut dyn Read) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let mut out = CliOutput {
                code,
                ..CliOutput::default()
            };
            if e.use_stderr() {
                out.stderr = text;
            } else {
                out.stdout = text;
            }
            return out;
        }
    };
    let mut out = CliOutput::default();
    if let Err(f) = dispatch(&args, stdin, &mut out) {
        out.code = f.code;
        let _ = writeln!(out.stderr, "error: {}", f.message);
    }
    out
}

fn dispatch(args: &Args, stdin: &mut dyn Read, out: &mut CliOutput) -> Result<(), Failure> {
    match args.command {
        Command::Solve => {
            let d = load(args, stdin)?;
            let p = solve(args, &d, out)?;
            probability_line(out, p);
        }
        Command::Oracle => {
            let d = load(args, stdin)?;
            let p = Oracle::with_cap(args.oracle_cap).top_probability(&d)?;
            probability_line(out, p);
        }
        Command::Check => match args.random {
            Some(n) => check_random(args, n, out)?,
            None => {
                let d = load(args, stdin)?;
                check_one(args, &d, None, out)?;
            }
        },
        Command::Gen => out
            .stdout
            .push_str(&serialize_diagram(&generate(args, args.seed)?)),
        Command::Dot => out.stdout.push_str(&export_dot(&load(args, stdin)?)),
    }
    Ok(())
}

fn load(args: &Args, stdin: &mut dyn Read) -> Result<FaultDiagram, Failure> {
    let path = args
        .file
        .as_ref()
        .ok_or_else(|| Failure::input("missing input file (use - for standard input)"))?;
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        stdin
            .read_to_string(&mut s)
            .map_err(|e| Failure::input(format!("reading standard input: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?
    };
    parse_diagram(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn options(args: &Args) -> SolveOptions {
    SolveOptions {
        tie_order: match args.tie_order {
            TieArg::Lex => TieOrder::Lex,
            TieArg::Paper => TieOrder::Paper,
        },
        fallback_oracle_cap: args.fallback_oracle.then_some(args.oracle_cap),
    }
}

fn solve(args: &Args, d: &FaultDiagram, out: &mut CliOutput) -> Result<f64, Failure> {
    match fidsolve_core::solve_with(d, &options(args)) {
        Ok(s) => {
            if args.trace {
                out.stderr.push_str(&s.trace.render());
            }
            Ok(s.probability)
        }
        Err(SolveError::ModuleNotReducible { cut_vertex, trace }) => {
            if args.trace {
                out.stderr.push_str(&trace.render());
            }
            Err(SolveError::ModuleNotReducible { cut_vertex, trace }.into())
        }
        Err(e) => Err(e.into()),
    }
}

fn probability_line(out: &mut CliOutput, p: f64) {
    let _ = writeln!(out.stdout, "P(top=success) = {}", format_significant(p, 9));
}

/// Compares solver and oracle on one diagram; a mismatch sets exit code 1
/// but does not abort a batch.
fn check_one(
    args: &Args,
    d: &FaultDiagram,
    seed: Option<u64>,
    out: &mut CliOutput,
) -> Result<(), Failure> {
    let exact = Oracle::with_cap(args.oracle_cap).top_probability(d)?;
    let solved = solve(args, d, out)?;
    let delta = (solved - exact).abs();
    let tag = seed.map(|s| format!("\tseed={s}")).unwrap_or_default();
    if delta <= CHECK_TOLERANCE {
        let _ = writeln!(out.stdout, "OK delta={delta:.3e}{tag}");
    } else {
        let _ = writeln!(
            out.stdout,
            "MISMATCH solve={} oracle={} delta={delta:.3e}{tag}",
            format_significant(solved, 9),
            format_significant(exact, 9)
        );
        out.code = EXIT_INPUT;
    }
    Ok(())
}

fn check_random(args: &Args, n: usize, out: &mut CliOutput) -> Result<(), Failure> {
    for i in 0..n as u64 {
        let seed = args.seed.wrapping_add(i);
        let d = generate(args, seed)?;
        check_one(args, &d, Some(seed), out)?;
    }
    Ok(())
}

fn generate(args: &Args, seed: u64) -> Result<FaultDiagram, Failure> {
    let params = GeneratorParams {
        chance_count: args.chance,
        logical_count: args.logical,
        max_parents: args.max_parents,
        shared_subsystem_bias: args.bias,
        seed,
    };
    generate_random(&params).map_err(|e| Failure::input(e.to_string()))
}
