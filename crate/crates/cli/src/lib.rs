//! The `lambert` command line.
//!
//! Exit codes: `0` success, `2` domain error, `3` the evaluation could not
//! be certified, `4` malformed input. Output goes to the writer given to
//! [`run`]; diagnostics are single lines.

use std::fmt;
use std::io::{self, Write};

use rug::float::Round;
use rug::Float;

use lambertw_core::{
    compute_constants, eval_certified_with, lambda_iterate, reference_iterate, solve, Argument,
    Branch, HighReal, Interval, IterationTrace, LambertError, Method, ReferenceKind,
};

pub mod args;
pub mod bench;
pub mod figure;
pub mod output;

pub use args::{parse_args, Cli, Command, FigureId, Format, DIGITS_ENV};
use output::{
    emit, sci, ConstantRecord, EncloseRecord, EvalRecord, TraceRecord, XyRecord,
};

#[derive(Debug)]
pub enum CliError {
    /// Help or version text requested; printed to stdout with exit 0.
    Info(String),
    Parse(String),
    Lambert(LambertError),
    Io(String),
}

impl CliError {
    pub fn from_clap(e: clap::Error) -> CliError {
        use clap::error::ErrorKind;
        match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CliError::Info(e.to_string()),
            _ => {
                let text = e.to_string();
                let line = text
                    .lines()
                    .find(|l| !l.trim().is_empty())
                    .unwrap_or("invalid arguments")
                    .trim_start_matches("error: ")
                    .to_string();
                CliError::Parse(line)
            }
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Info(_) => 0,
            CliError::Parse(_) => 4,
            CliError::Lambert(LambertError::Domain(_)) => 2,
            CliError::Lambert(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Info(s) => f.write_str(s.trim_end()),
            CliError::Parse(s) => write!(f, "invalid arguments: {s}"),
            CliError::Lambert(e) => write!(f, "{e}"),
            CliError::Io(s) => write!(f, "output error: {s}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<LambertError> for CliError {
    fn from(e: LambertError) -> CliError {
        CliError::Lambert(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> CliError {
        CliError::Io(e.to_string())
    }
}

fn branch_label(b: Branch) -> String {
    b.index().to_string()
}

/// Parses a printed decimal endpoint, rounding in direction `round` so the
/// parsed interval still contains the printed one.
pub fn parse_endpoint(text: &str, precision_bits: u32, round: Round) -> Option<Float> {
    let parsed = Float::parse(text).ok()?;
    Some(Float::with_val_round(precision_bits, parsed, round).0)
}

fn trace_rows(trace: &IterationTrace, digits: u32) -> Vec<TraceRecord> {
    trace
        .entries
        .iter()
        .map(|e| TraceRecord {
            n: e.n,
            iterate: e.iterate.to_fixed(digits as usize, Round::Nearest),
            apriori_bound: e.apriori_bound.as_ref().map(|b| sci(b.as_float(), 6, Round::Up)),
            residual: e.residual.as_ref().map(|r| sci(r.as_float(), 6, Round::Up)),
        })
        .collect()
}

fn interval_record(name: &str, iv: &Interval, digits: u32) -> ConstantRecord {
    let d = digits as usize;
    ConstantRecord {
        name: name.into(),
        value: HighReal::new(iv.midpoint()).map_or_else(|_| "nan".into(), |m| m.to_fixed(d, Round::Nearest)),
        lo: iv.lo.to_fixed(d, Round::Down),
        hi: iv.hi.to_fixed(d, Round::Up),
    }
}

fn point_record(name: &str, v: &HighReal, digits: u32) -> ConstantRecord {
    let d = digits as usize;
    ConstantRecord {
        name: name.into(),
        value: v.to_fixed(d, Round::Nearest),
        lo: v.to_fixed(d, Round::Down),
        hi: v.to_fixed(d, Round::Up),
    }
}

/// Executes a validated command, writing its records to `out`.
pub fn run(cmd: &Command, out: &mut dyn Write) -> Result<(), CliError> {
    match cmd {
        Command::Eval { input, branch, x, digits, mode, format } => {
            let enc = eval_certified_with(*branch, x, *digits, *mode)?;
            let mid = HighReal::new(enc.midpoint())?;
            let value = mid.to_fixed(*digits as usize, Round::Nearest);
            if *format == Format::Text {
                writeln!(out, "{value}")?;
                return Ok(());
            }
            let rec = EvalRecord {
                branch: branch_label(*branch),
                x: input.clone(),
                digits: *digits,
                value,
            };
            emit(out, *format, "eval", &[rec])
        }
        Command::Enclose { input, branch, x, digits, mode, format } => {
            let enc = eval_certified_with(*branch, x, *digits, *mode)?;
            // outward by a few digits beyond the target, so the printed
            // interval contains the computed one
            let d = *digits as usize + 5;
            let rec = EncloseRecord {
                branch: branch_label(*branch),
                x: input.clone(),
                digits: *digits,
                lo: enc.lo.to_fixed(d, Round::Down),
                hi: enc.hi.to_fixed(d, Round::Up),
                width: sci(enc.width_bound.as_float(), 6, Round::Up),
                method: enc.method.to_string(),
                n: enc.iterations,
                precision_bits: enc.precision_bits,
                certified: enc.certified,
            };
            emit(out, *format, "enclose", &[rec])
        }
        Command::Trace { method, branch, x, n, digits, format, .. } => {
            let trace = match method {
                Method::Beta => lambertw_core::beta_iterate(*branch, x, *n)?,
                Method::Lambda => lambda_iterate(direct(x)?, *n)?,
                Method::Newton => reference_iterate(ReferenceKind::Newton, *branch, direct(x)?, *n, None)?,
                Method::Halley => reference_iterate(ReferenceKind::Halley, *branch, direct(x)?, *n, None)?,
                Method::Fsc => reference_iterate(ReferenceKind::Fsc, *branch, direct(x)?, *n, None)?,
            };
            emit(out, *format, "trace", &trace_rows(&trace, *digits))
        }
        Command::Constants { digits, format } => {
            // the thresholds reach 6 integer digits; keep every printed decimal meaningful
            let c = compute_constants(*digits + 8)?;
            let rows = [
                interval_record("x_star", &c.x_star, *digits),
                interval_record("x_double_star", &c.x_double_star, *digits),
                interval_record("x_triple_star", &c.x_triple_star, *digits),
                point_record("kappa1", &c.kappa1, *digits),
                point_record("kappa2", &c.kappa2, *digits),
            ];
            emit(out, *format, "constants", &rows)
        }
        Command::Figure { id, points, format } => {
            let rows = figure::figure_rows(*id, *points)?;
            emit(out, *format, "figure", &rows)
        }
        Command::Bench { branch, x, digits, format, .. } => {
            let rows = bench::bench_rows(*branch, x, *digits)?;
            emit(out, *format, "bench", &rows)
        }
        Command::Xyyx { input, x, digits, format } => {
            let r = solve(x, *digits)?;
            let d = *digits as usize;
            let y = HighReal::new(r.y.midpoint())?;
            let rec = XyRecord {
                x: input.clone(),
                y: y.to_fixed(d, Round::Nearest),
                y_lo: r.y.lo.to_fixed(d + 5, Round::Down),
                y_hi: r.y.hi.to_fixed(d + 5, Round::Up),
                margin: r.margin.to_fixed(d, Round::Down),
                gap: r.gap.to_fixed(d, Round::Nearest),
            };
            emit(out, *format, "xyyx", &[rec])
        }
    }
}

fn direct(x: &Argument) -> Result<&HighReal, CliError> {
    x.direct()
        .ok_or_else(|| CliError::Parse("this method needs a plain decimal --x".into()))
}

/// Parses `argv` (without the program name), runs it and returns the exit code.
pub fn main_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let result = parse_args(argv).and_then(|cmd| run(&cmd, out));
    match result {
        Ok(()) => 0,
        Err(CliError::Info(text)) => {
            let _ = writeln!(out, "{}", text.trim_end());
            0
        }
        Err(e) => {
            let _ = writeln!(err, "lambert: {e}");
            e.exit_code()
        }
    }
}
