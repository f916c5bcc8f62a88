//! Flag definitions and validation into a [`Command`].

use clap::{Args, Parser, Subcommand, ValueEnum};
use lambertw_core::{working_precision, Argument, Branch, HighReal, Method, WidthMode};

use crate::CliError;

pub const DIGITS_ENV: &str = "LAMBERT_DEFAULT_DIGITS";

#[derive(Parser, Debug)]
#[command(name = "lambert", version, about = "Certified evaluation of the real Lambert W branches")]
pub struct Cli {
    #[command(subcommand)]
    pub verb: Verb,
}

#[derive(Subcommand, Debug)]
pub enum Verb {
    /// Print W(x) to the requested number of digits.
    Eval(EvalArgs),
    /// Print a certified enclosure [lo, hi] of W(x).
    Enclose(EvalArgs),
    /// Print the iterates of one recursion.
    Trace(TraceArgs),
    /// Print the thresholds x*, x**, x*** and the constants k1, k2.
    Constants(ConstantsArgs),
    /// Print actual errors and a priori bounds over a figure grid.
    Figure(FigureArgs),
    /// Compare iteration counts and wall time of the recursions.
    Bench(BenchArgs),
    /// Solve x^y = y^x for the nontrivial y.
    Xyyx(XyArgs),
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[arg(long, default_value = "0", allow_hyphen_values = true, value_parser = parse_branch)]
    pub branch: Branch,
    /// A decimal, `ln:<decimal>` (given ln x) or `pow10:<decimal>` (given log10 x).
    #[arg(long, allow_hyphen_values = true, value_parser = parse_x)]
    pub x: XInput,
    #[arg(long, env = DIGITS_ENV, default_value_t = 34, value_parser = clap::value_parser!(u32).range(1..))]
    pub digits: u32,
    /// Measure the width relative to max(1, |W|).
    #[arg(long)]
    pub relative: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct TraceArgs {
    #[arg(long, value_enum, default_value_t = MethodArg::Beta)]
    pub method: MethodArg,
    #[arg(long, default_value = "0", allow_hyphen_values = true, value_parser = parse_branch)]
    pub branch: Branch,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_x)]
    pub x: XInput,
    /// Number of steps after the starting value.
    #[arg(long, default_value_t = 5)]
    pub n: u32,
    #[arg(long, env = DIGITS_ENV, default_value_t = 34, value_parser = clap::value_parser!(u32).range(1..))]
    pub digits: u32,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct ConstantsArgs {
    #[arg(long, env = DIGITS_ENV, default_value_t = 34, value_parser = clap::value_parser!(u32).range(1..))]
    pub digits: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct FigureArgs {
    #[arg(long, value_enum)]
    pub id: FigureId,
    /// Grid points per curve.
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u32).range(1..=100_000))]
    pub points: u32,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, default_value = "0", allow_hyphen_values = true, value_parser = parse_branch)]
    pub branch: Branch,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_x)]
    pub x: XInput,
    #[arg(long, env = DIGITS_ENV, default_value_t = 34, value_parser = clap::value_parser!(u32).range(1..))]
    pub digits: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct XyArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = parse_x)]
    pub x: XInput,
    #[arg(long, env = DIGITS_ENV, default_value_t = 34, value_parser = clap::value_parser!(u32).range(1..))]
    pub digits: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Lambda,
    Beta,
    Newton,
    Halley,
    Fsc,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Lambda => Method::Lambda,
            MethodArg::Beta => Method::Beta,
            MethodArg::Newton => Method::Newton,
            MethodArg::Halley => Method::Halley,
            MethodArg::Fsc => Method::Fsc,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FigureId {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
    #[value(name = "4a")]
    FourA,
    #[value(name = "4b")]
    FourB,
}

impl FigureId {
    pub fn name(self) -> &'static str {
        match self {
            FigureId::One => "1",
            FigureId::Two => "2",
            FigureId::Three => "3",
            FigureId::FourA => "4a",
            FigureId::FourB => "4b",
        }
    }
}

/// `--x` as typed; turned into an [`Argument`] once the precision is known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum XInput {
    Direct(String),
    LogOf(String),
    Pow10(String),
}

impl XInput {
    /// The argument as typed, with its prefix.
    pub fn label(&self) -> String {
        match self {
            XInput::Direct(s) => s.clone(),
            XInput::LogOf(s) => format!("ln:{s}"),
            XInput::Pow10(s) => format!("pow10:{s}"),
        }
    }

    fn text(&self) -> &str {
        match self {
            XInput::Direct(s) | XInput::LogOf(s) | XInput::Pow10(s) => s,
        }
    }

    /// Enough bits for `digits` plus the digits of the input itself.
    pub fn precision_for(&self, digits: u32) -> u32 {
        working_precision(digits) + 4 * self.text().len() as u32
    }

    pub fn to_argument(&self, digits: u32) -> Result<Argument, CliError> {
        let p = self.precision_for(digits);
        let v = HighReal::parse(self.text(), p).map_err(|e| CliError::Parse(e.to_string()))?;
        Ok(match self {
            XInput::Direct(_) => Argument::Direct(v),
            XInput::LogOf(_) => Argument::LogOf(v),
            XInput::Pow10(_) => Argument::Pow10(v),
        })
    }

    pub fn to_direct(&self, digits: u32) -> Result<HighReal, CliError> {
        match self.to_argument(digits)? {
            Argument::Direct(v) => Ok(v),
            _ => Err(CliError::Parse(format!(
                "--x {} must be a plain decimal for this verb",
                self.text()
            ))),
        }
    }
}

fn parse_x(s: &str) -> Result<XInput, String> {
    let s = s.trim();
    let x = if let Some(rest) = s.strip_prefix("ln:") {
        XInput::LogOf(rest.to_string())
    } else if let Some(rest) = s.strip_prefix("pow10:") {
        XInput::Pow10(rest.to_string())
    } else {
        XInput::Direct(s.to_string())
    };
    let text = x.text();
    if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit() || b"+-.eE".contains(&b)) {
        return Err(format!("'{s}' is not a decimal number"));
    }
    HighReal::parse(text, 64).map_err(|_| format!("'{s}' is not a decimal number"))?;
    Ok(x)
}

fn parse_branch(s: &str) -> Result<Branch, String> {
    match s.trim() {
        "0" => Ok(Branch::Principal),
        "-1" => Ok(Branch::LowerBranch),
        other => Err(format!("branch must be 0 or -1, got '{other}'")),
    }
}

/// A validated invocation.
#[derive(Clone, Debug, PartialEq)]
pub enum Command {
    Eval {
        input: String,
        branch: Branch,
        x: Argument,
        digits: u32,
        mode: WidthMode,
        format: Format,
    },
    Enclose {
        input: String,
        branch: Branch,
        x: Argument,
        digits: u32,
        mode: WidthMode,
        format: Format,
    },
    Trace {
        input: String,
        method: Method,
        branch: Branch,
        x: Argument,
        n: u32,
        digits: u32,
        format: Format,
    },
    Constants {
        digits: u32,
        format: Format,
    },
    Figure {
        id: FigureId,
        points: u32,
        format: Format,
    },
    Bench {
        input: String,
        branch: Branch,
        x: HighReal,
        digits: u32,
        format: Format,
    },
    Xyyx {
        input: String,
        x: HighReal,
        digits: u32,
        format: Format,
    },
}

/// Branch/sign mismatches are rejected here rather than at evaluation:
/// positive or log-form arguments on the lower branch, and `x = 0` there.
fn check_branch(branch: Branch, arg: &Argument, label: &str) -> Result<(), CliError> {
    if branch == Branch::Principal {
        return Ok(());
    }
    let bad = match arg {
        Argument::Direct(v) => **v >= 0,
        _ => true,
    };
    if bad {
        return Err(CliError::Parse(format!("W-1 is undefined at x = {label}")));
    }
    Ok(())
}

fn reject_csv(format: Format, verb: &str) -> Result<(), CliError> {
    if format == Format::Csv {
        return Err(CliError::Parse(format!("{verb} has no csv output")));
    }
    Ok(())
}

impl Command {
    pub fn from_cli(cli: Cli) -> Result<Command, CliError> {
        Ok(match cli.verb {
            Verb::Eval(a) => {
                let x = a.x.to_argument(a.digits)?;
                check_branch(a.branch, &x, &a.x.label())?;
                reject_csv(a.format, "eval")?;
                Command::Eval {
                    input: a.x.label(),
                    branch: a.branch,
                    x,
                    digits: a.digits,
                    mode: width_mode(a.relative),
                    format: a.format,
                }
            }
            Verb::Enclose(a) => {
                let x = a.x.to_argument(a.digits)?;
                check_branch(a.branch, &x, &a.x.label())?;
                Command::Enclose {
                    input: a.x.label(),
                    branch: a.branch,
                    x,
                    digits: a.digits,
                    mode: width_mode(a.relative),
                    format: a.format,
                }
            }
            Verb::Trace(a) => {
                let method = Method::from(a.method);
                let x = if method == Method::Beta {
                    a.x.to_argument(a.digits)?
                } else {
                    Argument::Direct(a.x.to_direct(a.digits)?)
                };
                check_branch(a.branch, &x, &a.x.label())?;
                if method == Method::Lambda && a.branch != Branch::Principal {
                    return Err(CliError::Parse("the lambda recursion is for W0 only".into()));
                }
                Command::Trace {
                    input: a.x.label(),
                    method,
                    branch: a.branch,
                    x,
                    n: a.n,
                    digits: a.digits,
                    format: a.format,
                }
            }
            Verb::Constants(a) => Command::Constants {
                digits: a.digits,
                format: a.format,
            },
            Verb::Figure(a) => {
                reject_csv_json_only(a.format)?;
                Command::Figure {
                    id: a.id,
                    points: a.points,
                    format: a.format,
                }
            }
            Verb::Bench(a) => {
                let x = a.x.to_direct(a.digits)?;
                check_branch(a.branch, &Argument::Direct(x.clone()), &a.x.label())?;
                Command::Bench {
                    input: a.x.label(),
                    branch: a.branch,
                    x,
                    digits: a.digits,
                    format: a.format,
                }
            }
            Verb::Xyyx(a) => Command::Xyyx {
                input: a.x.label(),
                x: a.x.to_direct(a.digits)?,
                digits: a.digits,
                format: a.format,
            },
        })
    }
}

fn reject_csv_json_only(format: Format) -> Result<(), CliError> {
    if format == Format::Text {
        return Err(CliError::Parse("figure output is csv or json".into()));
    }
    Ok(())
}

fn width_mode(relative: bool) -> WidthMode {
    if relative {
        WidthMode::Relative
    } else {
        WidthMode::Absolute
    }
}

/// Parses `argv` (without the program name) into a validated [`Command`].
pub fn parse_args<I, T>(argv: I) -> Result<Command, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = std::iter::once(std::ffi::OsString::from("lambert")).chain(argv.into_iter().map(Into::into));
    let cli = Cli::try_parse_from(args).map_err(CliError::from_clap)?;
    Command::from_cli(cli)
}
