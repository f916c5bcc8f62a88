//! Records and their text, JSON-lines and CSV renderings.
//!
//! Every real number is a decimal string. JSON objects carry
//! `schema_version` and `verb` ahead of the record fields; CSV rows have a
//! header and a fixed column set per verb.

use std::io::Write;

use rug::float::Round;
use rug::Float;
use serde::Serialize;

use crate::args::Format;
use crate::CliError;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Serialize)]
struct Envelope<'a, R> {
    schema_version: &'static str,
    verb: &'a str,
    #[serde(flatten)]
    record: &'a R,
}

#[derive(Clone, Debug, Serialize)]
pub struct EvalRecord {
    pub branch: String,
    pub x: String,
    pub digits: u32,
    pub value: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct EncloseRecord {
    pub branch: String,
    pub x: String,
    pub digits: u32,
    pub lo: String,
    pub hi: String,
    pub width: String,
    pub method: String,
    pub n: u32,
    pub precision_bits: u32,
    pub certified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceRecord {
    pub n: u32,
    pub iterate: String,
    pub apriori_bound: Option<String>,
    pub residual: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstantRecord {
    pub name: String,
    pub value: String,
    pub lo: String,
    pub hi: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FigureRecord {
    pub x: String,
    pub n: u32,
    pub actual_error: String,
    pub bound: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchRecord {
    pub method: String,
    /// Steps to tolerance, `DNF` past the cap, `n/a` outside the method's domain.
    pub iterations: String,
    pub wall_time_us: String,
    pub residual: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct XyRecord {
    pub x: String,
    pub y: String,
    pub y_lo: String,
    pub y_hi: String,
    pub margin: String,
    pub gap: String,
}

/// Writes `records` for `verb` in the chosen format.
pub fn emit<R: Serialize>(
    out: &mut dyn Write,
    format: Format,
    verb: &str,
    records: &[R],
) -> Result<(), CliError> {
    match format {
        Format::Json => {
            for record in records {
                let env = Envelope {
                    schema_version: SCHEMA_VERSION,
                    verb,
                    record,
                };
                serde_json::to_writer(&mut *out, &env).map_err(|e| CliError::Io(e.to_string()))?;
                out.write_all(b"\n")?;
            }
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(&mut *out);
            for record in records {
                w.serialize(record).map_err(|e| CliError::Io(e.to_string()))?;
            }
            w.flush()?;
        }
        Format::Text => text(out, records)?,
    }
    Ok(())
}

fn cells<R: Serialize>(record: &R) -> Result<Vec<(String, String)>, CliError> {
    let value = serde_json::to_value(record).map_err(|e| CliError::Io(e.to_string()))?;
    let serde_json::Value::Object(map) = value else {
        return Err(CliError::Io("record is not a struct".into()));
    };
    Ok(map
        .into_iter()
        .map(|(k, v)| {
            let s = match v {
                serde_json::Value::String(s) => s,
                serde_json::Value::Null => "-".into(),
                other => other.to_string(),
            };
            (k, s)
        })
        .collect())
}

/// One record: aligned `key value` lines. Several: a space-separated table.
fn text<R: Serialize>(out: &mut dyn Write, records: &[R]) -> Result<(), CliError> {
    let rows = records.iter().map(cells).collect::<Result<Vec<_>, _>>()?;
    if let [row] = rows.as_slice() {
        let width = row.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in row {
            writeln!(out, "{k:<width$}  {v}")?;
        }
        return Ok(());
    }
    let Some(first) = rows.first() else {
        return Ok(());
    };
    let mut widths: Vec<usize> = first.iter().map(|(k, _)| k.len()).collect();
    for row in &rows {
        for (w, (_, v)) in widths.iter_mut().zip(row) {
            *w = (*w).max(v.len());
        }
    }
    let header: Vec<String> = first
        .iter()
        .zip(&widths)
        .map(|((k, _), w)| format!("{k:<w$}"))
        .collect();
    writeln!(out, "{}", header.join("  ").trim_end())?;
    for row in &rows {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|((_, v), w)| format!("{v:<w$}"))
            .collect();
        writeln!(out, "{}", line.join("  ").trim_end())?;
    }
    Ok(())
}

/// Scientific notation with `sig` digits, rounded in direction `round`.
pub fn sci(value: &Float, sig: usize, round: Round) -> String {
    if value.is_zero() {
        return "0".into();
    }
    value.to_string_radix_round(10, Some(sig.max(1)), round)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn render<R: Serialize>(format: Format, records: &[R]) -> String {
        let mut buf = Vec::new();
        emit(&mut buf, format, "test", records).unwrap();
        String::from_utf8(buf).unwrap()
    }

    fn rec(n: u32, bound: Option<&str>) -> TraceRecord {
        TraceRecord {
            n,
            iterate: "1.5".into(),
            apriori_bound: bound.map(String::from),
            residual: Some("2e-3".into()),
        }
    }

    #[test]
    fn json_lines_carry_the_schema() {
        let s = render(Format::Json, &[rec(0, None), rec(1, Some("1e-5"))]);
        let lines: Vec<_> = s.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].starts_with(r#"{"schema_version":"1","verb":"test","n":0,"iterate":"1.5""#));
        assert!(lines[0].contains(r#""apriori_bound":null"#));
    }

    #[test]
    fn csv_has_a_header_and_fixed_columns() {
        let s = render(Format::Csv, &[rec(0, None), rec(1, Some("1e-5"))]);
        let lines: Vec<_> = s.lines().collect();
        assert_eq!(lines[0], "n,iterate,apriori_bound,residual");
        assert_eq!(lines[1], "0,1.5,,2e-3");
        assert!(lines.iter().all(|l| l.split(',').count() == 4));
        assert!(!s.contains('\r'));
    }

    #[test]
    fn text_layouts() {
        let one = render(Format::Text, &[rec(3, None)]);
        assert!(one.contains("n              3\n"));
        let many = render(Format::Text, &[rec(0, None), rec(1, Some("1e-5"))]);
        assert!(many.starts_with("n  iterate  apriori_bound  residual\n"));
    }

    #[test]
    fn directed_scientific() {
        let third = Float::with_val(64, 1) / 3u32;
        assert_eq!(sci(&third, 3, Round::Up), "3.34e-1");
        assert_eq!(sci(&third, 3, Round::Down), "3.33e-1");
        assert_eq!(sci(&Float::new(64), 3, Round::Up), "0");
    }
}
