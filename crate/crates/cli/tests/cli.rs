use std::process::Command as Process;

use lambertw_cli::{main_with, parse_endpoint};
use lambertw_core::{
    verify_enclosure, Argument, Branch, Enclosure, EnclosureMethod, HighReal,
};
use proptest::prelude::*;
use rug::float::Round;
use rug::Float;
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = main_with(args.iter().copied(), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json_lines(args: &[&str]) -> Vec<serde_json::Map<String, Value>> {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    out.lines()
        .map(|l| match serde_json::from_str(l).unwrap() {
            Value::Object(m) => m,
            other => panic!("not an object: {other}"),
        })
        .collect()
}

fn csv_rows(args: &[&str]) -> (Vec<String>, Vec<Vec<String>>) {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    let mut r = csv::Reader::from_reader(out.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect::<Vec<_>>();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn as_decimal(v: &Value) -> Float {
    let s = v.as_str().unwrap_or_else(|| panic!("{v} is not a decimal string"));
    Float::with_val(256, Float::parse(s).unwrap_or_else(|_| panic!("{s} is not a decimal")))
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["eval", "--branch", "0", "--x", "1", "--digits", "50"]).0, 0);
    assert_eq!(run(&["eval", "--branch", "-1", "--x", "0.5"]).0, 4);
    assert_eq!(run(&["eval", "--x", "1,5"]).0, 4);
    assert_eq!(run(&["eval", "--x", "1", "--digits", "-3"]).0, 4);
    assert_eq!(run(&["frobnicate"]).0, 4);
    assert_eq!(run(&["eval", "--x", "-0.5"]).0, 2);
    assert_eq!(run(&["eval", "--branch", "-1", "--x", "-0.4"]).0, 2);
    assert_eq!(run(&["xyyx", "--x", "0.5"]).0, 2);
    assert_eq!(run(&["trace", "--method", "lambda", "--x", "2"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);

    let (code, _, err) = run(&["eval", "--branch", "-1", "--x", "0.5"]);
    assert_eq!(code, 4);
    assert_eq!(err.lines().count(), 1, "{err}");
}

#[test]
fn binary_exit_status_and_env_default() {
    let bin = env!("CARGO_BIN_EXE_lambert");
    let status = Process::new(bin)
        .args(["eval", "--branch", "-1", "--x", "0.5"])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(4));
    assert!(status.stdout.is_empty());

    let out = Process::new(bin)
        .args(["eval", "--x", "1"])
        .env("LAMBERT_DEFAULT_DIGITS", "12")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "0.567143290410\n");

    let out = Process::new(bin).args(["eval", "--x", "1"]).env_remove("LAMBERT_DEFAULT_DIGITS").output().unwrap();
    let value = String::from_utf8(out.stdout).unwrap();
    assert_eq!(value.trim().len(), "0.".len() + 34);
}

#[test]
fn eval_prints_the_requested_digits() {
    let (code, out, _) = run(&["eval", "--x", "1", "--digits", "50"]);
    assert_eq!(code, 0);
    assert_eq!(out, "0.56714329040978387299996866221035554975381578718651\n");
    let (_, out, _) = run(&["eval", "--branch", "-1", "--x", "-0.1", "--digits", "20"]);
    assert_eq!(out, "-3.57715206395729721841\n");
}

fn enclosure_from(rec: &serde_json::Map<String, Value>, branch: Branch) -> Enclosure {
    let lo_s = rec["lo"].as_str().unwrap();
    let hi_s = rec["hi"].as_str().unwrap();
    let bits = 4 * (lo_s.len().max(hi_s.len()) as u32) + 64;
    let lo = parse_endpoint(lo_s, bits, Round::Down).unwrap();
    let hi = parse_endpoint(hi_s, bits, Round::Up).unwrap();
    let width = Float::with_val_round(bits, &hi - &lo, Round::Up).0;
    Enclosure {
        branch,
        lo: HighReal::new(lo).unwrap(),
        hi: HighReal::new(hi).unwrap(),
        width_bound: HighReal::new(width).unwrap(),
        method: EnclosureMethod::Beta,
        iterations: rec["n"].as_u64().unwrap() as u32,
        precision_bits: bits,
        certified: true,
    }
}

fn round_trip(branch: Branch, x: &str, digits: u32) {
    let d = digits.to_string();
    let b = branch.index().to_string();
    let recs = json_lines(&["enclose", "--branch", &b, "--x", x, "--digits", &d, "--format", "json"]);
    assert_eq!(recs.len(), 1);
    let enc = enclosure_from(&recs[0], branch);
    let bits = enc.precision_bits + 4 * x.len() as u32;
    let arg = if let Some(rest) = x.strip_prefix("ln:") {
        Argument::LogOf(HighReal::parse(rest, bits).unwrap())
    } else if let Some(rest) = x.strip_prefix("pow10:") {
        Argument::Pow10(HighReal::parse(rest, bits).unwrap())
    } else {
        // the CLI rounds decimal input at this precision
        let p = lambertw_cli::args::XInput::Direct(x.into()).precision_for(digits);
        Argument::Direct(HighReal::parse(x, p).unwrap())
    };
    assert!(verify_enclosure(branch, &arg, &enc), "{x} on {branch}: [{}, {}]", enc.lo, enc.hi);
}

#[test]
fn enclose_round_trips_through_verify() {
    for (branch, x, d) in [
        (Branch::Principal, "1", 50),
        (Branch::Principal, "0.5", 20),
        (Branch::Principal, "1e-30", 40),
        (Branch::Principal, "123456.789", 30),
        (Branch::Principal, "-0.2", 34),
        (Branch::Principal, "-0.3678794411714", 25),
        (Branch::Principal, "ln:800", 30),
        (Branch::Principal, "pow10:1e20", 60),
        (Branch::LowerBranch, "-0.3", 34),
        (Branch::LowerBranch, "-1e-10", 34),
        (Branch::LowerBranch, "-0.3678794411714", 25),
    ] {
        round_trip(branch, x, d);
    }
}

#[test]
fn enclose_text_lists_the_fields() {
    let (code, out, _) = run(&["enclose", "--x", "2", "--digits", "10"]);
    assert_eq!(code, 0);
    let keys: Vec<_> = out.lines().map(|l| l.split_whitespace().next().unwrap()).collect();
    for k in ["lo", "hi", "width", "method", "n"] {
        assert!(keys.contains(&k), "{k} missing from\n{out}");
    }
}

#[test]
fn trace_lambda_at_e_squared() {
    let (header, rows) = csv_rows(&[
        "trace", "--method", "lambda", "--x", "7.389056098930650227230427460575007813180315570551847324087", "--n", "1",
    ]);
    assert_eq!(header, ["n", "iterate", "apriori_bound", "residual"]);
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1][0], "1");
    let v: f64 = rows[1][1].parse().unwrap();
    assert!((v - (2.0 - std::f64::consts::LN_2)).abs() < 1e-12, "{v}");
}

#[test]
fn trace_methods_share_the_columns() {
    for m in ["lambda", "beta", "newton", "halley", "fsc"] {
        let (header, rows) = csv_rows(&["trace", "--method", m, "--x", "10", "--n", "4"]);
        assert_eq!(header.len(), 4);
        assert_eq!(rows.len(), 5, "{m}");
        assert!(rows.iter().all(|r| r.len() == 4));
    }
}

#[test]
fn constants_line() {
    let (code, out, _) = run(&["constants"]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l.contains("6288.69")), "{out}");
    for name in ["x_star", "x_double_star", "x_triple_star", "kappa1", "kappa2"] {
        assert!(out.contains(name));
    }
}

fn check_figure(id: &str) {
    let (header, rows) = csv_rows(&["figure", "--id", id]);
    assert_eq!(header, ["x", "n", "actual_error", "bound"]);
    assert_eq!(rows.len(), 600, "figure {id}");
    let mut prev: Option<(Float, u32)> = None;
    for r in &rows {
        let x = Float::with_val(256, Float::parse(&r[0]).unwrap());
        let n: u32 = r[1].parse().unwrap();
        let actual = Float::with_val(256, Float::parse(&r[2]).unwrap());
        let bound = Float::with_val(256, Float::parse(&r[3]).unwrap());
        assert!(actual < bound, "figure {id} x = {} n = {n}: {} >= {}", r[0], r[2], r[3]);
        if let Some((px, pn)) = &prev {
            assert!(x > *px || (x == *px && n > *pn), "figure {id} rows out of order");
        }
        prev = Some((x, n));
    }
}

#[test]
fn figures_stay_under_their_bounds() {
    for id in ["1", "2", "3", "4a", "4b"] {
        check_figure(id);
    }
}

#[test]
fn figure_grids_exclude_the_endpoints() {
    let (_, rows) = csv_rows(&["figure", "--id", "3", "--points", "4"]);
    let xs: Vec<f64> = rows.iter().step_by(3).map(|r| r[0].parse().unwrap()).collect();
    let step = (1.0 / std::f64::consts::E) / 5.0;
    assert_eq!(xs.len(), 4);
    assert!((xs[0] - (-1.0 / std::f64::consts::E + step)).abs() < 1e-15);
    assert!((xs[3] + step).abs() < 1e-15);
}

#[test]
fn bench_reports_every_method() {
    let (header, rows) = csv_rows(&["bench", "--x", "1e10", "--digits", "50", "--format", "csv"]);
    assert_eq!(header, ["method", "iterations", "wall_time_us", "residual"]);
    let methods: Vec<_> = rows.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(methods, ["lambda", "beta", "newton", "halley", "fsc"]);
    for r in &rows {
        let n: u32 = r[1].parse().unwrap_or_else(|_| panic!("{r:?}"));
        assert!(n <= 200);
    }
    // lambda converges linearly and cannot reach 10^-2000 in 200 steps
    let (_, rows) = csv_rows(&["bench", "--x", "3", "--digits", "2000", "--format", "csv"]);
    assert_eq!(rows[0][1], "DNF");
    assert!(rows[1][1].parse::<u32>().unwrap() < 20);
    let (_, rows) = csv_rows(&["bench", "--branch", "-1", "--x", "-0.2", "--format", "csv"]);
    assert_eq!(rows[0][1], "n/a");
}

#[test]
fn xyyx_fields() {
    let recs = json_lines(&["xyyx", "--x", "2", "--digits", "30", "--format", "json"]);
    let r = &recs[0];
    let four = Float::with_val(256, 4);
    assert!(as_decimal(&r["y_lo"]) <= four && four <= as_decimal(&r["y_hi"]));
    assert!(as_decimal(&r["margin"]) > 0);
    let (code, out, _) = run(&["xyyx", "--x", "4"]);
    assert_eq!(code, 0);
    for k in ["y ", "margin", "gap"] {
        assert!(out.contains(k));
    }
}

/// Field names and kinds of each verb's JSON record: `s` decimal string,
/// `i` integer, `b` boolean, `o` decimal string or null, `t` text.
const SCHEMAS: &[(&str, &[(&str, char)])] = &[
    ("eval", &[("branch", 't'), ("x", 't'), ("digits", 'i'), ("value", 's')]),
    (
        "enclose",
        &[
            ("branch", 't'),
            ("x", 't'),
            ("digits", 'i'),
            ("lo", 's'),
            ("hi", 's'),
            ("width", 's'),
            ("method", 't'),
            ("n", 'i'),
            ("precision_bits", 'i'),
            ("certified", 'b'),
        ],
    ),
    ("trace", &[("n", 'i'), ("iterate", 's'), ("apriori_bound", 'o'), ("residual", 'o')]),
    ("constants", &[("name", 't'), ("value", 's'), ("lo", 's'), ("hi", 's')]),
    ("figure", &[("x", 's'), ("n", 'i'), ("actual_error", 's'), ("bound", 's')]),
    ("bench", &[("method", 't'), ("iterations", 't'), ("wall_time_us", 't'), ("residual", 'o')]),
    ("xyyx", &[("x", 't'), ("y", 's'), ("y_lo", 's'), ("y_hi", 's'), ("margin", 's'), ("gap", 's')]),
];

fn check_schema(verb: &str, rec: &serde_json::Map<String, Value>) {
    let fields = SCHEMAS.iter().find(|(v, _)| *v == verb).unwrap().1;
    assert_eq!(rec["schema_version"], "1");
    assert_eq!(rec["verb"], verb);
    assert_eq!(rec.len(), fields.len() + 2, "{verb}: {rec:?}");
    for (name, kind) in fields {
        let v = rec.get(*name).unwrap_or_else(|| panic!("{verb} lacks {name}"));
        let ok = match kind {
            's' => v.as_str().is_some_and(|s| Float::parse(s).is_ok()),
            'o' => v.is_null() || v.as_str().is_some_and(|s| Float::parse(s).is_ok()),
            'i' => v.is_u64(),
            'b' => v.is_boolean(),
            _ => v.is_string(),
        };
        assert!(ok, "{verb}.{name} = {v}");
    }
}

#[test]
fn json_matches_the_schema() {
    let cases: &[(&str, &[&str])] = &[
        ("eval", &["eval", "--x", "3"]),
        ("enclose", &["enclose", "--x", "pow10:30"]),
        ("trace", &["trace", "--method", "lambda", "--x", "100", "--n", "6"]),
        ("constants", &["constants", "--digits", "20"]),
        ("figure", &["figure", "--id", "4b", "--points", "5"]),
        ("bench", &["bench", "--x", "0.5"]),
        ("xyyx", &["xyyx", "--x", "5"]),
    ];
    for (verb, args) in cases {
        let mut args = args.to_vec();
        args.extend(["--format", "json"]);
        let recs = json_lines(&args);
        assert!(!recs.is_empty());
        for r in &recs {
            check_schema(verb, r);
        }
    }
}

#[test]
fn csv_column_counts_are_fixed() {
    let cases: &[(&[&str], usize)] = &[
        (&["enclose", "--x", "3", "--format", "csv"], 10),
        (&["trace", "--x", "-0.2", "--n", "3"], 4),
        (&["constants", "--format", "csv"], 4),
        (&["figure", "--id", "2", "--points", "7"], 4),
        (&["bench", "--x", "50", "--format", "csv"], 4),
        (&["xyyx", "--x", "1.5", "--format", "csv"], 6),
    ];
    for (args, cols) in cases {
        let (code, out, err) = run(args);
        assert_eq!(code, 0, "{args:?}: {err}");
        assert!(!out.contains('\r'));
        for line in out.lines() {
            assert_eq!(line.split(',').count(), *cols, "{args:?}: {line}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn enclose_round_trip_principal(m in 1u32..10_000, e in -20i32..20, d in 5u32..60) {
        let x = format!("{m}e{e}");
        round_trip(Branch::Principal, &x, d);
    }

    #[test]
    fn enclose_round_trip_negative(t in 1u32..999_999, lower: bool, d in 5u32..60) {
        // x = -t * 1e-6 / e, inside (-1/e, 0)
        let x = Float::with_val(128, t) / 1_000_000u32 / Float::with_val(128, 1u32).exp();
        let text = format!("-{}", x.to_string_radix(10, Some(18)));
        let branch = if lower { Branch::LowerBranch } else { Branch::Principal };
        round_trip(branch, &text, d);
    }
}
