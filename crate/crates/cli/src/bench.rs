//! Steps and wall time each recursion needs to reach `|w e^w - x| < 10^-digits`.

use std::time::Instant;

use rug::float::Round;
use rug::Float;

use lambertw_core::{
    beta_start, beta_step, classify, lambda_step, reference_step, working_precision, Argument,
    Branch, HighReal, LambertError, Method, ReferenceKind,
};

use crate::output::{sci, BenchRecord};
use crate::CliError;

pub const MAX_STEPS: u32 = 200;

const METHODS: [Method; 5] = [
    Method::Lambda,
    Method::Beta,
    Method::Newton,
    Method::Halley,
    Method::Fsc,
];

enum Outcome {
    Converged { steps: u32, residual: Float },
    Dnf { residual: Option<Float> },
    NotApplicable,
}

fn residual(x: &Float, w: &Float) -> Float {
    let p = x.prec().max(w.prec());
    let we = Float::with_val(p, w.exp_ref()) * w;
    (we - x).abs()
}

/// Iterates `step` from `start` until the residual drops below `tol`.
fn run(
    x: &Float,
    start: HighReal,
    tol: &Float,
    mut step: impl FnMut(&HighReal) -> lambertw_core::Result<HighReal>,
) -> Outcome {
    let mut w = start;
    for k in 0..=MAX_STEPS {
        let r = residual(x, &w);
        if r < *tol {
            return Outcome::Converged { steps: k, residual: r };
        }
        if k == MAX_STEPS {
            return Outcome::Dnf { residual: Some(r) };
        }
        w = match step(&w) {
            Ok(next) => next,
            Err(_) => return Outcome::Dnf { residual: Some(r) },
        };
    }
    unreachable!("the loop returns at the step cap")
}

fn run_method(
    method: Method,
    branch: Branch,
    x: &HighReal,
    arg: &Argument,
    start: &HighReal,
    tol: &Float,
) -> Outcome {
    let xv = x.as_float();
    let kind = match method {
        Method::Lambda => {
            if branch != Branch::Principal || *xv <= Float::with_val(xv.prec(), 1u32).exp() {
                return Outcome::NotApplicable;
            }
            let Ok(l1) = HighReal::new(Float::with_val(xv.prec(), xv.ln_ref())) else {
                return Outcome::Dnf { residual: None };
            };
            return run(xv, l1, tol, |w| lambda_step(x, w));
        }
        Method::Beta => return run(xv, start.clone(), tol, |w| beta_step(arg, w)),
        Method::Newton => ReferenceKind::Newton,
        Method::Halley => ReferenceKind::Halley,
        Method::Fsc => ReferenceKind::Fsc,
    };
    run(xv, start.clone(), tol, |w| reference_step(kind, x, w))
}

/// One row per method, in a fixed order.
pub fn bench_rows(branch: Branch, x: &HighReal, digits: u32) -> Result<Vec<BenchRecord>, CliError> {
    // an absolute residual target on a large x needs its exponent's worth of extra bits
    let scale = x.get_exp().unwrap_or(0).unsigned_abs();
    let prec = x.precision_bits().max(working_precision(digits) + scale);
    let x = x.with_precision(prec);
    let region = classify(branch, &x)?;
    let arg = Argument::Direct(x.clone());
    let start = beta_start(region, &arg)?;
    let tol = Float::with_val(prec, Float::parse(format!("1e-{digits}")).map_err(|e| {
        CliError::Lambert(LambertError::Domain(e.to_string()))
    })?);

    let mut rows = Vec::with_capacity(METHODS.len());
    for method in METHODS {
        let t0 = Instant::now();
        let outcome = run_method(method, branch, &x, &arg, &start, &tol);
        let micros = t0.elapsed().as_micros();
        let (iterations, residual) = match outcome {
            Outcome::Converged { steps, residual } => (steps.to_string(), Some(residual)),
            Outcome::Dnf { residual } => ("DNF".to_string(), residual),
            Outcome::NotApplicable => ("n/a".to_string(), None),
        };
        rows.push(BenchRecord {
            method: method.to_string(),
            iterations,
            wall_time_us: micros.to_string(),
            residual: residual.map(|r| sci(&r, 3, Round::Up)),
        });
    }
    Ok(rows)
}
