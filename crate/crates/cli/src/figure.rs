//! Error curves `|W - beta_n|` against their a priori bounds.

use rug::float::Round;
use rug::Float;

use lambertw_core::{
    beta_iterate, classify, eval_certified, AprioriBound, Argument, Branch, HighReal,
    LambertError,
};

use crate::args::FigureId;
use crate::output::{sci, FigureRecord};
use crate::CliError;

/// Bits for the grid and the recursion; the oracle runs at four times this.
const GRID_PREC: u32 = 512;
const STEPS: u32 = 3;

#[derive(Clone, Copy)]
enum Spacing {
    Log,
    Linear,
}

#[derive(Clone, Copy)]
enum BoundKind {
    Uniform,
    Pointwise,
}

struct Layout {
    branch: Branch,
    lo: Float,
    hi: Float,
    spacing: Spacing,
    bound: BoundKind,
}

fn layout(id: FigureId) -> Layout {
    let p = GRID_PREC;
    let e = Float::with_val(p, 1u32).exp();
    let minus_inv_e = -Float::with_val(p, e.recip_ref());
    let zero = Float::new(p);
    let (branch, lo, hi, spacing, bound) = match id {
        FigureId::One => (
            Branch::Principal,
            e,
            Float::with_val(p, Float::parse("1e20").unwrap()),
            Spacing::Log,
            BoundKind::Pointwise,
        ),
        FigureId::Two => (Branch::Principal, zero, e, Spacing::Linear, BoundKind::Uniform),
        FigureId::Three => (Branch::Principal, minus_inv_e, zero, Spacing::Linear, BoundKind::Uniform),
        FigureId::FourA => (Branch::LowerBranch, minus_inv_e, zero, Spacing::Linear, BoundKind::Uniform),
        FigureId::FourB => (
            Branch::LowerBranch,
            Float::with_val(p, -0.25f64),
            zero,
            Spacing::Linear,
            BoundKind::Pointwise,
        ),
    };
    Layout {
        branch,
        lo,
        hi,
        spacing,
        bound,
    }
}

/// `points` interior grid points; the endpoints sit one step outside.
fn grid(l: &Layout, points: u32) -> Vec<Float> {
    let p = GRID_PREC;
    let steps = points + 1;
    (1..=points)
        .map(|i| {
            let t = Float::with_val(p, i) / steps;
            match l.spacing {
                Spacing::Linear => {
                    let span = Float::with_val(p, &l.hi - &l.lo);
                    Float::with_val(p, &l.lo + span * t)
                }
                Spacing::Log => {
                    let a = Float::with_val(p, l.lo.ln_ref());
                    let b = Float::with_val(p, l.hi.ln_ref());
                    (Float::with_val(p, &b - &a) * t + a).exp()
                }
            }
        })
        .collect()
}

/// Tags a failure with the grid point, keeping its kind.
fn row_error(e: LambertError, x: &Float) -> CliError {
    let at = |m: String| format!("at x = {}: {m}", x.to_string_radix(10, Some(20)));
    CliError::Lambert(match e {
        LambertError::Domain(m) => LambertError::Domain(at(m)),
        LambertError::Precision(m) => LambertError::Precision(at(m)),
        LambertError::Numerical(m) => LambertError::Numerical(at(m)),
        LambertError::Certification(m) => LambertError::Certification(at(m)),
    })
}

/// Rows sorted by `x`, then `n`, for `n = 1..=3`.
pub fn figure_rows(id: FigureId, points: u32) -> Result<Vec<FigureRecord>, CliError> {
    let l = layout(id);
    let oracle_prec = 4 * GRID_PREC;
    let oracle_digits = (f64::from(oracle_prec) * std::f64::consts::LOG10_2) as u32 - 8;
    let mut rows = Vec::with_capacity(points as usize * STEPS as usize);
    for x in grid(&l, points) {
        let hx = HighReal::new(x.clone())?;
        let region = classify(l.branch, &hx)?;
        let arg = Argument::Direct(hx);
        let bounds = AprioriBound::new(region, &arg).map_err(|e| row_error(e, &x))?;
        let trace = beta_iterate(l.branch, &arg, STEPS).map_err(|e| row_error(e, &x))?;
        let w = eval_certified(l.branch, &arg.with_precision(oracle_prec), oracle_digits)
            .map_err(|e| row_error(e, &x))?
            .midpoint();
        let label = x.to_string_radix(10, Some(20));
        for entry in trace.entries.iter().filter(|e| e.n >= 1) {
            let actual = Float::with_val(oracle_prec, &w - entry.iterate.as_float()).abs();
            let bound = match l.bound {
                BoundKind::Uniform => bounds.uniform(entry.n)?,
                BoundKind::Pointwise => bounds.pointwise(entry.n).ok_or_else(|| {
                    row_error(LambertError::Domain("no pointwise bound".into()), &x)
                })?,
            };
            rows.push(FigureRecord {
                x: label.clone(),
                n: entry.n,
                actual_error: sci(&actual, 8, Round::Nearest),
                bound: sci(bound.as_float(), 8, Round::Up),
            });
        }
    }
    Ok(rows)
}

