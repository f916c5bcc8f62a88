//! The positive solution `y(x) != x` of `x^y = y^x`.
//!
//! With `z = -ln x / x`:
//! * `x > e`: `y = exp(-W0(z))`
//! * `1 < x < e`: `y = exp(-W-1(z))`
//!
//! The curve passes through `(e, e)` with slope `-1`.

use std::cmp::Ordering;

use rug::float::Round;
use rug::Float;

use crate::bounds::Branch;
use crate::certify::{eval_certified, Enclosure, EnclosureMethod};
use crate::domain::cmp_e;
use crate::error::{domain, LambertError, Result};
use crate::real::{digits_to_bits, euler_e, inv_e, outward_hi, outward_lo, pow10_neg, HighReal};
use crate::recursions::Argument;

#[derive(Clone, Debug, PartialEq)]
pub struct XyResult {
    pub x: HighReal,
    pub y: Enclosure,
    /// `y - (1 + (e-1)^2 / (x-1))`, from the lower end of `y`.
    pub margin: HighReal,
    /// `(x^y - x) / ln^2 x`.
    pub gap: HighReal,
}

/// `y(x)` for `x > 1`, enclosed to absolute width `10^-digits`.
pub fn y_of_x(x: &HighReal, digits: u32) -> Result<Enclosure> {
    if digits == 0 {
        return domain("digits must be positive");
    }
    let xv = x.as_float();
    if *xv <= 1 {
        return domain(format!("y(x) needs x > 1, got {x}"));
    }
    let p = digits_to_bits(digits) + 64;
    let e = euler_e(p.max(xv.prec()) + 64, Round::Nearest);
    let h = Float::with_val(e.prec(), xv - &e);
    let tol = pow10_neg(digits, p, Round::Down);
    if cmp_e(xv) == Ordering::Equal || Float::with_val(p, h.abs_ref()) * 2u32 <= tol {
        return near_e(xv, digits);
    }

    // log2 of 1/|x - e|: W is that ill-conditioned in z near the branch point
    let closeness = (-h.get_exp().unwrap_or(0)).max(0) as u32;
    let mut extra = 2u32;
    for _ in 0..4 {
        let enc = from_branch(xv, digits + extra, closeness)?;
        if enc.width() <= tol {
            return Ok(enc);
        }
        let magnitude = enc.hi.to_f64().abs().log10().ceil().max(0.0) as u32;
        extra = extra.max(magnitude + 2) + 2;
    }
    Err(LambertError::Precision(format!(
        "could not enclose y({x}) to 10^-{digits}"
    )))
}

/// `[e - 2|h|, e]` or `[e, e + 2|h|]`: the curve has slope `-1` at `e`
/// and lies on the far side of `e` from `x`.
fn near_e(x: &Float, digits: u32) -> Result<Enclosure> {
    let p = digits_to_bits(digits) + 64;
    let wp = p.max(x.prec()) + 64;
    let e_lo = euler_e(wp, Round::Down);
    let e_hi = euler_e(wp, Round::Up);
    let (lo, hi) = if *x >= e_hi {
        let h2 = Float::with_val_round(wp, x - &e_lo, Round::Up).0 * 2u32;
        (Float::with_val_round(wp, &e_lo - h2, Round::Down).0, e_hi)
    } else if *x <= e_lo {
        let h2 = Float::with_val_round(wp, &e_hi - x, Round::Up).0 * 2u32;
        (e_lo, Float::with_val_round(wp, &e_hi + h2, Round::Up).0)
    } else {
        (e_lo, e_hi)
    };
    let lo = outward_lo(&lo, p);
    let hi = outward_hi(&hi, p);
    let width = Float::with_val_round(p, &hi - &lo, Round::Up).0;
    Ok(Enclosure {
        branch: Branch::Principal,
        lo: HighReal::new(lo)?,
        hi: HighReal::new(hi)?,
        width_bound: HighReal::new(width)?,
        method: EnclosureMethod::Exact,
        iterations: 0,
        precision_bits: p,
        certified: true,
    })
}

fn from_branch(x: &Float, digits: u32, closeness: u32) -> Result<Enclosure> {
    let branch = if cmp_e(x) == Ordering::Greater {
        Branch::Principal
    } else {
        Branch::LowerBranch
    };
    let pz = digits_to_bits(digits) + 64 + 2 * closeness;
    let pz = pz.max(x.prec());

    // z = -ln x / x with outward rounding
    let mut ln_lo = Float::with_val(pz, x);
    ln_lo.ln_round(Round::Down);
    let mut ln_hi = Float::with_val(pz, x);
    ln_hi.ln_round(Round::Up);
    let z_lo = -Float::with_val_round(pz, &ln_hi / x, Round::Up).0;
    let z_hi = -Float::with_val_round(pz, &ln_lo / x, Round::Down).0;

    let w_digits = digits + (closeness as f64 * std::f64::consts::LOG10_2).ceil() as u32;
    let past_branch_point = z_lo <= -inv_e(pz, Round::Down);
    let w_at = |z: Float| -> Result<Enclosure> {
        eval_certified(branch, &Argument::Direct(HighReal::new(z)?), w_digits)
    };
    let at_hi = w_at(z_hi)?;
    let at_lo = if past_branch_point { None } else { Some(w_at(z_lo)?) };
    let minus_one = HighReal::from_i64(-1, pz)?;

    // the range of W over [z_lo, z_hi]
    let (w_lo, w_hi) = match branch {
        Branch::Principal => (at_lo.as_ref().map_or(minus_one, |e| e.lo.clone()), at_hi.hi.clone()),
        Branch::LowerBranch => (at_hi.lo.clone(), at_lo.as_ref().map_or(minus_one, |e| e.hi.clone())),
    };

    // y = exp(-w) is decreasing in w
    let wp = pz.max(w_lo.precision_bits()).max(w_hi.precision_bits());
    let mut lo = Float::with_val(wp, -&*w_hi);
    lo.exp_round(Round::Down);
    let mut hi = Float::with_val(wp, -&*w_lo);
    hi.exp_round(Round::Up);
    let width = Float::with_val_round(wp, &hi - &lo, Round::Up).0;
    let iterations = at_hi.iterations.max(at_lo.as_ref().map_or(0, |e| e.iterations));
    Ok(Enclosure {
        branch,
        lo: HighReal::new(lo)?,
        hi: HighReal::new(hi)?,
        width_bound: HighReal::new(width)?,
        method: EnclosureMethod::Beta,
        iterations,
        precision_bits: wp,
        certified: at_hi.certified && at_lo.map_or(true, |e| e.certified),
    })
}

/// `y(x) - (1 + (e-1)^2 / (x-1))`, computed from the lower end of the `y`
/// enclosure and an upper bound on the subtracted term, so a positive
/// result is a proof of the inequality at `x`.
pub fn conjecture_margin(x: &HighReal, digits: u32) -> Result<HighReal> {
    let y = y_of_x(x, digits)?;
    let p = y.lo.precision_bits().max(x.precision_bits());
    HighReal::new(margin_from(x.as_float(), y.lo.as_float(), p))
}

fn margin_from(x: &Float, y_lo: &Float, p: u32) -> Float {
    let e_hi = euler_e(p, Round::Up);
    let em1 = Float::with_val_round(p, &e_hi - 1u32, Round::Up).0;
    let sq = Float::with_val_round(p, em1.square_ref(), Round::Up).0;
    let xm1 = Float::with_val_round(p, x - 1u32, Round::Down).0;
    let frac = Float::with_val_round(p, &sq / &xm1, Round::Up).0;
    let term = Float::with_val_round(p, frac + 1u32, Round::Up).0;
    Float::with_val_round(p, y_lo - &term, Round::Down).0
}

/// `(x^y(x) - x) / ln^2 x` for `x >= e`; arguments within `10^-digits` of
/// `e` are treated as `e`.
pub fn asymptote_gap(x: &HighReal, digits: u32) -> Result<HighReal> {
    let xv = x.as_float();
    let p = digits_to_bits(digits.max(1)) + 64;
    let e = euler_e(p.max(xv.prec()) + 64, Round::Nearest);
    let below = Float::with_val(e.prec(), &e - xv);
    if below > 0 && below > pow10_neg(digits.max(1), p, Round::Up) {
        return domain(format!("the asymptote gap needs x > e, got {x}"));
    }
    gap(xv, digits.max(1))
}

fn gap(x: &Float, digits: u32) -> Result<HighReal> {
    // x^y - x amplifies the error in y by about x ln x
    let x_digits = x.to_f64().log10().max(0.0).ceil() as u32;
    let yd = digits + x_digits + 2;
    let y = y_of_x(&HighReal::new(x.clone())?, yd)?;
    let p = digits_to_bits(yd) + 64;
    let ym = Float::with_val(p, y.midpoint());
    let ln_x = Float::with_val(p, x.ln_ref());
    let xy = Float::with_val(p, &ym * &ln_x).exp();
    let num = xy - x;
    HighReal::new(num / ln_x.square())
}

/// `y`, the margin and the gap together.
pub fn solve(x: &HighReal, digits: u32) -> Result<XyResult> {
    let y = y_of_x(x, digits)?;
    let p = y.lo.precision_bits().max(x.precision_bits());
    let margin = HighReal::new(margin_from(x.as_float(), y.lo.as_float(), p))?;
    let gap = gap(x.as_float(), digits)?;
    Ok(XyResult {
        x: x.clone(),
        y,
        margin,
        gap,
    })
}
