//! Certified enclosures of `W0` and `W-1`.
//!
//! The iteration count comes from the a priori bounds, the iteration runs
//! with guard bits, and the resulting interval is accepted only after the
//! signs of `w e^w - x` at both endpoints have been checked with directed
//! rounding.

use std::fmt;

use rug::float::Round;
use rug::Float;

use crate::bounds::Branch;
use crate::domain::branch_offset;
use crate::error::{domain, LambertError, Result};
use crate::real::{digits_to_bits, pow10_neg, HighReal, Interval};
use crate::recursions::{classify_argument, run_beta, step, AprioriBound, Argument, Region, Target};

/// Guard bits on top of the requested digits.
const GUARD_BITS: u32 = 64;
/// Safety margin, in bits, of the rounding slack added to each endpoint.
const SLACK_MARGIN: i32 = 16;
/// No region needs anywhere near this many steps for representable targets.
const MAX_ITERATIONS: u32 = 64;

/// How an enclosure was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EnclosureMethod {
    /// A special point with a known value.
    Exact,
    /// The beta recursion with its a priori bound.
    Beta,
}

impl fmt::Display for EnclosureMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EnclosureMethod::Exact => "exact",
            EnclosureMethod::Beta => "beta",
        })
    }
}

/// Meaning of the `digits` target.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum WidthMode {
    /// `hi - lo <= 10^-digits`.
    #[default]
    Absolute,
    /// `(hi - lo) / max(1, |iterate|) <= 10^-digits`.
    Relative,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Enclosure {
    pub branch: Branch,
    pub lo: HighReal,
    pub hi: HighReal,
    /// Upper bound on `hi - lo`.
    pub width_bound: HighReal,
    pub method: EnclosureMethod,
    pub iterations: u32,
    pub precision_bits: u32,
    pub certified: bool,
}

impl Enclosure {
    pub fn interval(&self) -> Interval {
        Interval::new(self.lo.clone(), self.hi.clone())
    }

    pub fn midpoint(&self) -> Float {
        self.interval().midpoint()
    }

    pub fn width(&self) -> Float {
        self.interval().width()
    }

    pub fn contains(&self, value: &Float) -> bool {
        self.interval().contains(value)
    }

    fn exact(branch: Branch, value: HighReal) -> Result<Enclosure> {
        Ok(Enclosure {
            branch,
            lo: value.clone(),
            width_bound: HighReal::from_i64(0, value.precision_bits())?,
            precision_bits: value.precision_bits(),
            hi: value,
            method: EnclosureMethod::Exact,
            iterations: 0,
            certified: true,
        })
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Smallest `n` whose a priori bound is below `10^-digits`.
///
/// Starts from the closed-form inversion of the uniform `C c^(2^n)` shape and
/// then moves down while the (possibly x-sharpened) bound still suffices.
pub fn required_iterations(region: Region, arg: &Argument, digits: u32) -> u32 {
    let bound = AprioriBound::new(region, arg).unwrap_or_else(|_| AprioriBound::uniform_only(region));
    let tol = pow10_neg(digits.max(1), 128, Round::Down);
    let min_n = if region.branch() == Branch::LowerBranch { 1 } else { 0 };
    let suffices = |n: u32| bound.best(n).map(|b| *b < tol).unwrap_or(false);

    let (c, scale) = match region {
        Region::GtE => (0.313_261_687_518_222_8f64, 1.0f64),
        Region::ZeroToE => (0.632_120_558_828_557_7, 1.0 / (5.0 * 0.632_120_558_828_557_7)),
        Region::NegPrincipal => (0.1, 1.0),
        Region::NegLowerLeft | Region::NegLowerRight => (0.5, 1.0),
    };
    let target = digits.max(1) as f64 * std::f64::consts::LN_10 + scale.ln();
    let mut n = (target / (1.0 / c).ln()).log2().ceil().max(min_n as f64) as u32;
    while !suffices(n) && n < MAX_ITERATIONS {
        n += 1;
    }
    while n > min_n && suffices(n - 1) {
        n -= 1;
    }
    n
}

/// [`eval_certified_with`] in absolute width mode.
pub fn eval_certified(branch: Branch, arg: &Argument, digits: u32) -> Result<Enclosure> {
    eval_certified_with(branch, arg, digits, WidthMode::Absolute)
}

/// A certified enclosure of `W_branch(x)` of width at most `10^-digits`.
///
/// The working precision is `ceil(digits log2 10) + 64` bits plus the
/// magnitude of the result and of `ln x`, plus the bits lost forming
/// `1 + e x` near the branch point. If the sign check fails, or the
/// recursion loses monotonicity, the precision is doubled once.
pub fn eval_certified_with(
    branch: Branch,
    arg: &Argument,
    digits: u32,
    mode: WidthMode,
) -> Result<Enclosure> {
    if digits == 0 {
        return domain("digits must be positive");
    }
    if let Some(enc) = special_point(branch, arg)? {
        return Ok(enc);
    }
    let region = classify_argument(branch, arg)?;
    let prec = working_precision(region, arg, digits)?;
    match attempt(region, arg, digits, mode, prec) {
        Ok(enc) if enc.certified => Ok(enc),
        Ok(_) | Err(LambertError::Numerical(_)) => {
            let enc = attempt(region, arg, digits, mode, 2 * prec)?;
            if enc.certified {
                Ok(enc)
            } else {
                Err(LambertError::Certification(format!(
                    "endpoint sign check failed for {arg} on {branch} at {} bits",
                    2 * prec
                )))
            }
        }
        Err(e) => Err(e),
    }
}

fn special_point(branch: Branch, arg: &Argument) -> Result<Option<Enclosure>> {
    match arg {
        Argument::Direct(x) if x.is_zero() => match branch {
            Branch::Principal => Ok(Some(Enclosure::exact(branch, HighReal::from_i64(0, x.precision_bits())?)?)),
            Branch::LowerBranch => domain("W-1 is undefined at 0"),
        },
        Argument::LogOf(ell) if **ell == 1 && branch == Branch::Principal => {
            Ok(Some(Enclosure::exact(branch, HighReal::from_i64(1, ell.precision_bits())?)?))
        }
        _ => Ok(None),
    }
}

fn exponent_of(v: &Float) -> u32 {
    v.get_exp().unwrap_or(0).max(0) as u32
}

/// Bits lost forming `1 + e x` near the branch point.
fn cancellation_bits(region: Region, arg: &Argument) -> Result<u32> {
    match (region, arg) {
        (Region::NegPrincipal | Region::NegLowerLeft, Argument::Direct(x)) => {
            Ok(branch_offset(x.as_float())?.lost_bits())
        }
        _ => Ok(0),
    }
}

fn working_precision(region: Region, arg: &Argument, digits: u32) -> Result<u32> {
    let probe = Target::resolve(arg, region, 128)?;
    let start = crate::recursions::start_value(region, &probe, 128)?;
    let mut magnitude = exponent_of(&start);
    if let Target::Log { ell } = &probe {
        magnitude = magnitude.max(exponent_of(ell));
    }
    let p = digits_to_bits(digits) + GUARD_BITS + magnitude + cancellation_bits(region, arg)?;
    Ok(p.max(arg.precision_bits()))
}

fn attempt(region: Region, arg: &Argument, digits: u32, mode: WidthMode, prec: u32) -> Result<Enclosure> {
    let branch = region.branch();
    let target = Target::resolve(arg, region, prec)?;
    let bound = AprioriBound::new(region, arg)?;
    let tol = pow10_neg(digits, prec, Round::Down);
    let cancel = cancellation_bits(region, arg)?;
    let log_scale = match &target {
        Target::Log { ell } => exponent_of(ell),
        Target::Direct(_) => 0,
    };

    let mut n = required_iterations(region, arg, digits);
    let mut beta = run_beta(region, &target, n, prec, |_, _| Ok(()))?;
    loop {
        let scale = exponent_of(&beta).max(log_scale).max(1) as i32;
        let slack_exp = scale + SLACK_MARGIN + (cancel / 2 + 8) as i32 - prec as i32;
        let slack = Float::with_val(64, 1) << slack_exp;
        let b = bound.best(n)?;
        let (lo, hi) = orient(region, &beta, b.as_float(), &slack, prec);
        let width = Float::with_val_round(prec, &hi - &lo, Round::Up).0;
        let allowed = match mode {
            WidthMode::Absolute => tol.clone(),
            WidthMode::Relative => {
                let mag = Float::with_val(prec, beta.abs_ref()).max(&Float::with_val(prec, 1));
                Float::with_val_round(prec, &tol * mag, Round::Down).0
            }
        };
        if width <= allowed {
            let enc = Enclosure {
                branch,
                lo: HighReal::new(lo)?,
                hi: HighReal::new(hi)?,
                width_bound: HighReal::new(width)?,
                method: EnclosureMethod::Beta,
                iterations: n,
                precision_bits: prec,
                certified: false,
            };
            let certified = verify_enclosure(branch, arg, &enc);
            return Ok(Enclosure { certified, ..enc });
        }
        if n >= MAX_ITERATIONS {
            return Err(LambertError::Precision(format!(
                "no enclosure of width 10^-{digits} at {prec} bits"
            )));
        }
        beta = step(&target, &beta, prec)?;
        n += 1;
    }
}

/// Places the true value relative to the iterate: the recursion approaches
/// from below everywhere except on `NegPrincipal`.
fn orient(region: Region, beta: &Float, bound: &Float, slack: &Float, prec: u32) -> (Float, Float) {
    let (lo, hi) = if region.approaches_from_below() {
        let lo = Float::with_val_round(prec, beta - slack, Round::Down).0;
        let up = Float::with_val_round(prec, beta + bound, Round::Up).0;
        (lo, Float::with_val_round(prec, up + slack, Round::Up).0)
    } else {
        let down = Float::with_val_round(prec, beta - bound, Round::Down).0;
        let lo = Float::with_val_round(prec, down - slack, Round::Down).0;
        (lo, Float::with_val_round(prec, beta + slack, Round::Up).0)
    };
    let minus_one = Float::with_val(prec, -1);
    match region.branch() {
        Branch::Principal if lo < minus_one => (minus_one, hi),
        Branch::LowerBranch if hi > minus_one => (lo, minus_one),
        _ => (lo, hi),
    }
}

/// Rigorous check that `enc` contains `W_branch(x)`.
///
/// `w e^w` is increasing on `[-1, inf)` and decreasing on `(-inf, -1]`, so
/// the enclosure is correct iff the endpoint values straddle `x` in the
/// matching order. Log-form arguments compare `w + ln w` with `ln x`
/// instead. Endpoint values are bounded with directed rounding; any
/// unresolved comparison yields `false`.
pub fn verify_enclosure(branch: Branch, arg: &Argument, enc: &Enclosure) -> bool {
    let (lo, hi) = (enc.lo.as_float(), enc.hi.as_float());
    if lo > hi || enc.branch != branch {
        return false;
    }
    match branch {
        Branch::Principal if *lo < -1 => return false,
        Branch::LowerBranch if *hi > -1 => return false,
        _ => {}
    }
    let vp = enc.precision_bits.max(lo.prec()).max(hi.prec()).max(arg.precision_bits()) + 64;
    match arg {
        Argument::Direct(x) => {
            let x = x.as_float();
            let (lo_lo, lo_hi) = w_exp_w(lo, vp);
            let (hi_lo, hi_hi) = w_exp_w(hi, vp);
            match branch {
                Branch::Principal => lo_hi <= *x && hi_lo >= *x,
                Branch::LowerBranch => lo_lo >= *x && hi_hi <= *x,
            }
        }
        _ => {
            if branch != Branch::Principal || *lo <= 0 {
                return false;
            }
            let Ok(ell) = arg.log_enclosure(vp) else {
                return false;
            };
            let (_, g_lo_hi) = w_plus_ln_w(lo, vp);
            let (g_hi_lo, _) = w_plus_ln_w(hi, vp);
            g_lo_hi <= *ell.lo.as_float() && g_hi_lo >= *ell.hi.as_float()
        }
    }
}

/// Lower and upper bounds on `w e^w`.
fn w_exp_w(w: &Float, prec: u32) -> (Float, Float) {
    let mut e_lo = Float::with_val(prec, w);
    e_lo.exp_round(Round::Down);
    let mut e_hi = Float::with_val(prec, w);
    e_hi.exp_round(Round::Up);
    if *w >= 0 {
        (
            Float::with_val_round(prec, w * &e_lo, Round::Down).0,
            Float::with_val_round(prec, w * &e_hi, Round::Up).0,
        )
    } else {
        (
            Float::with_val_round(prec, w * &e_hi, Round::Down).0,
            Float::with_val_round(prec, w * &e_lo, Round::Up).0,
        )
    }
}

/// Lower and upper bounds on `w + ln w` for `w > 0`.
fn w_plus_ln_w(w: &Float, prec: u32) -> (Float, Float) {
    let mut l_lo = Float::with_val(prec, w);
    l_lo.ln_round(Round::Down);
    let mut l_hi = Float::with_val(prec, w);
    l_hi.ln_round(Round::Up);
    (
        Float::with_val_round(prec, w + &l_lo, Round::Down).0,
        Float::with_val_round(prec, w + &l_hi, Round::Up).0,
    )
}
