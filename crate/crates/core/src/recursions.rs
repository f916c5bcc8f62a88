//! The logarithmic recursions and their a priori error bounds.
//!
//! * `lambda`: `lambda_0 = ln x`, `lambda_{n+1} = ln x - ln lambda_n` on
//!   `x > e`; even iterates lie above `W0`, odd ones below, linear rate.
//! * `beta`: `beta_{n+1} = beta_n / (1 + beta_n) * (1 + ln(x / beta_n))`,
//!   seeded per [`Region`] so that the iterates are monotone and converge
//!   quadratically on the whole domain of both real branches.
//! * Newton, Halley and Fritsch–Shafer–Crowley steps, kept for
//!   benchmarking only.

use std::fmt;

use rug::float::Round;
use rug::ops::Pow;
use rug::Float;

use crate::bounds::{
    cached_constants, lower_left_start, principal_negative_start, sqrt_one_plus_ex, Branch,
};
use crate::certify;
use crate::domain::{branch_offset, cmp_e};
use crate::error::{domain, numerical, LambertError, Result};
use crate::real::{
    digits_to_bits, euler_e, ln10, outward_hi, rounding_floor, HighReal, Interval, MIN_PRECISION,
};

/// Precision of a priori bounds; they are only ever compared, never iterated.
const BOUND_PREC: u32 = 128;

/// Above this value of `ln x` the principal branch is iterated on `ln x`
/// rather than on `x`.
const LOG_FORM_THRESHOLD: u32 = 700;

/// Sub-interval of a branch domain with its own starting value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Region {
    /// `x > e`, principal branch.
    GtE,
    /// `0 < x < e`, principal branch.
    ZeroToE,
    /// `-1/e < x < 0`, principal branch.
    NegPrincipal,
    /// `-1/e < x <= -1/4`, lower branch.
    NegLowerLeft,
    /// `-1/4 < x < 0`, lower branch.
    NegLowerRight,
}

impl Region {
    pub fn branch(self) -> Branch {
        match self {
            Region::NegLowerLeft | Region::NegLowerRight => Branch::LowerBranch,
            _ => Branch::Principal,
        }
    }

    /// Whether the iterates approach the branch from below (for `n >= 1`).
    pub fn approaches_from_below(self) -> bool {
        !matches!(self, Region::NegPrincipal)
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Region::GtE => "gt-e",
            Region::ZeroToE => "zero-to-e",
            Region::NegPrincipal => "neg-principal",
            Region::NegLowerLeft => "neg-lower-left",
            Region::NegLowerRight => "neg-lower-right",
        })
    }
}

/// How the argument `x` is supplied.
#[derive(Clone, Debug, PartialEq)]
pub enum Argument {
    /// `x` itself.
    Direct(HighReal),
    /// `ln x`; only for `x > e`, i.e. a value greater than 1.
    LogOf(HighReal),
    /// `log10 x`, for arguments like `10^(10^20)`.
    Pow10(HighReal),
}

impl Argument {
    pub fn precision_bits(&self) -> u32 {
        match self {
            Argument::Direct(v) | Argument::LogOf(v) | Argument::Pow10(v) => v.precision_bits(),
        }
    }

    /// The same argument carried at another precision (exact when raising).
    pub fn with_precision(&self, prec: u32) -> Argument {
        match self {
            Argument::Direct(v) => Argument::Direct(v.with_precision(prec)),
            Argument::LogOf(v) => Argument::LogOf(v.with_precision(prec)),
            Argument::Pow10(v) => Argument::Pow10(v.with_precision(prec)),
        }
    }

    pub fn direct(&self) -> Option<&HighReal> {
        match self {
            Argument::Direct(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_log_form(&self) -> bool {
        !matches!(self, Argument::Direct(_))
    }

    /// An enclosure of `ln x` at `prec` bits. Exact for `LogOf`.
    pub fn log_enclosure(&self, prec: u32) -> Result<Interval> {
        let (lo, hi) = match self {
            Argument::LogOf(ell) => {
                let v = Float::with_val(prec.max(ell.prec()), ell.as_float());
                (v.clone(), v)
            }
            Argument::Pow10(k) => {
                if **k <= 0 {
                    return domain(format!("pow10 exponent must be positive, got {k}"));
                }
                let lo = Float::with_val_round(prec, &**k * ln10(prec, Round::Down), Round::Down).0;
                let hi = Float::with_val_round(prec, &**k * ln10(prec, Round::Up), Round::Up).0;
                (lo, hi)
            }
            Argument::Direct(x) => {
                if **x <= 0 {
                    return domain(format!("ln x needs x > 0, got {x}"));
                }
                let mut lo = Float::with_val(prec, &**x);
                lo.ln_round(Round::Down);
                let mut hi = Float::with_val(prec, &**x);
                hi.ln_round(Round::Up);
                (lo, hi)
            }
        };
        Ok(Interval::new(HighReal::new(lo)?, HighReal::new(hi)?))
    }
}

impl fmt::Display for Argument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Argument::Direct(v) => write!(f, "{v}"),
            Argument::LogOf(v) => write!(f, "ln:{v}"),
            Argument::Pow10(v) => write!(f, "pow10:{v}"),
        }
    }
}

/// Which scheme produced a trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Lambda,
    Beta,
    Newton,
    Halley,
    Fsc,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Lambda => "lambda",
            Method::Beta => "beta",
            Method::Newton => "newton",
            Method::Halley => "halley",
            Method::Fsc => "fsc",
        })
    }
}

/// The reference root-finding kernels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReferenceKind {
    Newton,
    Halley,
    Fsc,
}

impl From<ReferenceKind> for Method {
    fn from(kind: ReferenceKind) -> Method {
        match kind {
            ReferenceKind::Newton => Method::Newton,
            ReferenceKind::Halley => Method::Halley,
            ReferenceKind::Fsc => Method::Fsc,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceEntry {
    pub n: u32,
    pub iterate: HighReal,
    pub apriori_bound: Option<HighReal>,
    pub residual: Option<HighReal>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IterationTrace {
    pub method: Method,
    pub region: Region,
    pub entries: Vec<TraceEntry>,
}

impl IterationTrace {
    pub fn last(&self) -> &TraceEntry {
        self.entries.last().expect("a trace holds at least the starting value")
    }

    pub fn iterates(&self) -> impl Iterator<Item = &HighReal> {
        self.entries.iter().map(|e| &e.iterate)
    }
}

// ---------------------------------------------------------------------------
// classification

/// Region of a directly given `x`. Special points (`0`, and `x` equal to `e`
/// at every precision tried) are rejected; callers handle them upstream.
pub fn classify(branch: Branch, x: &HighReal) -> Result<Region> {
    let xv = x.as_float();
    if xv.is_zero() {
        return domain("x = 0 is a special point");
    }
    if *xv > 0 {
        if branch == Branch::LowerBranch {
            return domain(format!("W-1 is undefined for positive x = {x}"));
        }
        return match cmp_e(xv) {
            std::cmp::Ordering::Greater => Ok(Region::GtE),
            std::cmp::Ordering::Less => Ok(Region::ZeroToE),
            std::cmp::Ordering::Equal => domain("x = e is a special point"),
        };
    }
    if !branch_offset(xv)?.is_positive() {
        return domain(format!("x = {x} lies below the branch point -1/e"));
    }
    Ok(match branch {
        Branch::Principal => Region::NegPrincipal,
        Branch::LowerBranch if *xv <= -0.25f64 => Region::NegLowerLeft,
        Branch::LowerBranch => Region::NegLowerRight,
    })
}

/// Region of any argument form; log forms are valid only for `x > e`.
pub fn classify_argument(branch: Branch, arg: &Argument) -> Result<Region> {
    match arg {
        Argument::Direct(x) => classify(branch, x),
        _ => {
            if branch == Branch::LowerBranch {
                return domain("W-1 is undefined for positive arguments");
            }
            let ell = arg.log_enclosure(arg.precision_bits() + 64)?;
            if *ell.lo.as_float() > 1 {
                Ok(Region::GtE)
            } else if *ell.hi.as_float() == 1 && *ell.lo.as_float() == 1 {
                domain("x = e is a special point")
            } else {
                domain(format!("log-form arguments need ln x > 1, got {arg}"))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// resolved arguments

/// An argument resolved at a working precision: either `x` itself or
/// `ln x` rounded to nearest.
#[derive(Clone, Debug)]
pub(crate) enum Target {
    Direct(Float),
    Log { ell: Float },
}

impl Target {
    /// Resolves `arg` at `prec` bits, switching the principal branch to the
    /// log form once `ln x` exceeds the threshold.
    pub(crate) fn resolve(arg: &Argument, region: Region, prec: u32) -> Result<Target> {
        match arg {
            Argument::Direct(x) => {
                let xv = Float::with_val(prec.max(x.prec()), x.as_float());
                if region == Region::GtE {
                    let approx = Float::with_val(64, xv.ln_ref());
                    if approx > LOG_FORM_THRESHOLD {
                        return Target::log_from(arg, prec);
                    }
                }
                Ok(Target::Direct(xv))
            }
            _ => Target::log_from(arg, prec),
        }
    }

    fn log_from(arg: &Argument, prec: u32) -> Result<Target> {
        let ell = match arg {
            Argument::Pow10(k) => {
                if **k <= 0 {
                    return domain(format!("pow10 exponent must be positive, got {k}"));
                }
                Float::with_val(prec, &**k * ln10(prec, Round::Nearest))
            }
            Argument::LogOf(ell) => Float::with_val(prec.max(ell.prec()), &**ell),
            Argument::Direct(x) => Float::with_val(prec, x.ln_ref()),
        };
        Ok(Target::Log { ell })
    }

    /// `ln x` (nearest) for `x > 0`.
    fn ln_x(&self, prec: u32) -> Float {
        match self {
            Target::Direct(x) => Float::with_val(prec, x.ln_ref()),
            Target::Log { ell } => Float::with_val(prec, ell),
        }
    }

    fn x(&self) -> Option<&Float> {
        match self {
            Target::Direct(x) => Some(x),
            Target::Log { .. } => None,
        }
    }

    /// `ln(x / beta)`.
    fn log_ratio(&self, beta: &Float, prec: u32) -> Result<Float> {
        match self {
            Target::Direct(x) => {
                let q = Float::with_val(prec, x / beta);
                if q <= 0 || !q.is_finite() {
                    return numerical(format!(
                        "x / beta = {} is not a positive number",
                        q.to_string_radix(10, Some(12))
                    ));
                }
                Ok(q.ln())
            }
            Target::Log { ell } => {
                if *beta <= 0 {
                    return numerical("log-form iteration needs a positive iterate");
                }
                Ok(Float::with_val(prec, ell - Float::with_val(prec, beta.ln_ref())))
            }
        }
    }

    /// `|w e^w - x|`, or `|w + ln w - ln x|` in log form.
    fn residual(&self, w: &Float, prec: u32) -> Option<Float> {
        match self {
            Target::Direct(x) => {
                let fw = Float::with_val(prec, w.exp_ref()) * w;
                Some(Float::with_val(prec, fw - x).abs())
            }
            Target::Log { ell } => {
                if *w <= 0 {
                    return None;
                }
                let g = Float::with_val(prec, w.ln_ref()) + w;
                Some(Float::with_val(prec, g - ell).abs())
            }
        }
    }
}

// ---------------------------------------------------------------------------
// beta recursion

pub(crate) fn start_value(region: Region, target: &Target, prec: u32) -> Result<Float> {
    match region {
        Region::GtE => {
            let l1 = target.ln_x(prec);
            let l2 = Float::with_val(prec, l1.ln_ref());
            Ok(l1 - l2)
        }
        Region::ZeroToE => {
            let x = target.x().ok_or_else(|| mismatch(region))?;
            Ok(Float::with_val(prec, x / euler_e(prec, Round::Nearest)))
        }
        Region::NegPrincipal => {
            let x = target.x().ok_or_else(|| mismatch(region))?;
            let s = sqrt_one_plus_ex(x, prec);
            Ok(principal_negative_start(x, &s, prec))
        }
        Region::NegLowerLeft => {
            let x = target.x().ok_or_else(|| mismatch(region))?;
            let s = sqrt_one_plus_ex(x, prec);
            Ok(lower_left_start(&s, prec))
        }
        Region::NegLowerRight => {
            let x = target.x().ok_or_else(|| mismatch(region))?;
            let ln_neg = Float::with_val(prec, Float::with_val(prec, -x).ln_ref());
            let lnln = Float::with_val(prec, -&ln_neg).ln();
            Ok(ln_neg - lnln)
        }
    }
}

fn mismatch(region: Region) -> LambertError {
    LambertError::Domain(format!("region {region} needs a directly given x"))
}

pub(crate) fn step(target: &Target, beta: &Float, prec: u32) -> Result<Float> {
    let one_plus = Float::with_val(prec, beta + 1u32);
    if one_plus.is_zero() {
        return numerical("1 + beta vanished; the working precision is too low near the branch point");
    }
    let log_ratio = target.log_ratio(beta, prec)?;
    let num = Float::with_val(prec, log_ratio + 1u32) * beta;
    Ok(num / one_plus)
}

/// Bits lost to cancellation in `1 + e x` near the branch point; the
/// recursion amplifies rounding errors by about half that many bits.
pub(crate) fn cancellation_bits(region: Region, target: &Target) -> u32 {
    match (region, target) {
        (Region::NegPrincipal | Region::NegLowerLeft, Target::Direct(x)) => {
            branch_offset(x).map(|o| o.lost_bits()).unwrap_or(0)
        }
        _ => 0,
    }
}

/// Checks one step against the proven ordering of the region.
fn check_beta_step(region: Region, n: u32, prev: &Float, next: &Float, prec: u32, margin: i32) -> Result<()> {
    let floor = rounding_floor(prev, prec, margin);
    let diff = Float::with_val(prec, next - prev);
    let wrong_way = match region {
        Region::NegPrincipal => diff > floor,
        Region::NegLowerLeft | Region::NegLowerRight if n == 0 => diff > floor,
        _ => -diff > floor,
    };
    let above_minus_one = Float::with_val(prec, next + 1u32);
    let out_of_range = match region {
        Region::GtE | Region::ZeroToE => *next <= 0,
        Region::NegPrincipal => *next >= 0 || -above_minus_one > floor,
        Region::NegLowerLeft | Region::NegLowerRight => above_minus_one > floor,
    };
    if wrong_way || out_of_range {
        return numerical(format!(
            "beta lost its proven monotonicity at step {} ({} -> {}); increase the precision",
            n + 1,
            prev.to_string_radix(10, Some(20)),
            next.to_string_radix(10, Some(20))
        ));
    }
    Ok(())
}

/// Runs `n` steps, calling `visit` on every iterate including `beta_0`.
pub(crate) fn run_beta(
    region: Region,
    target: &Target,
    n: u32,
    prec: u32,
    mut visit: impl FnMut(u32, &Float) -> Result<()>,
) -> Result<Float> {
    let margin = 16 + (cancellation_bits(region, target) / 2 + 8) as i32;
    let mut beta = start_value(region, target, prec)?;
    visit(0, &beta)?;
    for k in 0..n {
        let next = step(target, &beta, prec)?;
        check_beta_step(region, k, &beta, &next, prec, margin)?;
        beta = next;
        visit(k + 1, &beta)?;
    }
    Ok(beta)
}

fn ensure_region(region: Region, arg: &Argument) -> Result<()> {
    let actual = classify_argument(region.branch(), arg)?;
    if actual != region {
        return domain(format!("argument {arg} belongs to region {actual}, not {region}"));
    }
    Ok(())
}

/// The starting value of the region.
pub fn beta_start(region: Region, arg: &Argument) -> Result<HighReal> {
    ensure_region(region, arg)?;
    let prec = arg.precision_bits();
    let target = Target::resolve(arg, region, prec)?;
    HighReal::new(start_value(region, &target, prec)?)
}

/// One step of the beta recursion at the larger of the two precisions.
pub fn beta_step(arg: &Argument, beta: &HighReal) -> Result<HighReal> {
    let prec = arg.precision_bits().max(beta.precision_bits());
    let target = match arg {
        Argument::Direct(x) => Target::Direct(Float::with_val(prec, x.as_float())),
        _ => Target::log_from(arg, prec)?,
    };
    HighReal::new(step(&target, beta.as_float(), prec)?)
}

/// `beta_0 .. beta_n` with a priori bounds and residuals. Any step that
/// breaks the region's proven monotonicity by more than the rounding floor
/// aborts with [`LambertError::Numerical`].
pub fn beta_iterate(branch: Branch, arg: &Argument, n: u32) -> Result<IterationTrace> {
    let region = classify_argument(branch, arg)?;
    let prec = arg.precision_bits();
    let target = Target::resolve(arg, region, prec)?;
    let bound = AprioriBound::new(region, arg)?;
    let mut entries = Vec::with_capacity(n as usize + 1);
    run_beta(region, &target, n, prec, |k, beta| {
        entries.push(TraceEntry {
            n: k,
            iterate: HighReal::new(beta.clone())?,
            apriori_bound: bound.best(k).ok(),
            residual: target.residual(beta, prec).map(HighReal::new).transpose()?,
        });
        Ok(())
    })?;
    Ok(IterationTrace {
        method: Method::Beta,
        region,
        entries,
    })
}

/// A priori bounds on `|W - beta_n|` for one argument.
///
/// Region by region (`n >= 1`):
/// * `GtE`: `min(kappa1^(2^n), (e/(e-1) L2/L1)^(2^n) / (L1 - L2)^(2^n - 1))`
/// * `ZeroToE`: `kappa2^(2^n - 1) / 5`
/// * `NegPrincipal`: `(1/10)^(2^n)`
/// * `NegLowerLeft`: `(1/2)^(2^n)`
/// * `NegLowerRight`: the same, sharpened by `(1 / (|b| |1 + b|))^(2^n - 1)`
///   with `b = ln(-x) - ln(-ln(-x))`.
///
/// For `n = 0` the starting-value estimates are returned, except on the
/// lower branch where the ordering only holds from `n = 1` on.
#[derive(Clone, Debug)]
pub struct AprioriBound {
    region: Region,
    /// `ln x` on `GtE`, `b` on `NegLowerRight`.
    data: Option<Float>,
}

impl AprioriBound {
    pub fn new(region: Region, arg: &Argument) -> Result<Self> {
        let wp = BOUND_PREC + 64;
        let data = match region {
            Region::GtE => Some(Float::with_val(wp, &*arg.log_enclosure(wp)?.hi)),
            Region::NegLowerRight => {
                let x = arg.direct().ok_or_else(|| mismatch(region))?;
                let target = Target::Direct(Float::with_val(wp.max(x.prec()), x.as_float()));
                Some(start_value(region, &target, wp)?)
            }
            _ => None,
        };
        Ok(AprioriBound { region, data })
    }

    /// Only the x-independent estimates.
    pub(crate) fn uniform_only(region: Region) -> Self {
        AprioriBound { region, data: None }
    }

    pub fn region(&self) -> Region {
        self.region
    }

    /// The x-independent estimate.
    pub fn uniform(&self, n: u32) -> Result<HighReal> {
        let wp = BOUND_PREC + 64;
        let v = match (self.region, n) {
            (Region::NegLowerLeft | Region::NegLowerRight, 0) => {
                return domain("the lower-branch iterates are only ordered from n = 1 on")
            }
            (Region::GtE, _) => square_up(&kappa1_up(wp), n),
            (Region::ZeroToE, _) => {
                let k2 = kappa2_up(wp);
                let five_k2 = Float::with_val_round(wp, &k2 * 5u32, Round::Down).0;
                let num = square_up(&k2, n);
                Float::with_val_round(wp, &num / &five_k2, Round::Up).0
            }
            (Region::NegPrincipal, _) => {
                let tenth = Float::with_val_round(wp, 0.1f64, Round::Up).0;
                square_up(&Float::with_val_round(wp, 1u32 / Float::with_val(wp, 10u32), Round::Up).0.max(&tenth), n)
            }
            (Region::NegLowerLeft | Region::NegLowerRight, _) => {
                square_up(&Float::with_val(wp, 0.5f64), n)
            }
        };
        finish_bound(v)
    }

    /// The x-dependent estimate where one exists: on `GtE` the
    /// `(e/(e-1) L2/L1)^(2^n) / (L1 - L2)^(2^n - 1)` curve, on
    /// `NegLowerRight` the sharpened power of one half.
    pub fn pointwise(&self, n: u32) -> Option<HighReal> {
        let wp = BOUND_PREC + 64;
        let data = self.data.as_ref()?;
        let v = match self.region {
            Region::GtE => {
                let l1 = data;
                let l2 = Float::with_val(wp, l1.ln_ref());
                let e = euler_e(wp, Round::Nearest);
                let c = Float::with_val(wp, &e / Float::with_val(wp, &e - 1u32));
                let ratio = Float::with_val(wp, c * &l2) / l1;
                if n == 0 {
                    inflate(ratio)
                } else {
                    let gap = Float::with_val(wp, l1 - &l2);
                    let base = inflate(Float::with_val(wp, &ratio / &gap));
                    let gap_up = inflate(gap);
                    Float::with_val_round(wp, square_up(&base, n) * gap_up, Round::Up).0
                }
            }
            Region::NegLowerRight => {
                if n == 0 {
                    return None;
                }
                let b = data;
                let prod = Float::with_val(wp, b.abs_ref()) * Float::with_val(wp, b + 1u32).abs();
                let base = inflate(Float::with_val(wp, 2u32 * &prod).recip());
                let prod_up = inflate(prod);
                Float::with_val_round(wp, square_up(&base, n) * prod_up, Round::Up).0
            }
            _ => return None,
        };
        finish_bound(v).ok()
    }

    /// The smaller of the uniform and pointwise estimates.
    pub fn best(&self, n: u32) -> Result<HighReal> {
        let uniform = self.uniform(n)?;
        Ok(match self.pointwise(n) {
            Some(p) if p < uniform => p,
            _ => uniform,
        })
    }
}

/// Upper bound on `|W - beta_n|` for the argument's region.
pub fn beta_error_bound(region: Region, arg: &Argument, n: u32) -> Result<HighReal> {
    if n == 0 && region.branch() == Branch::LowerBranch {
        return domain("the lower-branch iterates are only ordered from n = 1 on");
    }
    AprioriBound::new(region, arg)?.best(n)
}

fn kappa1_up(wp: u32) -> Float {
    let mut r = Float::with_val(wp, -1);
    r.exp_round(Round::Up);
    let mut s = Float::with_val_round(wp, &r + 1u32, Round::Up).0;
    s.ln_round(Round::Up);
    s
}

fn kappa2_up(wp: u32) -> Float {
    let mut r = Float::with_val(wp, -1);
    r.exp_round(Round::Down);
    Float::with_val_round(wp, 1u32 - &r, Round::Up).0
}

/// `base^(2^n)` by `n` upward-rounded squarings; on underflow MPFR returns
/// the smallest positive number, which is still an upper bound.
fn square_up(base: &Float, n: u32) -> Float {
    let mut v = base.clone();
    for _ in 0..n {
        v = Float::with_val_round(v.prec(), v.square_ref(), Round::Up).0;
        if v.is_zero() {
            v.next_up();
        }
    }
    v
}

/// Absorbs the nearest-rounding error of a short formula evaluated at
/// `BOUND_PREC + 64` bits.
fn inflate(v: Float) -> Float {
    let wp = v.prec();
    let factor = Float::with_val(wp, 1u32) + (Float::with_val(wp, 1u32) >> BOUND_PREC);
    Float::with_val_round(wp, v * factor, Round::Up).0
}

fn finish_bound(v: Float) -> Result<HighReal> {
    let mut out = outward_hi(&v, BOUND_PREC);
    if out.is_zero() {
        out.next_up();
    }
    HighReal::new(out)
}

// ---------------------------------------------------------------------------
// lambda recursion

/// `lambda_0 .. lambda_n` for `x > e`, checking `1 < lambda_k < x/e` and
/// that every odd iterate stays below every even one.
pub fn lambda_iterate(x: &HighReal, n: u32) -> Result<IterationTrace> {
    let xv = x.as_float();
    let prec = x.precision_bits();
    match cmp_e(xv) {
        std::cmp::Ordering::Greater => {}
        std::cmp::Ordering::Equal => {
            // indistinguishable from e: every iterate is 1
            let one = HighReal::from_i64(1, prec)?;
            let entries = (0..=n)
                .map(|k| TraceEntry { n: k, iterate: one.clone(), apriori_bound: None, residual: None })
                .collect();
            return Ok(IterationTrace { method: Method::Lambda, region: Region::GtE, entries });
        }
        std::cmp::Ordering::Less => {
            return domain(format!("the lambda recursion needs x > e, got {x}"));
        }
    }
    let target = Target::Direct(xv.clone());
    let l1 = Float::with_val(prec, xv.ln_ref());
    let x_over_e = Float::with_val(prec, xv / euler_e(prec, Round::Nearest));
    let with_bound = *xv > *cached_constants().x_triple_star.hi.as_float();

    let mut entries = Vec::with_capacity(n as usize + 1);
    let mut lambda = l1.clone();
    let mut max_odd: Option<Float> = None;
    let mut min_even: Option<Float> = None;
    for k in 0..=n {
        if k > 0 {
            lambda = Float::with_val(prec, &l1 - Float::with_val(prec, lambda.ln_ref()));
        }
        let floor = rounding_floor(&lambda, prec, 16);
        if lambda <= 1 || Float::with_val(prec, &lambda - &x_over_e) > floor {
            return numerical(format!("lambda_{k} left (1, x/e); increase the precision"));
        }
        if k % 2 == 0 {
            if min_even.as_ref().map_or(true, |m| lambda < *m) {
                min_even = Some(lambda.clone());
            }
        } else if max_odd.as_ref().map_or(true, |m| lambda > *m) {
            max_odd = Some(lambda.clone());
        }
        if let (Some(odd), Some(even)) = (&max_odd, &min_even) {
            if Float::with_val(prec, odd - even) > floor {
                return numerical(format!(
                    "lambda lost the odd/even sandwich at step {k}; increase the precision"
                ));
            }
        }
        let apriori_bound = if with_bound && k % 2 == 0 {
            Some(lambda_error_bound(x, k / 2)?)
        } else {
            None
        };
        entries.push(TraceEntry {
            n: k,
            iterate: HighReal::new(lambda.clone())?,
            apriori_bound,
            residual: target.residual(&lambda, prec).map(HighReal::new).transpose()?,
        });
    }
    Ok(IterationTrace {
        method: Method::Lambda,
        region: Region::GtE,
        entries,
    })
}

/// `ln x - ln lambda`, one step of the lambda recursion.
pub fn lambda_step(x: &HighReal, lambda: &HighReal) -> Result<HighReal> {
    if **x <= 0 || **lambda <= 0 {
        return domain("the lambda step needs x > 0 and lambda > 0");
    }
    let prec = x.precision_bits().max(lambda.precision_bits());
    let l1 = Float::with_val(prec, x.ln_ref());
    HighReal::new(l1 - Float::with_val(prec, lambda.ln_ref()))
}

/// `(sqrt(2 ln 2) / (L1 - L2))^(2n) * L2`, an upper bound on
/// `lambda_{2n} - W0(x)` for `x > x***`.
pub fn lambda_error_bound(x: &HighReal, n: u32) -> Result<HighReal> {
    let xv = x.as_float();
    if *xv <= *cached_constants().x_triple_star.hi.as_float() {
        return domain(format!("the lambda error bound needs x > x*** (about 5.5807), got {x}"));
    }
    let wp = BOUND_PREC + 64;
    let l1 = Float::with_val(wp, xv.ln_ref());
    let l2 = Float::with_val(wp, l1.ln_ref());
    let root = Float::with_val(wp, Float::with_val(wp, 2u32).ln() * 2u32).sqrt();
    let ratio = inflate(root / Float::with_val(wp, &l1 - &l2));
    let powed = Float::with_val_round(wp, (&ratio).pow(2 * n), Round::Up).0;
    let v = Float::with_val_round(wp, powed * inflate(l2), Round::Up).0;
    finish_bound(v)
}

/// `(lambda_n - W0) / (W0 - lambda_{n+1})`, which tends to `W0(x)`.
/// `W0` comes from a certified enclosure at the argument's precision.
pub fn lambda_ratio(x: &HighReal, n: u32) -> Result<HighReal> {
    if cmp_e(x.as_float()) != std::cmp::Ordering::Greater {
        return domain(format!("the lambda ratio is 0/0 or undefined at x = {x}"));
    }
    let trace = lambda_iterate(x, n + 1)?;
    let prec = x.precision_bits();
    let digits = ((prec as f64) * std::f64::consts::LOG10_2).floor().max(1.0) as u32;
    let enc = certify::eval_certified(Branch::Principal, &Argument::Direct(x.clone()), digits)?;
    let w = Float::with_val(prec, enc.midpoint());
    let ln = trace.entries[n as usize].iterate.as_float();
    let ln1 = trace.entries[n as usize + 1].iterate.as_float();
    let num = Float::with_val(prec, ln - &w);
    let den = Float::with_val(prec, &w - ln1);
    if den.is_zero() {
        return numerical("lambda_{n+1} coincides with W0 at working precision");
    }
    HighReal::new(num / den)
}

// ---------------------------------------------------------------------------
// reference kernels

/// One step of Newton, Halley or FSC for `w e^w = x`.
pub fn reference_step(kind: ReferenceKind, x: &HighReal, w: &HighReal) -> Result<HighReal> {
    let prec = x.precision_bits().max(w.precision_bits());
    let xv = x.as_float();
    let w = Float::with_val(prec, w.as_float());
    let one_plus = Float::with_val(prec, &w + 1u32);
    if one_plus.is_zero() {
        return numerical("w = -1 is a critical point of w e^w");
    }
    let next = match kind {
        ReferenceKind::Newton => {
            let x_exp = Float::with_val(prec, -&w).exp() * xv;
            let corr = Float::with_val(prec, &w - x_exp) / &one_plus;
            w - corr
        }
        ReferenceKind::Halley => {
            let ew = Float::with_val(prec, w.exp_ref());
            let r = Float::with_val(prec, &w * &ew) - xv;
            let plus_two = Float::with_val(prec, &w + 2u32);
            let second = plus_two * &r / (Float::with_val(prec, &one_plus * 2u32));
            let denom = ew * &one_plus - second;
            if denom.is_zero() {
                return numerical("Halley denominator vanished");
            }
            w - r / denom
        }
        ReferenceKind::Fsc => {
            let ratio = Float::with_val(prec, xv / &w);
            if ratio <= 0 || !ratio.is_finite() {
                return numerical("FSC needs x / w > 0");
            }
            let z = ratio.ln() - &w;
            let inner = Float::with_val(prec, &one_plus + Float::with_val(prec, &z * 2u32) / 3u32);
            let q = Float::with_val(prec, &one_plus * 2u32) * inner;
            let q_minus_2z = Float::with_val(prec, &q - Float::with_val(prec, &z * 2u32));
            if q_minus_2z.is_zero() {
                return numerical("FSC denominator q - 2z vanished");
            }
            let frac = Float::with_val(prec, &z * Float::with_val(prec, &q - &z))
                / (Float::with_val(prec, &one_plus * &q_minus_2z));
            Float::with_val(prec, frac + 1u32) * w
        }
    };
    if !next.is_finite() {
        return numerical(format!("{kind:?} step produced a non-finite value"));
    }
    HighReal::new(next)
}

/// Iterates a reference kernel from the region's starting value until the
/// residual `|w e^w - x|` drops below `tol` or `max_steps` is reached.
pub fn reference_iterate(
    kind: ReferenceKind,
    branch: Branch,
    x: &HighReal,
    max_steps: u32,
    tol: Option<&Float>,
) -> Result<IterationTrace> {
    let region = classify(branch, x)?;
    let prec = x.precision_bits();
    let target = Target::Direct(x.as_float().clone());
    let mut w = HighReal::new(start_value(region, &target, prec)?)?;
    let mut entries = Vec::new();
    for k in 0..=max_steps {
        let residual = target.residual(&w, prec).expect("direct residual");
        let done = tol.is_some_and(|t| residual < *t);
        entries.push(TraceEntry {
            n: k,
            iterate: w.clone(),
            apriori_bound: None,
            residual: Some(HighReal::new(residual)?),
        });
        if done || k == max_steps {
            break;
        }
        w = reference_step(kind, x, &w)?;
    }
    Ok(IterationTrace {
        method: kind.into(),
        region,
        entries,
    })
}

/// Bits of precision appropriate for `digits` decimal digits plus guard.
pub fn working_precision(digits: u32) -> u32 {
    digits_to_bits(digits) + MIN_PRECISION
}
