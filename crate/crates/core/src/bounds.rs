//! Closed-form two-sided estimates of the real branches, the crossover
//! constants that delimit where each estimate holds, and the Taylor
//! polynomial of the principal branch at the origin.
//!
//! Every pair is evaluated with 32 guard bits and then rounded outward to
//! the caller's precision, so a pair that brackets the branch in exact
//! arithmetic still brackets it after rounding.

use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

use rug::float::Round;
use rug::ops::Pow;
use rug::Float;

use crate::domain::{branch_offset, cmp_e};
use crate::error::{domain, precision, LambertError, Result};
use crate::real::{
    digits_to_bits, euler_e, inv_e, outward_hi, outward_lo, HighReal, Interval, MIN_PRECISION,
};

const GUARD_BITS: u32 = 32;

/// The real branch being evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    /// W0 on [-1/e, inf), values in [-1, inf).
    Principal,
    /// W-1 on [-1/e, 0), values in (-inf, -1].
    LowerBranch,
}

impl Branch {
    /// The conventional branch index, `0` or `-1`.
    pub fn index(self) -> i32 {
        match self {
            Branch::Principal => 0,
            Branch::LowerBranch => -1,
        }
    }

    pub fn from_index(k: i32) -> Option<Branch> {
        match k {
            0 => Some(Branch::Principal),
            -1 => Some(Branch::LowerBranch),
            _ => None,
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W{}", self.index())
    }
}

/// Which closed-form estimate produced an endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundSource {
    /// Exact special value.
    Exact,
    /// `ln x - ln ln x`.
    LogMinusLogLog,
    /// `ln x`.
    Log,
    /// `ln x - ln ln x + ln ln x / (2 ln x)`.
    AsymptoticLower,
    /// `ln x - ln ln x + e ln ln x / ((e-1) ln x)`.
    AsymptoticUpper,
    /// `L1 - L2 + L2/L1`, which crosses the branch at `x*`.
    ThreeTerm,
    /// `L1 - L2 + L2/L1 + (L2-2)L2/(2 L1^2) + L2^3/L1^3`, valid above `x*`.
    FiveTermUpper,
    /// `L1 - L2 + L2/L1 + (L2-2)L2/(2 L1^2) - 3 L2^2/(2 L1^3)`, valid above `x**`.
    FiveTermLower,
    /// `x/e` (concavity on (0, e)).
    Chord,
    /// `min(x, 1)`.
    Monotone,
    /// `-1 + sqrt(1 + e x)`.
    SquareRootBranch,
    /// The recursion's starting value for the region.
    StartValue,
    /// Starting value minus one half (lower branch near the branch point).
    StartValueLess,
    /// `(sqrt(1 + 4x) - 1)/2`.
    SmallArgumentLower,
    /// `sqrt(1 + 2x) - 1`.
    SmallArgumentUpper,
    /// `e ln(-x)/(e - 1)`.
    ScaledLog,
}

impl fmt::Display for BoundSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self {
            BoundSource::Exact => "exact",
            BoundSource::LogMinusLogLog => "log-minus-loglog",
            BoundSource::Log => "log",
            BoundSource::AsymptoticLower => "asymptotic-lower",
            BoundSource::AsymptoticUpper => "asymptotic-upper",
            BoundSource::ThreeTerm => "three-term",
            BoundSource::FiveTermUpper => "five-term-upper",
            BoundSource::FiveTermLower => "five-term-lower",
            BoundSource::Chord => "chord",
            BoundSource::Monotone => "monotone",
            BoundSource::SquareRootBranch => "square-root-branch",
            BoundSource::StartValue => "start-value",
            BoundSource::StartValueLess => "start-value-minus-half",
            BoundSource::SmallArgumentLower => "small-argument-lower",
            BoundSource::SmallArgumentUpper => "small-argument-upper",
            BoundSource::ScaledLog => "scaled-log",
        };
        f.write_str(tag)
    }
}

/// A two-sided estimate `lo <= W(x) <= hi`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundsPair {
    pub lo: HighReal,
    pub hi: HighReal,
    pub lo_source: BoundSource,
    pub hi_source: BoundSource,
}

impl BoundsPair {
    pub fn contains(&self, value: &Float) -> bool {
        *self.lo.as_float() <= *value && *value <= *self.hi.as_float()
    }

    pub fn width(&self) -> Float {
        Interval::new(self.lo.clone(), self.hi.clone()).width()
    }

    fn outward(lo: &Float, hi: &Float, prec: u32, sources: (BoundSource, BoundSource)) -> Self {
        BoundsPair {
            lo: HighReal::new(outward_lo(lo, prec)).expect("finite bound"),
            hi: HighReal::new(outward_hi(hi, prec)).expect("finite bound"),
            lo_source: sources.0,
            hi_source: sources.1,
        }
    }

    fn exact(value: Float, prec: u32) -> Self {
        let v = HighReal::new(Float::with_val(prec, value)).expect("finite value");
        BoundsPair {
            lo: v.clone(),
            hi: v,
            lo_source: BoundSource::Exact,
            hi_source: BoundSource::Exact,
        }
    }
}

/// `ln x` and `ln ln x` for `x > e`.
struct LogTerms {
    l1: Float,
    l2: Float,
}

impl LogTerms {
    fn new(x: &Float, wp: u32) -> Self {
        let l1 = Float::with_val(wp, x.ln_ref());
        let l2 = Float::with_val(wp, l1.ln_ref());
        LogTerms { l1, l2 }
    }

    fn lambert_simple(&self) -> (Float, Float) {
        (Float::with_val(self.l1.prec(), &self.l1 - &self.l2), self.l1.clone())
    }

    fn asymptotic(&self) -> (Float, Float) {
        let wp = self.l1.prec();
        let base = Float::with_val(wp, &self.l1 - &self.l2);
        let ratio = Float::with_val(wp, &self.l2 / &self.l1);
        let lo = Float::with_val(wp, &base + Float::with_val(wp, &ratio / 2u32));
        let e = euler_e(wp, Round::Nearest);
        let c = Float::with_val(wp, &e / Float::with_val(wp, &e - 1u32));
        let hi = base + c * ratio;
        (lo, hi)
    }

    fn three_term(&self) -> Float {
        let wp = self.l1.prec();
        Float::with_val(wp, &self.l1 - &self.l2) + Float::with_val(wp, &self.l2 / &self.l1)
    }

    /// `(L2-2) L2 / (2 L1^2)`.
    fn quadratic_term(&self) -> Float {
        let wp = self.l1.prec();
        let num = Float::with_val(wp, &self.l2 - 2u32) * &self.l2;
        num / (Float::with_val(wp, self.l1.square_ref()) * 2u32)
    }

    fn five_term_upper(&self) -> Float {
        let wp = self.l1.prec();
        let cube = Float::with_val(wp, &self.l2 / &self.l1).pow(3u32);
        self.three_term() + self.quadratic_term() + cube
    }

    fn five_term_lower(&self) -> Float {
        let wp = self.l1.prec();
        let l2sq = Float::with_val(wp, self.l2.square_ref());
        let l1cube = Float::with_val(wp, (&self.l1).pow(3u32));
        let last = l2sq * 3u32 / (l1cube * 2u32);
        self.three_term() + self.quadratic_term() - last
    }
}

/// Two-sided closed-form estimate of `W_branch(x)`.
///
/// * principal, `x > e`: `[ln x - ln ln x, ln x]`
/// * principal, `0 < x < e`: `[x/e, min(x, 1)]`
/// * principal, `-1/4 < x < 0`: `[(sqrt(1+4x) - 1)/2, sqrt(1+2x) - 1]`
/// * principal, `-1/e < x <= -1/4`: `[-1 + sqrt(1+ex), beta_0(x)]`
/// * lower, `-1/4 < x < 0`: `[e ln(-x)/(e-1), ln(-x) - ln(-ln(-x))]`
/// * lower, `-1/e < x <= -1/4`: `[beta_0 - 1/2, beta_0]`, `beta_0 = -1 - sqrt(2) sqrt(1+ex)`
pub fn simple_bounds(branch: Branch, x: &HighReal) -> Result<BoundsPair> {
    let p = x.precision_bits();
    let wp = p + GUARD_BITS;
    let xv = x.as_float();

    if xv.is_zero() {
        return match branch {
            Branch::Principal => Ok(BoundsPair::exact(Float::new(p), p)),
            Branch::LowerBranch => domain("W-1 is undefined at 0"),
        };
    }
    if *xv > 0 {
        if branch == Branch::LowerBranch {
            return domain(format!("W-1 is undefined for positive x = {x}"));
        }
        return Ok(match cmp_e(xv) {
            Ordering::Greater => {
                let (lo, hi) = LogTerms::new(xv, wp).lambert_simple();
                BoundsPair::outward(&lo, &hi, p, (BoundSource::LogMinusLogLog, BoundSource::Log))
            }
            Ordering::Equal => BoundsPair::exact(Float::with_val(p, 1), p),
            Ordering::Less => {
                let lo = Float::with_val_round(wp, xv / euler_e(wp, Round::Up), Round::Down).0;
                let hi = if *xv < 1 { xv.clone() } else { Float::with_val(p, 1) };
                BoundsPair {
                    lo: HighReal::new(outward_lo(&lo, p))?,
                    hi: HighReal::new(Float::with_val(p, hi))?,
                    lo_source: BoundSource::Chord,
                    hi_source: BoundSource::Monotone,
                }
            }
        });
    }

    let offset = branch_offset(xv)?;
    if !offset.is_positive() {
        return domain(format!("x = {x} lies below the branch point -1/e"));
    }
    let wp = wp + offset.lost_bits();
    let quarter = Float::with_val(8, -0.25);
    let right_of_quarter = *xv > quarter;

    match branch {
        Branch::Principal if right_of_quarter => {
            let r4 = Float::with_val(wp, Float::with_val(wp, xv * 4u32) + 1u32).sqrt();
            let lo = (r4 - 1u32) / 2u32;
            let r2 = Float::with_val(wp, Float::with_val(wp, xv * 2u32) + 1u32).sqrt();
            let hi = r2 - 1u32;
            Ok(BoundsPair::outward(
                &lo,
                &hi,
                p,
                (BoundSource::SmallArgumentLower, BoundSource::SmallArgumentUpper),
            ))
        }
        Branch::Principal => {
            let s = sqrt_one_plus_ex(xv, wp);
            let lo = Float::with_val(wp, &s - 1u32);
            let hi = principal_negative_start(xv, &s, wp);
            Ok(BoundsPair::outward(
                &lo,
                &hi,
                p,
                (BoundSource::SquareRootBranch, BoundSource::StartValue),
            ))
        }
        Branch::LowerBranch if right_of_quarter => {
            let ln_neg = Float::with_val(wp, Float::with_val(wp, -xv).ln_ref());
            let e = euler_e(wp, Round::Nearest);
            let lo = Float::with_val(wp, &e * &ln_neg) / Float::with_val(wp, &e - 1u32);
            let hi = Float::with_val(wp, &ln_neg - Float::with_val(wp, -&ln_neg).ln());
            Ok(BoundsPair::outward(
                &lo,
                &hi,
                p,
                (BoundSource::ScaledLog, BoundSource::LogMinusLogLog),
            ))
        }
        Branch::LowerBranch => {
            let s = sqrt_one_plus_ex(xv, wp);
            let hi = lower_left_start(&s, wp);
            let lo = Float::with_val(wp, &hi - 0.5f64);
            let mut pair = BoundsPair::outward(
                &lo,
                &hi,
                p,
                (BoundSource::StartValueLess, BoundSource::StartValue),
            );
            if *pair.hi.as_float() > -1 {
                pair.hi = HighReal::new(Float::with_val(p, -1))?;
            }
            Ok(pair)
        }
    }
}

/// `sqrt(1 + e x)` at `wp` bits.
pub(crate) fn sqrt_one_plus_ex(x: &Float, wp: u32) -> Float {
    let ex = Float::with_val(wp, x * euler_e(wp, Round::Nearest));
    let mut s = Float::with_val(wp, ex + 1u32);
    if s < 0 {
        s = Float::new(wp);
    }
    s.sqrt()
}

/// `e x ln(1 + s) / (s (1 + s))` with `s = sqrt(1 + e x)`.
pub(crate) fn principal_negative_start(x: &Float, s: &Float, wp: u32) -> Float {
    let ex = Float::with_val(wp, x * euler_e(wp, Round::Nearest));
    let one_s = Float::with_val(wp, s + 1u32);
    let num = ex * Float::with_val(wp, one_s.ln_ref());
    num / (Float::with_val(wp, s * &one_s))
}

/// `-1 - sqrt(2) s` with `s = sqrt(1 + e x)`.
pub(crate) fn lower_left_start(s: &Float, wp: u32) -> Float {
    let root2 = Float::with_val(wp, 2u32).sqrt();
    -(root2 * s) - 1u32
}

/// The classical asymptotic pair on `(e, inf)`:
/// `L1 - L2 + L2/(2 L1) < W0 < L1 - L2 + e L2 / ((e-1) L1)`.
pub fn older_bounds_w0(x: &HighReal) -> Result<BoundsPair> {
    let p = x.precision_bits();
    if cmp_e(x.as_float()) != Ordering::Greater {
        return domain(format!("asymptotic bounds need x > e, got {x}"));
    }
    let (lo, hi) = LogTerms::new(x.as_float(), p + GUARD_BITS).asymptotic();
    Ok(BoundsPair::outward(
        &lo,
        &hi,
        p,
        (BoundSource::AsymptoticLower, BoundSource::AsymptoticUpper),
    ))
}

/// Sharper bounds for `x > e` built from `L1 = ln x`, `L2 = ln ln x`.
///
/// `L1 - L2 + L2/L1` lies above `W0` on `(e, x*)` and below it beyond `x*`;
/// above `x*` the five-term upper estimate applies, and above `x**` the
/// five-term lower estimate replaces the three-term one. On `(e, x*)` the
/// lower side falls back to the asymptotic lower estimate.
pub fn refined_bounds_w0(x: &HighReal) -> Result<BoundsPair> {
    let p = x.precision_bits();
    let xv = x.as_float();
    match cmp_e(xv) {
        Ordering::Greater => {}
        Ordering::Equal => return Ok(BoundsPair::exact(Float::with_val(p, 1), p)),
        Ordering::Less => return domain(format!("refined bounds need x > e, got {x}")),
    }
    let consts = cached_constants();
    let terms = LogTerms::new(xv, p + GUARD_BITS);
    let (older_lo, _) = terms.asymptotic();

    if *xv < *consts.x_star.lo.as_float() {
        let hi = terms.three_term();
        return Ok(BoundsPair::outward(
            &older_lo,
            &hi,
            p,
            (BoundSource::AsymptoticLower, BoundSource::ThreeTerm),
        ));
    }
    let hi = terms.five_term_upper();
    if *xv <= *consts.x_star.hi.as_float() {
        return Ok(BoundsPair::outward(
            &older_lo,
            &hi,
            p,
            (BoundSource::AsymptoticLower, BoundSource::FiveTermUpper),
        ));
    }
    if *xv > *consts.x_double_star.hi.as_float() {
        let lo = terms.five_term_lower();
        return Ok(BoundsPair::outward(
            &lo,
            &hi,
            p,
            (BoundSource::FiveTermLower, BoundSource::FiveTermUpper),
        ));
    }
    let lo = terms.three_term();
    Ok(BoundsPair::outward(
        &lo,
        &hi,
        p,
        (BoundSource::ThreeTerm, BoundSource::FiveTermUpper),
    ))
}

/// The crossover constants and the two contraction constants of the
/// quadratic recursion.
#[derive(Clone, Debug)]
pub struct Constants {
    /// Where `L1 - L2 + L2/L1` crosses `W0` (about 6288.69).
    pub x_star: Interval,
    /// Threshold of the five-term lower estimate (about 573967.06).
    pub x_double_star: Interval,
    /// Solution of `L1 - L2 = sqrt(2 ln 2)` with `x > e` (about 5.5807).
    pub x_triple_star: Interval,
    /// `ln(1 + 1/e)`.
    pub kappa1: HighReal,
    /// `1 - 1/e`.
    pub kappa2: HighReal,
}

/// `y^(1/y) (y^2 - y ln y + ln y) - y^2`: positive on `(1, y*)`, negative beyond.
fn crossover_f1(y: &Float) -> Float {
    let wp = y.prec();
    let ln_y = Float::with_val(wp, y.ln_ref());
    let root = Float::with_val(wp, &ln_y / y).exp();
    let ysq = Float::with_val(wp, y.square_ref());
    let inner = Float::with_val(wp, &ysq - Float::with_val(wp, y * &ln_y)) + &ln_y;
    root * inner - ysq
}

/// `(y - 3) ln y - 2y`: negative on `[1, y**)`, positive beyond.
fn crossover_f2(y: &Float) -> Float {
    let wp = y.prec();
    Float::with_val(wp, y - 3u32) * Float::with_val(wp, y.ln_ref()) - Float::with_val(wp, y * 2u32)
}

/// `t - ln t - sqrt(2 ln 2)` for `t = ln x`; increasing for `t > 1`.
fn crossover_f3(t: &Float) -> Float {
    let wp = t.prec();
    let target = Float::with_val(wp, Float::with_val(wp, 2u32).ln() * 2u32).sqrt();
    Float::with_val(wp, t - Float::with_val(wp, t.ln_ref())) - target
}

/// Bisection on `[a, b]` where `f(a)` has sign `sign_a` and `f(b)` the
/// opposite. Each sign is trusted only when it agrees at two precisions
/// and clears a rounding allowance; bisection stops at the first
/// unresolvable midpoint or once the bracket is narrower than `tol`.
fn bisect_signed(
    f: impl Fn(&Float) -> Float,
    a: f64,
    b: f64,
    sign_a: Ordering,
    tol: &Float,
    wp: u32,
) -> Result<(Float, Float)> {
    let sign_at = |y: &Float| -> Option<Ordering> {
        let v1 = f(y);
        let v2 = f(&Float::with_val(wp + 64, y));
        let s1 = v1.cmp0()?;
        let s2 = v2.cmp0()?;
        if s1 != s2 || s1 == Ordering::Equal {
            return None;
        }
        let diff = Float::with_val(wp, &v1 - &v2).abs();
        let scale = Float::with_val(wp, v2.abs_ref()) >> 8u32;
        (diff < scale).then_some(s1)
    };
    let mut lo = Float::with_val(wp, a);
    let mut hi = Float::with_val(wp, b);
    if sign_at(&lo) != Some(sign_a) || sign_at(&hi) != Some(sign_a.reverse()) {
        return Err(LambertError::Numerical(format!(
            "sign pattern on [{a}, {b}] does not match the proven one"
        )));
    }
    while Float::with_val(wp, &hi - &lo) > *tol {
        let mid = Float::with_val(wp, &lo + &hi) / 2u32;
        match sign_at(&mid) {
            Some(s) if s == sign_a => lo = mid,
            Some(_) => hi = mid,
            None => break,
        }
    }
    Ok((lo, hi))
}

/// `exp` of a bracketed exponent, rounded outward.
fn exp_interval(lo: &Float, hi: &Float, out_prec: u32) -> Result<Interval> {
    let mut l = Float::with_val(out_prec, lo);
    l.exp_round(Round::Down);
    let mut h = Float::with_val(out_prec, hi);
    h.exp_round(Round::Up);
    Ok(Interval::new(HighReal::new(l)?, HighReal::new(h)?))
}

fn relative_width_ok(iv: &Interval, digits: u32) -> bool {
    let wp = iv.lo.prec();
    let width = iv.width();
    let mid = iv.midpoint();
    let allowed = Float::with_val(wp, mid.abs()) * Float::with_val(wp, 10u32).pow(-(digits as i32));
    width <= allowed
}

/// Computes `x*`, `x**`, `x***` to `digits` significant digits together
/// with `kappa1` and `kappa2`.
pub fn compute_constants(digits: u32) -> Result<Constants> {
    if digits == 0 {
        return domain("digits must be positive");
    }
    let out = digits_to_bits(digits) + MIN_PRECISION;
    let wp = out + 32;
    // the bracket in y is turned into x = e^y; relative width of x equals the
    // absolute width of y, so aim for a quarter of the target.
    let tol = Float::with_val(wp, 10u32).pow(-(digits as i32)) / 8u32;

    let (y1, y2) = bisect_signed(crossover_f1, 2.0, 20.0, Ordering::Greater, &tol, wp)?;
    let x_star = exp_interval(&y1, &y2, out)?;
    let (y1, y2) = bisect_signed(crossover_f2, 2.0, 20.0, Ordering::Less, &tol, wp)?;
    let x_double_star = exp_interval(&y1, &y2, out)?;
    let (t1, t2) = bisect_signed(crossover_f3, 1.0 + 1e-9, 3.0, Ordering::Less, &tol, wp)?;
    let x_triple_star = exp_interval(&t1, &t2, out)?;

    for (name, iv) in [("x*", &x_star), ("x**", &x_double_star), ("x***", &x_triple_star)] {
        if !relative_width_ok(iv, digits) {
            return precision(format!("{name} could not be resolved to {digits} digits"));
        }
    }

    let kappa1 = Float::with_val(out, Float::with_val(out, inv_e(out, Round::Nearest) + 1u32).ln());
    let kappa2 = Float::with_val(out, 1u32 - inv_e(out, Round::Nearest));
    Ok(Constants {
        x_star,
        x_double_star,
        x_triple_star,
        kappa1: HighReal::new(kappa1)?,
        kappa2: HighReal::new(kappa2)?,
    })
}

/// Constants at 40 digits, computed once per process.
pub fn cached_constants() -> &'static Constants {
    static CONSTANTS: OnceLock<Constants> = OnceLock::new();
    CONSTANTS.get_or_init(|| compute_constants(40).expect("constants at 40 digits"))
}

/// Partial sum `sum_{k=1..terms} (-k)^(k-1)/k! x^k` of the Taylor series of
/// `W0` at the origin; requires `|x| < 1/e`.
pub fn taylor_w0(x: &HighReal, terms: u32) -> Result<HighReal> {
    if terms == 0 {
        return domain("at least one term is required");
    }
    let p = x.precision_bits();
    let xv = x.as_float();
    let q = p + 64;
    let abs = Float::with_val(p, xv.abs_ref());
    if abs >= inv_e(q, Round::Down) {
        return domain(format!("|x| = {abs} is outside the radius of convergence 1/e"));
    }
    let wp = p + GUARD_BITS + 2 * (32 - terms.leading_zeros());
    let mut sum = Float::new(wp);
    let mut x_pow = Float::with_val(wp, 1);
    let mut factorial = Float::with_val(wp, 1);
    for k in 1..=terms {
        x_pow *= xv;
        factorial *= k;
        let mut coeff = Float::with_val(wp, k).pow(k - 1);
        if (k - 1) % 2 == 1 {
            coeff = -coeff;
        }
        sum += coeff * &x_pow / &factorial;
    }
    HighReal::new(Float::with_val(p, sum))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hr(s: &str) -> HighReal {
        HighReal::parse(s, 128).unwrap()
    }

    fn e_pow(k: u32, prec: u32) -> HighReal {
        HighReal::new(Float::with_val(prec, k).exp()).unwrap()
    }

    fn close(v: &HighReal, expected: f64, tol: f64) -> bool {
        (v.to_f64() - expected).abs() < tol
    }

    #[test]
    fn principal_at_e_squared() {
        let b = simple_bounds(Branch::Principal, &e_pow(2, 128)).unwrap();
        assert!(close(&b.lo, 2.0 - std::f64::consts::LN_2, 1e-15));
        assert!(close(&b.hi, 2.0, 1e-15));
        assert!(b.lo.to_f64() < 1.557_145_599 && 1.557_145_599 < b.hi.to_f64());
        assert_eq!(b.lo_source, BoundSource::LogMinusLogLog);
    }

    #[test]
    fn lower_branch_right_of_quarter() {
        let b = simple_bounds(Branch::LowerBranch, &hr("-0.1")).unwrap();
        // e ln(0.1)/(e-1), recomputed in f64
        assert!(close(&b.lo, -3.642_635_982_701_122, 1e-12), "{}", b.lo);
        assert!(b.contains(&Float::with_val(64, -3.577_152_063_957_297)));
        assert!(close(&b.hi, -3.136_617, 1e-6), "{}", b.hi);
    }

    #[test]
    fn principal_small_negative() {
        let b = simple_bounds(Branch::Principal, &hr("-0.2")).unwrap();
        assert!(close(&b.lo, -0.276_393, 1e-6));
        assert!(close(&b.hi, -0.225_403, 1e-6));
        assert!(b.contains(&Float::with_val(64, -0.259_171)));
    }

    #[test]
    fn zero_is_exact_and_domain_errors() {
        let b = simple_bounds(Branch::Principal, &hr("0")).unwrap();
        assert_eq!(b.lo, b.hi);
        assert!(matches!(
            simple_bounds(Branch::LowerBranch, &hr("0.5")),
            Err(LambertError::Domain(_))
        ));
        assert!(matches!(
            simple_bounds(Branch::Principal, &hr("-0.4")),
            Err(LambertError::Domain(_))
        ));
    }

    #[test]
    fn refined_three_term_sign_flips_at_x_star() {
        let below = refined_bounds_w0(&hr("100")).unwrap();
        assert_eq!(below.hi_source, BoundSource::ThreeTerm);
        assert!(close(&below.hi, 3.409_614, 1e-6));
        let above = refined_bounds_w0(&hr("10000")).unwrap();
        assert_eq!(above.lo_source, BoundSource::ThreeTerm);
        assert!(close(&above.lo, 7.231_082_485_615_194, 1e-12));
        assert!(above.lo.to_f64() < 7.231_846_038_093_373);
        let far = refined_bounds_w0(&hr("1e7")).unwrap();
        assert_eq!(far.lo_source, BoundSource::FiveTermLower);
    }

    #[test]
    fn constants_match_printed_values() {
        let c = compute_constants(8).unwrap();
        assert!((c.x_star.lo.to_f64() - 6288.69).abs() < 0.01);
        assert!((c.x_double_star.lo.to_f64() - 573_967.06).abs() < 0.01);
        assert!(c.x_triple_star.lo.to_f64() > 5.580 && c.x_triple_star.hi.to_f64() < 5.581);
        assert!(c.kappa1.to_f64() > 0.31 && c.kappa1.to_f64() < 0.32);
        assert!(close(&c.kappa2, 1.0 - (-1f64).exp(), 1e-15));
        assert!(matches!(compute_constants(0), Err(LambertError::Domain(_))));
    }

    #[test]
    fn taylor_partial_sums() {
        let five = taylor_w0(&hr("0.1"), 5).unwrap();
        let expected = 0.1 - 0.01 + 0.0015 - 8.0 / 3.0 * 1e-4 + 125.0 / 24.0 * 1e-5;
        assert!(close(&five, expected, 1e-15));
        assert!(taylor_w0(&hr("0"), 7).unwrap().is_zero());
        assert!(matches!(taylor_w0(&hr("0.4"), 3), Err(LambertError::Domain(_))));
        assert!(matches!(taylor_w0(&hr("0.1"), 0), Err(LambertError::Domain(_))));
    }
}
