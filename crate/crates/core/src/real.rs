//! Arbitrary-precision reals and the rounding helpers shared by every module.
//!
//! [`HighReal`] wraps an MPFR float together with its working precision.
//! All arithmetic rides on MPFR's correctly rounded operations, so a
//! directed-rounding helper here really does return a one-sided bound.

use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use rug::float::Round;
use rug::{Float, Integer};

use crate::error::{LambertError, Result};

/// Smallest precision accepted for a [`HighReal`].
pub const MIN_PRECISION: u32 = 64;

/// `log2(10)`, used to convert decimal digits into bits.
pub const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// An arbitrary-precision real with an explicit working precision.
#[derive(Clone, Debug, PartialEq, PartialOrd)]
pub struct HighReal(Float);

impl HighReal {
    /// Wraps an MPFR value. Precision below [`MIN_PRECISION`] is rejected,
    /// as are NaN and infinities.
    pub fn new(value: Float) -> Result<Self> {
        if value.prec() < MIN_PRECISION {
            return Err(LambertError::Precision(format!(
                "precision {} is below the minimum of {MIN_PRECISION} bits",
                value.prec()
            )));
        }
        if !value.is_finite() {
            return Err(LambertError::Domain(format!("non-finite value {value}")));
        }
        Ok(HighReal(value))
    }

    pub fn from_f64(value: f64, precision_bits: u32) -> Result<Self> {
        Self::new(Float::with_val(precision_bits.max(1), value))
    }

    pub fn from_i64(value: i64, precision_bits: u32) -> Result<Self> {
        Self::new(Float::with_val(precision_bits.max(1), value))
    }

    /// Parses a decimal literal (`"0.25"`, `"-1e-3"`, `"1e20"`), rounding to
    /// nearest at `precision_bits`.
    pub fn parse(text: &str, precision_bits: u32) -> Result<Self> {
        let parsed = Float::parse(text.trim())
            .map_err(|e| LambertError::Domain(format!("invalid number {text:?}: {e}")))?;
        Self::new(Float::with_val(precision_bits.max(1), parsed))
    }

    pub fn precision_bits(&self) -> u32 {
        self.0.prec()
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn into_float(self) -> Float {
        self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    /// The same value carried at a different precision. Raising the
    /// precision is exact; lowering it rounds to nearest.
    pub fn with_precision(&self, precision_bits: u32) -> HighReal {
        HighReal(Float::with_val(precision_bits.max(MIN_PRECISION), &self.0))
    }

    /// Fixed-point decimal with `frac_digits` digits after the point,
    /// rounded in the requested direction (`Round::Down` floors,
    /// `Round::Up` ceils, anything else rounds to nearest).
    pub fn to_fixed(&self, frac_digits: usize, round: Round) -> String {
        to_fixed(&self.0, frac_digits, round)
    }

    /// Scientific notation with `sig_digits` significant digits.
    pub fn to_sci(&self, sig_digits: usize) -> String {
        self.0.to_string_radix(10, Some(sig_digits.max(1)))
    }
}

impl Deref for HighReal {
    type Target = Float;

    fn deref(&self) -> &Float {
        &self.0
    }
}

impl From<HighReal> for Float {
    fn from(value: HighReal) -> Float {
        value.0
    }
}

impl TryFrom<Float> for HighReal {
    type Error = LambertError;

    fn try_from(value: Float) -> Result<Self> {
        HighReal::new(value)
    }
}

impl FromStr for HighReal {
    type Err = LambertError;

    /// Parses at 256 bits; use [`HighReal::parse`] to choose the precision.
    fn from_str(s: &str) -> Result<Self> {
        HighReal::parse(s, 256)
    }
}

impl fmt::Display for HighReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(p) => f.write_str(&self.to_fixed(p, Round::Nearest)),
            None => fmt::Display::fmt(&self.0, f),
        }
    }
}

/// A closed interval `[lo, hi]` of high-precision reals.
#[derive(Clone, Debug, PartialEq)]
pub struct Interval {
    pub lo: HighReal,
    pub hi: HighReal,
}

impl Interval {
    pub fn new(lo: HighReal, hi: HighReal) -> Self {
        debug_assert!(lo <= hi, "inverted interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(value: HighReal) -> Self {
        Interval {
            lo: value.clone(),
            hi: value,
        }
    }

    pub fn width(&self) -> Float {
        let p = self.lo.prec().max(self.hi.prec());
        Float::with_val_round(p, &*self.hi - &*self.lo, Round::Up).0
    }

    pub fn midpoint(&self) -> Float {
        let p = self.lo.prec().max(self.hi.prec()) + 1;
        Float::with_val(p, &*self.lo + &*self.hi) / 2u32
    }

    pub fn contains(&self, value: &Float) -> bool {
        *self.lo.as_float() <= *value && *value <= *self.hi.as_float()
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

// ---------------------------------------------------------------------------
// rounding helpers

/// `e` rounded in the given direction.
pub(crate) fn euler_e(prec: u32, round: Round) -> Float {
    let mut e = Float::with_val(prec, 1);
    e.exp_round(round);
    e
}

/// `1/e` rounded in the given direction.
pub(crate) fn inv_e(prec: u32, round: Round) -> Float {
    let mut r = Float::with_val(prec, -1);
    r.exp_round(round);
    r
}

pub(crate) fn ln10(prec: u32, round: Round) -> Float {
    let mut r = Float::with_val(prec, 10);
    r.ln_round(round);
    r
}

/// `10^(-digits)` rounded in the given direction.
pub(crate) fn pow10_neg(digits: u32, prec: u32, round: Round) -> Float {
    let exact_bits = (digits as f64 * 2.33).ceil() as u32 + 64;
    let ten = Float::with_val(exact_bits, Float::u_pow_u(10, digits));
    Float::with_val_round(prec, 1u32 / &ten, round).0
}

/// `value` rounded down to `prec` bits and then pushed one more ulp down,
/// so that a value carrying a few ulps of error at a higher precision is
/// still a valid lower bound.
pub(crate) fn outward_lo(value: &Float, prec: u32) -> Float {
    let (mut r, _) = Float::with_val_round(prec, value, Round::Down);
    r.next_down();
    r
}

pub(crate) fn outward_hi(value: &Float, prec: u32) -> Float {
    let (mut r, _) = Float::with_val_round(prec, value, Round::Up);
    r.next_up();
    r
}

/// Rounding floor for a quantity of magnitude `scale` computed at `prec`
/// bits: `2^(margin - prec) * max(1, |scale|)`.
pub(crate) fn rounding_floor(scale: &Float, prec: u32, margin: i32) -> Float {
    let mag = scale.get_exp().unwrap_or(0).max(1);
    let exp = mag + margin - prec as i32;
    Float::with_val(64, 1) << exp
}

/// Bits needed for `digits` decimal digits.
pub fn digits_to_bits(digits: u32) -> u32 {
    (digits as f64 * LOG2_10).ceil() as u32
}

/// Fixed-point decimal rendering with a directed final rounding.
pub(crate) fn to_fixed(value: &Float, frac_digits: usize, round: Round) -> String {
    if !value.is_finite() {
        return value.to_string();
    }
    let digits = frac_digits as u32;
    // 10^digits is exact at ~2.33*digits bits; the product of a p-bit and a
    // q-bit number is exact at p+q bits, so the only rounding is the final one.
    let pow_bits = (digits as f64 * 2.33).ceil() as u32 + 8;
    let scale = Float::with_val(pow_bits.max(64), Float::u_pow_u(10, digits));
    let scaled = Float::with_val(value.prec() + scale.prec(), value * &scale);
    let int_round = match round {
        Round::Down => Round::Down,
        Round::Up => Round::Up,
        _ => Round::Nearest,
    };
    let int: Integer = scaled
        .to_integer_round(int_round)
        .map(|(i, _)| i)
        .unwrap_or_default();
    let negative = int < 0;
    let mut text = int.abs().to_string();
    if frac_digits > 0 {
        if text.len() <= frac_digits {
            text = format!("{}{}", "0".repeat(frac_digits + 1 - text.len()), text);
        }
        text.insert(text.len() - frac_digits, '.');
    }
    if negative {
        text.insert(0, '-');
    }
    text
}
