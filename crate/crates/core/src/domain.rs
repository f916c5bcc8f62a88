//! Rigorous position tests against the special points `e` and `-1/e`.
//!
//! Inputs are exact binary numbers and both special points are irrational,
//! so a comparison always resolves once the precision exceeds the input's
//! own precision by enough bits.

use std::cmp::Ordering;

use rug::float::Round;
use rug::Float;

use crate::error::{precision, Result};
use crate::real::{euler_e, MIN_PRECISION};

const MAX_DOUBLINGS: u32 = 6;

/// Compares `x` with `e`.
pub(crate) fn cmp_e(x: &Float) -> Ordering {
    let mut q = x.prec().max(MIN_PRECISION) + 64;
    for _ in 0..MAX_DOUBLINGS {
        if *x < euler_e(q, Round::Down) {
            return Ordering::Less;
        }
        if *x > euler_e(q, Round::Up) {
            return Ordering::Greater;
        }
        q *= 2;
    }
    Ordering::Equal
}

/// An enclosure of `1 + e*x` whose sign is known.
#[derive(Clone, Debug)]
pub(crate) struct BranchOffset {
    pub lo: Float,
    pub hi: Float,
}

impl BranchOffset {
    pub fn is_positive(&self) -> bool {
        self.lo > 0
    }

    /// Bits of cancellation suffered when `1 + e*x` is formed: the binary
    /// exponent deficit of the offset.
    pub fn lost_bits(&self) -> u32 {
        match self.hi.get_exp() {
            Some(exp) if exp < 0 => (-exp) as u32,
            _ => 0,
        }
    }
}

/// Encloses `1 + e*x` for negative `x`, raising the precision until the
/// sign is resolved.
pub(crate) fn branch_offset(x: &Float) -> Result<BranchOffset> {
    debug_assert!(*x < 0);
    let mut q = x.prec().max(MIN_PRECISION) + 64;
    for _ in 0..MAX_DOUBLINGS {
        let e_lo = euler_e(q, Round::Down);
        let e_hi = euler_e(q, Round::Up);
        // x < 0, so x*e_hi <= x*e <= x*e_lo
        let mut lo = Float::with_val_round(q, x * &e_hi, Round::Down).0;
        lo.add_assign_round(1u32, Round::Down);
        let mut hi = Float::with_val_round(q, x * &e_lo, Round::Up).0;
        hi.add_assign_round(1u32, Round::Up);
        if lo > 0 || hi < 0 {
            return Ok(BranchOffset { lo, hi });
        }
        q *= 2;
    }
    precision(format!(
        "cannot resolve the position of {} relative to -1/e",
        x.to_string_radix(10, Some(20))
    ))
}

trait AddAssignRound {
    fn add_assign_round(&mut self, rhs: u32, round: Round);
}

impl AddAssignRound for Float {
    fn add_assign_round(&mut self, rhs: u32, round: Round) {
        let prec = self.prec();
        *self = Float::with_val_round(prec, &*self + rhs, round).0;
    }
}
