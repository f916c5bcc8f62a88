//! Independent reference values: plain bisection on `w e^w = x`.
#![allow(dead_code)]

use lambertw_core::{Branch, HighReal};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::Float;

/// `W_branch(x)` to about `bits` bits, by bisection with sign tests carried
/// out at four times that precision.
///
/// `e^lo` and `e^half` are carried along; halving the step turns `e^half`
/// into its square root, so no exponential is needed inside the loop.
pub fn oracle_w(branch: Branch, x: &Float, bits: u32) -> Float {
    let ap = 4 * bits.max(64);
    let x = Float::with_val(ap.max(x.prec()), x);
    let exp = |w: &Float| Float::with_val(ap, w.exp_ref());
    let (mut lo, mut hi) = match branch {
        Branch::Principal if x > 0 => {
            let ln = Float::with_val(ap, x.ln_ref());
            (Float::with_val(ap, 0), Float::with_val(ap, ln.max(&Float::with_val(ap, 1))))
        }
        Branch::Principal => (Float::with_val(ap, -1), Float::with_val(ap, 0)),
        Branch::LowerBranch => {
            let mut lo = Float::with_val(ap, -2);
            while Float::with_val(ap, &lo * exp(&lo)) <= x {
                lo *= 2u32;
            }
            (lo, Float::with_val(ap, -1))
        }
    };
    let increasing = branch == Branch::Principal;
    let scale = lo.get_exp().unwrap_or(0).max(hi.get_exp().unwrap_or(0)).max(1);
    let steps = bits as i32 + scale + 2;
    let mut e_lo = exp(&lo);
    let mut half = Float::with_val(ap, &hi - &lo);
    let mut e_half = exp(&half);
    for _ in 0..steps {
        half /= 2u32;
        e_half.sqrt_mut();
        let mid = Float::with_val(ap, &lo + &half);
        let e_mid = Float::with_val(ap, &e_lo * &e_half);
        let below = (Float::with_val(ap, &mid * &e_mid) < x) == increasing;
        if below {
            lo = mid;
            e_lo = e_mid;
        } else {
            hi = mid;
        }
    }
    Float::with_val(ap, &lo + &hi) / 2u32
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `e^t` as a value.
pub fn exp_of(t: f64, prec: u32) -> Float {
    Float::with_val(prec, t).exp()
}

/// Uniform sample of `ln x` in `(a, b)` exponentiated: log-spaced `x`.
pub fn log_sample(rng: &mut ChaCha8Rng, ln_a: f64, ln_b: f64, prec: u32) -> Float {
    let t: f64 = rng.gen_range(ln_a..ln_b);
    exp_of(t, prec)
}

/// Uniform sample in `(a, b)` at `prec` bits.
pub fn lin_sample(rng: &mut ChaCha8Rng, a: f64, b: f64, prec: u32) -> Float {
    let t: f64 = rng.gen_range(a..b);
    Float::with_val(prec, t)
}

pub fn hr(v: Float) -> HighReal {
    HighReal::new(v).expect("finite sample")
}

/// `-log2(v)`, for sizing oracle precision from a target error.
pub fn neg_log2(v: &Float) -> u32 {
    (-v.get_exp().unwrap_or(0)).max(0) as u32
}

pub fn ten_pow(k: i32, prec: u32) -> Float {
    Float::with_val(prec, 10).pow(k)
}

pub fn inv_e(prec: u32) -> Float {
    Float::with_val(prec, -1).exp()
}
