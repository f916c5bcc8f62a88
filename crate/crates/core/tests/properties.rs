mod common;

use common::*;
use lambertw_core::{
    beta_iterate, compute_constants, eval_certified, older_bounds_w0, reference_iterate,
    refined_bounds_w0, required_iterations, simple_bounds, taylor_w0, y_of_x, Argument, Branch,
    HighReal, ReferenceKind, Region,
};
use proptest::prelude::*;
use rug::float::Round;
use rug::ops::Pow;
use rug::Float;

fn e(prec: u32) -> Float {
    Float::with_val(prec, 1).exp()
}

fn tol(digits: u32, prec: u32) -> Float {
    Float::with_val(prec, 10).pow(-(digits as i32))
}

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig::with_cases(n)
}

#[test]
fn simple_and_refined_bounds_bracket_the_oracle() {
    let mut rng = rng(11);
    let consts = compute_constants(20).unwrap();
    let x_star_hi = consts.x_star.hi.as_float().clone();
    for _ in 0..10_000 {
        let x = log_sample(&mut rng, 1.0 + 1e-9, 10.0 * std::f64::consts::LN_10, 128);
        let w = oracle_w(Branch::Principal, &x, 128);
        let hx = hr(x.clone());
        let simple = simple_bounds(Branch::Principal, &hx).unwrap();
        assert!(simple.contains(&w), "simple bounds miss W0({x})");
        let refined = refined_bounds_w0(&hx).unwrap();
        assert!(refined.contains(&w), "refined bounds miss W0({x})");
        let older = older_bounds_w0(&hx).unwrap();
        assert!(refined.hi < older.hi, "refined upper side not sharper at {x}");
        assert!(refined.lo >= older.lo);
        if x > x_star_hi {
            assert!(refined.lo > older.lo, "refined lower side not sharper at {x}");
        }
    }
}

#[test]
fn negative_and_lower_branch_bounds_bracket_the_oracle() {
    let mut rng = rng(12);
    let inv = inv_e(128).to_f64();
    for _ in 0..2_000 {
        let x = lin_sample(&mut rng, -inv * (1.0 - 1e-9), -1e-12, 128);
        for branch in [Branch::Principal, Branch::LowerBranch] {
            let w = oracle_w(branch, &x, 128);
            let pair = simple_bounds(branch, &hr(x.clone())).unwrap();
            assert!(pair.contains(&w), "{branch} bounds miss W({x})");
        }
        let small = Float::with_val(128, -&x);
        if small < e(128) {
            let w = oracle_w(Branch::Principal, &small, 128);
            assert!(simple_bounds(Branch::Principal, &hr(small.clone())).unwrap().contains(&w));
        }
    }
}

proptest! {
    #![proptest_config(cases(256))]

    #[test]
    fn taylor_partial_sums_alternate(t in 0.001f64..0.999) {
        let x = Float::with_val(256, t) * inv_e(256);
        let w = oracle_w(Branch::Principal, &x, 256);
        let hx = hr(x);
        for k in 1..=20u32 {
            let s = taylor_w0(&hx, k).unwrap();
            if k % 2 == 1 {
                prop_assert!(*s > w, "odd partial sum {} not above W", k);
            } else {
                prop_assert!(*s < w, "even partial sum {} not below W", k);
            }
        }
    }

    #[test]
    fn zero_lemma(y in prop_oneof![1e-9f64..0.999_999, 1.000_001f64..1e6]) {
        let y = Float::with_val(128, y);
        let g = Float::with_val(128, y.ln_ref()) * &y + 1u32 - &y;
        prop_assert!(g > 0);
    }

    #[test]
    fn two_ln_two_lemma(t in 0.0f64..=1.0) {
        let p = 256;
        let ln2 = Float::with_val(p, 2).ln();
        let z = Float::with_val(p, &ln2 * t);
        let rhs = (Float::with_val(p, 1u32) - Float::with_val(p, &z / (Float::with_val(p, &ln2 * 2u32)))).ln();
        // equality at both ends of [0, ln 2]
        prop_assert!(-z - rhs <= Float::with_val(p, 1) >> 240);
    }
}

// ---------------------------------------------------------------------------
// recursions

fn beta_errors(branch: Branch, x: &Float, n: u32, prec: u32) -> (Vec<Float>, Float) {
    let trace = beta_iterate(branch, &Argument::Direct(hr(Float::with_val(prec, x))), n).unwrap();
    let w = oracle_w(branch, x, prec);
    (trace.iterates().map(|b| b.as_float().clone()).collect(), w)
}

proptest! {
    #![proptest_config(cases(48))]

    #[test]
    fn quadratic_contraction_above_e(t in 1.000_001f64..(1e3f64).ln()) {
        let x = exp_of(t, 1400);
        let (betas, w) = beta_errors(Branch::Principal, &x, 7, 1400);
        let resolution = Float::with_val(64, 1) >> 1300;
        for n in 0..=6usize {
            let en = Float::with_val(1400, &w - &betas[n]);
            let en1 = Float::with_val(1400, &w - &betas[n + 1]);
            prop_assert!(en1 > 0);
            let rhs = Float::with_val(1400, en.square_ref())
                / (Float::with_val(1400, &betas[n] + 1u32) * &w);
            if rhs > resolution {
                prop_assert!(en1 < rhs, "contraction fails at n = {}", n);
            }
        }
    }

    #[test]
    fn quadratic_contraction_negative(t in 0.001f64..0.999) {
        let x = Float::with_val(1400, -t) * inv_e(1400);
        let (betas, w) = beta_errors(Branch::Principal, &x, 7, 1400);
        let resolution = Float::with_val(64, 1) >> 1300;
        for n in 0..=6usize {
            let en = Float::with_val(1400, &betas[n] - &w);
            let en1 = Float::with_val(1400, &betas[n + 1] - &w);
            prop_assert!(en1 > 0);
            let rhs = Float::with_val(1400, en.square_ref())
                / (Float::with_val(1400, -&w) * Float::with_val(1400, &betas[n] + 1u32));
            if rhs > resolution {
                prop_assert!(en1 < rhs, "contraction fails at n = {}", n);
            }
        }
    }

    #[test]
    fn log_form_matches_direct(t in 1.001f64..690.0) {
        let p = 256;
        let x = exp_of(t, p);
        let direct = beta_iterate(Branch::Principal, &Argument::Direct(hr(x.clone())), 8).unwrap();
        let ell = Float::with_val(p, x.ln_ref());
        let log = beta_iterate(Branch::Principal, &Argument::LogOf(hr(ell)), 8).unwrap();
        for (a, b) in direct.iterates().zip(log.iterates()) {
            let diff = Float::with_val(p, &**a - &**b).abs();
            let scale = Float::with_val(p, a.abs_ref()).max(&Float::with_val(p, 1));
            prop_assert!(diff <= scale * (Float::with_val(64, 1) >> (p - 16)));
        }
    }

    #[test]
    fn reference_kernels_converge(t in prop_oneof![-6.0f64..0.999, 1.001f64..13.8]) {
        let x = exp_of(t, 256);
        let tol20 = tol(20, 256);
        let mut steps = Vec::new();
        for kind in [ReferenceKind::Newton, ReferenceKind::Halley, ReferenceKind::Fsc] {
            let trace = reference_iterate(kind, Branch::Principal, &hr(x.clone()), 60, Some(&tol20)).unwrap();
            let last = trace.last();
            prop_assert!(**last.residual.as_ref().unwrap() < tol20, "{:?} did not converge", kind);
            steps.push(last.n);
        }
        prop_assert!(steps[2] <= steps[0], "FSC needed more steps than Newton");
    }
}

// ---------------------------------------------------------------------------
// certify

fn random_argument(rng: &mut rand_chacha::ChaCha8Rng) -> (Branch, Float) {
    use rand::Rng;
    let inv = inv_e(128).to_f64();
    match rng.gen_range(0..5) {
        0 => (Branch::Principal, log_sample(rng, 1.0 + 1e-9, 100.0, 128)),
        1 => (Branch::Principal, log_sample(rng, -30.0, 0.999_999, 128)),
        2 => (Branch::Principal, lin_sample(rng, -inv * (1.0 - 1e-12), -1e-30, 128)),
        3 => (Branch::LowerBranch, lin_sample(rng, -inv * (1.0 - 1e-12), -0.25, 128)),
        _ => (Branch::LowerBranch, lin_sample(rng, -0.25 + 1e-15, -1e-12, 128)),
    }
}

#[test]
fn certified_enclosures_contain_the_oracle() {
    use rand::Rng;
    let mut rng = rng(21);
    for _ in 0..10_000 {
        let (branch, x) = random_argument(&mut rng);
        let digits = rng.gen_range(1..=60u32);
        let enc = eval_certified(branch, &Argument::Direct(hr(x.clone())), digits).unwrap();
        assert!(enc.certified);
        let w = oracle_w(branch, &x, (digits as f64 * 3.33) as u32 + 96);
        assert!(enc.contains(&w), "{branch} x = {x} digits = {digits}: {enc} misses {w}");
        assert!(enc.width() <= tol(digits, 256), "width contract broken at {x}");
        match branch {
            Branch::Principal => assert!(*enc.lo >= -1),
            Branch::LowerBranch => assert!(*enc.hi <= -1),
        }
    }
}

proptest! {
    #![proptest_config(cases(200))]

    #[test]
    fn tightening_is_nested(seed in 0u64..1_000_000, d1 in 1u32..40, extra in 1u32..40) {
        let mut r = rng(seed);
        let (branch, x) = random_argument(&mut r);
        let arg = Argument::Direct(hr(x));
        let a = eval_certified(branch, &arg, d1).unwrap();
        let b = eval_certified(branch, &arg, d1 + extra).unwrap();
        let slack = tol(d1, 256);
        prop_assert!(*b.lo >= Float::with_val(256, &*a.lo - &slack));
        prop_assert!(*b.hi <= Float::with_val(256, &*a.hi + &slack));
    }

    #[test]
    fn iteration_count_grows_with_digits(seed in 0u64..1_000_000) {
        let mut r = rng(seed);
        let (branch, x) = random_argument(&mut r);
        let arg = Argument::Direct(hr(x.clone()));
        let region = lambertw_core::classify(branch, &hr(x)).unwrap();
        let mut last = 0;
        for d in (1..400).step_by(7) {
            let n = required_iterations(region, &arg, d);
            prop_assert!(n >= last);
            last = n;
        }
    }
}

#[test]
fn required_iteration_anchors() {
    for x in ["3", "10", "100"] {
        let arg = Argument::Direct(HighReal::parse(x, 128).unwrap());
        assert_eq!(required_iterations(Region::GtE, &arg, 16), 5, "x = {x}");
    }
}

// ---------------------------------------------------------------------------
// x^y = y^x

proptest! {
    #![proptest_config(cases(64))]

    #[test]
    fn solution_curve_is_symmetric(t in prop_oneof![1.05f64..2.7, 2.75f64..1000.0]) {
        let digits = 25;
        let x = Float::with_val(192, t);
        let y = y_of_x(&hr(x.clone()), digits).unwrap();
        // y is decreasing, so y([a, b]) = [y(b).lo, y(a).hi]
        let back_lo = y_of_x(&y.hi, digits).unwrap().lo;
        let back_hi = y_of_x(&y.lo, digits).unwrap().hi;
        prop_assert!(*back_lo <= x && x <= *back_hi);
    }

    #[test]
    fn solution_curve_decreases(a in 2.75f64..1e4, gap in 1e-3f64..10.0) {
        let y1 = y_of_x(&hr(Float::with_val(128, a)), 30).unwrap();
        let y2 = y_of_x(&hr(Float::with_val(128, a + gap)), 30).unwrap();
        prop_assert!(y1.lo > y2.hi);
    }

    #[test]
    fn lower_bound_consistency(t in 1.0001f64..(1e8f64).ln()) {
        let x = exp_of(t, 128);
        let em1 = Float::with_val(128, e(128) - 1u32);
        let term = Float::with_val(128, em1.square_ref()) / Float::with_val(128, &x - 1u32) + 1u32;
        let z = -Float::with_val(128, x.ln_ref()) / &x * term;
        prop_assert!(z > -1);
    }

    #[test]
    fn defining_equation_residual(t in prop_oneof![1.05f64..2.7, 2.75f64..20.0], digits in 5u32..40) {
        let x = Float::with_val(256, t);
        let y = y_of_x(&hr(x.clone()), digits).unwrap();
        let p = 512;
        let ym = Float::with_val(p, y.midpoint());
        let xy = Float::with_val(p, &ym * Float::with_val(p, x.ln_ref())).exp();
        let yx = Float::with_val(p, &x * Float::with_val(p, ym.ln_ref())).exp();
        let rel = Float::with_val(p, &xy - &yx).abs() / &xy;
        prop_assert!(rel < tol(digits - 1, p));
    }
}

#[test]
fn enclosures_round_outward() {
    // the enclosure endpoints are representable at their own precision
    let enc = eval_certified(Branch::Principal, &Argument::Direct(HighReal::parse("2", 128).unwrap()), 40).unwrap();
    let mid = Float::with_val_round(enc.precision_bits, enc.midpoint(), Round::Nearest).0;
    assert!(enc.contains(&mid));
}
