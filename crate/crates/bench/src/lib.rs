//! Shared inputs for the benchmarks.

use lambertw_core::{working_precision, Branch, HighReal, ReferenceKind};

/// `(label, branch, x)` points covering every region.
pub const CASES: &[(&str, Branch, &str)] = &[
    ("gt-e", Branch::Principal, "1e10"),
    ("zero-to-e", Branch::Principal, "0.5"),
    ("neg-principal", Branch::Principal, "-0.2"),
    ("neg-lower-left", Branch::LowerBranch, "-0.3"),
    ("neg-lower-right", Branch::LowerBranch, "-0.01"),
];

pub const KERNELS: [ReferenceKind; 3] = [ReferenceKind::Newton, ReferenceKind::Halley, ReferenceKind::Fsc];

/// `x` parsed at the working precision for `digits`.
pub fn argument(x: &str, digits: u32) -> HighReal {
    HighReal::parse(x, working_precision(digits)).expect("benchmark inputs are valid decimals")
}

/// Step count at which the beta recursion and the reference kernels are compared.
pub fn steps_for(digits: u32) -> u32 {
    // quadratic or better: about log2 of the bits
    32 - working_precision(digits).leading_zeros() + 2
}
