//! Certified evaluation of the two real branches of the Lambert W function.
//!
//! ```
//! use lambertw_core::{eval_certified, Argument, Branch, HighReal};
//!
//! let one = HighReal::parse("1", 128).unwrap();
//! let omega = eval_certified(Branch::Principal, &Argument::Direct(one), 30).unwrap();
//! assert!(omega.certified);
//! assert!((omega.lo.to_f64() - 0.5671432904097838).abs() < 1e-15);
//! ```

pub mod bounds;
pub mod certify;
mod domain;
pub mod error;
pub mod real;
pub mod recursions;
pub mod xyyx;

pub use bounds::{
    compute_constants, older_bounds_w0, refined_bounds_w0, simple_bounds, taylor_w0, BoundSource,
    BoundsPair, Branch, Constants,
};
pub use certify::{
    eval_certified, eval_certified_with, required_iterations, verify_enclosure, Enclosure,
    EnclosureMethod, WidthMode,
};
pub use error::{LambertError, Result};
pub use real::{digits_to_bits, HighReal, Interval, MIN_PRECISION};
pub use recursions::{
    beta_error_bound, beta_iterate, beta_start, beta_step, classify, classify_argument,
    lambda_error_bound, lambda_iterate, lambda_ratio, lambda_step, reference_iterate, reference_step, working_precision,
    AprioriBound, Argument, IterationTrace, Method, ReferenceKind, Region, TraceEntry,
};
pub use xyyx::{asymptote_gap, conjecture_margin, solve, y_of_x, XyResult};
