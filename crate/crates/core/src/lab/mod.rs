//! Executable characterization checks. Each check recomputes the cumulant
//! identities behind a theorem on concrete exact data and returns a
//! [`CheckReport`] listing the values it relied on.

mod free;
mod linear;
mod lukacs;
mod report;

pub use free::{check_cramer_failure, check_sd_identity, check_skitovic_failure, cramer_grid, free_moments, skitovic_data};
pub use linear::{check_bernstein, check_maxwell_forward, check_stability, maxwell_contraction_factors};
pub use lukacs::{check_lukacs, LukacsInput};
pub use report::{CheckReport, Verdict, Witness};

use crate::forms;
use crate::Rational;

/// `K3(Y1,Y1,Y2)`-style description; `args` index into `names`.
pub(crate) fn describe(names: &[&str], args: &[usize]) -> String {
    let parts: Vec<&str> = args.iter().map(|&i| names[i]).collect();
    format!("K{}({})", args.len(), parts.join(","))
}

/// Mixed argument tuples over `{0, 1}` of length `2..=max_order`.
pub(crate) fn mixed_words(max_order: usize) -> Vec<Vec<usize>> {
    forms::mixed_words(max_order)
}

pub(crate) fn zero() -> Rational {
    Rational::from_integer(0.into())
}

pub(crate) fn one() -> Rational {
    Rational::from_integer(1.into())
}
