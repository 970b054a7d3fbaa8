//! Individual checks. Each returns a [`Check`] whose payload records what
//! was computed and whose counterexample names the first mismatch.

pub mod cartier;
pub mod fgl;
pub mod sen;
pub mod witt;

use num_bigint::BigInt;

pub use crate::document::Check;

pub(crate) fn strings(v: &[BigInt]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

/// Run `f`, turning a library error into a failed check.
pub(crate) fn guard(name: &str, f: impl FnOnce() -> pdcalc::Result<Check>) -> Check {
    f().unwrap_or_else(|e| Check::error(name, e))
}
