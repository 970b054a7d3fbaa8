//! Exact scalars, matrices, Smith normal form and truncated polynomials.

mod arith;
mod matrix;
mod padic;
mod poly;
mod snf;

pub use arith::{
    binomial, digit_sum, factorial_valuation, int_pow, is_prime, require_prime, vp, vp_rational,
};
pub use matrix::Matrix;
pub use padic::PAdicScalar;
pub use poly::{rat, truncated_exp_log, Coeff, ExpLog, PolyRing, TruncPoly, Var};
pub use snf::{
    divisor_orders, smith_normal_form, smith_normal_form_valued, SmithDecomposition, ValuedRing,
};
