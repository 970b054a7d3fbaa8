//! Formal group laws as truncated series, their n-series, logarithms and
//! the Hazewinkel right-unit calculus.

mod bp;
mod derham;
mod law;

pub use bp::{
    apply_right_unit, b4_cobar_class, bp_right_unit, hazewinkel_generators, log_generators_in_v,
    reduce_mod_ideal, BpRing,
};
pub use derham::{f_derham_complex, q_integer, FDeRhamComplex, WeightComponent};
pub use law::{
    fgl_construct, fgl_log_exp, tate_quotient_series, CoeffRing, FglKind, FormalGroupLaw, Lambda,
    TateQuotient,
};
