//! p-typical Witt vectors of fixed length over `Z` or `Z/p^N`, and the
//! big-Witt integrality checks behind Cartier duality.

mod cartier;
mod gabber;
mod structure;
mod vector;

pub use cartier::{
    cartier_additivity, cartier_character, cartier_log_coefficients, dwork_factorization,
    CartierCharacter, DworkFactors,
};
pub use gabber::{
    frobenius_of_p_identity, gabber_y, pn_identity, solve_frobenius, FrobeniusOfP, PnIdentity,
    SolveOutcome,
};
pub use structure::{eval_int_poly, witt_structure_polynomials, StructurePolys};
pub use vector::{BaseRing, GhostVector, WittContext, WittVector};
