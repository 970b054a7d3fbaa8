//! Divided powers and the operators acting on them: Sen differentials,
//! the Ψ eigenvalues, divided-power Weyl operators and δ-ring checks.

mod algebra;
mod delta;
mod operators;
mod psi;

pub use algebra::{
    base_p_digits, dp_multiply, element_product, gamma_factorization_unit, gamma_factorization_valuation,
    monomial_product, pd_derivation_extend, single, DPBasisMonomial, DPModule, DegreeWeights, Derivation,
    DerivationValues, DpElement, GradedLinearMap, OperatorCube,
};
pub use delta::{delta_ring_check, delta_ring_check_element, DeltaReport, DeltaRingContext, DeltaStep};
pub use operators::{
    perfectoid_derivation, theta_perfectoid, theta_valuation_identity, theta_zpn, zpn_derivation,
};
pub use psi::{
    divided_derivative, dp_weyl_operators, psi_eigenvalues, psi_one_closed_form, psi_tensor_check,
    psi_two_closed_form, WeylOperators, WeylReport,
};
