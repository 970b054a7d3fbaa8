//! Homology of two-term complexes and operator cubes, and the named
//! computations built on them.

mod builders;
mod complex;
mod scalar;

pub use builders::{
    build_bokstedt, build_dvr_square, build_perfectoid_serre, build_serre_cmn, build_zpn_serre,
    dvr_precision_for, fderham_cohomology, omega2yn_basis_change, omega2yn_cohomology, BokstedtVariant,
    DvrSquare, ExtensionCheck, PerfectoidSerre, WeightCohomology, PRECISION_GUARD,
};
pub use complex::{cube_total_fiber, kernel_ranks, two_term_homology, HomologyBase, OperatorFamily, TwoTermComplex};
pub use scalar::{rational_to_integer, rational_to_padic, DVRDescriptor, DvrElement, DvrRing, Scalar, Summary};

/// Two commuting operators on one module.
pub type OperatorSquare = OperatorFamily;
