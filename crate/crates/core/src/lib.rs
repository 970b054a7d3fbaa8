//! Exact computations with p-typical Witt vectors, formal group laws,
//! divided-power operator complexes and their homology.
//!
//! Everything is exact: integers are arbitrary precision, `Z/p^N` scalars are
//! reduced residues, and power series carry their truncation in the type.

pub mod dpops;
pub mod error;
pub mod exactalg;
pub mod fgl;
pub mod report;
pub mod senhom;
pub mod witt;

pub use error::{Error, Result};
pub use exactalg::{
    factorial_valuation, smith_normal_form, smith_normal_form_valued, Matrix, PAdicScalar,
    PolyRing, SmithDecomposition, TruncPoly, ValuedRing, Var,
};
pub use dpops::{DPBasisMonomial, GradedLinearMap};
pub use fgl::{CoeffRing, FglKind, FormalGroupLaw, Lambda};
pub use report::{DegreeEntry, HomologyReport};
pub use senhom::{DVRDescriptor, HomologyBase, OperatorFamily, TwoTermComplex};
pub use witt::{GhostVector, WittContext, WittVector};

