//! Exact calculus of the elementary operators `Δ_{A,B}(X) = AXB − X` and
//! `δ_{A,B}(X) = AX − XB` on `ℂⁿ`, with constructive verifiers for their
//! product, tensor, perturbation, and decomposition theorems.
//!
//! All verification runs over [`GaussianRational`] scalars with exact zero
//! tests. A floating backend appears only in the spectral finder used by
//! [`constructions::isometry_decompose`].

pub mod calculus;
pub mod conjugation;
pub mod constructions;
pub mod error;
pub mod generators;
pub mod json;
pub mod linalg;
pub mod matrix;
pub mod scalar;
pub mod spectral;

pub use calculus::{
    classify, defect, defect_binomial, defect_family_independent, defect_sequence, descent_reduce,
    is_member, is_strict_member, lemma21_sets_independent, minimal_order, tensor_sum_independent_factors_zero, twisted_family,
    Classification, DefectSequence, FamilyShape, Kind, OperatorPair, Sign, DEFAULT_MAX_ORDER,
};
pub use conjugation::Conjugation;
pub use error::{Error, Result};
pub use matrix::{Matrix, QMatrix};
pub use scalar::{GaussianRational, Scalar};
