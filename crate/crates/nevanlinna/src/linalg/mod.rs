//! Exact field arithmetic and linear algebra over the Gaussian rationals.

pub mod matrix;
pub mod scalar;
pub mod signature;

pub use matrix::{canonical_basis, dot, unit_vector, vec_add, vec_is_zero, vec_scale, vec_sub, Matrix, Vector};
pub use scalar::{parse_rational, rational_to_string, Scalar};
pub use signature::{congruence_diagonalize, hermitian_signature, Congruence, Inertia};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("matrix is not Hermitian")]
    NotHermitian,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}
