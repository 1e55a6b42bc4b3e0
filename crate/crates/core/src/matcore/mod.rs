//! Dense complex linear algebra for small operators (d up to a few dozen).
//!
//! Composite spaces use the Kronecker convention with the first subsystem as
//! the slow index: basis vector `|i⟩ ⊗ |j⟩` of a `d1·d2` space has index
//! `i * d2 + j`.

mod eig;
mod isometry;
mod matrix;
mod polar;
mod tensor;

pub use eig::{
    eigh, hermitian_eig, projector_basis, spectral_decomposition, Eigensystem,
    SpectralDecomposition,
};
pub use isometry::{complete_orthonormal, extend_isometry, orthonormality_residual};
pub use matrix::{inner, vec_norm, ComplexMatrix, C64};
pub use polar::{polar_factorize, positive_sqrt, range_projector, PolarFactors};
pub use tensor::{partial_trace_1, partial_trace_2, tensor, tensor_vec};

/// Grouping tolerance for eigenvalue clusters of a matrix whose spectral norm is `norm`.
pub fn default_group_tol(norm: f64) -> f64 {
    1e-8 * norm.max(1.0)
}

/// Threshold below which eigenvalues of a PSD matrix count as zero.
pub fn default_rank_tol(norm: f64) -> f64 {
    1e-10 * norm.max(1.0)
}
