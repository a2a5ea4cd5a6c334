//! Certified selection of well-conditioned 2×2 submatrices inside complex
//! n×2 matrices with orthonormal columns.
//!
//! Every such matrix contains a pair of rows whose 2×2 submatrix has an
//! inverse of spectral norm at most √(n/α), where α = 2 − 2/√3. This crate
//! constructs such a pair together with a checkable certificate, transfers
//! rows to ℝ³ vectors where the certificate lives, generates the equality
//! configurations (four tetrahedral clusters of equal vectors), brute-forces
//! the true optimum for comparison, estimates how tight the bound is by
//! direct minimization, and restates the equality case as a fact about
//! closed polygons in ℝ³.

pub mod certificate;
pub mod cli;
pub mod error;
pub mod extremal;
pub mod hopf;
pub mod io;
pub mod jacobi;
pub mod linalg;
pub mod optimize;
pub mod oracle;
pub mod polygon;
pub mod selection;

pub use error::Error;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;

/// Complex scalar used throughout.
pub type Complex = num_complex::Complex64;

/// The constant α = 2 − 2/√3 ≈ 0.845, the root of α² − 4α + 8/3 = 0 that
/// lies below 1. It is the best possible constant in the √(n/α) bound.
#[inline]
pub fn alpha() -> f64 {
    2.0 - 2.0 / 3.0_f64.sqrt()
}

/// The guaranteed bound √(n/α) on the spectral norm of the inverse of the
/// selected 2×2 submatrix.
#[inline]
pub fn spectral_bound(n: usize) -> f64 {
    (n as f64 / alpha()).sqrt()
}

pub use hopf::{
    config_from_matrix, hopf_lift, hopf_map, matrix_from_config, transfer_identity_check,
    RowConfig, TOL_CFG,
};
pub use linalg::{
    pair_gram, random_ortho, rotate_row_to_axis, validate_ortho, OrthoMatrix, PairGram, TOL_ORTH,
};
