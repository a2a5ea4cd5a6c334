//! Error taxonomy shared by the whole crate.

use thiserror::Error;

/// Everything that can go wrong when validating inputs or running the
/// certified selection machinery.
#[derive(Debug, Error)]
pub enum Error {
    /// Columns fail the orthonormality check at the given tolerance.
    #[error("columns are not orthonormal: deviation {deviation:.3e} exceeds tolerance {tol:.3e}")]
    NotOrthonormal { deviation: f64, tol: f64 },

    /// Fewer than three rows/vectors were supplied.
    #[error("need at least 3 rows, got {n}")]
    TooFewRows { n: usize },

    /// A NaN or infinity showed up in an input.
    #[error("input contains a non-finite value")]
    NonFinite,

    /// Random sampling kept producing (numerically) dependent columns.
    #[error("could not sample independent columns after {attempts} attempts")]
    DegenerateSample { attempts: usize },

    /// A row index is out of range.
    #[error("row index {index} out of range for {n} rows")]
    IndexOutOfRange { index: usize, n: usize },

    /// The same row was passed twice where a pair is required.
    #[error("row indices must differ, got {index} twice")]
    SameIndex { index: usize },

    /// A zero row cannot be rotated onto an axis.
    #[error("row {index} is zero")]
    ZeroRow { index: usize },

    /// A vector configuration violates Σw = 0 or Σ|w| = 2.
    #[error("invalid row configuration: {reason}")]
    ConfigInvalid { reason: String },

    /// The direct-selection path requires every |w_i| to exceed α/n.
    #[error("row {index} has |w| = {r:.6e} <= alpha/n = {threshold:.6e}")]
    CaseBPreconditionViolated { index: usize, r: f64, threshold: f64 },

    /// The certificate matrix had no nonpositive entry. For a valid
    /// configuration this cannot happen, so it signals a defect.
    #[error("certificate has no nonpositive entry (min {min_entry:.6e}); input or build is defective")]
    NoNonpositiveEntry { min_entry: f64 },

    /// Equality configurations need n divisible by 4.
    #[error("n = {n} is not divisible by 4")]
    NotDivisibleBy4 { n: usize },

    /// A polygon is not closed or has the wrong perimeter.
    #[error("invalid polygon: {reason}")]
    PolygonInvalid { reason: String },

    /// A documented precondition of an operation was violated.
    #[error("precondition violated: {reason}")]
    PreconditionViolated { reason: String },
}
