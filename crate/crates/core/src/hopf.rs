//! Transfer between matrix rows and vectors in ℝ³.
//!
//! A row (u, v) ∈ ℂ² maps to w = (ūv + uv̄, i(ūv − uv̄), |u|² − |v|²) with
//! |w| = |u|² + |v|². Under this map orthonormality of the two columns of an
//! n×2 matrix becomes the pair of linear constraints Σw_i = 0 and Σ|w_i| = 2,
//! and Hermitian pair products turn into Euclidean dot products via
//! |⟨u_i, u_j⟩|² = ½|w_i||w_j| + ½(w_i, w_j).

use crate::linalg::{orthonormality_deviation, OrthoMatrix};
use crate::{Complex, Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Default tolerance on the configuration constraints Σw = 0 and Σ|w| = 2.
pub const TOL_CFG: f64 = 1e-9;

/// A configuration of n ≥ 3 vectors w_i ∈ ℝ³ with Σw_i = 0 and Σ|w_i| = 2,
/// together with the cached lengths r_i = |w_i|. This is the image of an
/// orthonormal-column matrix under the row-wise transfer map.
#[derive(Clone, Debug, PartialEq)]
pub struct RowConfig {
    w: Vec<[f64; 3]>,
    r: Vec<f64>,
}

impl RowConfig {
    /// Validates the constraints at the default tolerance [`TOL_CFG`].
    pub fn new(w: Vec<[f64; 3]>) -> Result<Self> {
        Self::with_tol(w, TOL_CFG)
    }

    /// Validates Σw = 0 (componentwise) and Σ|w| = 2 at tolerance `tol`.
    pub fn with_tol(w: Vec<[f64; 3]>, tol: f64) -> Result<Self> {
        let n = w.len();
        if n < 3 {
            return Err(Error::TooFewRows { n });
        }
        if w.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let mut sum = [0.0; 3];
        let mut r = Vec::with_capacity(n);
        let mut total = 0.0;
        for v in &w {
            for k in 0..3 {
                sum[k] += v[k];
            }
            let len = norm3(*v);
            total += len;
            r.push(len);
        }
        if sum.iter().any(|s| s.abs() > tol) {
            return Err(Error::ConfigInvalid {
                reason: format!(
                    "vector sum ({:.3e}, {:.3e}, {:.3e}) is not 0 within {tol:.1e}",
                    sum[0], sum[1], sum[2]
                ),
            });
        }
        if (total - 2.0).abs() > tol {
            return Err(Error::ConfigInvalid {
                reason: format!("total length {total:.12} is not 2 within {tol:.1e}"),
            });
        }
        Ok(RowConfig { w, r })
    }

    /// Random valid configuration: i.i.d. Gaussian vectors, mean-subtracted
    /// to enforce Σw = 0, then scaled so Σ|w| = 2. Deterministic in `seed`.
    pub fn random(n: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::random_from_rng(n, &mut rng)
    }

    /// As [`RowConfig::random`] with a caller-owned generator.
    pub fn random_from_rng<R: Rng>(n: usize, rng: &mut R) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooFewRows { n });
        }
        const MAX_ATTEMPTS: usize = 32;
        for _ in 0..MAX_ATTEMPTS {
            let mut w: Vec<[f64; 3]> = (0..n)
                .map(|_| {
                    [
                        rng.sample(StandardNormal),
                        rng.sample(StandardNormal),
                        rng.sample(StandardNormal),
                    ]
                })
                .collect();
            let mut mean = [0.0; 3];
            for v in &w {
                for k in 0..3 {
                    mean[k] += v[k] / n as f64;
                }
            }
            for v in &mut w {
                for k in 0..3 {
                    v[k] -= mean[k];
                }
            }
            let total: f64 = w.iter().map(|&v| norm3(v)).sum();
            if total < 1e-9 {
                continue;
            }
            let scale = 2.0 / total;
            for v in &mut w {
                for k in 0..3 {
                    v[k] *= scale;
                }
            }
            return Self::new(w);
        }
        Err(Error::DegenerateSample {
            attempts: MAX_ATTEMPTS,
        })
    }

    /// Number of vectors.
    pub fn n(&self) -> usize {
        self.w.len()
    }

    /// The vectors w_i.
    pub fn vectors(&self) -> &[[f64; 3]] {
        &self.w
    }

    /// The lengths r_i = |w_i|.
    pub fn radii(&self) -> &[f64] {
        &self.r
    }
}

/// Euclidean length of a vector in ℝ³.
pub(crate) fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Euclidean dot product in ℝ³.
pub(crate) fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// The row transfer map (u, v) ↦ (ūv + uv̄, i(ūv − uv̄), |u|² − |v|²).
/// The image length is |u|² + |v|², the squared row norm.
pub fn hopf_map(u: Complex, v: Complex) -> Result<[f64; 3]> {
    if !(u.re.is_finite() && u.im.is_finite() && v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let c = u.conj() * v;
    Ok([2.0 * c.re, -2.0 * c.im, u.norm_sqr() - v.norm_sqr()])
}

/// Gauge-fixed right inverse of [`hopf_map`]: returns the unique preimage
/// (u, v) with u real and nonnegative, via u = √((|w| + w₃)/2) and
/// v = (w₁ − i·w₂)/(2u). Near the south pole w ≈ (0, 0, −|w|) the quantity
/// |w| + w₃ is evaluated as (w₁² + w₂²)/(|w| − w₃) to dodge cancellation,
/// and below the threshold 1e−14·|w| the lift switches to (0, √|w|).
/// The zero vector maps to (0, 0).
pub fn hopf_lift(w: [f64; 3]) -> Result<(Complex, Complex)> {
    if w.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let norm = norm3(w);
    if norm == 0.0 {
        return Ok((Complex::ZERO, Complex::ZERO));
    }
    let plane_sq = w[0] * w[0] + w[1] * w[1];
    let shifted = if w[2] >= 0.0 {
        norm + w[2]
    } else {
        plane_sq / (norm - w[2])
    };
    if shifted <= 1e-14 * norm {
        return Ok((Complex::ZERO, Complex::new(norm.sqrt(), 0.0)));
    }
    let u = (0.5 * shifted).sqrt();
    let v = Complex::new(w[0], -w[1]) / (2.0 * u);
    Ok((Complex::new(u, 0.0), v))
}

/// Transfers every row of U, producing the configuration that certifies
/// orthonormality through Σw = 0 and Σ|w| = 2.
pub fn config_from_matrix(u: &OrthoMatrix) -> Result<RowConfig> {
    let mut w = Vec::with_capacity(u.n());
    for r in u.rows() {
        w.push(hopf_map(r[0], r[1])?);
    }
    RowConfig::new(w)
}

/// Lifts every vector of a configuration back to a matrix row. The result
/// has orthonormal columns up to 10·[`TOL_CFG`]; pair spectra agree with any
/// other preimage of the same configuration because row-wise gauge phases
/// cancel in |⟨u_i, u_j⟩|.
pub fn matrix_from_config(cfg: &RowConfig) -> Result<OrthoMatrix> {
    let mut rows = Vec::with_capacity(cfg.n());
    for &w in cfg.vectors() {
        let (u, v) = hopf_lift(w)?;
        rows.push([u, v]);
    }
    let deviation = orthonormality_deviation(&rows);
    let tol = 10.0 * TOL_CFG;
    if deviation > tol {
        return Err(Error::ConfigInvalid {
            reason: format!("lifted matrix has orthonormality deviation {deviation:.3e} > {tol:.1e}"),
        });
    }
    Ok(OrthoMatrix::from_rows_unchecked(rows))
}

/// Largest residual of |⟨u_i, u_j⟩|² = ½|w_i||w_j| + ½(w_i, w_j) over all
/// row pairs, where w = hopf_map(row). Zero in exact arithmetic.
pub fn transfer_identity_check(u: &OrthoMatrix) -> Result<f64> {
    let n = u.n();
    let rows = u.rows();
    let mut w = Vec::with_capacity(n);
    for r in rows {
        w.push(hopf_map(r[0], r[1])?);
    }
    let r: Vec<f64> = w.iter().map(|&v| norm3(v)).collect();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            let inner = rows[i][0].conj() * rows[j][0] + rows[i][1].conj() * rows[j][1];
            let lhs = inner.norm_sqr();
            let rhs = 0.5 * r[i] * r[j] + 0.5 * dot3(w[i], w[j]);
            worst = worst.max((lhs - rhs).abs());
        }
    }
    Ok(worst)
}
