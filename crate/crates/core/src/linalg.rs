//! Linear algebra on n×2 complex matrices: validated orthonormal-column
//! matrices, Haar-distributed sampling, closed-form spectra of 2×2 row-pair
//! Gram matrices, and the column rotation that sends a row to the real axis.

use crate::{Complex, Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Default tolerance for the orthonormality residual ‖UᴴU − I‖.
pub const TOL_ORTH: f64 = 1e-10;

/// An n×2 complex matrix with orthonormal columns, n ≥ 3. Construction goes
/// through [`validate_ortho`] (or through operations that preserve the
/// invariant), so holders can rely on UᴴU = I up to the stated tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct OrthoMatrix {
    rows: Vec<[Complex; 2]>,
}

impl OrthoMatrix {
    /// Number of rows.
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    /// All rows, in order.
    pub fn rows(&self) -> &[[Complex; 2]] {
        &self.rows
    }

    /// Row `i` (panics if out of range).
    pub fn row(&self, i: usize) -> [Complex; 2] {
        self.rows[i]
    }

    /// Squared Euclidean norm of row `i`.
    pub fn row_norm_sq(&self, i: usize) -> f64 {
        self.rows[i][0].norm_sqr() + self.rows[i][1].norm_sqr()
    }

    pub(crate) fn from_rows_unchecked(rows: Vec<[Complex; 2]>) -> Self {
        OrthoMatrix { rows }
    }
}

/// Max-norm deviation of UᴴU from the 2×2 identity: the largest of
/// |‖c₁‖² − 1|, |‖c₂‖² − 1| and |⟨c₁,c₂⟩|.
pub fn orthonormality_deviation(rows: &[[Complex; 2]]) -> f64 {
    let mut g11 = 0.0;
    let mut g22 = 0.0;
    let mut g12 = Complex::ZERO;
    for r in rows {
        g11 += r[0].norm_sqr();
        g22 += r[1].norm_sqr();
        g12 += r[0].conj() * r[1];
    }
    (g11 - 1.0).abs().max((g22 - 1.0).abs()).max(g12.norm())
}

/// Checks finiteness, n ≥ 3 and orthonormality of the columns at tolerance
/// `tol`, returning the validated matrix.
pub fn validate_ortho(rows: &[[Complex; 2]], tol: f64) -> Result<OrthoMatrix> {
    if rows.len() < 3 {
        return Err(Error::TooFewRows { n: rows.len() });
    }
    for r in rows {
        if !(r[0].re.is_finite() && r[0].im.is_finite() && r[1].re.is_finite() && r[1].im.is_finite())
        {
            return Err(Error::NonFinite);
        }
    }
    let deviation = orthonormality_deviation(rows);
    if deviation > tol {
        return Err(Error::NotOrthonormal { deviation, tol });
    }
    Ok(OrthoMatrix {
        rows: rows.to_vec(),
    })
}

fn complex_normal<R: Rng>(rng: &mut R) -> Complex {
    Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Gram–Schmidt on the two columns with one re-orthogonalization pass.
/// Returns `None` when a column is numerically dependent or vanishing.
pub(crate) fn orthonormalize(rows: &[[Complex; 2]]) -> Option<OrthoMatrix> {
    let n = rows.len();
    let mut c1: Vec<Complex> = rows.iter().map(|r| r[0]).collect();
    let mut c2: Vec<Complex> = rows.iter().map(|r| r[1]).collect();
    let n1 = c1.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n1 < 1e-12 {
        return None;
    }
    for z in &mut c1 {
        *z /= n1;
    }
    for _ in 0..2 {
        let proj: Complex = c1.iter().zip(&c2).map(|(a, b)| a.conj() * b).sum();
        for (a, b) in c1.iter().zip(&mut c2) {
            *b -= proj * a;
        }
    }
    let n2 = c2.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n2 < 1e-12 {
        return None;
    }
    for z in &mut c2 {
        *z /= n2;
    }
    let rows = (0..n).map(|i| [c1[i], c2[i]]).collect();
    Some(OrthoMatrix::from_rows_unchecked(rows))
}

/// Haar-distributed n×2 matrix with orthonormal columns: i.i.d. complex
/// Gaussian entries followed by Gram–Schmidt. Deterministic in `seed`.
pub fn random_ortho(n: usize, seed: u64) -> Result<OrthoMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_ortho_from_rng(n, &mut rng)
}

/// As [`random_ortho`] but drawing from a caller-owned generator; used by
/// the optimizer so each restart consumes its own stream.
pub fn random_ortho_from_rng<R: Rng>(n: usize, rng: &mut R) -> Result<OrthoMatrix> {
    if n < 3 {
        return Err(Error::TooFewRows { n });
    }
    const MAX_ATTEMPTS: usize = 32;
    for _ in 0..MAX_ATTEMPTS {
        let raw: Vec<[Complex; 2]> = (0..n)
            .map(|_| [complex_normal(rng), complex_normal(rng)])
            .collect();
        if let Some(m) = orthonormalize(&raw) {
            return Ok(m);
        }
    }
    Err(Error::DegenerateSample {
        attempts: MAX_ATTEMPTS,
    })
}

/// Gram matrix data of a row pair: U_ij = (u_i; u_j) stacked as 2×2, with
/// G = U_ij U_ijᴴ = [[a, b], [b̄, d]] and its eigenvalues λ₁ ≥ λ₂ ≥ 0.
/// σ₂(U_ij)² = λ₂ and ‖U_ij⁻¹‖₂ = 1/√λ₂.
#[derive(Clone, Copy, Debug)]
pub struct PairGram {
    pub i: usize,
    pub j: usize,
    /// ‖u_i‖².
    pub a: f64,
    /// ‖u_j‖².
    pub d: f64,
    /// ⟨u_i, u_j⟩ (conjugate-linear in the first slot).
    pub b: Complex,
    pub lambda1: f64,
    pub lambda2: f64,
}

impl PairGram {
    /// ‖U_ij⁻¹‖₂ = 1/√λ₂, or `None` for a singular pair.
    pub fn inv_spectral_norm(&self) -> Option<f64> {
        (self.lambda2 > 0.0).then(|| 1.0 / self.lambda2.sqrt())
    }
}

/// λ₂ of the pair Gram matrix, without the bookkeeping. Shared by the
/// exhaustive scans where allocation and error paths would dominate.
#[inline]
pub(crate) fn pair_lambda2(rows: &[[Complex; 2]], i: usize, j: usize) -> f64 {
    let (a, d, b) = pair_entries(rows, i, j);
    let tr = a + d;
    let det = a * d - b.norm_sqr();
    let disc = (tr * tr - 4.0 * det).max(0.0);
    (0.5 * (tr - disc.sqrt())).max(0.0)
}

#[inline]
fn pair_entries(rows: &[[Complex; 2]], i: usize, j: usize) -> (f64, f64, Complex) {
    let ri = rows[i];
    let rj = rows[j];
    let a = ri[0].norm_sqr() + ri[1].norm_sqr();
    let d = rj[0].norm_sqr() + rj[1].norm_sqr();
    let b = ri[0].conj() * rj[0] + ri[1].conj() * rj[1];
    (a, d, b)
}

/// Closed-form spectrum of the 2×2 Gram matrix of rows `i`, `j`. The
/// discriminant is clamped at zero so roundoff cannot produce NaN.
pub fn pair_gram(u: &OrthoMatrix, i: usize, j: usize) -> Result<PairGram> {
    let n = u.n();
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, n });
    }
    if j >= n {
        return Err(Error::IndexOutOfRange { index: j, n });
    }
    if i == j {
        return Err(Error::SameIndex { index: i });
    }
    let (a, d, b) = pair_entries(u.rows(), i, j);
    let tr = a + d;
    let det = a * d - b.norm_sqr();
    let disc = (tr * tr - 4.0 * det).max(0.0);
    let s = disc.sqrt();
    let lambda1 = 0.5 * (tr + s);
    let lambda2 = (0.5 * (tr - s)).max(0.0);
    Ok(PairGram {
        i,
        j,
        a,
        d,
        b,
        lambda1,
        lambda2,
    })
}

/// Right-multiplies U by the unitary Z = (1/v)·[[ū₁, −u₂], [ū₂, u₁]] that
/// sends row `i` = (u₁, u₂) to (v, 0) with v = ‖u_i‖ real and nonnegative.
/// Right multiplication by a unitary leaves every row-pair Gram matrix (and
/// hence all pair spectra) unchanged. Returns (UZ, v).
pub fn rotate_row_to_axis(u: &OrthoMatrix, i: usize) -> Result<(OrthoMatrix, f64)> {
    let n = u.n();
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, n });
    }
    let [a, b] = u.row(i);
    let v = (a.norm_sqr() + b.norm_sqr()).sqrt();
    if v == 0.0 {
        return Err(Error::ZeroRow { index: i });
    }
    let z11 = a.conj() / v;
    let z12 = -b / v;
    let z21 = b.conj() / v;
    let z22 = a / v;
    let mut rows: Vec<[Complex; 2]> = u
        .rows()
        .iter()
        .map(|r| [r[0] * z11 + r[1] * z21, r[0] * z12 + r[1] * z22])
        .collect();
    // Row i maps to (v, 0) exactly in exact arithmetic; pin it to kill the
    // last-ulp residue so downstream deflation sees a clean axis row.
    rows[i] = [Complex::new(v, 0.0), Complex::ZERO];
    Ok((OrthoMatrix::from_rows_unchecked(rows), v))
}
