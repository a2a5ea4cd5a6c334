//! The entrywise certificate behind the √(n/α) bound.
//!
//! For a configuration w₁…w_n (Σw = 0, Σ|w| = 2, r_i = |w_i|) define
//! τ = 2α/n, ρ_i = r_i − τ/4 and the symmetric matrices
//!
//!   P_ij = r_i r_j − (w_i, w_j)
//!   M_ij = (w_i, w_j) − (r_i − τ)(r_j − τ) + 2α²/n²  =  τ(ρ_i + ρ_j) − P_ij.
//!
//! M always has a nonpositive entry, and when every r_i exceeds α/n such an
//! entry (i, j) certifies λ₂ of the corresponding row-pair Gram matrix to be
//! at least α/n. Nonpositivity follows from a counting argument on
//! F = Σ P_ij²: row sums of P are fixed (Σ_j P_ij = 2 r_i), which forces
//! F ≥ 8R₂/n − 32/(3n²) with R₂ = Σ r_i², while an everywhere-positive M
//! would force the contradictory strict bound F < (8α/n)(R₂ − α/n).

use crate::hopf::{dot3, RowConfig};
use crate::jacobi::symmetric_eigenvalues;
use crate::{alpha, Error, Result};
use serde::{Deserialize, Serialize};

/// Entries of M at or below this value count as nonpositive; the equality
/// configurations sit exactly on the zero boundary.
pub const TOL_M_ENTRY: f64 = 1e-12;

/// Location and value of the minimal entry of M.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinEntry {
    pub i: usize,
    pub j: usize,
    pub value: f64,
}

/// All certificate data derived from one configuration. Matrices are
/// row-major n×n and exactly symmetric by construction.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub n: usize,
    /// τ = 2α/n.
    pub tau: f64,
    /// M_ij = (w_i,w_j) − (r_i−τ)(r_j−τ) + 2α²/n².
    pub m: Vec<f64>,
    /// P_ij = r_i r_j − (w_i,w_j).
    pub p: Vec<f64>,
    /// ρ_i = r_i − τ/4.
    pub rho: Vec<f64>,
    /// R₂ = Σ r_i².
    pub r2: f64,
    /// F = Σ_{ij} P_ij².
    pub f: f64,
    /// Rayleigh value of P in the normalized all-ones direction ê: ⟨ê,Pê⟩ = 4/n.
    pub s: f64,
    /// ‖Pê‖² = 4R₂/n.
    pub t_diag: f64,
    /// Minimal entry over all (i, j) including the diagonal, ties broken by
    /// smallest i, then smallest j.
    pub min_entry: MinEntry,
}

impl Certificate {
    pub fn m_entry(&self, i: usize, j: usize) -> f64 {
        self.m[i * self.n + j]
    }

    pub fn p_entry(&self, i: usize, j: usize) -> f64 {
        self.p[i * self.n + j]
    }
}

/// Builds P, M and the scalar summaries for a validated configuration.
pub fn build_certificate(cfg: &RowConfig) -> Certificate {
    let n = cfg.n();
    let nf = n as f64;
    let al = alpha();
    let tau = 2.0 * al / nf;
    let shift = 2.0 * al * al / (nf * nf);
    let w = cfg.vectors();
    let r = cfg.radii();

    let rho: Vec<f64> = r.iter().map(|&ri| ri - 0.25 * tau).collect();
    let mut p = vec![0.0; n * n];
    let mut m = vec![0.0; n * n];
    let mut min_entry = MinEntry {
        i: 0,
        j: 0,
        value: f64::INFINITY,
    };
    let mut f = 0.0;
    for i in 0..n {
        let mut row_f = 0.0;
        for j in 0..n {
            let d = dot3(w[i], w[j]);
            let pij = r[i] * r[j] - d;
            let mij = d - (r[i] - tau) * (r[j] - tau) + shift;
            p[i * n + j] = pij;
            m[i * n + j] = mij;
            row_f += pij * pij;
            if mij < min_entry.value {
                min_entry = MinEntry {
                    i,
                    j,
                    value: mij,
                };
            }
        }
        f += row_f;
    }
    let r2: f64 = r.iter().map(|x| x * x).sum();
    Certificate {
        n,
        tau,
        m,
        p,
        rho,
        r2,
        f,
        s: 4.0 / nf,
        t_diag: 4.0 * r2 / nf,
        min_entry,
    }
}

/// Picks the most negative strictly-off-diagonal entry of M (ties by
/// smallest i, then j) for a configuration in which every r_i > α/n; the
/// returned pair then satisfies λ₂ ≥ α/n up to [`TOL_M_ENTRY`] slack.
pub fn select_case_b(cfg: &RowConfig) -> Result<(usize, usize)> {
    let cert = build_certificate(cfg);
    case_b_pair(cfg, &cert).map(|(i, j, _)| (i, j))
}

/// Internal form of [`select_case_b`] for callers that already hold the
/// certificate; also returns the entry value.
pub(crate) fn case_b_pair(cfg: &RowConfig, cert: &Certificate) -> Result<(usize, usize, f64)> {
    let n = cfg.n();
    let threshold = alpha() / n as f64;
    for (i, &ri) in cfg.radii().iter().enumerate() {
        if ri <= threshold {
            return Err(Error::CaseBPreconditionViolated {
                index: i,
                r: ri,
                threshold,
            });
        }
    }
    let mut best: Option<(usize, usize, f64)> = None;
    for i in 0..n {
        for j in (i + 1)..n {
            let v = cert.m_entry(i, j);
            if best.map_or(true, |(_, _, bv)| v < bv) {
                best = Some((i, j, v));
            }
        }
    }
    let (i, j, v) = best.expect("n >= 3 guarantees an off-diagonal entry");
    if v > TOL_M_ENTRY {
        return Err(Error::NoNonpositiveEntry { min_entry: v });
    }
    Ok((i, j, v))
}

/// Eigen-level diagnostics of P and M.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SpectralDiagnostics {
    /// Eigenvalues of P, ascending. tr P = 0, and at most three are
    /// negative because P = rrᵀ − WWᵀ with WWᵀ of rank ≤ 3.
    pub p_eigenvalues: Vec<f64>,
    /// Eigenvalues of M, ascending.
    pub m_eigenvalues: Vec<f64>,
    /// Count of P eigenvalues below −1e−9.
    pub neg_count_p: usize,
    pub trace_p: f64,
    /// ‖P ê − (2/√n) r‖_∞ for the normalized all-ones vector ê.
    pub pe_residual: f64,
}

/// The inequality chain evaluated on one configuration, with hard facts as
/// booleans and identities as residuals.
#[derive(Clone, Debug)]
pub struct LemmaReport {
    pub certificate: Certificate,
    pub spectral: SpectralDiagnostics,
    /// 8R₂/n − 32/(3n²); F is always at least this.
    pub lower_raw: f64,
    /// (8α/n)(R₂ − α/n); F < upper is what an everywhere-positive M would
    /// force, while F ≥ upper always holds.
    pub upper: f64,
    /// 4/n; R₂ is always at least this.
    pub r2_floor: f64,
    pub f_ge_lower_raw: bool,
    pub f_ge_upper: bool,
    pub r2_ge_floor: bool,
    /// |lower_raw − upper − (8(1−α)/n)(R₂ − 4/n)|: the recombination
    /// identity tying the two bounds together, zero in exact arithmetic.
    pub fsum_residual: f64,
    /// |α² − 4α + 8/3|.
    pub alpha_root_residual: f64,
}

/// Evaluates spectra, the fixed row-sum structure of P, and the F/R₂
/// inequality chain. O(n³) because of the two eigen-decompositions.
pub fn lemma_diagnostics(cfg: &RowConfig) -> LemmaReport {
    let cert = build_certificate(cfg);
    let n = cert.n;
    let nf = n as f64;
    let al = alpha();

    let p_eigenvalues = symmetric_eigenvalues(&cert.p, n);
    let m_eigenvalues = symmetric_eigenvalues(&cert.m, n);
    let neg_count_p = p_eigenvalues.iter().filter(|&&x| x < -1e-9).count();
    let trace_p: f64 = (0..n).map(|i| cert.p_entry(i, i)).sum();
    let sqrt_n = nf.sqrt();
    let mut pe_residual = 0.0_f64;
    for i in 0..n {
        let row_sum: f64 = (0..n).map(|j| cert.p_entry(i, j)).sum();
        // (P ê)_i = Σ_j P_ij / √n must equal (2/√n) r_i.
        pe_residual = pe_residual.max((row_sum / sqrt_n - 2.0 * cfg.radii()[i] / sqrt_n).abs());
    }

    let lower_raw = 8.0 * cert.r2 / nf - 32.0 / (3.0 * nf * nf);
    let upper = (8.0 * al / nf) * (cert.r2 - al / nf);
    let r2_floor = 4.0 / nf;
    let fsum_residual =
        (lower_raw - upper - (8.0 * (1.0 - al) / nf) * (cert.r2 - 4.0 / nf)).abs();

    LemmaReport {
        spectral: SpectralDiagnostics {
            p_eigenvalues,
            m_eigenvalues,
            neg_count_p,
            trace_p,
            pe_residual,
        },
        lower_raw,
        upper,
        r2_floor,
        f_ge_lower_raw: cert.f >= lower_raw - 1e-10,
        f_ge_upper: cert.f >= upper - 1e-10,
        r2_ge_floor: cert.r2 >= r2_floor - 1e-12,
        fsum_residual,
        alpha_root_residual: (al * al - 4.0 * al + 8.0 / 3.0).abs(),
        certificate: cert,
    }
}
