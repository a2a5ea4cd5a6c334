//! Certified row-pair selection.
//!
//! Recursion on n: at n = 3 an exhaustive scan suffices. For larger n, if
//! some row has squared norm at most α/n it is rotated onto the first
//! column, removed, and the first column rescaled by t = 1/√(1 − v²) — the
//! remaining (n−1)×2 matrix again has orthonormal columns and any pair
//! certified there transfers back with σ₂ shrunk by at most t. Otherwise
//! every transferred vector satisfies |w_i| > α/n and a nonpositive entry
//! of the certificate matrix picks the pair directly. Either way the chosen
//! 2×2 submatrix satisfies ‖·⁻¹‖₂ ≤ √(n/α).

use crate::certificate::{build_certificate, case_b_pair};
use crate::hopf::config_from_matrix;
use crate::linalg::{orthonormality_deviation, orthonormalize, pair_gram, validate_ortho};
use crate::{alpha, spectral_bound, Complex, Error, OrthoMatrix, Result};
use serde::{Deserialize, Serialize};

/// Relative slack allowed on the √(n/α) bound; absorbs roundoff from deep
/// deflation chains.
pub const BOUND_SLACK: f64 = 1e-9;

/// One step of the selection recursion, in the order taken.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum PathStep {
    /// Removed a small row (index in the original matrix) after rotating it
    /// to (v, 0); the first column was rescaled by t = 1/√(1 − v²).
    CaseA {
        #[serde(rename = "removedRow")]
        removed_row: usize,
        v: f64,
        t: f64,
    },
    /// Picked the pair at the most negative certificate entry.
    CaseB {
        #[serde(rename = "mEntry")]
        m_entry: f64,
    },
    /// Exhaustive scan at n = 3.
    BaseCase { n: usize },
}

/// A certified selection: rows (i, j) of the original matrix, the measured
/// σ₂ of the 2×2 submatrix, its inverse norm 1/σ₂, the guaranteed bound
/// √(n/α), and the recursion trace that produced it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Selection {
    pub i: usize,
    pub j: usize,
    pub sigma2: f64,
    #[serde(rename = "invNorm")]
    pub inv_norm: f64,
    pub bound: f64,
    pub path: Vec<PathStep>,
}

/// Runs the certified recursion and evaluates the selected pair on the
/// original matrix.
pub fn select_certified(u: &OrthoMatrix) -> Result<Selection> {
    let n = u.n();
    let mut path = Vec::new();
    let orig: Vec<usize> = (0..n).collect();
    let (i, j) = select_inner(u.clone(), orig, &mut path)?;
    let g = pair_gram(u, i, j)?;
    let sigma2 = g.lambda2.sqrt();
    let inv_norm = if sigma2 > 0.0 {
        1.0 / sigma2
    } else {
        f64::INFINITY
    };
    Ok(Selection {
        i,
        j,
        sigma2,
        inv_norm,
        bound: spectral_bound(n),
        path,
    })
}

/// Recursion body. `orig[k]` maps row k of `u` back to the caller's matrix;
/// returned indices are already translated.
fn select_inner(
    u: OrthoMatrix,
    orig: Vec<usize>,
    path: &mut Vec<PathStep>,
) -> Result<(usize, usize)> {
    let n = u.n();
    if n == 3 {
        path.push(PathStep::BaseCase { n: 3 });
        let mut best = (0usize, 1usize, f64::NEG_INFINITY);
        for i in 0..3 {
            for j in (i + 1)..3 {
                let l2 = pair_gram(&u, i, j)?.lambda2;
                if l2 > best.2 {
                    best = (i, j, l2);
                }
            }
        }
        return Ok((orig[best.0], orig[best.1]));
    }

    let threshold = alpha() / n as f64;
    let mut imin = 0;
    let mut min_sq = u.row_norm_sq(0);
    for k in 1..n {
        let s = u.row_norm_sq(k);
        if s < min_sq {
            min_sq = s;
            imin = k;
        }
    }

    if min_sq <= threshold {
        let (reduced, v, map) = if min_sq == 0.0 {
            // A zero row contributes nothing; plain deletion keeps the
            // columns exactly orthonormal.
            let rows: Vec<[Complex; 2]> = u
                .rows()
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != imin)
                .map(|(_, r)| *r)
                .collect();
            let map: Vec<usize> = (0..n).filter(|&k| k != imin).collect();
            (OrthoMatrix::from_rows_unchecked(rows), 0.0, map)
        } else {
            case_a_step(&u, imin)?
        };
        path.push(PathStep::CaseA {
            removed_row: orig[imin],
            v,
            t: 1.0 / (1.0 - v * v).sqrt(),
        });
        let next_orig: Vec<usize> = map.iter().map(|&p| orig[p]).collect();
        return select_inner(reduced, next_orig, path);
    }

    let cfg = config_from_matrix(&u)?;
    let cert = build_certificate(&cfg);
    let (bi, bj, m_entry) = case_b_pair(&cfg, &cert)?;
    path.push(PathStep::CaseB { m_entry });
    Ok((orig[bi], orig[bj]))
}

/// One deflation step: rotates row `i` (which must satisfy
/// 0 < ‖u_i‖² ≤ α/n) onto the first column, deletes it, and rescales the
/// first column by t = 1/√(1 − v²). Returns the reduced matrix, v = ‖u_i‖,
/// and the map from reduced to input row indices. The reduced matrix is
/// re-orthonormalized if its residual drifts above 1e−11.
pub fn case_a_step(u: &OrthoMatrix, i: usize) -> Result<(OrthoMatrix, f64, Vec<usize>)> {
    let n = u.n();
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, n });
    }
    if n <= 3 {
        return Err(Error::PreconditionViolated {
            reason: format!("cannot deflate a matrix with only {n} rows"),
        });
    }
    let norm_sq = u.row_norm_sq(i);
    if norm_sq == 0.0 {
        return Err(Error::PreconditionViolated {
            reason: format!("row {i} is zero; delete it instead of deflating"),
        });
    }
    let threshold = alpha() / n as f64;
    if norm_sq > threshold {
        return Err(Error::PreconditionViolated {
            reason: format!(
                "row {i} has squared norm {norm_sq:.6e} > alpha/n = {threshold:.6e}"
            ),
        });
    }
    let (rotated, v) = crate::linalg::rotate_row_to_axis(u, i)?;
    let t = 1.0 / (1.0 - v * v).sqrt();
    let rows: Vec<[Complex; 2]> = rotated
        .rows()
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != i)
        .map(|(_, r)| [t * r[0], r[1]])
        .collect();
    let map: Vec<usize> = (0..n).filter(|&k| k != i).collect();
    let rows = if orthonormality_deviation(&rows) > 1e-11 {
        orthonormalize(&rows)
            .ok_or_else(|| Error::PreconditionViolated {
                reason: "deflated matrix is numerically degenerate".into(),
            })?
            .rows()
            .to_vec()
    } else {
        rows
    };
    let reduced = validate_ortho(&rows, 1e-9)?;
    Ok((reduced, v, map))
}

/// Independent re-check of a claimed selection against its matrix.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerifyReport {
    pub pass: bool,
    pub recomputed_sigma2: f64,
    /// |sigma2² − λ₂| recomputed from the matrix.
    pub sigma2_residual: f64,
    /// invNorm / (√(n/α)·(1 + slack)); must be ≤ 1.
    pub bound_ratio: f64,
    pub issues: Vec<String>,
}

/// Recomputes σ₂ for the claimed pair and checks every published field:
/// sigma2 against the matrix, invNorm = 1/σ₂, bound = √(n/α), and the
/// bound itself with [`BOUND_SLACK`] relative slack.
pub fn verify_bound(u: &OrthoMatrix, sel: &Selection) -> VerifyReport {
    let mut issues = Vec::new();
    let allowed = spectral_bound(u.n()) * (1.0 + BOUND_SLACK);
    let (recomputed_sigma2, sigma2_residual) = match pair_gram(u, sel.i, sel.j) {
        Ok(g) => {
            let s2 = g.lambda2.sqrt();
            let resid = (sel.sigma2 * sel.sigma2 - g.lambda2).abs();
            if resid > 1e-12 {
                issues.push(format!(
                    "sigma2 mismatch: claimed {:.12e}, matrix gives {:.12e}",
                    sel.sigma2, s2
                ));
            }
            (s2, resid)
        }
        Err(e) => {
            issues.push(format!("pair ({}, {}) invalid: {e}", sel.i, sel.j));
            (f64::NAN, f64::NAN)
        }
    };
    if sel.sigma2 > 0.0 && (sel.inv_norm * sel.sigma2 - 1.0).abs() > 1e-12 {
        issues.push(format!(
            "invNorm {:.12e} is not the reciprocal of sigma2 {:.12e}",
            sel.inv_norm, sel.sigma2
        ));
    }
    let expected_bound = spectral_bound(u.n());
    if (sel.bound - expected_bound).abs() > 1e-12 * expected_bound {
        issues.push(format!(
            "bound {:.12e} differs from sqrt(n/alpha) = {:.12e}",
            sel.bound, expected_bound
        ));
    }
    if !(sel.inv_norm <= allowed) {
        issues.push(format!(
            "invNorm {:.12e} exceeds allowed {:.12e}",
            sel.inv_norm, allowed
        ));
    }
    VerifyReport {
        pass: issues.is_empty(),
        recomputed_sigma2,
        sigma2_residual,
        bound_ratio: sel.inv_norm / allowed,
        issues,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{random_ortho, validate_ortho, TOL_ORTH};
    use approx::assert_abs_diff_eq;

    fn identity_embedding(n: usize) -> OrthoMatrix {
        let mut rows = vec![[Complex::ZERO, Complex::ZERO]; n];
        rows[0][0] = Complex::ONE;
        rows[1][1] = Complex::ONE;
        validate_ortho(&rows, TOL_ORTH).unwrap()
    }

    #[test]
    fn base_case_picks_identity_pair() {
        let sel = select_certified(&identity_embedding(3)).unwrap();
        assert_eq!((sel.i, sel.j), (0, 1));
        assert_abs_diff_eq!(sel.sigma2, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(sel.inv_norm, 1.0, epsilon = 1e-14);
        assert_eq!(sel.path, vec![PathStep::BaseCase { n: 3 }]);
        assert!(sel.inv_norm <= sel.bound);
    }

    #[test]
    fn zero_rows_are_deleted_down_to_base() {
        let sel = select_certified(&identity_embedding(5)).unwrap();
        assert_eq!((sel.i, sel.j), (0, 1));
        // Two zero-row deletions, then the base case.
        assert_eq!(sel.path.len(), 3);
        assert!(matches!(
            sel.path[0],
            PathStep::CaseA { v, t, .. } if v == 0.0 && t == 1.0
        ));
        assert!(matches!(sel.path[1], PathStep::CaseA { .. }));
        assert_eq!(sel.path[2], PathStep::BaseCase { n: 3 });
        // Removed rows are reported in original indexing: rows 2, 3 or 4.
        for step in &sel.path[..2] {
            if let PathStep::CaseA { removed_row, .. } = step {
                assert!(*removed_row >= 2);
            }
        }
        assert_abs_diff_eq!(sel.inv_norm, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn bound_holds_on_random_matrices() {
        for seed in 0..60 {
            let n = 3 + (seed as usize % 30);
            let u = random_ortho(n, 1000 + seed).unwrap();
            let sel = select_certified(&u).unwrap();
            assert!(
                sel.inv_norm <= sel.bound * (1.0 + BOUND_SLACK),
                "n = {n}, seed = {seed}: invNorm {:.9} > bound {:.9}",
                sel.inv_norm,
                sel.bound
            );
            // The recursion must end in a terminal step.
            assert!(matches!(
                sel.path.last(),
                Some(PathStep::CaseB { .. }) | Some(PathStep::BaseCase { .. })
            ));
        }
    }

    #[test]
    fn case_b_entry_is_nonpositive_when_taken() {
        let mut case_b_seen = 0;
        for seed in 0..40 {
            let u = random_ortho(6, seed).unwrap();
            let sel = select_certified(&u).unwrap();
            if let Some(PathStep::CaseB { m_entry }) = sel.path.last() {
                assert!(*m_entry <= crate::certificate::TOL_M_ENTRY);
                case_b_seen += 1;
            }
        }
        assert!(case_b_seen > 0, "no direct selections among the seeds");
    }

    #[test]
    fn case_a_step_contract() {
        // Build a matrix with one deliberately small row via deflation of a
        // random matrix: find a qualifying seed.
        let mut exercised = false;
        for seed in 0..200 {
            let u = random_ortho(12, seed).unwrap();
            let threshold = alpha() / 12.0;
            let small = (0..12).find(|&k| {
                let s = u.row_norm_sq(k);
                s > 0.0 && s <= threshold
            });
            if let Some(k) = small {
                let (reduced, v, map) = case_a_step(&u, k).unwrap();
                assert_eq!(reduced.n(), 11);
                assert_eq!(map.len(), 11);
                assert!(!map.contains(&k));
                assert!(v > 0.0 && v * v <= threshold + 1e-15);
                // Certified transfer: σ₂ in the original dominates σ₂ in the
                // reduced matrix divided by t.
                let t = 1.0 / (1.0 - v * v).sqrt();
                for p in 0..11 {
                    for q in (p + 1)..11 {
                        let red = pair_gram(&reduced, p, q).unwrap().lambda2;
                        let orig = pair_gram(&u, map[p], map[q]).unwrap().lambda2;
                        assert!(orig >= red / (t * t) - 1e-10);
                    }
                }
                exercised = true;
                break;
            }
        }
        assert!(exercised, "no seed produced a small nonzero row");
    }

    #[test]
    fn case_a_step_rejects_large_rows() {
        let u = random_ortho(5, 1).unwrap();
        let largest = (0..5)
            .max_by(|&a, &b| {
                u.row_norm_sq(a)
                    .partial_cmp(&u.row_norm_sq(b))
                    .unwrap()
            })
            .unwrap();
        assert!(matches!(
            case_a_step(&u, largest),
            Err(Error::PreconditionViolated { .. })
        ));
    }

    #[test]
    fn small_nonzero_rows_deflate_and_keep_the_floor() {
        // Configurations with tiny but nonzero transfers force genuine
        // deflation steps (v > 0) before the terminal selection.
        let cases: Vec<Vec<[f64; 3]>> = vec![
            vec![
                [0.1, 0.0, 0.0],
                [-0.1, 0.0, 0.0],
                [0.0, 0.9, 0.0],
                [0.0, -0.9, 0.0],
            ],
            vec![
                [0.05, 0.0, 0.0],
                [-0.05, 0.0, 0.0],
                [0.0, 0.08, 0.0],
                [0.0, -0.08, 0.0],
                [0.0, 0.0, 0.87],
                [0.0, 0.0, -0.87],
            ],
        ];
        for w in cases {
            let n = w.len();
            let cfg = crate::hopf::RowConfig::new(w).unwrap();
            let u = crate::hopf::matrix_from_config(&cfg).unwrap();
            let sel = select_certified(&u).unwrap();
            let deflations = sel
                .path
                .iter()
                .filter(|s| matches!(s, PathStep::CaseA { v, .. } if *v > 0.0))
                .count();
            assert!(deflations >= 1, "n = {n}: path {:?}", sel.path);
            assert!(sel.path.len() - 1 <= n - 3);
            // Even after deflation the selected pair clears the α/n floor.
            assert!(sel.sigma2 * sel.sigma2 > alpha() / n as f64 - 1e-12);
            let rep = verify_bound(&u, &sel);
            assert!(rep.pass, "{:?}", rep.issues);
        }
    }

    #[test]
    fn verify_accepts_genuine_and_rejects_tampered() {
        let u = random_ortho(10, 77).unwrap();
        let sel = select_certified(&u).unwrap();
        assert!(verify_bound(&u, &sel).pass);

        let mut tampered = sel.clone();
        tampered.j = (tampered.j + 1) % 10;
        if tampered.j == tampered.i {
            tampered.j = (tampered.j + 1) % 10;
        }
        let rep = verify_bound(&u, &tampered);
        assert!(!rep.pass);
        assert!(!rep.issues.is_empty());
    }
}
