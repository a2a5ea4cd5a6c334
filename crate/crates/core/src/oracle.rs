//! Exhaustive ground truth: scan every row pair for the one maximizing the
//! smallest Gram eigenvalue. Quadratic in n, but each pair costs O(1).

use crate::linalg::pair_lambda2;
use crate::selection::select_certified;
use crate::{OrthoMatrix, Result};
use rayon::prelude::*;
use serde::Serialize;

/// Result of the full pair scan. `inv_norm_min` = 1/√λ₂max is the best
/// achievable inverse norm, a lower bound for any certified selection.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OracleResult {
    pub best_i: usize,
    pub best_j: usize,
    pub lambda2_max: f64,
    pub inv_norm_min: f64,
    /// All (i, j, λ₂) rows in lexicographic order, when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<(usize, usize, f64)>>,
}

/// Scans pairs in lexicographic order i < j with strict-greater updates, so
/// ties resolve to the smallest pair. The scan parallelizes over the first
/// index; per-row winners are merged in index order, making the result
/// independent of the thread count.
pub fn brute_force_best_pair(u: &OrthoMatrix, keep_table: bool) -> OracleResult {
    let n = u.n();
    let rows = u.rows();
    let per_row: Vec<(usize, f64)> = (0..n - 1)
        .into_par_iter()
        .map(|i| {
            let mut best_j = i + 1;
            let mut best = f64::NEG_INFINITY;
            for j in (i + 1)..n {
                let l2 = pair_lambda2(rows, i, j);
                if l2 > best {
                    best = l2;
                    best_j = j;
                }
            }
            (best_j, best)
        })
        .collect();
    let mut best_i = 0;
    let mut best_j = 1;
    let mut lambda2_max = f64::NEG_INFINITY;
    for (i, &(j, l2)) in per_row.iter().enumerate() {
        if l2 > lambda2_max {
            lambda2_max = l2;
            best_i = i;
            best_j = j;
        }
    }
    let table = keep_table.then(|| {
        let mut t = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in (i + 1)..n {
                t.push((i, j, pair_lambda2(rows, i, j)));
            }
        }
        t
    });
    OracleResult {
        best_i,
        best_j,
        lambda2_max,
        inv_norm_min: if lambda2_max > 0.0 {
            1.0 / lambda2_max.sqrt()
        } else {
            f64::INFINITY
        },
        table,
    }
}

/// Oracle versus certified selection on the same matrix.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GapReport {
    pub oracle_lambda2: f64,
    pub certified_lambda2: f64,
    /// certified/oracle ∈ (0, 1] up to roundoff.
    pub ratio: f64,
    /// certified ≤ oracle + 1e−12; false would mean a defective build.
    pub consistent: bool,
}

/// Runs both the oracle and the certified selection and compares them. The
/// certified value can never exceed the oracle's, since the oracle
/// maximizes over all pairs.
pub fn compare_with_certified(u: &OrthoMatrix) -> Result<GapReport> {
    let oracle = brute_force_best_pair(u, false);
    let sel = select_certified(u)?;
    let certified = sel.sigma2 * sel.sigma2;
    Ok(GapReport {
        oracle_lambda2: oracle.lambda2_max,
        certified_lambda2: certified,
        ratio: certified / oracle.lambda2_max,
        consistent: certified <= oracle.lambda2_max + 1e-12,
    })
}
