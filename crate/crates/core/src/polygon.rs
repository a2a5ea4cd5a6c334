//! Polygon form of the certificate: a closed polygon in ℝ³ with perimeter 2
//! always contains an edge pair whose triangle-inequality gap
//! |w_i| + |w_j| − |w_i + w_j| is at least 2α/n, with equality exactly for
//! the tetrahedral equality configurations.

use crate::extremal::{validate_equality_case, EqualityReport};
use crate::hopf::{dot3, norm3, RowConfig};
use crate::{alpha, Error, Result};
use serde::Serialize;

/// A closed polygon with perimeter 2, stored as its edge vectors. The edge
/// multiset of a polygon is exactly a valid row configuration, so the whole
/// certificate machinery applies verbatim.
#[derive(Clone, Debug)]
pub struct Polygon {
    cfg: RowConfig,
}

impl Polygon {
    /// Edges must close up (Σw = 0) and have total length 2.
    pub fn from_edges(edges: Vec<[f64; 3]>) -> Result<Self> {
        match RowConfig::new(edges) {
            Ok(cfg) => Ok(Polygon { cfg }),
            Err(Error::ConfigInvalid { reason }) => Err(Error::PolygonInvalid { reason }),
            Err(e) => Err(e),
        }
    }

    /// Consecutive differences of a cyclic vertex list. Closure is then
    /// automatic; the perimeter must still be 2 unless normalized.
    pub fn from_vertices(vertices: &[[f64; 3]], normalize: bool) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::TooFewRows { n });
        }
        let mut edges = Vec::with_capacity(n);
        for k in 0..n {
            let a = vertices[k];
            let b = vertices[(k + 1) % n];
            edges.push([b[0] - a[0], b[1] - a[1], b[2] - a[2]]);
        }
        if normalize {
            Self::from_edges_normalized(edges)
        } else {
            Self::from_edges(edges)
        }
    }

    /// Rescales the edges to perimeter 2 before validating. Closure is
    /// scale-invariant, so only genuinely open polygons are rejected.
    pub fn from_edges_normalized(mut edges: Vec<[f64; 3]>) -> Result<Self> {
        let total: f64 = edges.iter().map(|&e| norm3(e)).sum();
        if total <= 0.0 || !total.is_finite() {
            return Err(Error::PolygonInvalid {
                reason: format!("perimeter {total} cannot be normalized"),
            });
        }
        let scale = 2.0 / total;
        for e in &mut edges {
            for k in 0..3 {
                e[k] *= scale;
            }
        }
        // Closure may sit slightly off 0 before scaling; rescale does not
        // change its relative size, so validate after scaling.
        self_normalized_closure_check(&edges)?;
        Self::from_edges(edges)
    }

    pub fn n(&self) -> usize {
        self.cfg.n()
    }

    pub fn edges(&self) -> &[[f64; 3]] {
        self.cfg.vectors()
    }

    /// The polygon's edges as a row configuration.
    pub fn config(&self) -> &RowConfig {
        &self.cfg
    }
}

fn self_normalized_closure_check(edges: &[[f64; 3]]) -> Result<()> {
    let mut sum = [0.0; 3];
    for e in edges {
        for k in 0..3 {
            sum[k] += e[k];
        }
    }
    if sum.iter().any(|s| s.abs() > crate::hopf::TOL_CFG) {
        return Err(Error::PolygonInvalid {
            reason: format!(
                "edges do not close up: residual ({:.3e}, {:.3e}, {:.3e})",
                sum[0], sum[1], sum[2]
            ),
        });
    }
    Ok(())
}

/// Triangle-inequality gap |w_i| + |w_j| − |w_i + w_j| of two edges,
/// evaluated in the cancellation-free form 2 P_ij / (r_i + r_j + |w_i+w_j|)
/// with P_ij = r_i r_j − (w_i, w_j); the two agree because
/// (r_i + r_j)² − |w_i + w_j|² = 2 P_ij. Always ≥ 0; zero iff the edges are
/// parallel (or one vanishes while the gap degenerates to 0).
pub fn gap(wi: [f64; 3], wj: [f64; 3]) -> f64 {
    let ri = norm3(wi);
    let rj = norm3(wj);
    let sum = [wi[0] + wj[0], wi[1] + wj[1], wi[2] + wj[2]];
    let denom = ri + rj + norm3(sum);
    if denom == 0.0 {
        return 0.0;
    }
    let p = ri * rj - dot3(wi, wj);
    2.0 * p / denom
}

/// The polygon statement evaluated on one polygon.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CorollaryReport {
    pub n: usize,
    pub max_gap: f64,
    pub max_i: usize,
    pub max_j: usize,
    /// 2α/n.
    pub bound: f64,
    /// max_gap / bound ≥ 1 up to roundoff.
    pub ratio: f64,
    /// Equality analysis of the edge configuration.
    pub equality: EqualityReport,
}

/// Scans all edge pairs for the largest gap (lexicographic tie-break) and
/// compares it with the guaranteed 2α/n; also reports whether the polygon
/// is an equality case.
pub fn check_corollary(poly: &Polygon) -> CorollaryReport {
    let n = poly.n();
    let edges = poly.edges();
    let mut max_gap = f64::NEG_INFINITY;
    let mut max_i = 0;
    let mut max_j = 1;
    for i in 0..n {
        for j in (i + 1)..n {
            let g = gap(edges[i], edges[j]);
            if g > max_gap {
                max_gap = g;
                max_i = i;
                max_j = j;
            }
        }
    }
    let bound = 2.0 * alpha() / n as f64;
    CorollaryReport {
        n,
        max_gap,
        max_i,
        max_j,
        bound,
        ratio: max_gap / bound,
        equality: validate_equality_case(poly.config()),
    }
}

/// Largest residual of 2 P_ij = (r_i + r_j)² − |w_i + w_j|² over all edge
/// pairs of the transferred configuration of a matrix: the identity that
/// makes [`gap`]'s two forms agree.
pub fn gap_consistency(u: &crate::OrthoMatrix) -> Result<f64> {
    let cfg = crate::hopf::config_from_matrix(u)?;
    let w = cfg.vectors();
    let r = cfg.radii();
    let mut worst = 0.0_f64;
    for i in 0..cfg.n() {
        for j in (i + 1)..cfg.n() {
            let p = r[i] * r[j] - dot3(w[i], w[j]);
            let sum = [w[i][0] + w[j][0], w[i][1] + w[j][1], w[i][2] + w[j][2]];
            let lhs = 2.0 * p;
            let rhs = (r[i] + r[j]) * (r[i] + r[j]) - norm3(sum) * norm3(sum);
            worst = worst.max((lhs - rhs).abs());
        }
    }
    Ok(worst)
}
