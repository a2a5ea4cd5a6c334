//! Equality configurations: n/4 copies each of four vectors of length 2/n
//! pointing at the vertices of a regular tetrahedron. These are precisely
//! the configurations on which the certified bound √(n/α) is attained, and
//! their certificate matrices have a rigid spectral signature.

use crate::certificate::build_certificate;
use crate::hopf::{matrix_from_config, RowConfig};
use crate::jacobi::symmetric_eigenvalues;
use crate::{Error, OrthoMatrix, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

/// Vertex directions of the standard regular tetrahedron (unnormalized);
/// pairwise dot products are −1/3 after normalization, and they sum to the
/// zero vector exactly, componentwise, in floating point.
const TETRA: [[f64; 3]; 4] = [
    [1.0, 1.0, 1.0],
    [1.0, -1.0, -1.0],
    [-1.0, 1.0, -1.0],
    [-1.0, -1.0, 1.0],
];

/// Recipe for an equality configuration: cluster directions (unit vectors),
/// the rotation applied to the standard tetrahedron, and the cluster size.
#[derive(Clone, Debug)]
pub struct ExtremalFamily {
    pub n: usize,
    pub directions: [[f64; 3]; 4],
    pub rotation: [[f64; 3]; 3],
    pub cluster_size: usize,
}

impl ExtremalFamily {
    /// Standard orientation; requires n ≥ 4 divisible by 4.
    pub fn standard(n: usize) -> Result<Self> {
        Self::rotated(n, IDENTITY3)
    }

    /// Tetrahedron rotated by an orthogonal 3×3 matrix.
    pub fn rotated(n: usize, rotation: [[f64; 3]; 3]) -> Result<Self> {
        if n < 4 || n % 4 != 0 {
            return Err(Error::NotDivisibleBy4 { n });
        }
        let s = 1.0 / 3.0_f64.sqrt();
        let mut directions = [[0.0; 3]; 4];
        for (k, d) in TETRA.iter().enumerate() {
            for row in 0..3 {
                directions[k][row] = s
                    * (rotation[row][0] * d[0] + rotation[row][1] * d[1] + rotation[row][2] * d[2]);
            }
        }
        Ok(ExtremalFamily {
            n,
            directions,
            rotation,
            cluster_size: n / 4,
        })
    }

    /// The configuration itself: cluster-major order, each vector of length
    /// 2/n.
    pub fn config(&self) -> Result<RowConfig> {
        let scale = 2.0 / self.n as f64;
        let mut w = Vec::with_capacity(self.n);
        for d in &self.directions {
            for _ in 0..self.cluster_size {
                w.push([scale * d[0], scale * d[1], scale * d[2]]);
            }
        }
        RowConfig::new(w)
    }
}

const IDENTITY3: [[f64; 3]; 3] = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

/// Equality configuration in standard orientation (or rotated when given).
pub fn tetrahedron_config(n: usize, rotation: Option<[[f64; 3]; 3]>) -> Result<RowConfig> {
    match rotation {
        Some(rot) => ExtremalFamily::rotated(n, rot)?.config(),
        None => ExtremalFamily::standard(n)?.config(),
    }
}

/// Seeded Haar-ish random orthogonal 3×3 matrix (Gaussian + Gram–Schmidt).
pub fn random_rotation(seed: u64) -> [[f64; 3]; 3] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut cols = [[0.0_f64; 3]; 3];
        for c in cols.iter_mut() {
            for x in c.iter_mut() {
                *x = rng.sample(StandardNormal);
            }
        }
        let mut ok = true;
        for k in 0..3 {
            for prev in 0..k {
                let d: f64 = (0..3).map(|r| cols[prev][r] * cols[k][r]).sum();
                for r in 0..3 {
                    cols[k][r] -= d * cols[prev][r];
                }
            }
            let len: f64 = (0..3).map(|r| cols[k][r] * cols[k][r]).sum::<f64>().sqrt();
            if len < 1e-6 {
                ok = false;
                break;
            }
            for r in 0..3 {
                cols[k][r] /= len;
            }
        }
        if ok {
            let mut rot = [[0.0; 3]; 3];
            for r in 0..3 {
                for c in 0..3 {
                    rot[r][c] = cols[c][r];
                }
            }
            return rot;
        }
    }
}

/// Orthonormal-column matrix whose row transfer is the (optionally rotated)
/// equality configuration.
pub fn extremal_matrix(n: usize, rotation_seed: Option<u64>) -> Result<OrthoMatrix> {
    let cfg = tetrahedron_config(n, rotation_seed.map(random_rotation))?;
    matrix_from_config(&cfg)
}

/// Outcome of the equality test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "EQUALITY")]
    Equality,
    #[serde(rename = "NOT_EQUALITY")]
    NotEquality,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Equality => "EQUALITY",
            Verdict::NotEquality => "NOT_EQUALITY",
        })
    }
}

/// What the equality check measured, plus the failing checks by name.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EqualityReport {
    pub verdict: Verdict,
    pub failures: Vec<String>,
    /// max |r_i − 2/n|.
    pub radius_dev: f64,
    /// Max deviation of the P spectrum from {4/n} ∪ {0}×(n−4) ∪ {−4/(3n)}×3.
    pub p_spectrum_dev: f64,
    /// Max deviation of the M spectrum from {4/(3n)}×4 ∪ {0}×(n−4).
    pub m_spectrum_dev: f64,
    pub min_entry: f64,
    /// Sizes of the connected components of the graph {(i,j) : M_ij > 1e−9}.
    pub component_sizes: Vec<usize>,
}

/// Decides whether a configuration is an equality configuration by five
/// checks: (a) all radii equal 2/n; (b) P has spectrum {4/n, 0^(n−4),
/// (−4/(3n))^3}; (c) M has spectrum {(4/(3n))^4, 0^(n−4)}; (d) M is
/// entrywise ≥ −1e−12 with minimum ≤ 1e−12; (e) the positive entries of M
/// split the indices into exactly four blocks of size n/4 with the constant
/// value 16/(3n²) inside and ~0 across.
pub fn validate_equality_case(cfg: &RowConfig) -> EqualityReport {
    let n = cfg.n();
    let nf = n as f64;
    let cert = build_certificate(cfg);
    let mut failures = Vec::new();

    // (a) equal radii.
    let radius_dev = cfg
        .radii()
        .iter()
        .map(|&r| (r - 2.0 / nf).abs())
        .fold(0.0, f64::max);
    if radius_dev > 1e-10 {
        failures.push(format!("(a) radii deviate from 2/n by {radius_dev:.3e}"));
    }

    // (b), (c) spectra.
    let spectrum_dev = |actual: &[f64], expected: &mut Vec<f64>| -> f64 {
        expected.sort_by(|x, y| x.partial_cmp(y).unwrap());
        actual
            .iter()
            .zip(expected.iter())
            .map(|(a, e)| (a - e).abs())
            .fold(0.0, f64::max)
    };
    let p_eig = symmetric_eigenvalues(&cert.p, n);
    let mut p_expected: Vec<f64> = std::iter::repeat(-4.0 / (3.0 * nf))
        .take(3)
        .chain(std::iter::repeat(0.0).take(n.saturating_sub(4)))
        .chain(std::iter::once(4.0 / nf))
        .collect();
    let p_spectrum_dev = if n >= 4 {
        spectrum_dev(&p_eig, &mut p_expected)
    } else {
        f64::INFINITY
    };
    if p_spectrum_dev > 1e-9 {
        failures.push(format!(
            "(b) P spectrum deviates from the equality signature by {p_spectrum_dev:.3e}"
        ));
    }
    let m_eig = symmetric_eigenvalues(&cert.m, n);
    let mut m_expected: Vec<f64> = std::iter::repeat(0.0)
        .take(n.saturating_sub(4))
        .chain(std::iter::repeat(4.0 / (3.0 * nf)).take(4))
        .collect();
    let m_spectrum_dev = if n >= 4 {
        spectrum_dev(&m_eig, &mut m_expected)
    } else {
        f64::INFINITY
    };
    if m_spectrum_dev > 1e-9 {
        failures.push(format!(
            "(c) M spectrum deviates from the equality signature by {m_spectrum_dev:.3e}"
        ));
    }

    // (d) entrywise sign structure.
    let min_entry = cert.min_entry.value;
    if min_entry < -1e-12 {
        failures.push(format!("(d) M has an entry {min_entry:.3e} < -1e-12"));
    }
    if min_entry > 1e-12 {
        failures.push(format!("(d) no entry of M is ≤ 1e-12 (min {min_entry:.3e})"));
    }

    // (e) block structure of the positive part.
    let mut component = vec![usize::MAX; n];
    let mut count = 0;
    for start in 0..n {
        if component[start] != usize::MAX {
            continue;
        }
        let id = count;
        count += 1;
        let mut stack = vec![start];
        component[start] = id;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if j != i && component[j] == usize::MAX && cert.m_entry(i, j) > 1e-9 {
                    component[j] = id;
                    stack.push(j);
                }
            }
        }
    }
    let mut component_sizes = vec![0usize; count];
    for &c in &component {
        component_sizes[c] += 1;
    }
    let block_value = 16.0 / (3.0 * nf * nf);
    let mut block_ok = count == 4 && n % 4 == 0 && component_sizes.iter().all(|&s| s == n / 4);
    if block_ok {
        'outer: for i in 0..n {
            for j in 0..n {
                let e = cert.m_entry(i, j);
                let fine = if component[i] == component[j] {
                    (e - block_value).abs() <= 1e-9
                } else {
                    e.abs() <= 1e-9
                };
                if !fine {
                    block_ok = false;
                    break 'outer;
                }
            }
        }
    }
    if !block_ok {
        failures.push(format!(
            "(e) positive entries of M do not form four n/4 blocks of 16/(3n²) (components: {component_sizes:?})"
        ));
    }

    EqualityReport {
        verdict: if failures.is_empty() {
            Verdict::Equality
        } else {
            Verdict::NotEquality
        },
        failures,
        radius_dev,
        p_spectrum_dev,
        m_spectrum_dev,
        min_entry,
        component_sizes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{orthonormality_deviation, pair_gram};
    use crate::{alpha, selection::select_certified};
    use approx::assert_abs_diff_eq;

    #[test]
    fn rejects_bad_sizes() {
        assert!(matches!(
            tetrahedron_config(6, None),
            Err(Error::NotDivisibleBy4 { n: 6 })
        ));
        assert!(matches!(
            tetrahedron_config(0, None),
            Err(Error::NotDivisibleBy4 { n: 0 })
        ));
    }

    #[test]
    fn tetra_directions_sum_to_zero_exactly() {
        let family = ExtremalFamily::standard(8).unwrap();
        for k in 0..3 {
            let s: f64 = family.directions.iter().map(|d| d[k]).sum();
            assert_eq!(s, 0.0);
        }
        // Pairwise dot products are −1/3.
        for a in 0..4 {
            for b in (a + 1)..4 {
                let d: f64 = (0..3)
                    .map(|k| family.directions[a][k] * family.directions[b][k])
                    .sum();
                assert_abs_diff_eq!(d, -1.0 / 3.0, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn n4_certificate_is_identity_over_three() {
        let cfg = tetrahedron_config(4, None).unwrap();
        let cert = build_certificate(&cfg);
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == j { 1.0 / 3.0 } else { 0.0 };
                assert_abs_diff_eq!(cert.m_entry(i, j), expected, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn standard_configs_pass_equality_check() {
        for &n in &[4usize, 8, 12, 64] {
            let cfg = tetrahedron_config(n, None).unwrap();
            let rep = validate_equality_case(&cfg);
            assert_eq!(rep.verdict, Verdict::Equality, "n = {n}: {:?}", rep.failures);
            assert_eq!(rep.component_sizes, vec![n / 4; 4]);
        }
    }

    #[test]
    fn rotated_config_still_passes() {
        let cfg = tetrahedron_config(16, Some(random_rotation(5))).unwrap();
        let rep = validate_equality_case(&cfg);
        assert_eq!(rep.verdict, Verdict::Equality, "{:?}", rep.failures);
    }

    #[test]
    fn perturbed_config_fails_spectrum_check() {
        let cfg = tetrahedron_config(8, None).unwrap();
        let mut w = cfg.vectors().to_vec();
        // Nudge one vector, then repair the two constraints.
        w[0][0] += 1e-3;
        let mut mean = [0.0; 3];
        for v in &w {
            for k in 0..3 {
                mean[k] += v[k] / 8.0;
            }
        }
        for v in &mut w {
            for k in 0..3 {
                v[k] -= mean[k];
            }
        }
        let total: f64 = w.iter().map(|&v| crate::hopf::norm3(v)).sum();
        for v in &mut w {
            for k in 0..3 {
                v[k] *= 2.0 / total;
            }
        }
        let cfg = RowConfig::new(w).unwrap();
        let rep = validate_equality_case(&cfg);
        assert_eq!(rep.verdict, Verdict::NotEquality);
        assert!(rep.failures.iter().any(|f| f.starts_with("(b)")));
    }

    #[test]
    fn random_config_is_not_equality() {
        let cfg = RowConfig::random(12, 3).unwrap();
        assert_eq!(validate_equality_case(&cfg).verdict, Verdict::NotEquality);
    }

    #[test]
    fn extremal_matrix_attains_the_bound() {
        let u = extremal_matrix(4, None).unwrap();
        assert!(orthonormality_deviation(u.rows()) < 1e-14);
        // Every pair is cross-cluster at n = 4 with spectrum 1/2 ± 1/(2√3).
        let lo = 0.5 - 0.5 / 3.0_f64.sqrt();
        let hi = 0.5 + 0.5 / 3.0_f64.sqrt();
        for i in 0..4 {
            for j in (i + 1)..4 {
                let g = pair_gram(&u, i, j).unwrap();
                assert_abs_diff_eq!(g.lambda2, lo, epsilon = 1e-12);
                assert_abs_diff_eq!(g.lambda1, hi, epsilon = 1e-12);
            }
        }
        assert_abs_diff_eq!(lo, alpha() / 4.0, epsilon = 1e-16);
        let sel = select_certified(&u).unwrap();
        assert_abs_diff_eq!(
            sel.inv_norm,
            (3.0 + 3.0_f64.sqrt()).sqrt(),
            epsilon = 1e-10
        );
    }

    #[test]
    fn same_cluster_pairs_are_singular() {
        let u = extremal_matrix(8, None).unwrap();
        // Rows 0 and 1 sit in the same cluster: identical transfers, so the
        // pair is rank one.
        let g = pair_gram(&u, 0, 1).unwrap();
        assert!(g.lambda2 < 1e-14);
        // Cross-cluster pairs carry the certified value α/n.
        let g = pair_gram(&u, 0, 2).unwrap();
        assert_abs_diff_eq!(g.lambda2, alpha() / 8.0, epsilon = 1e-13);
    }

    #[test]
    fn rotation_is_orthogonal() {
        let r = random_rotation(11);
        for a in 0..3 {
            for b in 0..3 {
                let d: f64 = (0..3).map(|k| r[k][a] * r[k][b]).sum();
                let expected = if a == b { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(d, expected, epsilon = 1e-12);
            }
        }
        assert_ne!(random_rotation(11), random_rotation(12));
    }
}
