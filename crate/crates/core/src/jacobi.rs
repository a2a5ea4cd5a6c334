//! Cyclic Jacobi eigenvalue iteration for dense real symmetric matrices.
//! Plain O(n³)-per-sweep rotations are plenty for the certificate spectra,
//! which stay below a few hundred rows.

/// Eigenvalues of the symmetric n×n matrix `a` (row-major), sorted
/// ascending. Only the symmetric part is ever read. Converges to roughly
/// machine precision relative to ‖a‖.
pub fn symmetric_eigenvalues(a: &[f64], n: usize) -> Vec<f64> {
    assert_eq!(a.len(), n * n, "matrix storage must be n*n");
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![a[0]];
    }
    let mut m = a.to_vec();
    let scale = m.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
    const MAX_SWEEPS: usize = 64;
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[p * n + q] * m[p * n + q];
            }
        }
        if off.sqrt() <= 1e-14 * scale {
            break;
        }
        for p in 0..(n - 1) {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                // Rotation angle from the smaller root of t² + 2tθ − 1 = 0,
                // which keeps |t| ≤ 1 and the iteration stable.
                let theta = (m[q * n + q] - m[p * n + p]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (theta * theta + 1.0).sqrt())
                } else {
                    -1.0 / (-theta + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = m[k * n + p];
                    let akq = m[k * n + q];
                    m[k * n + p] = c * akp - s * akq;
                    m[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = m[p * n + k];
                    let aqk = m[q * n + k];
                    m[p * n + k] = c * apk - s * aqk;
                    m[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|k| m[k * n + k]).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).unwrap());
    eig
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn diagonal_matrix() {
        let a = [3.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 2.0];
        assert_eq!(symmetric_eigenvalues(&a, 3), vec![-1.0, 2.0, 3.0]);
    }

    #[test]
    fn two_by_two_known_spectrum() {
        let a = [2.0, 1.0, 1.0, 2.0];
        let e = symmetric_eigenvalues(&a, 2);
        assert_abs_diff_eq!(e[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e[1], 3.0, epsilon = 1e-14);
    }

    #[test]
    fn all_ones_block() {
        // The k×k all-ones matrix has spectrum {k, 0, …, 0}.
        let k = 5;
        let a = vec![1.0; k * k];
        let e = symmetric_eigenvalues(&a, k);
        for v in &e[..k - 1] {
            assert_abs_diff_eq!(*v, 0.0, epsilon = 1e-13);
        }
        assert_abs_diff_eq!(e[k - 1], k as f64, epsilon = 1e-13);
    }

    #[test]
    fn trace_and_frobenius_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [2usize, 3, 7, 12, 33] {
            let mut a = vec![0.0; n * n];
            for i in 0..n {
                for j in i..n {
                    let x: f64 = rng.random_range(-1.0..1.0);
                    a[i * n + j] = x;
                    a[j * n + i] = x;
                }
            }
            let e = symmetric_eigenvalues(&a, n);
            let trace: f64 = (0..n).map(|i| a[i * n + i]).sum();
            let frob: f64 = a.iter().map(|x| x * x).sum();
            assert_abs_diff_eq!(e.iter().sum::<f64>(), trace, epsilon = 1e-10);
            assert_abs_diff_eq!(e.iter().map(|x| x * x).sum::<f64>(), frob, epsilon = 1e-9);
            for w in e.windows(2) {
                assert!(w[0] <= w[1]);
            }
        }
    }
}
