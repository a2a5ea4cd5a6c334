//! Cross-module property tests: every invariant here ties at least two
//! modules together (transfer ↔ linear algebra, certificate ↔ selection,
//! oracle ↔ certified pick), driven by seeded random inputs.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use subinv::certificate::{build_certificate, TOL_M_ENTRY};
use subinv::extremal::{random_rotation, tetrahedron_config};
use subinv::hopf::{config_from_matrix, matrix_from_config, transfer_identity_check, RowConfig};
use subinv::jacobi::symmetric_eigenvalues;
use subinv::oracle::brute_force_best_pair;
use subinv::polygon::{gap, Polygon};
use subinv::selection::{select_certified, verify_bound, PathStep, BOUND_SLACK};
use subinv::{alpha, pair_gram, random_ortho, spectral_bound};

fn seeded_matrix(n: usize, seed: u64) -> subinv::OrthoMatrix {
    random_ortho(n, seed).expect("random orthonormal matrix")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Matrix → configuration → matrix preserves every pair spectrum even
    /// though the lift fixes a different gauge.
    #[test]
    fn transfer_roundtrip_preserves_pair_spectra(n in 3usize..24, seed in any::<u64>()) {
        let u = seeded_matrix(n, seed);
        let cfg = config_from_matrix(&u).unwrap();
        let v = matrix_from_config(&cfg).unwrap();
        for i in 0..n {
            for j in (i + 1)..n {
                let a = pair_gram(&u, i, j).unwrap().lambda2;
                let b = pair_gram(&v, i, j).unwrap().lambda2;
                prop_assert!((a - b).abs() <= 1e-10, "pair ({i},{j}): {a} vs {b}");
            }
        }
    }

    /// Orthonormal columns force Σw = 0 and Σ|w| = 2 on the transferred side.
    #[test]
    fn transfer_closure_identities(n in 3usize..40, seed in any::<u64>()) {
        let u = seeded_matrix(n, seed);
        let cfg = config_from_matrix(&u).unwrap();
        let mut sum = [0.0_f64; 3];
        let mut perimeter = 0.0;
        for (w, r) in cfg.vectors().iter().zip(cfg.radii()) {
            for k in 0..3 {
                sum[k] += w[k];
            }
            perimeter += r;
        }
        for s in sum {
            prop_assert!(s.abs() < 1e-9, "closure residual {s}");
        }
        prop_assert!((perimeter - 2.0).abs() < 1e-9, "perimeter {perimeter}");
    }

    /// |⟨u_i, u_j⟩|² = ½ r_i r_j + ½ (w_i, w_j) across all pairs.
    #[test]
    fn transfer_identity_small_residual(n in 3usize..40, seed in any::<u64>()) {
        let u = seeded_matrix(n, seed);
        let residual = transfer_identity_check(&u).unwrap();
        prop_assert!(residual < 1e-11, "residual {residual}");
    }

    /// The certificate always contains a nonpositive entry (up to float
    /// noise) on configurations coming from genuine matrices.
    #[test]
    fn certificate_has_nonpositive_entry(n in 3usize..40, seed in any::<u64>()) {
        let u = seeded_matrix(n, seed);
        let cert = build_certificate(&config_from_matrix(&u).unwrap());
        prop_assert!(
            cert.min_entry.value <= TOL_M_ENTRY,
            "min entry {} at ({}, {})",
            cert.min_entry.value, cert.min_entry.i, cert.min_entry.j
        );
    }

    /// Certificate internals: row sums of P give 2r_i, and both lower bounds
    /// on F = ΣP² hold.
    #[test]
    fn certificate_identities(n in 3usize..32, seed in any::<u64>()) {
        let u = seeded_matrix(n, seed);
        let cfg = config_from_matrix(&u).unwrap();
        let cert = build_certificate(&cfg);
        let nf = n as f64;
        for i in 0..n {
            let row: f64 = (0..n).map(|j| cert.p[i * n + j]).sum();
            let want = 2.0 * cfg.radii()[i];
            prop_assert!((row - want).abs() < 1e-9, "row {i}: {row} vs {want}");
        }
        prop_assert!(cert.r2 >= 4.0 / nf - 1e-12);
        prop_assert!(cert.f >= 8.0 * cert.r2 / nf - 32.0 / (3.0 * nf * nf) - 1e-10);
        prop_assert!(cert.f >= 8.0 * alpha() / nf * (cert.r2 - alpha() / nf) - 1e-10);
    }

    /// The certified selection stays within the guaranteed bound, reports a
    /// valid pair, survives independent verification, and can never beat
    /// the exhaustive oracle.
    #[test]
    fn selection_certified_and_consistent(n in 3usize..24, seed in any::<u64>()) {
        let u = seeded_matrix(n, seed);
        let sel = select_certified(&u).unwrap();
        prop_assert!(sel.i < sel.j && sel.j < n);
        prop_assert!(sel.inv_norm <= sel.bound * (1.0 + BOUND_SLACK));
        prop_assert!((sel.bound - spectral_bound(n)).abs() < 1e-14);
        let report = verify_bound(&u, &sel);
        prop_assert!(report.pass, "verification issues: {:?}", report.issues);
        let oracle = brute_force_best_pair(&u, false);
        prop_assert!(
            sel.inv_norm >= oracle.inv_norm_min - 1e-12,
            "certified {} beat the oracle {}",
            sel.inv_norm, oracle.inv_norm_min
        );
        // Trace sanity: at most one terminal step, Case A indices distinct.
        let mut removed: Vec<usize> = sel.path.iter().filter_map(|s| match s {
            PathStep::CaseA { removed_row, .. } => Some(*removed_row),
            _ => None,
        }).collect();
        removed.sort_unstable();
        removed.dedup();
        let case_a = sel.path.iter().filter(|s| matches!(s, PathStep::CaseA { .. })).count();
        prop_assert!(removed.len() == case_a, "duplicate removed rows in trace");
    }

    /// The 2×2 pair Gram closed form agrees with the Jacobi eigensolver.
    #[test]
    fn pair_gram_matches_jacobi(n in 3usize..24, seed in any::<u64>()) {
        let u = seeded_matrix(n, seed);
        let rows = u.rows();
        for i in 0..n {
            for j in (i + 1)..n {
                let g = pair_gram(&u, i, j).unwrap();
                let gii = rows[i][0].norm_sqr() + rows[i][1].norm_sqr();
                let gjj = rows[j][0].norm_sqr() + rows[j][1].norm_sqr();
                let gij = (rows[i][0].conj() * rows[j][0]
                    + rows[i][1].conj() * rows[j][1]).norm();
                let eig = symmetric_eigenvalues(&[gii, gij, gij, gjj], 2);
                prop_assert!((g.lambda2 - eig[0]).abs() < 1e-12);
                prop_assert!((g.lambda1 - eig[1]).abs() < 1e-12);
            }
        }
    }

    /// Rotating the tetrahedron never changes the certificate: min entry and
    /// the full invariants (R₂, F) are rotation invariants.
    #[test]
    fn rotation_invariance_of_certificate(n in prop::sample::select(vec![4usize, 8, 12, 16]),
                                          seed in any::<u64>()) {
        let plain = build_certificate(&tetrahedron_config(n, None).unwrap());
        let turned = build_certificate(
            &tetrahedron_config(n, Some(random_rotation(seed))).unwrap());
        prop_assert!((plain.min_entry.value - turned.min_entry.value).abs() < 1e-12);
        prop_assert!((plain.r2 - turned.r2).abs() < 1e-12);
        prop_assert!((plain.f - turned.f).abs() < 1e-11);
    }

    /// The cancellation-free gap formula matches the direct difference and
    /// is never negative.
    #[test]
    fn gap_matches_direct_difference(n in 3usize..40, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cfg = RowConfig::random_from_rng(n, &mut rng).unwrap();
        let w = cfg.vectors();
        for i in 0..n.min(8) {
            for j in (i + 1)..n.min(8) {
                let g = gap(w[i], w[j]);
                let norm = |v: [f64; 3]| (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
                let direct = norm(w[i]) + norm(w[j])
                    - norm([w[i][0] + w[j][0], w[i][1] + w[j][1], w[i][2] + w[j][2]]);
                prop_assert!(g >= 0.0);
                prop_assert!((g - direct).abs() < 1e-9, "gap {g} vs direct {direct}");
            }
        }
    }

    /// Some edge pair of every closed polygon gaps by at least 2α/n.
    #[test]
    fn polygon_gap_floor(n in 3usize..40, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cfg = RowConfig::random_from_rng(n, &mut rng).unwrap();
        let poly = Polygon::from_edges(cfg.vectors().to_vec()).unwrap();
        let rep = subinv::polygon::check_corollary(&poly);
        prop_assert!(
            rep.max_gap >= rep.bound - 1e-10,
            "max gap {} below bound {}",
            rep.max_gap, rep.bound
        );
    }
}
