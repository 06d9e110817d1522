mod common;

use proptest::prelude::*;

use pseudosim::eigen::{eigvals_general, eigvals_hermitian, spectra_match};
use pseudosim::experiment::{run_suite, ExperimentConfig, Suite};
use pseudosim::genmat::{
    hermitian_with_spectrum, random_full_column_rank, random_invertible_nonunitary, random_rank_l, random_unitary,
    MatrixRng, SpectrumLaw,
};
use pseudosim::linalg::{
    determinant, numerical_rank, pseudo_inverse, pseudo_inverse_qr, qr_economy_pivoted, singular_values, svd,
};
use pseudosim::pseudosim::{inflate_transform, pseudo_similarity, unitary_compression};
use pseudosim::Tolerances;

use common::{interlaces, penrose_residual, power_sum_mismatch};

fn spectrum(rng: &mut MatrixRng, n: usize) -> Vec<f64> {
    SpectrumLaw::default().draw(rng, n).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn penrose_conditions(seed in any::<u64>(), rows in 1usize..9, cols in 1usize..9, deficit in 0usize..4) {
        let mut rng = MatrixRng::new(seed);
        let rank = rows.min(cols).saturating_sub(deficit).max(1);
        let a = random_rank_l(&mut rng, rows, cols, rank, 1e3).unwrap();
        let g = pseudo_inverse(&a, 1e-10).unwrap();
        prop_assert!(penrose_residual(&a, &g) <= 1e-8);
        prop_assert_eq!(g.shape(), (cols, rows));
    }

    #[test]
    fn qr_and_svd_pseudo_inverses_agree(seed in any::<u64>(), n in 1usize..10, l in 1usize..10) {
        prop_assume!(l <= n);
        let mut rng = MatrixRng::new(seed);
        let h = random_full_column_rank(&mut rng, n, l, 1e3);
        let a = pseudo_inverse(&h, 1e-10).unwrap();
        let b = pseudo_inverse_qr(&h, 1e-10).unwrap();
        prop_assert!(a.max_abs_diff(&b) <= 1e-8 * a.max_abs().max(1.0));
    }

    #[test]
    fn qr_and_svd_ranks_agree(seed in any::<u64>(), rows in 1usize..9, cols in 1usize..9, deficit in 0usize..4) {
        let mut rng = MatrixRng::new(seed);
        let rank = rows.min(cols).saturating_sub(deficit).max(1);
        let a = random_rank_l(&mut rng, rows, cols, rank, 1e3).unwrap();
        prop_assert_eq!(numerical_rank(&a, 1e-10).unwrap(), rank);
        let qr = qr_economy_pivoted(&a, 1e-10).unwrap();
        prop_assert_eq!(qr.rank, rank);
        prop_assert!(qr.q.orthonormality_defect() <= 1e-10);
        prop_assert!((&qr.q * &qr.r).max_abs_diff(&qr.permuted(&a)) <= 1e-10);
        let f = svd(&a, 1e-10).unwrap();
        prop_assert!(f.reconstruct().max_abs_diff(&a) <= 1e-10);
    }

    #[test]
    fn trace_and_determinant_identities(seed in any::<u64>(), n in 1usize..7) {
        let mut rng = MatrixRng::new(seed);
        let m = rng.gaussian_matrix(n, n);
        let s = eigvals_general(&m, 1e-8).unwrap();
        prop_assert!((s.sum() - m.trace()).norm() <= 1e-8 * m.trace().norm().max(1.0));
        let det = determinant(&m).unwrap();
        prop_assert!((s.product() - det).norm() <= 1e-6 * det.norm().max(1e-12));
        prop_assert!(power_sum_mismatch(&m, s.values()) <= 1e-8);
    }

    #[test]
    fn similarity_preserves_spectrum(seed in any::<u64>(), n in 2usize..8) {
        let mut rng = MatrixRng::new(seed);
        let lambda = spectrum(&mut rng, n);
        let p = hermitian_with_spectrum(&mut rng, &lambda);
        let x = random_invertible_nonunitary(&mut rng, n, 100.0, 2.0).unwrap();
        let x_inv = pseudosim::linalg::inverse(&x).unwrap();
        let similar = &(&x_inv * &p) * &x;
        let a = eigvals_general(&similar, 1e-8).unwrap();
        let b = eigvals_hermitian(&p, 1e-10).unwrap();
        prop_assert!(spectra_match(a.values(), b.values(), 1e-6));
    }

    #[test]
    fn unitary_case_is_subsumed(seed in any::<u64>(), n in 1usize..12, l in 1usize..12) {
        prop_assume!(l <= n);
        let tol = Tolerances::default();
        let mut rng = MatrixRng::new(seed);
        let lambda = spectrum(&mut rng, n);
        let p = hermitian_with_spectrum(&mut rng, &lambda);
        let q = random_unitary(&mut rng, n, l);
        prop_assert!(pseudo_inverse(&q, 1e-10).unwrap().max_abs_diff(&q.adjoint()) <= 1e-10);
        let a = unitary_compression(&p, &q, &tol).unwrap();
        let b = pseudo_similarity(&p, &q, &tol).unwrap();
        prop_assert!(a.transformed.max_abs_diff(&b.transformed) <= 1e-9);
        prop_assert!(a.hermitian);
    }

    #[test]
    fn pseudo_similarity_interlaces(seed in any::<u64>(), n in 1usize..10, l in 1usize..10) {
        prop_assume!(l <= n);
        let tol = Tolerances::default();
        let mut rng = MatrixRng::new(seed);
        let lambda = spectrum(&mut rng, n);
        let p = hermitian_with_spectrum(&mut rng, &lambda);
        let h = random_full_column_rank(&mut rng, n, l, 1e3);
        let t = pseudo_similarity(&p, &h, &tol).unwrap();
        let s = eigvals_general(&t.transformed, 1e-8).unwrap();
        let eta = s.sorted_real().unwrap();
        prop_assert!(interlaces(&lambda, &eta, 1e-7 * 2.0));
        // Similar to QᴴPQ with H = QR, so the traces agree.
        let q = pseudosim::linalg::qr_economy(&h).0;
        let compressed = &(&q.adjoint() * &p) * &q;
        prop_assert!((t.transformed.trace() - compressed.trace()).norm() <= 1e-8 * (l as f64));
    }

    #[test]
    fn factored_route_matches_direct(seed in any::<u64>(), n in 2usize..9, k in 1usize..16, l in 1usize..8) {
        prop_assume!(l <= n.min(k));
        let tol = Tolerances::default();
        let mut rng = MatrixRng::new(seed);
        let lambda = spectrum(&mut rng, n);
        let p = hermitian_with_spectrum(&mut rng, &lambda);
        let h = random_full_column_rank(&mut rng, n, l, 1e3);
        let v = random_unitary(&mut rng, k, l);
        let inflation = inflate_transform(&p, &h, &v, &tol).unwrap();
        prop_assert!(inflation.route_gap <= 1e-8);
        prop_assert_eq!(inflation.result.input_rank, l);
        prop_assert_eq!(inflation.result.transformed.shape(), (k, k));
        let sv = singular_values(&inflation.result.transformed).unwrap();
        let scale = sv[0].max(1.0);
        prop_assert!(sv[l..].iter().all(|&s| s <= 1e-8 * scale));
    }

    #[test]
    fn runs_are_deterministic(seed in any::<u64>()) {
        let cfg = ExperimentConfig {
            suites: vec![Suite::InterlaceInflated, Suite::MpAxioms],
            trials: 3,
            seed,
            ..ExperimentConfig::default()
        };
        prop_assert_eq!(run_suite(&cfg).unwrap(), run_suite(&cfg).unwrap());
    }
}
