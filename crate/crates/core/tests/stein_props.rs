mod common;

use common::*;
use dtpassive::linalg::{
    eigenvalues, hermitian_inverse_sqrt, hermitian_sqrt, spectral_norm, ComplexMatrix,
    HermitianMatrix, Verdict,
};
use dtpassive::stein::{
    maximality_witness, product_closure_check, spectral_radius_bound_check, stein_gap,
    SteinSetSpec,
};
use dtpassive::{Complex64, Error};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// `H^{-1/2} K H^{1/2}` with `||K||_2 = scale`: weighted norm exactly `scale`.
fn member(rng: &mut ChaCha8Rng, h: &HermitianMatrix, scale: f64) -> ComplexMatrix {
    let n = h.order();
    let root = hermitian_sqrt(h, None).unwrap();
    let inv_root = hermitian_inverse_sqrt(h).unwrap();
    let k = with_norm(&any_matrix(rng, n, n), scale);
    &(inv_root.matrix() * &k) * root.matrix()
}

#[test]
fn closed_set_is_closed_under_unit_disk_scalars() {
    let mut rng = rng(201);
    for _ in 0..300 {
        let n = rng.gen_range(1..=6);
        let h = hermitian_pd(&mut rng, n);
        let alpha = rng.gen_range(0.3..2.0);
        let s = rng.gen_range(0.1..1.0);
        let a = member(&mut rng, &h, alpha * s);
        let c = Complex64::from_polar(rng.gen_range(0.0..=1.0), rng.gen_range(0.0..6.3));
        let spec = SteinSetSpec::new(h, alpha, true).unwrap();
        assert_eq!(stein_gap(&spec, &a).unwrap().member, Verdict::Yes);
        assert_eq!(stein_gap(&spec, &a.scale_complex(c)).unwrap().member, Verdict::Yes);
    }
}

#[test]
fn open_set_is_convex() {
    let mut rng = rng(202);
    for trial in 0..500 {
        let n = rng.gen_range(1..=6);
        let h = hermitian_pd(&mut rng, n);
        let alpha = rng.gen_range(0.3..2.0);
        let (sa, sb) = (rng.gen_range(0.05..0.99), rng.gen_range(0.05..0.99));
        let a = member(&mut rng, &h, alpha * sa);
        let b = member(&mut rng, &h, alpha * sb);
        let t = rng.gen_range(0.0..=1.0);
        let mix = &a.scale(t) + &b.scale(1.0 - t);
        let spec = SteinSetSpec::new(h, alpha, false).unwrap();
        let report = stein_gap(&spec, &mix).unwrap();
        assert_eq!(report.member, Verdict::Yes, "trial {trial}: lambda_min {}", report.lambda_min);
    }
}

#[test]
fn identity_weight_membership_is_the_norm_ball() {
    let mut rng = rng(203);
    for _ in 0..300 {
        let n = rng.gen_range(1..=7);
        let alpha = rng.gen_range(0.3..2.0);
        let ratio: f64 = rng.gen_range(0.5..1.5);
        if (ratio - 1.0).abs() < 1e-6 {
            continue;
        }
        let a = with_norm(&any_matrix(&mut rng, n, n), ratio * alpha);
        let spec = SteinSetSpec::identity(n, alpha, true).unwrap();
        let expected = if ratio <= 1.0 { Verdict::Yes } else { Verdict::No };
        assert_eq!(stein_gap(&spec, &a).unwrap().member, expected, "ratio {ratio}");
    }
    // On the boundary the closed set still contains A.
    let a = ComplexMatrix::from_real_rows(&[[0.0, 0.7], [0.0, 0.0]]).unwrap();
    let spec = SteinSetSpec::identity(2, 0.7, true).unwrap();
    assert_eq!(stein_gap(&spec, &a).unwrap().member, Verdict::Yes);
}

#[test]
fn closed_members_have_spectral_radius_at_most_alpha() {
    let mut rng = rng(204);
    for _ in 0..200 {
        let n = rng.gen_range(1..=8);
        let h = hermitian_pd(&mut rng, n);
        let alpha = rng.gen_range(0.3..2.0);
        let s = rng.gen_range(0.1..=1.0);
        let a = member(&mut rng, &h, alpha * s);
        let spec = SteinSetSpec::new(h, alpha, true).unwrap();
        let rho = spectral_radius_bound_check(&spec, &a).unwrap();
        let oracle = eigenvalues(&a).unwrap().iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!((rho - oracle).abs() <= 1e-12 * (1.0 + oracle));
        assert!(rho <= alpha * (1.0 + 1e-9));
    }
}

#[test]
fn non_normal_member_under_diagonal_weight() {
    let h = HermitianMatrix::from_real_diagonal(&[4.0, 1.0]);
    let a = ComplexMatrix::from_real_rows(&[[0.5, 0.0], [0.8, 0.5]]).unwrap();
    let spec = SteinSetSpec::new(h, 1.0, true).unwrap();
    assert_eq!(stein_gap(&spec, &a).unwrap().member, Verdict::Yes);
    let rho = spectral_radius_bound_check(&spec, &a).unwrap();
    assert!((rho - 0.5).abs() < 1e-12);
}

#[test]
fn product_law_rejects_non_members() {
    let h = HermitianMatrix::identity(2);
    let inside = ComplexMatrix::identity(2).scale(0.5);
    let outside = ComplexMatrix::identity(2).scale(2.0);
    let err = product_closure_check(&h, false, &outside, 1.0, &inside, 1.0).unwrap_err();
    assert!(matches!(err, Error::PreconditionFailed(_)));
}

#[test]
fn witness_examples() {
    let b = ComplexMatrix::identity(2).scale(2.0);
    let w = maximality_witness(&b).unwrap();
    assert!(w.a.max_abs_diff(&ComplexMatrix::identity(2).scale(2.0 / 3.0)) < 1e-15);
    assert!((w.product_norm - 4.0 / 3.0).abs() < 1e-15);

    let rank_one = ComplexMatrix::from_real_rows(&[[0.9, 0.0], [1.2, 0.0]]).unwrap();
    let w = maximality_witness(&rank_one).unwrap();
    assert!((w.epsilon - 0.5).abs() < 1e-15);
    assert!((w.product_norm - 1.125).abs() < 1e-12);

    let small = ComplexMatrix::identity(3).scale(0.9);
    assert!(matches!(maximality_witness(&small), Err(Error::NotOutside { .. })));
}

proptest! {
    #[test]
    fn witness_is_contractive_with_expanding_product(
        seed in any::<u64>(),
        n in 1usize..=6,
        excess in 1e-6f64..3.0,
    ) {
        let mut rng = rng(seed);
        let b = with_norm(&any_matrix(&mut rng, n, n), 1.0 + excess);
        let w = maximality_witness(&b).unwrap();
        prop_assert!(spectral_norm(&w.a) < 1.0);
        prop_assert!(w.product_radius > 1.0);
    }

    #[test]
    fn stein_set_json_round_trip(seed in any::<u64>(), n in 1usize..=4, closed: bool) {
        let mut rng = rng(seed);
        let spec = SteinSetSpec::new(hermitian_pd(&mut rng, n), rng.gen_range(0.1..3.0), closed).unwrap();
        let text = serde_json::to_string(&spec).unwrap();
        let back: SteinSetSpec = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, spec);
    }
}
