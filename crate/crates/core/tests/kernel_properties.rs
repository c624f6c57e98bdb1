mod common;

use common::{LOGCDF_TAIL, TRUNCATED_MEAN_MU_MINUS_8};
use probit_bf::kernels::{
    log_add_exp, logsumexp, std_normal_cdf, std_normal_logcdf, truncated_normal_sample, Side,
};
use probit_bf::RngStream;
use proptest::prelude::*;

#[test]
fn logcdf_tail_matches_extended_precision() {
    for &(x, want) in LOGCDF_TAIL {
        let got = std_normal_logcdf(x).unwrap();
        assert!(
            ((got - want) / want).abs() < 1e-9,
            "x = {x}: {got} vs {want}"
        );
    }
}

#[test]
fn half_normal_mean() {
    let mut rng = RngStream::new(7, 1);
    let n = 100_000;
    let right: f64 = (0..n)
        .map(|_| truncated_normal_sample(0.0, 1.0, Side::RightOfZero, &mut rng))
        .sum::<f64>()
        / n as f64;
    let left: f64 = (0..n)
        .map(|_| truncated_normal_sample(0.0, 1.0, Side::LeftOfZero, &mut rng))
        .sum::<f64>()
        / n as f64;
    let target = (2.0 / std::f64::consts::PI).sqrt();
    assert!((right - target).abs() < 0.01, "{right}");
    assert!((left + target).abs() < 0.01, "{left}");
}

#[test]
fn far_tail_truncated_mean() {
    // N(-8, 1) restricted to (0, ∞): exercises the exponential proposal.
    let mut rng = RngStream::new(7, 2);
    let n = 100_000;
    let draws: Vec<f64> = (0..n)
        .map(|_| truncated_normal_sample(-8.0, 1.0, Side::RightOfZero, &mut rng))
        .collect();
    assert!(draws.iter().all(|&z| z > 0.0));
    let mean = draws.iter().sum::<f64>() / n as f64;
    assert!(
        (mean - TRUNCATED_MEAN_MU_MINUS_8).abs() < 0.01 * TRUNCATED_MEAN_MU_MINUS_8,
        "{mean}"
    );
}

#[test]
fn inactive_truncation_is_untruncated() {
    let mut rng = RngStream::new(7, 3);
    let n = 100_000;
    let draws: Vec<f64> = (0..n)
        .map(|_| truncated_normal_sample(10.0, 1.0, Side::RightOfZero, &mut rng))
        .collect();
    let mean = draws.iter().sum::<f64>() / n as f64;
    let var = draws.iter().map(|z| (z - mean) * (z - mean)).sum::<f64>() / (n - 1) as f64;
    assert!((mean - 10.0).abs() < 0.01);
    assert!((var - 1.0).abs() < 0.02);
}

#[test]
fn non_finite_arguments_are_rejected() {
    assert!(std_normal_cdf(f64::NAN).is_err());
    assert!(std_normal_logcdf(f64::INFINITY).is_err());
    assert!(logsumexp::<f64>(&[]).is_err());
}

proptest! {
    #[test]
    fn truncated_draw_has_requested_sign(mu in -60.0f64..60.0, sigma in 0.05f64..20.0, seed in any::<u64>()) {
        let mut rng = RngStream::new(seed, 0);
        for _ in 0..8 {
            prop_assert!(truncated_normal_sample(mu, sigma, Side::RightOfZero, &mut rng) > 0.0);
            prop_assert!(truncated_normal_sample(mu, sigma, Side::LeftOfZero, &mut rng) < 0.0);
        }
    }

    #[test]
    fn cdf_is_a_distribution_function(x in -40.0f64..40.0, dx in 0.0f64..5.0) {
        let a = std_normal_cdf(x).unwrap();
        let b = std_normal_cdf(x + dx).unwrap();
        prop_assert!((0.0..=1.0).contains(&a));
        prop_assert!(b >= a);
        prop_assert!((a + std_normal_cdf(-x).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn logcdf_is_monotone_and_nonpositive(x in -1e3f64..40.0, dx in 0.0f64..1.0) {
        let a = std_normal_logcdf(x).unwrap();
        let b = std_normal_logcdf(x + dx).unwrap();
        prop_assert!(a.is_finite() && a <= 0.0);
        prop_assert!(b >= a);
    }

    #[test]
    fn logcdf_agrees_with_cdf_where_representable(x in -30.0f64..8.0) {
        let direct = std_normal_cdf(x).unwrap().ln();
        prop_assert!((std_normal_logcdf(x).unwrap() - direct).abs() <= 1e-12 * direct.abs().max(1e-3));
    }

    #[test]
    fn logsumexp_is_shift_equivariant(v in prop::collection::vec(-700.0f64..700.0, 1..40), c in -1e4f64..1e4) {
        let shifted: Vec<f64> = v.iter().map(|x| x + c).collect();
        let a = logsumexp(&v).unwrap() + c;
        let b = logsumexp(&shifted).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(logsumexp(&v).unwrap() >= max);
        prop_assert!(logsumexp(&v).unwrap() <= max + (v.len() as f64).ln() + 1e-12);
    }

    #[test]
    fn log_add_exp_is_symmetric(a in -800.0f64..800.0, b in -800.0f64..800.0) {
        prop_assert_eq!(log_add_exp(a, b), log_add_exp(b, a));
        prop_assert!((log_add_exp(a, b) - logsumexp(&[a, b]).unwrap()).abs() < 1e-12 * a.abs().max(b.abs()).max(1.0));
    }
}
