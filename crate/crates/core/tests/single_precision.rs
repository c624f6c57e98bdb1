mod common;

use common::S20B;
use probit_bf::estimators::{chib_evidence, importance_evidence};
use probit_bf::{asymptotic_gaussian, fit_mle, gibbs_run, Data32, Probit32, RngStream};

#[test]
fn f32_pipeline_tracks_f64_reference() {
    let to32 = |v: &[f64]| v.iter().map(|&x| x as f32).collect::<Vec<f32>>();
    let d = Data32::new(
        S20B.y.to_vec(),
        vec![("a".into(), to32(S20B.a)), ("b".into(), to32(S20B.b))],
    )
    .unwrap();
    let m = Probit32::new(&d, &["a", "b"]).unwrap();
    let fit = fit_mle(&m).unwrap();
    assert!((fit.theta_hat[0] as f64 - S20B.mle1[0]).abs() < 1e-4);
    let g = asymptotic_gaussian(&fit).unwrap();
    let is = importance_evidence(&m, &g, 20_000, &mut RngStream::new(1, 1)).unwrap();
    assert!((is.value as f64 - S20B.log_m1).abs() < 0.01, "{}", is.value);
    let chain = gibbs_run(&m, 5_000, &mut RngStream::new(1, 2), Some(&fit.theta_hat)).unwrap();
    let chib = chib_evidence(&m, &chain).unwrap();
    assert!(
        (chib.value as f64 - S20B.log_m1).abs() < 0.02,
        "{}",
        chib.value
    );
}
