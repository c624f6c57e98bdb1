//! Runs every estimator on a synthetic pair and compares with the oracle.

use probit_bf::estimators::{
    bridge_extended_bf, bridge_same_space_bf, chib_evidence, crude_mc_evidence, harmonic_evidence,
    importance_evidence, make_paper_alpha, optimal_alpha_bridge_bf, pseudo_prior_ratio_bf,
    OptimalBridgeOptions,
};
use probit_bf::{
    asymptotic_gaussian, conditional_gaussian, fit_mle, gibbs_run, Conditional, Gaussian, Probit,
    RngStream, StreamKey, StreamRole,
};

use super::Synthetic;

pub const BATCHES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Estimator {
    CrudeMc,
    Importance,
    Harmonic,
    Chib,
    Bridge,
    BridgeOpt,
    PseudoRatio,
}

pub const ESTIMATORS: [Estimator; 7] = [
    Estimator::CrudeMc,
    Estimator::Importance,
    Estimator::Harmonic,
    Estimator::Chib,
    Estimator::Bridge,
    Estimator::BridgeOpt,
    Estimator::PseudoRatio,
];

impl Estimator {
    pub fn name(self) -> &'static str {
        match self {
            Estimator::CrudeMc => "crude_mc",
            Estimator::Importance => "importance",
            Estimator::Harmonic => "harmonic",
            Estimator::Chib => "chib",
            Estimator::Bridge => "bridge",
            Estimator::BridgeOpt => "bridge_opt",
            Estimator::PseudoRatio => "pseudo_ratio",
        }
    }
}

/// An embedded pair with everything the estimators need precomputed.
pub struct Pair {
    pub m0: Probit,
    pub m1: Probit,
    pub g0: Gaussian,
    pub g1: Gaussian,
    pub omega: Conditional,
    pub star0: Vec<f64>,
    pub star1: Vec<f64>,
}

impl Pair {
    pub fn new(m0: Probit, m1: Probit) -> Self {
        let f0 = fit_mle(&m0).unwrap();
        let f1 = fit_mle(&m1).unwrap();
        let g0 = asymptotic_gaussian(&f0).unwrap();
        let g1 = asymptotic_gaussian(&f1).unwrap();
        let omega = conditional_gaussian(&g1, m1.p() - 1).unwrap();
        Self {
            m0,
            m1,
            g0,
            g1,
            omega,
            star0: f0.theta_hat,
            star1: f1.theta_hat,
        }
    }

    pub fn synthetic(s: &Synthetic) -> Self {
        let (m0, m1) = s.models();
        Self::new(m0, m1)
    }

    /// One `log B01` estimate with `n` draws per model. Every random stream
    /// is derived from `(seed, rep)`.
    pub fn log_b01(&self, est: Estimator, n: usize, seed: u64, rep: u64) -> f64 {
        let rng = |role, model| RngStream::for_key(seed, StreamKey::new(rep, role, model));
        let chains = || {
            let c0 = gibbs_run(
                &self.m0,
                n,
                &mut rng(StreamRole::Gibbs, 0),
                Some(&self.star0),
            )
            .unwrap();
            let c1 = gibbs_run(
                &self.m1,
                n,
                &mut rng(StreamRole::Gibbs, 1),
                Some(&self.star1),
            )
            .unwrap();
            (c0, c1)
        };
        match est {
            Estimator::CrudeMc => {
                crude_mc_evidence(&self.m0, n, &mut rng(StreamRole::CrudeMc, 0))
                    .unwrap()
                    .value
                    - crude_mc_evidence(&self.m1, n, &mut rng(StreamRole::CrudeMc, 1))
                        .unwrap()
                        .value
            }
            Estimator::Importance => {
                importance_evidence(&self.m0, &self.g0, n, &mut rng(StreamRole::Importance, 0))
                    .unwrap()
                    .value
                    - importance_evidence(
                        &self.m1,
                        &self.g1,
                        n,
                        &mut rng(StreamRole::Importance, 1),
                    )
                    .unwrap()
                    .value
            }
            Estimator::Harmonic => {
                let (c0, c1) = chains();
                harmonic_evidence(&self.m0, &c0, &self.g0).unwrap().value
                    - harmonic_evidence(&self.m1, &c1, &self.g1).unwrap().value
            }
            Estimator::Chib => {
                let (c0, c1) = chains();
                chib_evidence(&self.m0, &c0).unwrap().value
                    - chib_evidence(&self.m1, &c1).unwrap().value
            }
            Estimator::Bridge => {
                let (c0, c1) = chains();
                let alpha = make_paper_alpha(&self.g0, &self.g1, &self.omega).unwrap();
                bridge_extended_bf(
                    &self.m0,
                    &self.m1,
                    &self.omega,
                    &c0,
                    &c1,
                    &alpha,
                    &mut rng(StreamRole::Bridge, 0),
                )
                .unwrap()
                .log_b01
            }
            Estimator::BridgeOpt => {
                let (c0, c1) = chains();
                let est = optimal_alpha_bridge_bf(
                    &self.m0,
                    &self.m1,
                    &self.omega,
                    &c0,
                    &c1,
                    OptimalBridgeOptions::default(),
                    &mut rng(StreamRole::BridgeOptimal, 0),
                )
                .unwrap();
                assert!(est.converged);
                est.log_b01
            }
            Estimator::PseudoRatio => {
                let (c0, _) = chains();
                pseudo_prior_ratio_bf(
                    &self.m0,
                    &self.m1,
                    &self.omega,
                    &c0,
                    &mut rng(StreamRole::PseudoRatio, 0),
                )
                .unwrap()
                .log_b01
            }
        }
    }
}

/// Same-space bridge between two equal-dimension models, `log B01`.
pub fn same_space_log_b01(m0: &Probit, m1: &Probit, n: usize, seed: u64, rep: u64) -> f64 {
    let mut rng = RngStream::for_key(seed, StreamKey::new(rep, StreamRole::Gibbs, 1));
    let c1 = gibbs_run(m1, n, &mut rng, None).unwrap();
    bridge_same_space_bf(m0, m1, &c1).unwrap().log_b01
}

/// An estimate with its batch standard error.
#[derive(Debug, Clone, Copy)]
pub struct Checked {
    pub estimate: f64,
    pub se: f64,
    pub oracle: f64,
}

impl Checked {
    pub fn z(&self) -> f64 {
        (self.estimate - self.oracle) / self.se
    }
}

/// Estimate with `n` draws; the standard error comes from `BATCHES`
/// independent runs of `n / BATCHES` draws each, `sd / √BATCHES`.
pub fn check(run: impl Fn(usize, u64) -> f64, n: usize, oracle: f64) -> Checked {
    let estimate = run(n, 0);
    let batch: Vec<f64> = (1..=BATCHES as u64).map(|b| run(n / BATCHES, b)).collect();
    let mean = batch.iter().sum::<f64>() / BATCHES as f64;
    let var = batch.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (BATCHES - 1) as f64;
    Checked {
        estimate,
        se: (var / BATCHES as f64).sqrt(),
        oracle,
    }
}

/// Least-squares slope of `log RMSE` against `log n` over `budgets`, with
/// `reps` replications per budget.
pub fn error_slope(
    run: impl Fn(usize, u64) -> f64,
    oracle: f64,
    budgets: &[usize],
    reps: u64,
) -> f64 {
    let pts: Vec<(f64, f64)> = budgets
        .iter()
        .map(|&n| {
            let mse = (0..reps).map(|r| (run(n, r) - oracle).powi(2)).sum::<f64>() / reps as f64;
            ((n as f64).ln(), 0.5 * mse.ln())
        })
        .collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}
