use crate::error::Result;
use crate::gaussian::ConditionalGaussian;
use crate::gibbs::Chain;
use crate::kernels::log_mean_exp;
use crate::model::EvidenceModel;
use crate::rng::RngStream;
use crate::scalar::Scalar;

use super::bridge::{check_embedded, completed_points};
use super::{BayesFactorEstimate, Method, Timer};

/// Pseudo-prior ratio estimator for embedded models.
///
/// Under `π0(θ|y) × ω(ψ|θ)` the ratio
/// `f1(y|θ,ψ) π1(θ,ψ) / (f0(y|θ) π0(θ) ω(ψ|θ))` has expectation
/// `m1/m0 = B10`; its log-mean is therefore negated to report `log B01`.
pub fn pseudo_prior_ratio_bf<T: Scalar, M0: EvidenceModel<T>, M1: EvidenceModel<T>>(
    model0: &M0,
    model1: &M1,
    omega: &ConditionalGaussian<T>,
    chain0: &Chain<T>,
    rng: &mut RngStream,
) -> Result<BayesFactorEstimate<T>> {
    check_embedded(model0, model1, omega)?;
    let timer = Timer::start();
    let points = completed_points(model0, model1, omega, chain0, rng)?;
    let ratios: Vec<T> = points.iter().map(|pt| pt.lp1 - pt.lp0).collect();
    let log_b10 = log_mean_exp(&ratios)?;
    Ok(BayesFactorEstimate {
        log_b01: -log_b10,
        method: Method::PseudoRatio,
        n_sims: (points.len(), 0),
        wall_time: timer.seconds(),
        iterations: None,
        converged: true,
    })
}
