use crate::error::{Error, Result};
use crate::gibbs::{rao_blackwell_logdensity, Chain};
use crate::model::EvidenceModel;
use crate::scalar::Scalar;

use super::{LogEvidence, Method, Timer};

/// Chib's identity at the chain's registered θ*:
/// `log m = log f(y|θ*) + log π(θ*) - log π̂(θ*|y)`, with the posterior
/// ordinate estimated by Rao–Blackwellization.
pub fn chib_evidence<T: Scalar, M: EvidenceModel<T>>(
    model: &M,
    chain: &Chain<T>,
) -> Result<LogEvidence<T>> {
    let timer = Timer::start();
    let theta_star = chain
        .meta()
        .theta_star
        .as_deref()
        .ok_or(Error::MissingRbCache)?;
    let ordinate = rao_blackwell_logdensity(chain)?;
    let value = model.log_posterior_unnorm(theta_star)? - ordinate;
    Ok(LogEvidence {
        value,
        n_sims: chain.len(),
        method: Method::Chib,
        wall_time: timer.seconds(),
        tail_excess: None,
    })
}
