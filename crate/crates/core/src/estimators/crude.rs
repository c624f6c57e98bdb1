use crate::error::Result;
use crate::kernels::log_mean_exp;
use crate::model::EvidenceModel;
use crate::rng::RngStream;
use crate::scalar::Scalar;

use super::{require_draws, LogEvidence, Method, Timer};

/// `log((1/n) Σ f(y | θⱼ))` with `θⱼ` drawn from the prior.
pub fn crude_mc_evidence<T: Scalar, M: EvidenceModel<T>>(
    model: &M,
    n: usize,
    rng: &mut RngStream,
) -> Result<LogEvidence<T>> {
    require_draws(n)?;
    let timer = Timer::start();
    let prior = model.prior();
    let terms = (0..n)
        .map(|_| model.log_likelihood(&prior.sample(rng)))
        .collect::<Result<Vec<T>>>()?;
    Ok(LogEvidence {
        value: log_mean_exp(&terms)?,
        n_sims: n,
        method: Method::CrudeMc,
        wall_time: timer.seconds(),
        tail_excess: None,
    })
}
