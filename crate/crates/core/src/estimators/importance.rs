use crate::error::{Error, Result};
use crate::gaussian::GaussianSpec;
use crate::kernels::log_mean_exp;
use crate::model::EvidenceModel;
use crate::rng::RngStream;
use crate::scalar::Scalar;

use super::{require_draws, LogEvidence, Method, Timer};

/// Importance sampling with a Gaussian proposal:
/// `log((1/n) Σ f(y|θⱼ) π(θⱼ) / q(θⱼ))`, `θⱼ ~ q`.
pub fn importance_evidence<T: Scalar, M: EvidenceModel<T>>(
    model: &M,
    proposal: &GaussianSpec<T>,
    n: usize,
    rng: &mut RngStream,
) -> Result<LogEvidence<T>> {
    require_draws(n)?;
    if proposal.dim() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            got: proposal.dim(),
        });
    }
    let timer = Timer::start();
    let terms = (0..n)
        .map(|_| {
            let theta = proposal.sample(rng);
            Ok(model.log_posterior_unnorm(&theta)? - proposal.logpdf_unchecked(&theta))
        })
        .collect::<Result<Vec<T>>>()?;
    Ok(LogEvidence {
        value: log_mean_exp(&terms)?,
        n_sims: n,
        method: Method::Importance,
        wall_time: timer.seconds(),
        tail_excess: None,
    })
}
