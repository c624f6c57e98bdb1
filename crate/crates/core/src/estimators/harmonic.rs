use crate::error::{Error, Result};
use crate::gaussian::GaussianSpec;
use crate::gibbs::Chain;
use crate::kernels::log_mean_exp;
use crate::model::EvidenceModel;
use crate::scalar::Scalar;

use super::{LogEvidence, Method, Timer};

/// Log-weight excess (max minus mean, in nats) above which the weights are
/// flagged as heavy-tailed.
pub const HEAVY_TAIL_NATS: f64 = 20.0;

/// Gelfand–Dey harmonic-mean evidence from posterior draws:
/// `1/m = E_post[φ(θ) / (π(θ) f(y|θ))]`.
///
/// The identity holds for any density `phi`, but the estimator only has
/// finite variance when `phi` has lighter tails than the posterior. That is
/// not checked; `tail_excess` on the result records the spread of the
/// log-weights as a symptom.
pub fn harmonic_evidence<T: Scalar, M: EvidenceModel<T>>(
    model: &M,
    chain: &Chain<T>,
    phi: &GaussianSpec<T>,
) -> Result<LogEvidence<T>> {
    if phi.dim() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            got: phi.dim(),
        });
    }
    if chain.dim() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            got: chain.dim(),
        });
    }
    if chain.is_empty() {
        return Err(Error::Empty("harmonic_evidence"));
    }
    let timer = Timer::start();
    let terms = chain
        .draws()
        .map(|theta| Ok(phi.logpdf_unchecked(theta) - model.log_posterior_unnorm(theta)?))
        .collect::<Result<Vec<T>>>()?;
    let max = terms.iter().copied().fold(T::neg_infinity(), T::max);
    let mean = terms.iter().copied().sum::<T>() / T::from_usize_lossy(terms.len());
    Ok(LogEvidence {
        value: -log_mean_exp(&terms)?,
        n_sims: chain.len(),
        method: Method::Harmonic,
        wall_time: timer.seconds(),
        tail_excess: Some(max - mean),
    })
}
