//! Evidence and Bayes-factor estimators.
//!
//! Every estimator works on the log scale and returns `log m` or
//! `log B01 = log m0 - log m1`; evidences on real data are of order
//! `e^-200`, so nothing is exponentiated before the final report.

mod bridge;
mod chib;
mod crude;
mod harmonic;
mod importance;
mod pseudo;

use std::fmt;
use std::ops::Range;
use std::time::Instant;

pub use bridge::{
    bridge_extended_bf, bridge_same_space_bf, make_paper_alpha, make_paper_alpha_weighted,
    optimal_alpha_bridge_bf, AlphaChoice, AlphaWeights, OptimalBridgeOptions,
};
pub use chib::chib_evidence;
pub use crude::crude_mc_evidence;
pub use harmonic::{harmonic_evidence, HEAVY_TAIL_NATS};
pub use importance::importance_evidence;
pub use pseudo::pseudo_prior_ratio_bf;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    CrudeMc,
    Importance,
    Bridge,
    BridgeOptimal,
    BridgeSameSpace,
    Harmonic,
    Chib,
    PseudoRatio,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::CrudeMc => "crude_mc",
            Method::Importance => "importance",
            Method::Bridge => "bridge",
            Method::BridgeOptimal => "bridge_opt",
            Method::BridgeSameSpace => "bridge_same_space",
            Method::Harmonic => "harmonic",
            Method::Chib => "chib",
            Method::PseudoRatio => "pseudo_ratio",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Estimated `log m` for one model.
#[derive(Debug, Clone, PartialEq)]
pub struct LogEvidence<T> {
    pub value: T,
    pub n_sims: usize,
    pub method: Method,
    /// Seconds spent inside the estimator (excludes chain generation).
    pub wall_time: f64,
    /// Harmonic-mean only: largest log-weight minus the mean log-weight.
    pub tail_excess: Option<T>,
}

impl<T: Scalar> LogEvidence<T> {
    /// True when the harmonic-mean weights look heavy-tailed.
    pub fn heavy_tail_warning(&self) -> bool {
        self.tail_excess
            .is_some_and(|e| e > T::lit(HEAVY_TAIL_NATS))
    }
}

/// Estimated `log B01`.
#[derive(Debug, Clone, PartialEq)]
pub struct BayesFactorEstimate<T> {
    pub log_b01: T,
    pub method: Method,
    /// Draws used for model 0 and model 1.
    pub n_sims: (usize, usize),
    pub wall_time: f64,
    /// Fixed-point iterations (optimal bridge only).
    pub iterations: Option<usize>,
    pub converged: bool,
}

impl<T: Scalar> BayesFactorEstimate<T> {
    /// `log m0 - log m1` from two evidence estimates of the same method.
    pub fn from_evidences(m0: &LogEvidence<T>, m1: &LogEvidence<T>) -> Self {
        Self {
            log_b01: m0.value - m1.value,
            method: m0.method,
            n_sims: (m0.n_sims, m1.n_sims),
            wall_time: m0.wall_time + m1.wall_time,
            iterations: None,
            converged: true,
        }
    }

    pub fn b01(&self) -> T {
        self.log_b01.exp()
    }

    /// The same estimate expressed as `log B10`.
    pub fn swapped(&self) -> Self {
        Self {
            log_b01: -self.log_b01,
            n_sims: (self.n_sims.1, self.n_sims.0),
            ..self.clone()
        }
    }
}

/// Batch-means standard error: splits `0..n` into `batches` contiguous
/// blocks, evaluates the estimator on each and returns `sd / √batches`.
pub fn batch_standard_error<T, F>(n: usize, batches: usize, mut estimate: F) -> Result<T>
where
    T: Scalar,
    F: FnMut(Range<usize>) -> Result<T>,
{
    if batches < 2 || n < batches {
        return Err(Error::InvalidArgument(format!(
            "cannot split {n} draws into {batches} batches"
        )));
    }
    let size = n / batches;
    let values = (0..batches)
        .map(|b| estimate(b * size..(b + 1) * size))
        .collect::<Result<Vec<T>>>()?;
    let k = T::from_usize_lossy(batches);
    let mean = values.iter().copied().sum::<T>() / k;
    let var = values.iter().map(|&v| (v - mean) * (v - mean)).sum::<T>() / (k - T::one());
    Ok((var / k).sqrt())
}

pub(crate) struct Timer(Instant);

impl Timer {
    pub(crate) fn start() -> Self {
        Timer(Instant::now())
    }

    pub(crate) fn seconds(&self) -> f64 {
        self.0.elapsed().as_secs_f64()
    }
}

pub(crate) fn require_draws(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "at least one draw is required".into(),
        ));
    }
    Ok(())
}
