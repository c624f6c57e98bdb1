//! Bayes factors for probit variable selection.
//!
//! A probit regression with a g-prior is fitted by maximum likelihood and by
//! the Albert–Chib data-augmentation Gibbs sampler. Marginal likelihoods and
//! Bayes factors between nested models are then estimated by crude Monte
//! Carlo, importance sampling, bridge sampling (same-space, extended and
//! iterated), the harmonic mean with a Gaussian instrument, Chib's
//! Rao–Blackwellized identity and a pseudo-prior ratio. A tensor-grid
//! quadrature provides reference values for models with up to three
//! coefficients.
//!
//! The numerics are generic over [`Scalar`] (`f32` or `f64`); the aliases at
//! the crate root fix the scalar to `f64`.

// `!(x > 0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Dense linear algebra reads best with explicit indices.
#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod estimators;
pub mod gaussian;
pub mod gibbs;
pub mod kernels;
pub mod linalg;
pub mod mle;
pub mod model;
pub mod oracle;
pub mod rng;
pub mod scalar;
pub mod toy;

pub use error::{Error, Result};
pub use estimators::{BayesFactorEstimate, LogEvidence, Method};
pub use gaussian::{conditional_gaussian, ConditionalGaussian, GaussianSpec};
pub use gibbs::{gibbs_run, gibbs_run_from, Chain, ChainMeta};
pub use mle::{asymptotic_gaussian, fit_mle, fit_mle_with, MleFit, MleOptions};
pub use model::{Dataset, EvidenceModel, ProbitModel};
pub use oracle::{
    quadrature, quadrature_log_evidence, quadrature_posterior_mean, QuadratureCenter,
    QuadratureSpec,
};
pub use rng::{RngStream, StreamKey, StreamRole};
pub use scalar::Scalar;

pub type Probit = ProbitModel<f64>;
pub type Data = Dataset<f64>;
pub type Gaussian = GaussianSpec<f64>;
pub type Conditional = ConditionalGaussian<f64>;
pub type ProbitChain = Chain<f64>;
pub type Fit = MleFit<f64>;
pub type Evidence = LogEvidence<f64>;
pub type BayesFactor = BayesFactorEstimate<f64>;

pub type Probit32 = ProbitModel<f32>;
pub type Data32 = Dataset<f32>;
