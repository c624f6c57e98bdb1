//! Bridge sampling between two posteriors.
//!
//! For embedded models (model 0 is model 1 with its last coefficient ψ fixed
//! at 0) the smaller posterior is completed with a pseudo-posterior
//! `ω(ψ | θ)` so that both live on model 1's space. Writing
//! `p̃0(θ, ψ) = f0(y|θ) π0(θ) ω(ψ|θ)` and `p̃1(θ, ψ) = f1(y|θ,ψ) π1(θ,ψ)`,
//!
//! ```text
//! B01 ≈ mean_{w ~ π1(·|y)}[p̃0(w) α(w)] / mean_{w ~ π0(·|y) × ω}[p̃1(w) α(w)]
//! ```
//!
//! for any positive bridge function α.

use crate::error::{Error, Result};
use crate::gaussian::{ConditionalGaussian, GaussianSpec};
use crate::gibbs::Chain;
use crate::kernels::{log_add_exp, log_mean_exp};
use crate::model::EvidenceModel;
use crate::rng::RngStream;
use crate::scalar::Scalar;

use super::{BayesFactorEstimate, Method, Timer};

/// Same-space bridge: `B01 ≈ mean_{θ ~ π1(·|y)} [f0 π0 / (f1 π1)](θ)`.
/// Both models must share the parameter space.
pub fn bridge_same_space_bf<T: Scalar, M0: EvidenceModel<T>, M1: EvidenceModel<T>>(
    model0: &M0,
    model1: &M1,
    chain1: &Chain<T>,
) -> Result<BayesFactorEstimate<T>> {
    if model0.dim() != model1.dim() {
        return Err(Error::DimensionMismatch {
            expected: model1.dim(),
            got: model0.dim(),
        });
    }
    if chain1.dim() != model1.dim() {
        return Err(Error::DimensionMismatch {
            expected: model1.dim(),
            got: chain1.dim(),
        });
    }
    let timer = Timer::start();
    let terms = chain1
        .draws()
        .map(|theta| Ok(model0.log_posterior_unnorm(theta)? - model1.log_posterior_unnorm(theta)?))
        .collect::<Result<Vec<T>>>()?;
    Ok(BayesFactorEstimate {
        log_b01: log_mean_exp(&terms)?,
        method: Method::BridgeSameSpace,
        n_sims: (0, chain1.len()),
        wall_time: timer.seconds(),
        iterations: None,
        converged: true,
    })
}

/// How the two densities are averaged in the non-iterative α.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AlphaWeights {
    /// ½ and ½.
    #[default]
    Equal,
    /// `n0/(n0+n1)` on the model-0 side and `n1/(n0+n1)` on the model-1
    /// side, using the chain lengths at evaluation time.
    BudgetProportional,
}

/// Bridge function α(θ, ψ) > 0.
#[derive(Debug, Clone)]
pub enum AlphaChoice<T> {
    /// α ≡ exp(log_value).
    Constant { log_value: T },
    /// `α = c / (w1 q1(θ,ψ) + w0 q0(θ) ω(ψ|θ))` with `q_k` the asymptotic
    /// Gaussians of the two models.
    Gaussian {
        gauss0: GaussianSpec<T>,
        gauss1: GaussianSpec<T>,
        omega: ConditionalGaussian<T>,
        weights: AlphaWeights,
        log_scale: T,
    },
}

impl<T: Scalar> AlphaChoice<T> {
    pub fn constant(value: T) -> Result<Self> {
        if !(value > T::zero()) {
            return Err(Error::InvalidArgument(
                "bridge function must be positive".into(),
            ));
        }
        Ok(Self::Constant {
            log_value: value.ln(),
        })
    }

    /// α multiplied by `factor > 0`.
    pub fn rescaled(&self, factor: T) -> Self {
        match self.clone() {
            Self::Constant { log_value } => Self::Constant {
                log_value: log_value + factor.ln(),
            },
            Self::Gaussian {
                gauss0,
                gauss1,
                omega,
                weights,
                log_scale,
            } => Self::Gaussian {
                gauss0,
                gauss1,
                omega,
                weights,
                log_scale: log_scale + factor.ln(),
            },
        }
    }

    /// `log α(w)` for a full model-1 point `w`, given the two sample sizes.
    pub fn log_alpha(&self, w: &[T], n0: usize, n1: usize) -> Result<T> {
        match self {
            Self::Constant { log_value } => Ok(*log_value),
            Self::Gaussian {
                gauss0,
                gauss1,
                omega,
                weights,
                log_scale,
            } => {
                let (given, psi) = omega.split(w)?;
                let (lw0, lw1) = match weights {
                    AlphaWeights::Equal => (T::lit(0.5).ln(), T::lit(0.5).ln()),
                    AlphaWeights::BudgetProportional => {
                        let total = T::from_usize_lossy(n0 + n1);
                        (
                            (T::from_usize_lossy(n0) / total).ln(),
                            (T::from_usize_lossy(n1) / total).ln(),
                        )
                    }
                };
                let l1 = lw1 + gauss1.logpdf(w)?;
                let l0 = lw0 + gauss0.logpdf(&given)? + omega.logpdf(psi, &given)?;
                Ok(*log_scale - log_add_exp(l0, l1))
            }
        }
    }
}

/// Non-iterative α from the two asymptotic Gaussians, equal weights.
pub fn make_paper_alpha<T: Scalar>(
    gauss0: &GaussianSpec<T>,
    gauss1: &GaussianSpec<T>,
    omega: &ConditionalGaussian<T>,
) -> Result<AlphaChoice<T>> {
    make_paper_alpha_weighted(gauss0, gauss1, omega, AlphaWeights::Equal)
}

pub fn make_paper_alpha_weighted<T: Scalar>(
    gauss0: &GaussianSpec<T>,
    gauss1: &GaussianSpec<T>,
    omega: &ConditionalGaussian<T>,
    weights: AlphaWeights,
) -> Result<AlphaChoice<T>> {
    if gauss1.dim() != gauss0.dim() + 1 {
        return Err(Error::DimensionMismatch {
            expected: gauss0.dim() + 1,
            got: gauss1.dim(),
        });
    }
    if omega.conditioning_dim() != gauss0.dim() {
        return Err(Error::DimensionMismatch {
            expected: gauss0.dim(),
            got: omega.conditioning_dim(),
        });
    }
    Ok(AlphaChoice::Gaussian {
        gauss0: gauss0.clone(),
        gauss1: gauss1.clone(),
        omega: omega.clone(),
        weights,
        log_scale: T::zero(),
    })
}

/// A point on model 1's space with both unnormalized log-densities.
#[derive(Debug, Clone)]
pub(crate) struct BridgePoint<T> {
    pub full: Vec<T>,
    /// `log p̃0 = log f0 + log π0 + log ω`.
    pub lp0: T,
    /// `log p̃1 = log f1 + log π1`.
    pub lp1: T,
}

pub(crate) fn check_embedded<T: Scalar, M0: EvidenceModel<T>, M1: EvidenceModel<T>>(
    model0: &M0,
    model1: &M1,
    omega: &ConditionalGaussian<T>,
) -> Result<()> {
    let (p0, p1) = (model0.dim(), model1.dim());
    if p1 != p0 + 1 {
        return Err(Error::NotEmbedded(format!(
            "model 1 has dimension {p1}, expected {}",
            p0 + 1
        )));
    }
    if omega.conditioning_dim() != p0 || omega.target_index() != p1 - 1 {
        return Err(Error::NotEmbedded(
            "pseudo-posterior must complete the last coefficient of model 1".into(),
        ));
    }
    Ok(())
}

fn point<T: Scalar, M0: EvidenceModel<T>, M1: EvidenceModel<T>>(
    model0: &M0,
    model1: &M1,
    omega: &ConditionalGaussian<T>,
    full: Vec<T>,
) -> Result<BridgePoint<T>> {
    let (given, psi) = omega.split(&full)?;
    let lp0 = model0.log_posterior_unnorm(&given)? + omega.logpdf_unchecked(psi, &given);
    let lp1 = model1.log_posterior_unnorm(&full)?;
    Ok(BridgePoint { full, lp0, lp1 })
}

/// Complete each model-0 draw with `ψ ~ ω(·|θ)` and evaluate both densities.
pub(crate) fn completed_points<T: Scalar, M0: EvidenceModel<T>, M1: EvidenceModel<T>>(
    model0: &M0,
    model1: &M1,
    omega: &ConditionalGaussian<T>,
    chain0: &Chain<T>,
    rng: &mut RngStream,
) -> Result<Vec<BridgePoint<T>>> {
    if chain0.dim() != model0.dim() {
        return Err(Error::DimensionMismatch {
            expected: model0.dim(),
            got: chain0.dim(),
        });
    }
    chain0
        .draws()
        .map(|theta| {
            let psi = omega.sample(theta, rng);
            point(model0, model1, omega, omega.join(theta, psi))
        })
        .collect()
}

fn model1_points<T: Scalar, M0: EvidenceModel<T>, M1: EvidenceModel<T>>(
    model0: &M0,
    model1: &M1,
    omega: &ConditionalGaussian<T>,
    chain1: &Chain<T>,
) -> Result<Vec<BridgePoint<T>>> {
    if chain1.dim() != model1.dim() {
        return Err(Error::DimensionMismatch {
            expected: model1.dim(),
            got: chain1.dim(),
        });
    }
    chain1
        .draws()
        .map(|w| point(model0, model1, omega, w.to_vec()))
        .collect()
}

fn bridge_ratio<T: Scalar>(
    from0: &[BridgePoint<T>],
    from1: &[BridgePoint<T>],
    log_alpha: impl Fn(&BridgePoint<T>) -> Result<T>,
) -> Result<T> {
    let num = from1
        .iter()
        .map(|pt| Ok(pt.lp0 + log_alpha(pt)?))
        .collect::<Result<Vec<T>>>()?;
    let den = from0
        .iter()
        .map(|pt| Ok(pt.lp1 + log_alpha(pt)?))
        .collect::<Result<Vec<T>>>()?;
    Ok(log_mean_exp(&num)? - log_mean_exp(&den)?)
}

/// Extended bridge sampling for embedded models with a fixed α.
///
/// `chain0` targets `π0(θ|y)`; each of its draws is completed with
/// `ψ ~ omega(·|θ)` using `rng`. `chain1` targets `π1(θ,ψ|y)`.
pub fn bridge_extended_bf<T: Scalar, M0: EvidenceModel<T>, M1: EvidenceModel<T>>(
    model0: &M0,
    model1: &M1,
    omega: &ConditionalGaussian<T>,
    chain0: &Chain<T>,
    chain1: &Chain<T>,
    alpha: &AlphaChoice<T>,
    rng: &mut RngStream,
) -> Result<BayesFactorEstimate<T>> {
    check_embedded(model0, model1, omega)?;
    let timer = Timer::start();
    let from0 = completed_points(model0, model1, omega, chain0, rng)?;
    let from1 = model1_points(model0, model1, omega, chain1)?;
    let (n0, n1) = (from0.len(), from1.len());
    let log_b01 = bridge_ratio(&from0, &from1, |pt| alpha.log_alpha(&pt.full, n0, n1))?;
    Ok(BayesFactorEstimate {
        log_b01,
        method: Method::Bridge,
        n_sims: (n0, n1),
        wall_time: timer.seconds(),
        iterations: None,
        converged: true,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct OptimalBridgeOptions<T> {
    pub max_iterations: usize,
    /// Stop when successive `|Δ log B̂|` falls below this.
    pub tolerance: T,
    /// Starting `log B̂`; zero when absent.
    pub start_log_b01: Option<T>,
}

impl<T: Scalar> Default for OptimalBridgeOptions<T> {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            tolerance: T::lit(1e-8),
            start_log_b01: None,
        }
    }
}

/// Iterated quasi-optimal bridge: `α ∝ 1 / (n0 p̃0 + n1 B̂ p̃1)`, re-estimating
/// `B̂` until it stops moving. A run that exhausts `max_iterations` returns
/// its last iterate with `converged = false`.
pub fn optimal_alpha_bridge_bf<T: Scalar, M0: EvidenceModel<T>, M1: EvidenceModel<T>>(
    model0: &M0,
    model1: &M1,
    omega: &ConditionalGaussian<T>,
    chain0: &Chain<T>,
    chain1: &Chain<T>,
    options: OptimalBridgeOptions<T>,
    rng: &mut RngStream,
) -> Result<BayesFactorEstimate<T>> {
    check_embedded(model0, model1, omega)?;
    if options.max_iterations == 0 {
        return Err(Error::InvalidArgument(
            "at least one fixed-point iteration is required".into(),
        ));
    }
    let timer = Timer::start();
    let from0 = completed_points(model0, model1, omega, chain0, rng)?;
    let from1 = model1_points(model0, model1, omega, chain1)?;
    let ln0 = T::from_usize_lossy(from0.len()).ln();
    let ln1 = T::from_usize_lossy(from1.len()).ln();
    let mut log_b = options.start_log_b01.unwrap_or_else(T::zero);
    let mut converged = false;
    let mut iterations = 0;
    while iterations < options.max_iterations {
        iterations += 1;
        let current = log_b;
        let next = bridge_ratio(&from0, &from1, |pt| {
            Ok(-log_add_exp(ln0 + pt.lp0, ln1 + current + pt.lp1))
        })?;
        log_b = next;
        if (next - current).abs() < options.tolerance {
            converged = true;
            break;
        }
    }
    Ok(BayesFactorEstimate {
        log_b01: log_b,
        method: Method::BridgeOptimal,
        n_sims: (from0.len(), from1.len()),
        wall_time: timer.seconds(),
        iterations: Some(iterations),
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;

    fn gaussians() -> (
        GaussianSpec<f64>,
        GaussianSpec<f64>,
        ConditionalGaussian<f64>,
    ) {
        let g1 = GaussianSpec::new(
            vec![0.5, -0.2, 1.0],
            &Matrix::from_rows(&[
                vec![1.0, 0.3, 0.1],
                vec![0.3, 2.0, -0.4],
                vec![0.1, -0.4, 0.8],
            ])
            .unwrap(),
        )
        .unwrap();
        let omega = crate::gaussian::conditional_gaussian(&g1, 2).unwrap();
        let g0 = g1.marginal(&[0, 1]).unwrap();
        (g0, g1, omega)
    }

    #[test]
    fn alpha_reduces_to_inverse_q1_when_product_matches() {
        // q0 = marginal of q1 and ω = its conditional, so q0·ω = q1.
        let (g0, g1, omega) = gaussians();
        let alpha = make_paper_alpha(&g0, &g1, &omega).unwrap();
        for w in [[0.0, 0.0, 0.0], [1.0, -1.0, 2.0], [0.5, -0.2, 1.0]] {
            let la = alpha.log_alpha(&w, 10, 10).unwrap();
            assert!((la + g1.logpdf(&w).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn alpha_is_composed_from_density_calls() {
        let (g0, _, omega) = gaussians();
        let other = GaussianSpec::new(
            vec![0.0, 0.0, 0.0],
            &Matrix::from_diagonal(&[2.0, 1.0, 0.5]),
        )
        .unwrap();
        let alpha = make_paper_alpha(&g0, &other, &omega).unwrap();
        let w = other.mean().to_vec();
        let q1 = other.logpdf(&w).unwrap().exp();
        let q0w = (g0.logpdf(&w[..2]).unwrap() + omega.logpdf(w[2], &w[..2]).unwrap()).exp();
        let want = 1.0 / (0.5 * q1 + 0.5 * q0w);
        assert!((alpha.log_alpha(&w, 5, 7).unwrap() - want.ln()).abs() < 1e-12);
        let scaled = alpha.rescaled(10.0);
        assert!((scaled.log_alpha(&w, 5, 7).unwrap() - (10.0 * want).ln()).abs() < 1e-12);
    }

    #[test]
    fn alpha_dimension_checks() {
        let (g0, g1, omega) = gaussians();
        assert!(make_paper_alpha(&g1, &g1, &omega).is_err());
        assert!(make_paper_alpha(&g0, &g0, &omega).is_err());
        assert!(AlphaChoice::constant(0.0).is_err());
    }
}
