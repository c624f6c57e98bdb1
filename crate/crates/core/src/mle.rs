//! Maximum-likelihood probit fits and the asymptotic Gaussian they induce.

use crate::error::{Error, Result};
use crate::gaussian::GaussianSpec;
use crate::kernels::{inverse_mills, log_ncdf, std_normal_logpdf};
use crate::linalg::{dot, spd_factorize, Matrix, SpdFactor};
use crate::model::ProbitModel;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy)]
pub struct MleOptions<T> {
    /// Convergence when the gradient ∞-norm drops below this. Defaults to
    /// `max(1e-8, 1e3·ε)`, so single precision gets a reachable target.
    pub grad_tol: T,
    pub max_iterations: usize,
    pub max_halvings: usize,
    /// `‖θ‖` beyond which the data are declared (quasi-)separated.
    pub separation_norm: T,
}

impl<T: Scalar> Default for MleOptions<T> {
    fn default() -> Self {
        Self {
            grad_tol: T::lit(1e-8).max(T::lit(1e3) * T::epsilon()),
            max_iterations: 50,
            max_halvings: 30,
            separation_norm: T::lit(1e3),
        }
    }
}

/// Result of a Newton fit.
///
/// `cov_hat` is the inverse expected (Fisher) information at the optimum,
/// the covariance `glm()` reports for a probit fit. The inverse observed
/// information is kept alongside as `observed_cov`.
#[derive(Debug, Clone)]
pub struct MleFit<T> {
    pub theta_hat: Vec<T>,
    pub cov_hat: SpdFactor<T>,
    pub observed_cov: SpdFactor<T>,
    pub log_likelihood: T,
    pub gradient_norm: T,
    pub iterations: usize,
    pub converged: bool,
}

impl<T: Scalar> MleFit<T> {
    /// Standard errors from `cov_hat`.
    pub fn std_errors(&self) -> Vec<T> {
        diag_sqrt(&self.cov_hat)
    }

    pub fn observed_std_errors(&self) -> Vec<T> {
        diag_sqrt(&self.observed_cov)
    }

    /// `-2 log L` at the optimum.
    pub fn deviance(&self) -> T {
        -T::lit(2.0) * self.log_likelihood
    }
}

fn diag_sqrt<T: Scalar>(f: &SpdFactor<T>) -> Vec<T> {
    let c = f.reconstruct();
    (0..c.rows()).map(|i| c[(i, i)].sqrt()).collect()
}

/// Log-likelihood, gradient and Hessian at `theta`.
pub(crate) fn derivatives<T: Scalar>(
    model: &ProbitModel<T>,
    theta: &[T],
) -> (T, Vec<T>, Matrix<T>) {
    let x = model.signed_design();
    let p = model.p();
    let mut ll = T::zero();
    let mut grad = vec![T::zero(); p];
    let mut hess = Matrix::zeros(p, p);
    for i in 0..x.rows() {
        let row = x.row(i);
        let t = dot(row, theta);
        ll = ll + log_ncdf(t);
        let lam = inverse_mills(t);
        let w = lam * (t + lam);
        for a in 0..p {
            grad[a] = grad[a] + lam * row[a];
            for b in 0..=a {
                hess[(a, b)] = hess[(a, b)] - w * row[a] * row[b];
            }
        }
    }
    for a in 0..p {
        for b in 0..a {
            hess[(b, a)] = hess[(a, b)];
        }
    }
    (ll, grad, hess)
}

/// Expected information `Σ φ(η)² / (Φ(η) Φ(-η)) xxᵀ`.
pub(crate) fn fisher_information<T: Scalar>(model: &ProbitModel<T>, theta: &[T]) -> Matrix<T> {
    let x = model.design();
    let p = model.p();
    let mut info = Matrix::zeros(p, p);
    for i in 0..x.rows() {
        let row = x.row(i);
        let eta = dot(row, theta);
        let w = (T::lit(2.0) * std_normal_logpdf(eta) - log_ncdf(eta) - log_ncdf(-eta)).exp();
        for a in 0..p {
            for b in 0..=a {
                info[(a, b)] = info[(a, b)] + w * row[a] * row[b];
            }
        }
    }
    for a in 0..p {
        for b in 0..a {
            info[(b, a)] = info[(a, b)];
        }
    }
    info
}

pub fn fit_mle<T: Scalar>(model: &ProbitModel<T>) -> Result<MleFit<T>> {
    fit_mle_with(model, MleOptions::default())
}

/// Newton's method with exact Hessian and step halving, started at θ = 0.
pub fn fit_mle_with<T: Scalar>(model: &ProbitModel<T>, opts: MleOptions<T>) -> Result<MleFit<T>> {
    let p = model.p();
    let mut theta = vec![T::zero(); p];
    let (mut ll, mut grad, mut hess) = derivatives(model, &theta);
    let inf_norm = |g: &[T]| g.iter().fold(T::zero(), |m, &v| m.max(v.abs()));
    let mut iterations = 0;
    while inf_norm(&grad) >= opts.grad_tol {
        if iterations == opts.max_iterations {
            return Err(Error::NoConvergence {
                iterations,
                last: theta.iter().map(|v| v.as_f64()).collect(),
            });
        }
        iterations += 1;
        let neg_hess = hess.scale(-T::one());
        // A Hessian that has lost definiteness away from the optimum means the
        // likelihood flattens out along a ray: the data are separated.
        let step = match spd_factorize(&neg_hess) {
            Ok(f) => f.solve(&grad)?,
            Err(_) => {
                return Err(Error::Separation {
                    norm: dot(&theta, &theta).sqrt().as_f64(),
                })
            }
        };
        let mut scale = T::one();
        let mut accepted = false;
        for _ in 0..=opts.max_halvings {
            let cand: Vec<T> = theta
                .iter()
                .zip(&step)
                .map(|(&t, &s)| t + scale * s)
                .collect();
            let (cll, cgrad, chess) = derivatives(model, &cand);
            if cll >= ll {
                theta = cand;
                ll = cll;
                grad = cgrad;
                hess = chess;
                accepted = true;
                break;
            }
            scale = scale * T::lit(0.5);
        }
        let norm = dot(&theta, &theta).sqrt();
        if norm > opts.separation_norm {
            return Err(Error::Separation {
                norm: norm.as_f64(),
            });
        }
        if !accepted {
            // No ascent direction left at working precision.
            break;
        }
    }
    let grad_norm = inf_norm(&grad);
    let converged = grad_norm < opts.grad_tol;
    if !converged {
        return Err(Error::NoConvergence {
            iterations,
            last: theta.iter().map(|v| v.as_f64()).collect(),
        });
    }
    // The probit gradient vanishes quickly along a separating ray, so a tiny
    // gradient alone does not prove an interior optimum. At a finite maximum
    // the likelihood strictly drops when θ̂ is doubled.
    let doubled: Vec<T> = theta.iter().map(|&t| t + t).collect();
    if theta.iter().any(|t| *t != T::zero()) && model.log_likelihood_unchecked(&doubled) >= ll {
        return Err(Error::Separation {
            norm: dot(&theta, &theta).sqrt().as_f64(),
        });
    }
    let observed_cov = spd_factorize(&spd_factorize(&hess.scale(-T::one()))?.inverse())?;
    let cov_hat = spd_factorize(&spd_factorize(&fisher_information(model, &theta))?.inverse())?;
    Ok(MleFit {
        theta_hat: theta,
        cov_hat,
        observed_cov,
        log_likelihood: ll,
        gradient_norm: grad_norm,
        iterations,
        converged,
    })
}

/// `N(θ̂, cov_hat)`.
pub fn asymptotic_gaussian<T: Scalar>(fit: &MleFit<T>) -> Result<GaussianSpec<T>> {
    if !fit.converged {
        return Err(Error::UnconvergedFit);
    }
    GaussianSpec::from_factor(fit.theta_hat.clone(), fit.cov_hat.clone())
}
