//! Conjugate linear-Gaussian model with closed-form evidence and posterior.
//!
//! `y = Aθ + ε`, `ε ~ N(0, σ² I)`, `θ ~ N(m₀, S₀)`. Used as a validation
//! fixture: its "augmentation" is degenerate (the latent block is the data
//! itself), so the Gibbs full conditional is the exact posterior and Chib's
//! and the harmonic-mean identities hold without Monte Carlo error.

use rand::Rng;

use crate::error::{Error, Result};
use crate::gaussian::{conditional_gaussian, ConditionalGaussian, GaussianSpec};
use crate::gibbs::{FullConditional, LatentGibbs};
use crate::linalg::{dot, spd_factorize, Matrix};
use crate::model::EvidenceModel;
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct ConjugateLinearModel<T> {
    design: Matrix<T>,
    y: Vec<T>,
    noise_sd: T,
    prior: GaussianSpec<T>,
    posterior: GaussianSpec<T>,
    log_evidence: T,
}

impl<T: Scalar> ConjugateLinearModel<T> {
    pub fn new(design: Matrix<T>, y: Vec<T>, noise_sd: T, prior: GaussianSpec<T>) -> Result<Self> {
        if design.rows() != y.len() {
            return Err(Error::DimensionMismatch {
                expected: y.len(),
                got: design.rows(),
            });
        }
        if design.cols() != prior.dim() {
            return Err(Error::DimensionMismatch {
                expected: prior.dim(),
                got: design.cols(),
            });
        }
        let s2 = noise_sd * noise_sd;
        // Posterior precision S₀⁻¹ + AᵀA/σ².
        let prior_prec = prior.cov_factor().inverse();
        let ata = design.gram();
        let p = design.cols();
        let mut prec = Matrix::zeros(p, p);
        for i in 0..p {
            for j in 0..p {
                prec[(i, j)] = prior_prec[(i, j)] + ata[(i, j)] / s2;
            }
        }
        let prec_f = spd_factorize(&prec)?;
        let mut rhs = prior_prec.matvec(prior.mean())?;
        for (r, a) in rhs.iter_mut().zip(design.transpose_matvec(&y)?) {
            *r = *r + a / s2;
        }
        let post_mean = prec_f.solve(&rhs)?;
        let posterior = GaussianSpec::new(post_mean, &prec_f.inverse())?;

        // Marginal of y: N(A m₀, σ² I + A S₀ Aᵀ).
        let n = design.rows();
        let s0 = prior.covariance();
        let a_s0 = design.matmul(&s0)?;
        let mut marg = a_s0.matmul(&design.transpose())?;
        for i in 0..n {
            marg[(i, i)] = marg[(i, i)] + s2;
        }
        let marginal = GaussianSpec::new(design.matvec(prior.mean())?, &marg)?;
        let log_evidence = marginal.logpdf(&y)?;
        Ok(Self {
            design,
            y,
            noise_sd,
            prior,
            posterior,
            log_evidence,
        })
    }

    /// Closed-form `log m(y)`.
    pub fn log_evidence(&self) -> T {
        self.log_evidence
    }

    /// Exact posterior of θ.
    pub fn posterior(&self) -> &GaussianSpec<T> {
        &self.posterior
    }

    /// Exact `π(θ_last | θ_rest, y)`.
    pub fn conditional_posterior_of_last(&self) -> Result<ConditionalGaussian<T>> {
        conditional_gaussian(&self.posterior, self.design.cols() - 1)
    }

    /// The same data with the last coefficient fixed at zero, under the
    /// given prior on the remaining coefficients.
    pub fn drop_last(&self, prior: GaussianSpec<T>) -> Result<Self> {
        let keep: Vec<usize> = (0..self.design.cols() - 1).collect();
        Self::new(
            self.design.select_columns(&keep),
            self.y.clone(),
            self.noise_sd,
            prior,
        )
    }

    pub fn design(&self) -> &Matrix<T> {
        &self.design
    }
}

impl<T: Scalar> EvidenceModel<T> for ConjugateLinearModel<T> {
    fn dim(&self) -> usize {
        self.design.cols()
    }

    fn log_likelihood(&self, theta: &[T]) -> Result<T> {
        if theta.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: theta.len(),
            });
        }
        let s = self.noise_sd;
        let n = T::from_usize_lossy(self.y.len());
        let ss = self.y.iter().enumerate().fold(T::zero(), |acc, (i, &yi)| {
            let r = (yi - dot(self.design.row(i), theta)) / s;
            acc + r * r
        });
        Ok(-T::lit(0.5) * (n * T::TAU().ln() + ss) - n * s.ln())
    }

    fn log_prior(&self, theta: &[T]) -> Result<T> {
        self.prior.logpdf(theta)
    }

    fn prior(&self) -> &GaussianSpec<T> {
        &self.prior
    }

    fn fingerprint(&self) -> u64 {
        self.y.iter().fold(0xcbf2_9ce4_8422_2325u64, |h, v| {
            (h ^ v.as_f64().to_bits()).wrapping_mul(0x100_0000_01b3)
        })
    }
}

impl<T: Scalar> LatentGibbs<T> for ConjugateLinearModel<T> {
    fn gibbs_start(&self) -> Result<Vec<T>> {
        Ok(self.posterior.mean().to_vec())
    }

    fn latent_step<R: Rng + ?Sized>(&self, _theta: &[T], _rng: &mut R) -> FullConditional<'_, T> {
        FullConditional {
            mean: self.posterior.mean().to_vec(),
            cov_factor: self.posterior.cov_factor(),
        }
    }
}
