//! Multivariate Gaussians: prior, proposal, φ_k and asymptotic approximation
//! all share this one representation.

use rand::Rng;

use crate::error::{Error, Result};
use crate::kernels::std_normal_draw;
use crate::linalg::{dot, spd_factorize, Matrix, SpdFactor};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianSpec<T> {
    mean: Vec<T>,
    cov_factor: SpdFactor<T>,
}

impl<T: Scalar> GaussianSpec<T> {
    pub fn new(mean: Vec<T>, cov: &Matrix<T>) -> Result<Self> {
        Self::from_factor(mean, spd_factorize(cov)?)
    }

    pub fn from_factor(mean: Vec<T>, cov_factor: SpdFactor<T>) -> Result<Self> {
        if mean.len() != cov_factor.dim() {
            return Err(Error::DimensionMismatch {
                expected: cov_factor.dim(),
                got: mean.len(),
            });
        }
        Ok(Self { mean, cov_factor })
    }

    pub fn standard(dim: usize) -> Self {
        Self::new(vec![T::zero(); dim], &Matrix::identity(dim)).expect("identity is SPD")
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &[T] {
        &self.mean
    }

    pub fn cov_factor(&self) -> &SpdFactor<T> {
        &self.cov_factor
    }

    pub fn covariance(&self) -> Matrix<T> {
        self.cov_factor.reconstruct()
    }

    /// `mean + L ε`, ε iid standard normal.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<T> {
        let eps: Vec<T> = (0..self.dim()).map(|_| std_normal_draw(rng)).collect();
        let mut x = self.cov_factor.mul_lower(&eps);
        for (xi, &m) in x.iter_mut().zip(&self.mean) {
            *xi = *xi + m;
        }
        x
    }

    pub fn logpdf(&self, x: &[T]) -> Result<T> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(self.logpdf_unchecked(x))
    }

    #[inline]
    pub(crate) fn logpdf_unchecked(&self, x: &[T]) -> T {
        let mut w: Vec<T> = x.iter().zip(&self.mean).map(|(&a, &b)| a - b).collect();
        self.cov_factor.solve_lower_in_place(&mut w);
        let d = T::from_usize_lossy(self.dim());
        -T::lit(0.5) * (d * T::TAU().ln() + self.cov_factor.log_det() + dot(&w, &w))
    }

    /// Log-density at the mean: `-(d log 2π + log|Σ|)/2`.
    pub fn log_peak(&self) -> T {
        let d = T::from_usize_lossy(self.dim());
        -T::lit(0.5) * (d * T::TAU().ln() + self.cov_factor.log_det())
    }

    /// Marginal over the coordinates in `keep`, in order.
    pub fn marginal(&self, keep: &[usize]) -> Result<Self> {
        let cov = self.covariance();
        let sub = sub_matrix(&cov, keep, keep);
        Self::new(keep.iter().map(|&i| self.mean[i]).collect(), &sub)
    }
}

fn sub_matrix<T: Scalar>(m: &Matrix<T>, rows: &[usize], cols: &[usize]) -> Matrix<T> {
    let mut out = Matrix::zeros(rows.len(), cols.len());
    for (a, &i) in rows.iter().enumerate() {
        for (b, &j) in cols.iter().enumerate() {
            out[(a, b)] = m[(i, j)];
        }
    }
    out
}

/// Univariate Gaussian of one coordinate given all the others:
/// `ψ | θ ~ N(intercept + slope·θ, sd²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalGaussian<T> {
    target_index: usize,
    slope: Vec<T>,
    intercept: T,
    sd: T,
}

/// Condition a joint Gaussian on every coordinate except `target_index`.
pub fn conditional_gaussian<T: Scalar>(
    joint: &GaussianSpec<T>,
    target_index: usize,
) -> Result<ConditionalGaussian<T>> {
    let d = joint.dim();
    if target_index >= d {
        return Err(Error::IndexOutOfRange {
            index: target_index,
            dim: d,
        });
    }
    if d < 2 {
        return Err(Error::InvalidArgument(
            "conditioning needs dimension ≥ 2".into(),
        ));
    }
    let cov = joint.covariance();
    let rest: Vec<usize> = (0..d).filter(|&i| i != target_index).collect();
    let s_rr = spd_factorize(&sub_matrix(&cov, &rest, &rest))?;
    let s_tr: Vec<T> = rest.iter().map(|&j| cov[(target_index, j)]).collect();
    // slope = Σ_rr⁻¹ Σ_rt
    let slope = s_rr.solve(&s_tr)?;
    let var = cov[(target_index, target_index)] - dot(&slope, &s_tr);
    if !(var > T::zero()) {
        return Err(Error::NotPositiveDefinite {
            pivot: target_index + 1,
        });
    }
    let mean = joint.mean();
    let intercept = mean[target_index]
        - rest
            .iter()
            .zip(&slope)
            .fold(T::zero(), |a, (&j, &s)| a + s * mean[j]);
    Ok(ConditionalGaussian {
        target_index,
        slope,
        intercept,
        sd: var.sqrt(),
    })
}

impl<T: Scalar> ConditionalGaussian<T> {
    /// Build directly from parts (conditioning on the leading coordinates,
    /// target last).
    pub fn from_parts(slope: Vec<T>, intercept: T, sd: T) -> Result<Self> {
        if !(sd > T::zero()) {
            return Err(Error::InvalidArgument(
                "conditional sd must be positive".into(),
            ));
        }
        let target_index = slope.len();
        Ok(Self {
            target_index,
            slope,
            intercept,
            sd,
        })
    }

    pub fn target_index(&self) -> usize {
        self.target_index
    }

    pub fn slope(&self) -> &[T] {
        &self.slope
    }

    pub fn intercept(&self) -> T {
        self.intercept
    }

    pub fn sd(&self) -> T {
        self.sd
    }

    /// Number of conditioning coordinates.
    pub fn conditioning_dim(&self) -> usize {
        self.slope.len()
    }

    pub fn conditional_mean(&self, given: &[T]) -> T {
        self.intercept + dot(&self.slope, given)
    }

    pub fn logpdf(&self, psi: T, given: &[T]) -> Result<T> {
        if given.len() != self.slope.len() {
            return Err(Error::DimensionMismatch {
                expected: self.slope.len(),
                got: given.len(),
            });
        }
        Ok(self.logpdf_unchecked(psi, given))
    }

    #[inline]
    pub(crate) fn logpdf_unchecked(&self, psi: T, given: &[T]) -> T {
        let z = (psi - self.conditional_mean(given)) / self.sd;
        -T::lit(0.5) * (z * z + T::TAU().ln()) - self.sd.ln()
    }

    pub fn sample<R: Rng + ?Sized>(&self, given: &[T], rng: &mut R) -> T {
        self.conditional_mean(given) + self.sd * std_normal_draw(rng)
    }

    /// Split a full point into (conditioning values, target value).
    pub fn split(&self, full: &[T]) -> Result<(Vec<T>, T)> {
        if full.len() != self.slope.len() + 1 {
            return Err(Error::DimensionMismatch {
                expected: self.slope.len() + 1,
                got: full.len(),
            });
        }
        let given = full
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != self.target_index)
            .map(|(_, &v)| v)
            .collect();
        Ok((given, full[self.target_index]))
    }

    /// Insert `psi` at the target position of a conditioning vector.
    pub fn join(&self, given: &[T], psi: T) -> Vec<T> {
        let mut v = given.to_vec();
        v.insert(self.target_index, psi);
        v
    }
}
