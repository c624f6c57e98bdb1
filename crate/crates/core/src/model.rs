//! Bayesian probit regression under a g-prior.
//!
//! `P(yᵢ = 1 | θ) = Φ(xᵢᵀθ)` with prior `θ ~ N(0, g (XᵀX)⁻¹)`, no intercept.
//! Everything is evaluated on the log scale.

use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::gaussian::GaussianSpec;
use crate::kernels::log_ncdf;
use crate::linalg::{dot, spd_factorize, Matrix, SpdFactor};
use crate::scalar::Scalar;

/// A model that can be integrated: log-likelihood, normalized log-prior and
/// a Gaussian prior to draw from.
pub trait EvidenceModel<T: Scalar>: Sync {
    fn dim(&self) -> usize;

    fn log_likelihood(&self, theta: &[T]) -> Result<T>;

    /// Fully normalized log prior density.
    fn log_prior(&self, theta: &[T]) -> Result<T>;

    fn log_posterior_unnorm(&self, theta: &[T]) -> Result<T> {
        Ok(self.log_likelihood(theta)? + self.log_prior(theta)?)
    }

    /// The prior as a Gaussian; prior draws come from here.
    fn prior(&self) -> &GaussianSpec<T>;

    /// Identifies the model (data + prior) for chain provenance.
    fn fingerprint(&self) -> u64;
}

/// Binary responses with named real covariate columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset<T> {
    y: Vec<bool>,
    names: Vec<String>,
    columns: Vec<Vec<T>>,
}

impl<T: Scalar> Dataset<T> {
    /// `y` entries must be 0 or 1; columns must be finite, of length n and
    /// uniquely named.
    pub fn new(y: Vec<u8>, columns: Vec<(String, Vec<T>)>) -> Result<Self> {
        if y.is_empty() {
            return Err(Error::InvalidData("dataset has no observations".into()));
        }
        if let Some(i) = y.iter().position(|&v| v > 1) {
            return Err(Error::InvalidData(format!(
                "response at row {i} is {} (expected 0 or 1)",
                y[i]
            )));
        }
        let n = y.len();
        let mut names = Vec::with_capacity(columns.len());
        let mut cols = Vec::with_capacity(columns.len());
        for (name, col) in columns {
            if names.contains(&name) {
                return Err(Error::InvalidData(format!("duplicate column `{name}`")));
            }
            if col.len() != n {
                return Err(Error::InvalidData(format!(
                    "column `{name}` has {} rows, expected {n}",
                    col.len()
                )));
            }
            if let Some(i) = col.iter().position(|v| !v.is_finite()) {
                return Err(Error::InvalidData(format!(
                    "column `{name}` has a missing or non-finite value at row {i}"
                )));
            }
            names.push(name);
            cols.push(col);
        }
        Ok(Self {
            y: y.into_iter().map(|v| v == 1).collect(),
            names,
            columns: cols,
        })
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn y(&self) -> &[bool] {
        &self.y
    }

    pub fn column_names(&self) -> &[String] {
        &self.names
    }

    pub fn column(&self, name: &str) -> Result<&[T]> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.columns[i].as_slice())
            .ok_or_else(|| Error::UnknownColumn(name.to_string()))
    }

    /// n×p design matrix from the named columns, in the given order.
    pub fn design(&self, selected: &[&str]) -> Result<Matrix<T>> {
        let cols = selected
            .iter()
            .map(|s| self.column(s))
            .collect::<Result<Vec<_>>>()?;
        let n = self.n();
        let mut data = Vec::with_capacity(n * cols.len());
        for i in 0..n {
            data.extend(cols.iter().map(|c| c[i]));
        }
        Matrix::from_row_major(n, cols.len(), data)
    }
}

/// Probit regression on selected covariates with a g-prior.
#[derive(Debug, Clone)]
pub struct ProbitModel<T> {
    columns: Vec<String>,
    y: Vec<bool>,
    design: Matrix<T>,
    /// Rows multiplied by `2yᵢ - 1`, so that `log f = Σ log Φ(x̃ᵢᵀθ)`.
    signed_design: Matrix<T>,
    g: T,
    gram: Matrix<T>,
    gram_factor: SpdFactor<T>,
    prior: GaussianSpec<T>,
    /// Factor of `g/(g+1) (XᵀX)⁻¹`, the θ full-conditional covariance.
    conditional_cov: SpdFactor<T>,
}

impl<T: Scalar> ProbitModel<T> {
    /// Model on the given columns with the default `g = n`.
    pub fn new(data: &Dataset<T>, selected: &[&str]) -> Result<Self> {
        Self::with_g(data, selected, T::from_usize_lossy(data.n()))
    }

    pub fn with_g(data: &Dataset<T>, selected: &[&str], g: T) -> Result<Self> {
        let design = data.design(selected)?;
        let mut model = Self::from_design(design, data.y().to_vec(), g)?;
        model.columns = selected.iter().map(|s| s.to_string()).collect();
        Ok(model)
    }

    /// Model straight from a design matrix and responses.
    pub fn from_design(design: Matrix<T>, y: Vec<bool>, g: T) -> Result<Self> {
        if design.rows() != y.len() {
            return Err(Error::DimensionMismatch {
                expected: y.len(),
                got: design.rows(),
            });
        }
        if design.cols() == 0 {
            return Err(Error::InvalidArgument(
                "model needs at least one covariate".into(),
            ));
        }
        if !(g > T::zero()) {
            return Err(Error::InvalidArgument("g must be positive".into()));
        }
        let gram = design.gram();
        let gram_factor = spd_factorize(&gram)?;
        let gram_inv = gram_factor.inverse();
        let prior = GaussianSpec::new(vec![T::zero(); design.cols()], &gram_inv.scale(g))?;
        let conditional_cov = spd_factorize(&gram_inv.scale(g / (g + T::one())))?;
        let mut signed = design.clone();
        for (i, &yi) in y.iter().enumerate() {
            if !yi {
                for j in 0..signed.cols() {
                    signed[(i, j)] = -signed[(i, j)];
                }
            }
        }
        let columns = (1..=design.cols()).map(|j| format!("x{j}")).collect();
        Ok(Self {
            columns,
            y,
            design,
            signed_design: signed,
            g,
            gram,
            gram_factor,
            prior,
            conditional_cov,
        })
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn p(&self) -> usize {
        self.design.cols()
    }

    pub fn g(&self) -> T {
        self.g
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn y(&self) -> &[bool] {
        &self.y
    }

    pub fn design(&self) -> &Matrix<T> {
        &self.design
    }

    pub(crate) fn signed_design(&self) -> &Matrix<T> {
        &self.signed_design
    }

    /// `XᵀX`.
    pub fn gram(&self) -> &Matrix<T> {
        &self.gram
    }

    pub fn gram_factor(&self) -> &SpdFactor<T> {
        &self.gram_factor
    }

    pub(crate) fn conditional_cov(&self) -> &SpdFactor<T> {
        &self.conditional_cov
    }

    fn check_dim(&self, theta: &[T]) -> Result<()> {
        if theta.len() != self.p() {
            return Err(Error::DimensionMismatch {
                expected: self.p(),
                got: theta.len(),
            });
        }
        Ok(())
    }

    /// `Σᵢ log Φ(x̃ᵢᵀθ)` without the dimension check.
    #[inline]
    pub(crate) fn log_likelihood_unchecked(&self, theta: &[T]) -> T {
        let x = &self.signed_design;
        (0..x.rows()).fold(T::zero(), |acc, i| acc + log_ncdf(dot(x.row(i), theta)))
    }

    /// `-(n/2) log 2π - Σ (zᵢ - xᵢᵀθ)²/2` when every `zᵢ` has the sign its
    /// `yᵢ` demands (`zᵢ > 0` iff `yᵢ = 1`), `-∞` otherwise.
    pub fn completed_log_likelihood(&self, theta: &[T], z: &[T]) -> Result<T> {
        self.check_dim(theta)?;
        if z.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: z.len(),
            });
        }
        let consistent = self
            .y
            .iter()
            .zip(z)
            .all(|(&yi, &zi)| (zi > T::zero()) == yi);
        if !consistent {
            return Ok(T::neg_infinity());
        }
        let ss = (0..self.n()).fold(T::zero(), |acc, i| {
            let r = z[i] - dot(self.design.row(i), theta);
            acc + r * r
        });
        Ok(-T::lit(0.5) * (T::from_usize_lossy(self.n()) * T::TAU().ln() + ss))
    }
}

impl<T: Scalar> EvidenceModel<T> for ProbitModel<T> {
    fn dim(&self) -> usize {
        self.p()
    }

    fn log_likelihood(&self, theta: &[T]) -> Result<T> {
        self.check_dim(theta)?;
        Ok(self.log_likelihood_unchecked(theta))
    }

    /// `-(p/2) log 2π - (p/2) log g + ½ log|XᵀX| - θᵀXᵀXθ/(2g)`.
    fn log_prior(&self, theta: &[T]) -> Result<T> {
        self.check_dim(theta)?;
        let p = T::from_usize_lossy(self.p());
        let quad = dot(theta, &self.gram.matvec(theta)?);
        let half = T::lit(0.5);
        Ok(
            -half * p * T::TAU().ln() - half * p * self.g.ln() + half * self.gram_factor.log_det()
                - half * quad / self.g,
        )
    }

    fn prior(&self) -> &GaussianSpec<T> {
        &self.prior
    }

    fn fingerprint(&self) -> u64 {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.y.hash(&mut h);
        for v in self.design.as_slice() {
            v.as_f64().to_bits().hash(&mut h);
        }
        self.g.as_f64().to_bits().hash(&mut h);
        h.finish()
    }
}
