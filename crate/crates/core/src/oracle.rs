//! Deterministic quadrature reference for low-dimensional evidences.
//!
//! The integrand `f(y|θ) π(θ)` is mapped to whitened coordinates
//! `θ = μ + L u` and integrated with the tensor trapezoid rule over
//! `u ∈ [-h, h]^p`. Nodes are evaluated in parallel, and the sums are reduced
//! with a fixed pairwise tree, so results do not depend on the thread count.
//! The grid has an odd number of points per axis; every other node forms a
//! nested coarse grid, and the two estimates must agree for the result to
//! be accepted.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gaussian::GaussianSpec;
use crate::model::EvidenceModel;
use crate::scalar::Scalar;

pub const MAX_QUADRATURE_DIM: usize = 3;

/// Where the grid is centered and how it is whitened.
#[derive(Debug, Clone)]
pub enum QuadratureCenter<T> {
    /// The model's prior.
    Prior,
    /// Any Gaussian, typically the asymptotic MLE Gaussian.
    Gaussian(GaussianSpec<T>),
}

#[derive(Debug, Clone)]
pub struct QuadratureSpec<T> {
    /// Odd, at least 21.
    pub points_per_dim: usize,
    /// Half-width of the grid in whitened units, at least 6.
    pub half_width_sds: T,
    pub center: QuadratureCenter<T>,
    /// Largest accepted `|log m_fine - log m_coarse|`.
    pub self_check_tol: T,
}

impl<T: Scalar> QuadratureSpec<T> {
    pub fn new(center: QuadratureCenter<T>) -> Self {
        Self {
            points_per_dim: 101,
            half_width_sds: T::lit(8.0),
            center,
            self_check_tol: T::lit(1e-5),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.points_per_dim < 21 || self.points_per_dim.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "points_per_dim must be odd and at least 21, got {}",
                self.points_per_dim
            )));
        }
        if !(self.half_width_sds >= T::lit(6.0)) {
            return Err(Error::InvalidArgument(format!(
                "half_width_sds must be at least 6, got {}",
                self.half_width_sds
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureResult<T> {
    pub log_evidence: T,
    /// Same integral on the nested half-resolution grid.
    pub coarse_log_evidence: T,
    pub posterior_mean: Vec<T>,
    pub nodes: usize,
}

/// `log m` by quadrature, with the nested-grid self-check enforced.
pub fn quadrature_log_evidence<T: Scalar, M: EvidenceModel<T>>(
    model: &M,
    spec: &QuadratureSpec<T>,
) -> Result<T> {
    Ok(quadrature(model, spec)?.log_evidence)
}

/// Posterior mean of θ by quadrature.
pub fn quadrature_posterior_mean<T: Scalar, M: EvidenceModel<T>>(
    model: &M,
    spec: &QuadratureSpec<T>,
) -> Result<Vec<T>> {
    Ok(quadrature(model, spec)?.posterior_mean)
}

pub fn quadrature<T: Scalar, M: EvidenceModel<T>>(
    model: &M,
    spec: &QuadratureSpec<T>,
) -> Result<QuadratureResult<T>> {
    spec.validate()?;
    let p = model.dim();
    if p == 0 || p > MAX_QUADRATURE_DIM {
        return Err(Error::UnsupportedDimension(p));
    }
    let whitening = match &spec.center {
        QuadratureCenter::Prior => model.prior(),
        QuadratureCenter::Gaussian(g) => g,
    };
    if whitening.dim() != p {
        return Err(Error::DimensionMismatch {
            expected: p,
            got: whitening.dim(),
        });
    }

    let n = spec.points_per_dim;
    let h = spec.half_width_sds;
    let step = T::lit(2.0) * h / T::from_usize_lossy(n - 1);
    let total = n.pow(p as u32);

    let node = |flat: usize| -> (Vec<usize>, Vec<T>) {
        let mut idx = vec![0; p];
        let mut rest = flat;
        for k in (0..p).rev() {
            idx[k] = rest % n;
            rest /= n;
        }
        let u: Vec<T> = idx
            .iter()
            .map(|&i| -h + step * T::from_usize_lossy(i))
            .collect();
        let mut theta = whitening.cov_factor().mul_lower(&u);
        for (t, &m) in theta.iter_mut().zip(whitening.mean()) {
            *t = *t + m;
        }
        (idx, theta)
    };

    let log_values = (0..total)
        .into_par_iter()
        .map(|flat| {
            let (_, theta) = node(flat);
            model.log_posterior_unnorm(&theta)
        })
        .collect::<Result<Vec<T>>>()?;

    let peak = log_values.iter().copied().fold(T::neg_infinity(), T::max);
    if !peak.is_finite() {
        return Err(Error::NonFinite("quadrature integrand"));
    }

    let trapezoid = |i: usize, last: usize| {
        if i == 0 || i == last {
            T::lit(0.5)
        } else {
            T::one()
        }
    };
    let mut fine = Vec::with_capacity(total);
    let mut coarse = Vec::with_capacity(total);
    let mut moments: Vec<Vec<T>> = vec![Vec::with_capacity(total); p];
    for (flat, &lv) in log_values.iter().enumerate() {
        let (idx, theta) = node(flat);
        let e = (lv - peak).exp();
        let w: T = idx
            .iter()
            .map(|&i| trapezoid(i, n - 1))
            .fold(T::one(), |a, b| a * b);
        fine.push(w * e);
        for (m, &t) in moments.iter_mut().zip(&theta) {
            m.push(w * e * t);
        }
        if idx.iter().all(|&i| i % 2 == 0) {
            let wc: T = idx
                .iter()
                .map(|&i| trapezoid(i / 2, (n - 1) / 2))
                .fold(T::one(), |a, b| a * b);
            coarse.push(wc * e);
        }
    }

    // θ = μ + L u, so dθ = |L| du.
    let log_jacobian = T::lit(0.5) * whitening.cov_factor().log_det();
    let p_t = T::from_usize_lossy(p);
    let fine_sum = pairwise_sum(&fine);
    let log_fine = peak + fine_sum.ln() + p_t * step.ln() + log_jacobian;
    let log_coarse =
        peak + pairwise_sum(&coarse).ln() + p_t * (T::lit(2.0) * step).ln() + log_jacobian;
    if !((log_fine - log_coarse).abs() <= spec.self_check_tol) {
        return Err(Error::QuadratureAccuracy {
            coarse: log_coarse.as_f64(),
            fine: log_fine.as_f64(),
        });
    }
    let posterior_mean = moments.iter().map(|m| pairwise_sum(m) / fine_sum).collect();
    Ok(QuadratureResult {
        log_evidence: log_fine,
        coarse_log_evidence: log_coarse,
        posterior_mean,
        nodes: total,
    })
}

/// Sum by recursive halving; the tree depends only on the length.
fn pairwise_sum<T: Scalar>(v: &[T]) -> T {
    const LEAF: usize = 32;
    if v.len() <= LEAF {
        return v.iter().fold(T::zero(), |a, &b| a + b);
    }
    let (l, r) = v.split_at(v.len() / 2);
    pairwise_sum(l) + pairwise_sum(r)
}
