//! Albert–Chib data-augmentation Gibbs sampling and the Rao–Blackwell
//! posterior density estimate built from it.
//!
//! One cycle draws latent utilities `zᵢ ~ N(xᵢᵀθ, 1)` truncated to the side
//! of zero given by `yᵢ`, then `θ | z ~ N(s (XᵀX)⁻¹Xᵀz, s (XᵀX)⁻¹)` with
//! `s = g/(g+1)`. When a θ* is registered, the full-conditional log-density
//! at θ* is cached each iteration so Chib's estimate never has to store the
//! latents themselves.

use std::io::Write;
use std::ops::Range;

use rand::Rng;

use crate::error::{Error, Result};
use crate::kernels::{log_mean_exp, truncated_normal_sample, Side};
use crate::linalg::{dot, SpdFactor};
use crate::mle::fit_mle;
use crate::model::{EvidenceModel, ProbitModel};
use crate::rng::RngStream;
use crate::scalar::Scalar;

/// Gaussian full conditional of θ given the latent block.
#[derive(Debug, Clone)]
pub struct FullConditional<'a, T> {
    pub mean: Vec<T>,
    pub cov_factor: &'a SpdFactor<T>,
}

impl<T: Scalar> FullConditional<'_, T> {
    pub fn logpdf(&self, x: &[T]) -> T {
        let mut w: Vec<T> = x.iter().zip(&self.mean).map(|(&a, &b)| a - b).collect();
        self.cov_factor.solve_lower_in_place(&mut w);
        let d = T::from_usize_lossy(self.mean.len());
        -T::lit(0.5) * (d * T::TAU().ln() + self.cov_factor.log_det() + dot(&w, &w))
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<T> {
        let eps: Vec<T> = (0..self.mean.len())
            .map(|_| crate::kernels::std_normal_draw(rng))
            .collect();
        let mut x = self.cov_factor.mul_lower(&eps);
        for (xi, &m) in x.iter_mut().zip(&self.mean) {
            *xi = *xi + m;
        }
        x
    }
}

/// A model whose posterior can be explored by a two-block Gibbs sampler
/// with a closed-form (normalized) θ full conditional.
pub trait LatentGibbs<T: Scalar>: EvidenceModel<T> {
    /// Default starting point of a chain.
    fn gibbs_start(&self) -> Result<Vec<T>>;

    /// Draw the latent block given θ and return the θ full conditional it
    /// induces.
    fn latent_step<R: Rng + ?Sized>(&self, theta: &[T], rng: &mut R) -> FullConditional<'_, T>;
}

/// Latent utilities given θ: `N₊(xᵢᵀθ, 1, 0)` when `yᵢ = 1`, `N₋` otherwise.
pub fn sample_latents<T: Scalar, R: Rng + ?Sized>(
    model: &ProbitModel<T>,
    theta: &[T],
    rng: &mut R,
) -> Result<Vec<T>> {
    if theta.len() != model.p() {
        return Err(Error::DimensionMismatch {
            expected: model.p(),
            got: theta.len(),
        });
    }
    let x = model.design();
    Ok(model
        .y()
        .iter()
        .enumerate()
        .map(|(i, &yi)| {
            let side = if yi {
                Side::RightOfZero
            } else {
                Side::LeftOfZero
            };
            truncated_normal_sample(dot(x.row(i), theta), T::one(), side, rng)
        })
        .collect())
}

/// `θ | z ~ N(s (XᵀX)⁻¹Xᵀz, s (XᵀX)⁻¹)`, `s = g/(g+1)`.
pub fn theta_full_conditional<'a, T: Scalar>(
    model: &'a ProbitModel<T>,
    z: &[T],
) -> Result<FullConditional<'a, T>> {
    let xtz = model.design().transpose_matvec(z)?;
    Ok(conditional_from_xtz(model, xtz))
}

fn conditional_from_xtz<T: Scalar>(model: &ProbitModel<T>, xtz: Vec<T>) -> FullConditional<'_, T> {
    let shrink = model.g() / (model.g() + T::one());
    let mut mean = xtz;
    model.gram_factor().solve_lower_in_place(&mut mean);
    model.gram_factor().solve_upper_in_place(&mut mean);
    mean.iter_mut().for_each(|m| *m = *m * shrink);
    FullConditional {
        mean,
        cov_factor: model.conditional_cov(),
    }
}

impl<T: Scalar> LatentGibbs<T> for ProbitModel<T> {
    fn gibbs_start(&self) -> Result<Vec<T>> {
        Ok(fit_mle(self)?.theta_hat)
    }

    fn latent_step<R: Rng + ?Sized>(&self, theta: &[T], rng: &mut R) -> FullConditional<'_, T> {
        let x = self.design();
        let mut xtz = vec![T::zero(); self.p()];
        for (i, &yi) in self.y().iter().enumerate() {
            let row = x.row(i);
            let side = if yi {
                Side::RightOfZero
            } else {
                Side::LeftOfZero
            };
            let z = truncated_normal_sample(dot(row, theta), T::one(), side, rng);
            assert!(
                (z > T::zero()) == yi,
                "latent sign violates response at row {i}"
            );
            for (acc, &xv) in xtz.iter_mut().zip(row) {
                *acc = *acc + xv * z;
            }
        }
        conditional_from_xtz(self, xtz)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainMeta<T> {
    pub master_seed: u64,
    pub stream_id: u64,
    pub start: Vec<T>,
    pub theta_star: Option<Vec<T>>,
    pub model_fingerprint: u64,
}

/// Stored Gibbs draws of θ, plus the cached full-conditional log-densities
/// at θ* when one was registered.
#[derive(Debug, Clone, PartialEq)]
pub struct Chain<T> {
    dim: usize,
    draws: Vec<T>,
    rb_logdensities: Option<Vec<T>>,
    meta: ChainMeta<T>,
}

impl<T: Scalar> Chain<T> {
    pub fn len(&self) -> usize {
        self.draws.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.draws.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn draw(&self, t: usize) -> &[T] {
        &self.draws[t * self.dim..(t + 1) * self.dim]
    }

    pub fn draws(&self) -> impl ExactSizeIterator<Item = &[T]> + '_ {
        self.draws.chunks_exact(self.dim)
    }

    pub fn rb_logdensities(&self) -> Option<&[T]> {
        self.rb_logdensities.as_deref()
    }

    pub fn meta(&self) -> &ChainMeta<T> {
        &self.meta
    }

    pub fn mean(&self) -> Vec<T> {
        let mut m = vec![T::zero(); self.dim];
        for d in self.draws() {
            for (a, &b) in m.iter_mut().zip(d) {
                *a = *a + b;
            }
        }
        let n = T::from_usize_lossy(self.len());
        m.iter_mut().for_each(|a| *a = *a / n);
        m
    }

    /// The sub-chain of iterations in `range`, for batch-means SEs.
    pub fn slice(&self, range: Range<usize>) -> Self {
        let draws = self.draws[range.start * self.dim..range.end * self.dim].to_vec();
        let rb = self.rb_logdensities.as_ref().map(|v| v[range].to_vec());
        Self {
            dim: self.dim,
            draws,
            rb_logdensities: rb,
            meta: self.meta.clone(),
        }
    }

    /// Plain-text dump: header `iter,theta_1,...,theta_p`, one row per draw.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let header: Vec<String> = (1..=self.dim).map(|j| format!("theta_{j}")).collect();
        writeln!(out, "iter,{}", header.join(","))?;
        for (t, d) in self.draws().enumerate() {
            let cells: Vec<String> = d.iter().map(|v| format!("{v:e}")).collect();
            writeln!(out, "{},{}", t + 1, cells.join(","))?;
        }
        Ok(())
    }
}

/// Run `iterations` Gibbs cycles from the model's default start (the MLE
/// for a probit model). No burn-in is discarded.
pub fn gibbs_run<T: Scalar, M: LatentGibbs<T>>(
    model: &M,
    iterations: usize,
    rng: &mut RngStream,
    theta_star: Option<&[T]>,
) -> Result<Chain<T>> {
    let start = model.gibbs_start()?;
    gibbs_run_from(model, start, iterations, rng, theta_star)
}

pub fn gibbs_run_from<T: Scalar, M: LatentGibbs<T>>(
    model: &M,
    start: Vec<T>,
    iterations: usize,
    rng: &mut RngStream,
    theta_star: Option<&[T]>,
) -> Result<Chain<T>> {
    let p = model.dim();
    if iterations == 0 {
        return Err(Error::InvalidArgument(
            "a chain needs at least one iteration".into(),
        ));
    }
    if start.len() != p {
        return Err(Error::DimensionMismatch {
            expected: p,
            got: start.len(),
        });
    }
    if let Some(ts) = theta_star {
        if ts.len() != p {
            return Err(Error::DimensionMismatch {
                expected: p,
                got: ts.len(),
            });
        }
    }
    let meta = ChainMeta {
        master_seed: rng.master_seed(),
        stream_id: rng.stream_id(),
        start: start.clone(),
        theta_star: theta_star.map(<[T]>::to_vec),
        model_fingerprint: model.fingerprint(),
    };
    let mut draws = Vec::with_capacity(iterations * p);
    let mut rb = theta_star.map(|_| Vec::with_capacity(iterations));
    let mut theta = start;
    for _ in 0..iterations {
        let fc = model.latent_step(&theta, rng);
        if let (Some(cache), Some(ts)) = (rb.as_mut(), theta_star) {
            cache.push(fc.logpdf(ts));
        }
        theta = fc.sample(rng);
        draws.extend_from_slice(&theta);
    }
    Ok(Chain {
        dim: p,
        draws,
        rb_logdensities: rb,
        meta,
    })
}

/// `log((1/T) Σₜ π(θ* | y, z⁽ᵗ⁾))`.
pub fn rao_blackwell_logdensity<T: Scalar>(chain: &Chain<T>) -> Result<T> {
    let cache = chain.rb_logdensities().ok_or(Error::MissingRbCache)?;
    log_mean_exp(cache)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::model::Dataset;

    fn model() -> ProbitModel<f64> {
        let d = Dataset::new(
            vec![1, 0, 1, 1, 0, 0, 1, 0],
            vec![
                ("a".into(), vec![0.5, -1.0, 1.5, -0.2, 0.3, -0.7, 0.9, 1.1]),
                ("b".into(), vec![1.0, 0.4, -0.3, 0.8, -1.1, 0.2, -0.5, 0.6]),
            ],
        )
        .unwrap();
        ProbitModel::new(&d, &["a", "b"]).unwrap()
    }

    #[test]
    fn zero_latents_give_zero_mean() {
        let m = model();
        let fc = theta_full_conditional(&m, &[0.0; 8]).unwrap();
        assert_eq!(fc.mean, vec![0.0, 0.0]);
    }

    #[test]
    fn ones_design_scalar_algebra() {
        let n = 7;
        let g = 3.0;
        let x = Matrix::from_row_major(n, 1, vec![1.0; n]).unwrap();
        let y = vec![true, false, true, true, false, true, false];
        let m = ProbitModel::from_design(x, y, g).unwrap();
        let z = [0.3, -1.2, 2.0, 0.1, -0.4, 0.9, -0.05];
        let zbar = z.iter().sum::<f64>() / n as f64;
        let fc = theta_full_conditional(&m, &z).unwrap();
        assert!((fc.mean[0] - g / (g + 1.0) * zbar).abs() < 1e-14);
        let var = fc.cov_factor.reconstruct()[(0, 0)];
        assert!((var - g / (g + 1.0) / n as f64).abs() < 1e-15);
    }

    #[test]
    fn latent_signs_follow_responses() {
        let m = model();
        let mut rng = RngStream::new(1, 1);
        for _ in 0..200 {
            let z = sample_latents(&m, &[3.0, -2.0], &mut rng).unwrap();
            assert!(z.iter().zip(m.y()).all(|(&zi, &yi)| (zi > 0.0) == yi));
            assert!(m
                .completed_log_likelihood(&[3.0, -2.0], &z)
                .unwrap()
                .is_finite());
        }
    }

    #[test]
    fn chain_is_reproducible_and_carries_meta() {
        let m = model();
        let star = [0.2, 0.1];
        let a = gibbs_run(&m, 50, &mut RngStream::new(9, 3), Some(&star)).unwrap();
        let b = gibbs_run(&m, 50, &mut RngStream::new(9, 3), Some(&star)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 50);
        assert_eq!(a.meta().start, fit_mle(&m).unwrap().theta_hat);
        assert_eq!(a.meta().stream_id, 3);
        let c = gibbs_run(&m, 50, &mut RngStream::new(9, 4), Some(&star)).unwrap();
        assert_ne!(a.draw(0), c.draw(0));
    }

    #[test]
    fn rb_with_single_iteration_is_the_cached_value() {
        let m = model();
        let chain = gibbs_run(&m, 1, &mut RngStream::new(2, 2), Some(&[0.0, 0.0])).unwrap();
        let v = rao_blackwell_logdensity(&chain).unwrap();
        assert_eq!(v, chain.rb_logdensities().unwrap()[0]);
        let plain = gibbs_run(&m, 1, &mut RngStream::new(2, 2), None).unwrap();
        assert_eq!(rao_blackwell_logdensity(&plain), Err(Error::MissingRbCache));
    }

    #[test]
    fn chain_dump_format() {
        let m = model();
        let chain = gibbs_run(&m, 3, &mut RngStream::new(2, 2), None).unwrap();
        let mut buf = Vec::new();
        chain.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "iter,theta_1,theta_2");
        assert_eq!(lines.len(), 4);
        let vals: Vec<f64> = lines[1]
            .split(',')
            .skip(1)
            .map(|s| s.parse().unwrap())
            .collect();
        assert_eq!(vals, chain.draw(0));
        assert!(lines[3].starts_with("3,"));
    }

    #[test]
    fn slicing_preserves_rb_cache() {
        let m = model();
        let chain = gibbs_run(&m, 20, &mut RngStream::new(2, 2), Some(&[0.0, 0.0])).unwrap();
        let s = chain.slice(5..10);
        assert_eq!(s.len(), 5);
        assert_eq!(s.draw(0), chain.draw(5));
        assert_eq!(
            s.rb_logdensities().unwrap(),
            &chain.rb_logdensities().unwrap()[5..10]
        );
    }
}
