//! Replicated benchmark: every replication derives its own random streams
//! from `(seed, replication, estimator, model)`, so results do not depend on
//! how replications are scheduled.

use std::collections::BTreeMap;
use std::time::Instant;

use probit_bf::estimators::{
    bridge_extended_bf, chib_evidence, crude_mc_evidence, harmonic_evidence, importance_evidence,
    make_paper_alpha_weighted, optimal_alpha_bridge_bf, pseudo_prior_ratio_bf, AlphaChoice,
    OptimalBridgeOptions,
};
use probit_bf::{
    asymptotic_gaussian, conditional_gaussian, fit_mle, gibbs_run, Conditional, Data, Fit,
    Gaussian, Probit, ProbitChain, RngStream, StreamKey, StreamRole,
};
use rayon::prelude::*;

use crate::config::{BenchConfig, EstimatorId};
use crate::data::load_csv;
use crate::error::{BenchError, Result};

type Num<T> = std::result::Result<T, probit_bf::Error>;

/// Both models with their fits and the Gaussians built from them.
pub struct Prepared {
    pub model0: Probit,
    pub model1: Probit,
    pub fit0: Fit,
    pub fit1: Fit,
    pub gauss0: Gaussian,
    pub gauss1: Gaussian,
    /// Pseudo-posterior of model 1's last coefficient; present when the
    /// models are embedded.
    pub omega: Option<Conditional>,
}

fn cols(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

impl Prepared {
    pub fn new(data: &Data, config: &BenchConfig) -> Result<Self> {
        let model0 = Probit::new(data, &cols(&config.model0)).map_err(BenchError::Data)?;
        let model1 = Probit::new(data, &cols(&config.model1)).map_err(BenchError::Data)?;
        let fit0 = fit_mle(&model0).map_err(BenchError::numerical)?;
        let fit1 = fit_mle(&model1).map_err(BenchError::numerical)?;
        let gauss0 = asymptotic_gaussian(&fit0).map_err(BenchError::numerical)?;
        let gauss1 = asymptotic_gaussian(&fit1).map_err(BenchError::numerical)?;
        let omega = if model1.p() == model0.p() + 1 {
            Some(conditional_gaussian(&gauss1, model1.p() - 1).map_err(BenchError::numerical)?)
        } else {
            None
        };
        Ok(Self {
            model0,
            model1,
            fit0,
            fit1,
            gauss0,
            gauss1,
            omega,
        })
    }

    fn omega(&self) -> Num<&Conditional> {
        self.omega.as_ref().ok_or_else(|| {
            probit_bf::Error::NotEmbedded(
                "model 1 does not extend model 0 by one coefficient".into(),
            )
        })
    }
}

/// One estimator's result in one replication.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub log_b01: f64,
    /// Seconds, including the shared chain generation for chain-based
    /// estimators. Zero when timings are disabled.
    pub wall_time: f64,
    /// False only for a bridge fixed point that ran out of iterations.
    pub converged: bool,
    /// Harmonic mean: a heavy-tail symptom on either model.
    pub heavy_tail: bool,
}

/// Replication `r` of every configured estimator.
pub fn run_replication(
    prep: &Prepared,
    config: &BenchConfig,
    r: usize,
) -> Result<BTreeMap<EstimatorId, Outcome>> {
    replication(prep, config, r).map_err(|e| BenchError::numerical(e).in_replication(r))
}

fn replication(
    prep: &Prepared,
    config: &BenchConfig,
    r: usize,
) -> Num<BTreeMap<EstimatorId, Outcome>> {
    let n = config.n_sims;
    let stream =
        |role, model| RngStream::for_key(config.seed, StreamKey::new(r as u64, role, model));
    let timed = |f: &mut dyn FnMut() -> Num<Outcome>| -> Num<Outcome> {
        let start = Instant::now();
        let mut out = f()?;
        out.wall_time = start.elapsed().as_secs_f64();
        Ok(out)
    };
    let plain = |log_b01| Outcome {
        log_b01,
        wall_time: 0.0,
        converged: true,
        heavy_tail: false,
    };

    let (chains, chain_time) = if config.estimators.iter().any(|e| e.needs_chains()) {
        let start = Instant::now();
        let c0 = gibbs_run(
            &prep.model0,
            n,
            &mut stream(StreamRole::Gibbs, 0),
            Some(&prep.fit0.theta_hat),
        )?;
        let c1 = gibbs_run(
            &prep.model1,
            n,
            &mut stream(StreamRole::Gibbs, 1),
            Some(&prep.fit1.theta_hat),
        )?;
        (Some((c0, c1)), start.elapsed().as_secs_f64())
    } else {
        (None, 0.0)
    };
    let chains = || -> &(ProbitChain, ProbitChain) {
        chains
            .as_ref()
            .expect("chains generated for chain-based estimators")
    };

    let mut results = BTreeMap::new();
    for &est in &config.estimators {
        let mut outcome = match est {
            EstimatorId::Mc => timed(&mut || {
                let m0 = crude_mc_evidence(&prep.model0, n, &mut stream(StreamRole::CrudeMc, 0))?;
                let m1 = crude_mc_evidence(&prep.model1, n, &mut stream(StreamRole::CrudeMc, 1))?;
                Ok(plain(m0.value - m1.value))
            }),
            EstimatorId::Is => timed(&mut || {
                let m0 = importance_evidence(
                    &prep.model0,
                    &prep.gauss0,
                    n,
                    &mut stream(StreamRole::Importance, 0),
                )?;
                let m1 = importance_evidence(
                    &prep.model1,
                    &prep.gauss1,
                    n,
                    &mut stream(StreamRole::Importance, 1),
                )?;
                Ok(plain(m0.value - m1.value))
            }),
            EstimatorId::Harmonic => timed(&mut || {
                let (c0, c1) = chains();
                let m0 = harmonic_evidence(&prep.model0, c0, &prep.gauss0)?;
                let m1 = harmonic_evidence(&prep.model1, c1, &prep.gauss1)?;
                Ok(Outcome {
                    heavy_tail: m0.heavy_tail_warning() || m1.heavy_tail_warning(),
                    ..plain(m0.value - m1.value)
                })
            }),
            EstimatorId::Chib => timed(&mut || {
                let (c0, c1) = chains();
                Ok(plain(
                    chib_evidence(&prep.model0, c0)?.value - chib_evidence(&prep.model1, c1)?.value,
                ))
            }),
            EstimatorId::Bridge => timed(&mut || {
                let (c0, c1) = chains();
                let omega = prep.omega()?;
                let alpha: AlphaChoice<f64> = make_paper_alpha_weighted(
                    &prep.gauss0,
                    &prep.gauss1,
                    omega,
                    config.alpha_weights,
                )?;
                let est = bridge_extended_bf(
                    &prep.model0,
                    &prep.model1,
                    omega,
                    c0,
                    c1,
                    &alpha,
                    &mut stream(StreamRole::Bridge, 0),
                )?;
                Ok(plain(est.log_b01))
            }),
            EstimatorId::BridgeOpt => timed(&mut || {
                let (c0, c1) = chains();
                let est = optimal_alpha_bridge_bf(
                    &prep.model0,
                    &prep.model1,
                    prep.omega()?,
                    c0,
                    c1,
                    OptimalBridgeOptions::default(),
                    &mut stream(StreamRole::BridgeOptimal, 0),
                )?;
                Ok(Outcome {
                    converged: est.converged,
                    ..plain(est.log_b01)
                })
            }),
            EstimatorId::PseudoRatio => timed(&mut || {
                let (c0, _) = chains();
                let est = pseudo_prior_ratio_bf(
                    &prep.model0,
                    &prep.model1,
                    prep.omega()?,
                    c0,
                    &mut stream(StreamRole::PseudoRatio, 0),
                )?;
                Ok(plain(est.log_b01))
            }),
        }?;
        if est.needs_chains() {
            outcome.wall_time += chain_time;
        }
        if !config.timings {
            outcome.wall_time = 0.0;
        }
        if !outcome.log_b01.is_finite() {
            return Err(probit_bf::Error::NonFinite("Bayes factor estimate"));
        }
        results.insert(est, outcome);
    }
    Ok(results)
}

/// Median and sample standard deviation (N − 1 divisor).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub median: f64,
    pub sd: f64,
}

pub fn summarize(values: &[f64]) -> Summary {
    let n = values.len();
    if n == 0 {
        return Summary {
            median: f64::NAN,
            sd: f64::NAN,
        };
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    };
    let sd = if n < 2 {
        0.0
    } else {
        let mean = values.iter().sum::<f64>() / n as f64;
        (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64).sqrt()
    };
    Summary { median, sd }
}

/// Per-estimator results across replications, in replication order.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorRuns {
    /// `B01` per replication.
    pub estimates: Vec<f64>,
    pub log_estimates: Vec<f64>,
    pub wall_times: Vec<f64>,
    pub nonconverged: usize,
    pub heavy_tail_warnings: usize,
}

impl EstimatorRuns {
    pub fn summary(&self) -> Summary {
        summarize(&self.estimates)
    }

    pub fn mean_wall_time(&self) -> f64 {
        self.wall_times.iter().sum::<f64>() / self.wall_times.len() as f64
    }
}

pub struct BenchReport {
    pub config: BenchConfig,
    pub prepared: Prepared,
    pub n_obs: usize,
    pub results: BTreeMap<EstimatorId, EstimatorRuns>,
}

/// Load the data named in the config and run all replications.
pub fn run_benchmark(config: &BenchConfig) -> Result<BenchReport> {
    config.validate()?;
    let data = load_csv(&config.data_path, &config.covariates())?;
    run_benchmark_on(&data, config)
}

pub fn run_benchmark_on(data: &Data, config: &BenchConfig) -> Result<BenchReport> {
    config.validate()?;
    let prepared = Prepared::new(data, config)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| BenchError::Config(format!("cannot start {} workers: {e}", config.jobs)))?;
    let per_rep: Vec<Result<BTreeMap<EstimatorId, Outcome>>> = pool.install(|| {
        (0..config.replications)
            .into_par_iter()
            .map(|r| run_replication(&prepared, config, r))
            .collect()
    });

    let mut results: BTreeMap<EstimatorId, EstimatorRuns> = BTreeMap::new();
    for rep in per_rep {
        for (est, out) in rep? {
            let runs = results.entry(est).or_insert_with(|| EstimatorRuns {
                estimates: Vec::new(),
                log_estimates: Vec::new(),
                wall_times: Vec::new(),
                nonconverged: 0,
                heavy_tail_warnings: 0,
            });
            runs.estimates.push(out.log_b01.exp());
            runs.log_estimates.push(out.log_b01);
            runs.wall_times.push(out.wall_time);
            runs.nonconverged += usize::from(!out.converged);
            runs.heavy_tail_warnings += usize::from(out.heavy_tail);
        }
    }
    Ok(BenchReport {
        config: config.clone(),
        prepared,
        n_obs: data.n(),
        results,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_statistics() {
        let s = summarize(&[3.0, 1.0, 2.0]);
        assert_eq!(
            s,
            Summary {
                median: 2.0,
                sd: 1.0
            }
        );
        let s = summarize(&[4.0, 1.0, 2.0, 3.0]);
        assert_eq!(s.median, 2.5);
        assert!((s.sd - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(summarize(&[7.0]).sd, 0.0);
    }
}
