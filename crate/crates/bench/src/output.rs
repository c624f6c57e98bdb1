use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use crate::config::{EstimatorId, OutputFormat};
use crate::error::Result;
use crate::runner::{BenchReport, EstimatorRuns};

#[derive(Debug, Serialize)]
struct ConfigOut<'a> {
    data: String,
    n_obs: usize,
    estimators: &'a [EstimatorId],
    n_sims: usize,
    replications: usize,
    seed: u64,
    model0: &'a [String],
    model1: &'a [String],
    alpha_weights: &'static str,
}

#[derive(Debug, Serialize)]
pub struct MleOut {
    pub covariates: Vec<String>,
    pub theta_hat: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub deviance: f64,
    pub iterations: usize,
}

#[derive(Debug, Serialize)]
struct EstimatorOut<'a> {
    median: f64,
    sd: f64,
    /// `None` when timings are disabled.
    wall_time_mean_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nonconverged: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    heavy_tail_warnings: Option<usize>,
    estimates: &'a [f64],
}

#[derive(Debug, Serialize)]
struct ReportOut<'a> {
    config: ConfigOut<'a>,
    mle: BTreeMap<&'static str, MleOut>,
    estimators: BTreeMap<&'static str, EstimatorOut<'a>>,
}

pub fn mle_out(covariates: &[String], fit: &probit_bf::Fit) -> MleOut {
    MleOut {
        covariates: covariates.to_vec(),
        theta_hat: fit.theta_hat.clone(),
        std_errors: fit.std_errors(),
        deviance: fit.deviance(),
        iterations: fit.iterations,
    }
}

fn estimator_out(id: EstimatorId, runs: &EstimatorRuns, timings: bool) -> EstimatorOut<'_> {
    let s = runs.summary();
    EstimatorOut {
        median: s.median,
        sd: s.sd,
        wall_time_mean_s: timings.then(|| runs.mean_wall_time()),
        nonconverged: (id == EstimatorId::BridgeOpt).then_some(runs.nonconverged),
        heavy_tail_warnings: (id == EstimatorId::Harmonic).then_some(runs.heavy_tail_warnings),
        estimates: &runs.estimates,
    }
}

pub fn write_json<W: Write>(report: &BenchReport, mut out: W) -> Result<()> {
    let c = &report.config;
    let doc = ReportOut {
        config: ConfigOut {
            data: c.data_path.display().to_string(),
            n_obs: report.n_obs,
            estimators: &c.estimators,
            n_sims: c.n_sims,
            replications: c.replications,
            seed: c.seed,
            model0: &c.model0,
            model1: &c.model1,
            alpha_weights: match c.alpha_weights {
                probit_bf::estimators::AlphaWeights::Equal => "equal",
                probit_bf::estimators::AlphaWeights::BudgetProportional => "budget",
            },
        },
        mle: BTreeMap::from([
            ("model0", mle_out(&c.model0, &report.prepared.fit0)),
            ("model1", mle_out(&c.model1, &report.prepared.fit1)),
        ]),
        estimators: report
            .results
            .iter()
            .map(|(&id, runs)| (id.name(), estimator_out(id, runs, c.timings)))
            .collect(),
    };
    serde_json::to_writer_pretty(&mut out, &doc)?;
    writeln!(out)?;
    Ok(())
}

/// One row per estimator and replication. `wall_time_s` is empty when
/// timings are disabled.
pub fn write_csv<W: Write>(report: &BenchReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["estimator", "replication", "b01", "log_b01", "wall_time_s"])?;
    for (id, runs) in &report.results {
        for (r, ((b, lb), t)) in runs
            .estimates
            .iter()
            .zip(&runs.log_estimates)
            .zip(&runs.wall_times)
            .enumerate()
        {
            let time = if report.config.timings {
                t.to_string()
            } else {
                String::new()
            };
            w.write_record([
                id.name().to_string(),
                r.to_string(),
                b.to_string(),
                lb.to_string(),
                time,
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_report<W: Write>(report: &BenchReport, format: OutputFormat, out: W) -> Result<()> {
    match format {
        OutputFormat::Json => write_json(report, out),
        OutputFormat::Csv => write_csv(report, out),
    }
}
