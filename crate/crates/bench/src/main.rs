use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use probit_bf::estimators::AlphaWeights;
use probit_bf::{quadrature, QuadratureCenter, QuadratureSpec};
use probit_bf_bench::output::mle_out;
use probit_bf_bench::runner::Prepared;
use probit_bf_bench::{
    load_csv, parse_estimators, run_benchmark, run_replication, write_report, BenchConfig,
    BenchError, OutputFormat, Result,
};

#[derive(Parser)]
#[command(
    name = "bench",
    version,
    about = "Bayes factor estimators for nested probit models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Weights {
    /// α built from ½q1 + ½q0ω.
    Equal,
    /// Mixture weights proportional to the draw counts.
    Budget,
}

#[derive(clap::Args)]
struct ModelArgs {
    /// CSV with a `type` response column (Yes/No or 1/0).
    #[arg(long)]
    data: PathBuf,
    /// Covariates of the smaller model, comma-separated.
    #[arg(long, value_delimiter = ',', default_value = "glu,bp")]
    model0: Vec<String>,
    /// Covariates of the larger model; must extend model 0 by one trailing
    /// covariate for the bridge and pseudo-ratio estimators.
    #[arg(long, value_delimiter = ',', default_value = "glu,bp,ped")]
    model1: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Replicated comparison of the estimators.
    Run {
        #[command(flatten)]
        models: ModelArgs,
        /// Comma-separated list, or `all`.
        #[arg(long, value_delimiter = ',', default_value = "all")]
        estimators: Vec<String>,
        #[arg(long, default_value_t = 20_000)]
        n_sims: usize,
        #[arg(long, default_value_t = 100)]
        replications: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads. Results do not depend on it.
        #[arg(long, env = "BENCH_JOBS", default_value_t = 1)]
        jobs: usize,
        /// Omit wall times so that the output is reproducible byte for byte.
        #[arg(long)]
        no_timings: bool,
        #[arg(long, value_enum, default_value = "equal")]
        alpha_weights: Weights,
    },
    /// Maximum-likelihood fit of one model.
    Mle {
        #[command(flatten)]
        models: ModelArgs,
        /// Which model to fit.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(0..=1))]
        model: u8,
    },
    /// Quadrature reference for both evidences and the Bayes factor.
    Oracle {
        #[command(flatten)]
        models: ModelArgs,
    },
    /// One replication of one estimator, with diagnostics.
    Single {
        #[command(flatten)]
        models: ModelArgs,
        #[arg(long)]
        estimator: String,
        #[arg(long, default_value_t = 20_000)]
        n_sims: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        replication: usize,
    },
}

fn base_config(models: ModelArgs) -> BenchConfig {
    BenchConfig {
        data_path: models.data,
        model0: models.model0,
        model1: models.model1,
        ..BenchConfig::default()
    }
}

fn prepare(config: &BenchConfig) -> Result<Prepared> {
    let data = load_csv(&config.data_path, &config.covariates())?;
    Prepared::new(&data, config)
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Run {
            models,
            estimators,
            n_sims,
            replications,
            seed,
            format,
            out,
            jobs,
            no_timings,
            alpha_weights,
        } => {
            let config = BenchConfig {
                estimators: parse_estimators(&estimators)?,
                n_sims,
                replications,
                seed,
                jobs,
                timings: !no_timings,
                alpha_weights: match alpha_weights {
                    Weights::Equal => AlphaWeights::Equal,
                    Weights::Budget => AlphaWeights::BudgetProportional,
                },
                ..base_config(models)
            };
            let report = run_benchmark(&config)?;
            let format = match format {
                Format::Json => OutputFormat::Json,
                Format::Csv => OutputFormat::Csv,
            };
            match out {
                Some(path) => {
                    let mut w = BufWriter::new(File::create(path)?);
                    write_report(&report, format, &mut w)?;
                    w.flush()?;
                }
                None => write_report(&report, format, io::stdout().lock())?,
            }
            for (id, runs) in &report.results {
                if runs.nonconverged > 0 {
                    eprintln!(
                        "warning: {id}: fixed point not reached in {} replications",
                        runs.nonconverged
                    );
                }
                if runs.heavy_tail_warnings > 0 {
                    eprintln!(
                        "warning: {id}: heavy-tailed weights in {} replications",
                        runs.heavy_tail_warnings
                    );
                }
            }
        }
        Command::Mle { models, model } => {
            let config = base_config(models);
            config.validate()?;
            let prep = prepare(&config)?;
            let (cols, fit) = if model == 0 {
                (&config.model0, &prep.fit0)
            } else {
                (&config.model1, &prep.fit1)
            };
            serde_json::to_writer_pretty(io::stdout().lock(), &mle_out(cols, fit))?;
            println!();
        }
        Command::Oracle { models } => {
            let config = base_config(models);
            let prep = prepare(&config)?;
            let mut logs = [0.0; 2];
            for (k, (model, gauss)) in [(&prep.model0, &prep.gauss0), (&prep.model1, &prep.gauss1)]
                .into_iter()
                .enumerate()
            {
                let spec = QuadratureSpec::new(QuadratureCenter::Gaussian(gauss.clone()));
                let r = quadrature(model, &spec).map_err(BenchError::numerical)?;
                println!(
                    "log m{k} = {:.9}  (coarse grid {:.9}, {} nodes)",
                    r.log_evidence, r.coarse_log_evidence, r.nodes
                );
                logs[k] = r.log_evidence;
            }
            println!("log B01 = {:.9}", logs[0] - logs[1]);
            println!("B01 = {:.9}", (logs[0] - logs[1]).exp());
        }
        Command::Single {
            models,
            estimator,
            n_sims,
            seed,
            replication,
        } => {
            let config = BenchConfig {
                estimators: vec![estimator.parse()?],
                n_sims,
                replications: replication + 1,
                seed,
                ..base_config(models)
            };
            config.validate()?;
            let prep = prepare(&config)?;
            for (k, fit) in [&prep.fit0, &prep.fit1].into_iter().enumerate() {
                eprintln!(
                    "model {k}: theta_hat = {:?}, se = {:?}",
                    fit.theta_hat,
                    fit.std_errors()
                );
            }
            let start = Instant::now();
            let out = run_replication(&prep, &config, replication)?;
            for (id, o) in out {
                println!("estimator    {id}");
                println!("replication  {replication}");
                println!("log B01      {:.9}", o.log_b01);
                println!("B01          {:.9}", o.log_b01.exp());
                println!("wall time    {:.3} s", o.wall_time);
                if !o.converged {
                    println!("warning      fixed point not reached");
                }
                if o.heavy_tail {
                    println!("warning      heavy-tailed weights");
                }
            }
            eprintln!("total {:.3} s", start.elapsed().as_secs_f64());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
