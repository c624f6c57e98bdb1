use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use probit_bf::estimators::AlphaWeights;
use serde::Serialize;

use crate::error::{BenchError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorId {
    Mc,
    Is,
    Bridge,
    BridgeOpt,
    Harmonic,
    Chib,
    PseudoRatio,
}

impl EstimatorId {
    pub const ALL: [EstimatorId; 7] = [
        EstimatorId::Mc,
        EstimatorId::Is,
        EstimatorId::Bridge,
        EstimatorId::BridgeOpt,
        EstimatorId::Harmonic,
        EstimatorId::Chib,
        EstimatorId::PseudoRatio,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EstimatorId::Mc => "mc",
            EstimatorId::Is => "is",
            EstimatorId::Bridge => "bridge",
            EstimatorId::BridgeOpt => "bridge_opt",
            EstimatorId::Harmonic => "harmonic",
            EstimatorId::Chib => "chib",
            EstimatorId::PseudoRatio => "pseudo_ratio",
        }
    }

    /// Consumes Gibbs chains.
    pub fn needs_chains(self) -> bool {
        !matches!(self, EstimatorId::Mc | EstimatorId::Is)
    }

    /// Requires model 0 to be model 1 without its last covariate.
    pub fn needs_embedding(self) -> bool {
        matches!(
            self,
            EstimatorId::Bridge | EstimatorId::BridgeOpt | EstimatorId::PseudoRatio
        )
    }
}

impl fmt::Display for EstimatorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EstimatorId {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| BenchError::Config(format!("unknown estimator `{s}`")))
    }
}

/// Expand a comma-separated list that may contain `all`; sorted, no repeats.
pub fn parse_estimators(items: &[String]) -> Result<Vec<EstimatorId>> {
    let mut out = Vec::new();
    for item in items
        .iter()
        .flat_map(|s| s.split(','))
        .map(str::trim)
        .filter(|s| !s.is_empty())
    {
        if item == "all" {
            out.extend(EstimatorId::ALL);
        } else {
            out.push(item.parse()?);
        }
    }
    out.sort();
    out.dedup();
    if out.is_empty() {
        return Err(BenchError::Config("no estimators selected".into()));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(BenchError::Config(format!(
                "unknown output format `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub data_path: PathBuf,
    pub estimators: Vec<EstimatorId>,
    /// Draws per model and replication.
    pub n_sims: usize,
    pub replications: usize,
    pub seed: u64,
    pub model0: Vec<String>,
    pub model1: Vec<String>,
    pub alpha_weights: AlphaWeights,
    /// Worker threads; never affects the results.
    pub jobs: usize,
    /// Record wall times. Without them the output is a pure function of the
    /// configuration.
    pub timings: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            data_path: PathBuf::new(),
            estimators: EstimatorId::ALL.to_vec(),
            n_sims: 20_000,
            replications: 100,
            seed: 42,
            model0: vec!["glu".into(), "bp".into()],
            model1: vec!["glu".into(), "bp".into(), "ped".into()],
            alpha_weights: AlphaWeights::Equal,
            jobs: 1,
            timings: true,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_sims < 100 {
            return Err(BenchError::Config(format!(
                "n_sims must be at least 100, got {}",
                self.n_sims
            )));
        }
        if self.replications == 0 {
            return Err(BenchError::Config("replications must be at least 1".into()));
        }
        if self.jobs == 0 {
            return Err(BenchError::Config("jobs must be at least 1".into()));
        }
        if self.estimators.is_empty() {
            return Err(BenchError::Config("no estimators selected".into()));
        }
        if self.model0.is_empty() || self.model1.is_empty() {
            return Err(BenchError::Config(
                "both models need at least one covariate".into(),
            ));
        }
        let embedded = self.model1.len() == self.model0.len() + 1
            && self.model1[..self.model0.len()] == self.model0[..];
        if !embedded {
            if let Some(e) = self.estimators.iter().find(|e| e.needs_embedding()) {
                return Err(BenchError::Config(format!(
                    "`{e}` needs model 1 to be model 0 plus one trailing covariate ({:?} vs {:?})",
                    self.model0, self.model1
                )));
            }
        }
        Ok(())
    }

    /// Union of both models' covariates, model-1 order first.
    pub fn covariates(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for c in self.model1.iter().chain(&self.model0) {
            if !out.contains(&c.as_str()) {
                out.push(c);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn estimator_lists() {
        let all = parse_estimators(&["all".into()]).unwrap();
        assert_eq!(all, EstimatorId::ALL.to_vec());
        let some = parse_estimators(&["chib,is".into(), "is".into()]).unwrap();
        assert_eq!(some, vec![EstimatorId::Is, EstimatorId::Chib]);
        assert!(parse_estimators(&["nope".into()]).is_err());
        assert!(parse_estimators(&[]).is_err());
    }

    #[test]
    fn validation() {
        let ok = BenchConfig::default();
        assert!(ok.validate().is_ok());
        assert!(BenchConfig {
            n_sims: 99,
            ..ok.clone()
        }
        .validate()
        .is_err());
        assert!(BenchConfig {
            replications: 0,
            ..ok.clone()
        }
        .validate()
        .is_err());
        let swapped = BenchConfig {
            model0: vec!["bp".into()],
            ..ok.clone()
        };
        assert!(swapped.validate().is_err());
        let evidence_only = BenchConfig {
            estimators: vec![EstimatorId::Is, EstimatorId::Chib],
            ..swapped
        };
        assert!(evidence_only.validate().is_ok());
    }
}
