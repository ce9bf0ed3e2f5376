//! Experiment configuration: a flat `key=value` text format whose keys
//! mirror the configuration fields one-to-one.
//!
//! ```text
//! # regularization race at n = 100
//! n=100
//! k=6
//! protocol=cfor
//! activation_prob=0.99
//! beta=0.01
//! initial.avg_degree=5.2
//! iteration_budget=1000000
//! probe_every_actions=100
//! seeds=0,1,2,3
//! scenario=regularize
//! ```
//!
//! Scenario-specific keys: `sweep.sizes` (comma list, `scenario=lambda2_sweep`),
//! `esd.mode` (`fixed_k`|`growing_k`, `scenario=esd`), `attack.upsilon` and
//! `attack.stop_at` (`scenario=attack`). Exactly one of `initial.avg_degree`,
//! `initial.edge_list_path`, or `initial.regular_degree` selects the starting
//! graph.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::Serialize;
use thiserror::Error;

use crate::attack::AttackSchedule;
use crate::protocol::{ProtocolKind, ProtocolParams};
use crate::spectral::EsdMode;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("config line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("config: {0}")]
    Invalid(String),
}

/// How each trial's starting graph is produced.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum InitialGraph {
    /// Random connected graph with this average degree (fresh per trial).
    AvgDegree(f64),
    /// Load a fixed graph from an edge-list file (shared by all trials).
    EdgeListPath(PathBuf),
    /// Random connected regular graph of this degree (fresh per trial).
    RegularDegree(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Scenario {
    /// Run the protocol until (approximate) regularity or budget.
    Regularize,
    /// Relative distance of lambda2 from its floor across network sizes,
    /// with k = floor(sqrt(n)) per size.
    Lambda2Sweep { sizes: Vec<usize> },
    /// Terminal-graph eigenvalue histograms against the reference density.
    Esd { mode: EsdMode },
    /// Periodic targeted node removal.
    Attack(AttackSchedule),
}

impl Scenario {
    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Regularize => "regularize",
            Scenario::Lambda2Sweep { .. } => "lambda2_sweep",
            Scenario::Esd { .. } => "esd",
            Scenario::Attack(_) => "attack",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub n: usize,
    pub k: usize,
    pub protocol: ProtocolKind,
    pub activation_prob: f64,
    pub beta: f64,
    pub initial: InitialGraph,
    pub iteration_budget: u64,
    pub probe_every_actions: u64,
    /// Iterations the degree bounds must hold before an uncoordinated run
    /// counts as stably approximate-regular. `None` means 10 * n.
    pub confirmation_window: Option<u64>,
    pub seeds: Vec<u64>,
    pub scenario: Scenario,
}

impl ExperimentConfig {
    pub fn params(&self) -> ProtocolParams {
        ProtocolParams {
            k: self.k,
            activation_prob: self.activation_prob,
            beta: self.beta,
        }
    }

    pub fn parse_file(path: &std::path::Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut kv: BTreeMap<String, (usize, String)> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(ConfigError::Parse {
                line: idx + 1,
                msg: format!("expected key=value, got {line:?}"),
            })?;
            let key = key.trim().to_string();
            if kv
                .insert(key.clone(), (idx + 1, value.trim().to_string()))
                .is_some()
            {
                return Err(ConfigError::Parse {
                    line: idx + 1,
                    msg: format!("duplicate key {key:?}"),
                });
            }
        }
        Self::from_pairs(kv)
    }

    fn from_pairs(mut kv: BTreeMap<String, (usize, String)>) -> Result<Self, ConfigError> {
        fn take<T: std::str::FromStr>(
            kv: &mut BTreeMap<String, (usize, String)>,
            key: &str,
        ) -> Result<Option<T>, ConfigError>
        where
            T::Err: std::fmt::Display,
        {
            match kv.remove(key) {
                None => Ok(None),
                Some((line, value)) => {
                    value
                        .parse::<T>()
                        .map(Some)
                        .map_err(|e| ConfigError::Parse {
                            line,
                            msg: format!("bad value for {key}: {e}"),
                        })
                }
            }
        }
        fn require<T>(value: Option<T>, key: &str) -> Result<T, ConfigError> {
            value.ok_or_else(|| ConfigError::Invalid(format!("missing required key {key}")))
        }

        let n: usize = require(take(&mut kv, "n")?, "n")?;
        let k: usize = require(take(&mut kv, "k")?, "k")?;
        let protocol: ProtocolKind = require(take(&mut kv, "protocol")?, "protocol")?;
        let activation_prob: f64 = take(&mut kv, "activation_prob")?.unwrap_or(0.99);
        let beta: f64 = take(&mut kv, "beta")?.unwrap_or(0.01);
        let iteration_budget: u64 =
            require(take(&mut kv, "iteration_budget")?, "iteration_budget")?;
        let probe_every_actions: u64 = take(&mut kv, "probe_every_actions")?.unwrap_or(100);
        let confirmation_window: Option<u64> = take(&mut kv, "confirmation_window")?;

        let seeds: Vec<u64> = match kv.remove("seeds") {
            None => vec![0],
            Some((line, value)) => value
                .split(',')
                .map(|t| {
                    t.trim().parse::<u64>().map_err(|e| ConfigError::Parse {
                        line,
                        msg: format!("bad seed {t:?}: {e}"),
                    })
                })
                .collect::<Result<_, _>>()?,
        };

        let initial = {
            let avg: Option<f64> = take(&mut kv, "initial.avg_degree")?;
            let path: Option<String> = take(&mut kv, "initial.edge_list_path")?;
            let reg: Option<usize> = take(&mut kv, "initial.regular_degree")?;
            match (avg, path, reg) {
                (Some(a), None, None) => InitialGraph::AvgDegree(a),
                (None, Some(p), None) => InitialGraph::EdgeListPath(PathBuf::from(p)),
                (None, None, Some(r)) => InitialGraph::RegularDegree(r),
                (None, None, None) => return Err(ConfigError::Invalid(
                    "missing initial.avg_degree / initial.edge_list_path / initial.regular_degree"
                        .into(),
                )),
                _ => {
                    return Err(ConfigError::Invalid(
                        "initial.* keys are mutually exclusive".into(),
                    ))
                }
            }
        };

        let scenario_name: String =
            take::<String>(&mut kv, "scenario")?.unwrap_or_else(|| "regularize".to_string());
        let scenario = match scenario_name.as_str() {
            "regularize" => Scenario::Regularize,
            "lambda2_sweep" => {
                let sizes = match kv.remove("sweep.sizes") {
                    None => {
                        return Err(ConfigError::Invalid(
                            "scenario lambda2_sweep requires sweep.sizes".into(),
                        ))
                    }
                    Some((line, value)) => value
                        .split(',')
                        .map(|t| {
                            t.trim().parse::<usize>().map_err(|e| ConfigError::Parse {
                                line,
                                msg: format!("bad size {t:?}: {e}"),
                            })
                        })
                        .collect::<Result<Vec<_>, _>>()?,
                };
                Scenario::Lambda2Sweep { sizes }
            }
            "esd" => {
                let mode: EsdMode = take(&mut kv, "esd.mode")?.unwrap_or(EsdMode::FixedK);
                Scenario::Esd { mode }
            }
            "attack" => {
                let upsilon: usize = take(&mut kv, "attack.upsilon")?.unwrap_or(10);
                let stop_at: usize = take(&mut kv, "attack.stop_at")?.unwrap_or(k + 1);
                let sched = AttackSchedule::new(upsilon, stop_at)
                    .map_err(|e| ConfigError::Invalid(e.to_string()))?;
                Scenario::Attack(sched)
            }
            other => {
                return Err(ConfigError::Invalid(format!(
                    "unknown scenario {other:?} (expected regularize|lambda2_sweep|esd|attack)"
                )))
            }
        };

        if let Some((key, (line, _))) = kv.into_iter().next() {
            return Err(ConfigError::Parse {
                line,
                msg: format!("unknown key {key:?}"),
            });
        }

        let cfg = ExperimentConfig {
            n,
            k,
            protocol,
            activation_prob,
            beta,
            initial,
            iteration_budget,
            probe_every_actions,
            confirmation_window,
            seeds,
            scenario,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n < 3 || self.k < 2 || self.k > self.n - 1 {
            return Err(ConfigError::Invalid(format!(
                "need 2 <= k <= n-1, got k = {}, n = {}",
                self.k, self.n
            )));
        }
        if !(self.activation_prob > 0.0 && self.activation_prob < 1.0) {
            return Err(ConfigError::Invalid(format!(
                "activation_prob must lie in (0,1), got {}",
                self.activation_prob
            )));
        }
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(ConfigError::Invalid(format!(
                "beta must lie in (0,1), got {}",
                self.beta
            )));
        }
        if self.iteration_budget < 1 {
            return Err(ConfigError::Invalid("iteration_budget must be >= 1".into()));
        }
        if self.probe_every_actions < 1 {
            return Err(ConfigError::Invalid(
                "probe_every_actions must be >= 1".into(),
            ));
        }
        if self.seeds.is_empty() {
            return Err(ConfigError::Invalid("seeds must not be empty".into()));
        }
        if self.protocol == ProtocolKind::Idle && !matches!(self.scenario, Scenario::Attack(_)) {
            return Err(ConfigError::Invalid(
                "protocol=none is only meaningful for scenario=attack".into(),
            ));
        }
        if let Scenario::Lambda2Sweep { sizes } = &self.scenario {
            if sizes.is_empty() {
                return Err(ConfigError::Invalid("sweep.sizes must not be empty".into()));
            }
        }
        Ok(())
    }

    /// Flat key map mirroring the file format, for `config_echo` in summary
    /// output.
    pub fn to_flat_map(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("n".into(), self.n.to_string());
        m.insert("k".into(), self.k.to_string());
        m.insert("protocol".into(), self.protocol.name().to_string());
        m.insert("activation_prob".into(), self.activation_prob.to_string());
        m.insert("beta".into(), self.beta.to_string());
        match &self.initial {
            InitialGraph::AvgDegree(a) => m.insert("initial.avg_degree".into(), a.to_string()),
            InitialGraph::EdgeListPath(p) => {
                m.insert("initial.edge_list_path".into(), p.display().to_string())
            }
            InitialGraph::RegularDegree(r) => {
                m.insert("initial.regular_degree".into(), r.to_string())
            }
        };
        m.insert("iteration_budget".into(), self.iteration_budget.to_string());
        m.insert(
            "probe_every_actions".into(),
            self.probe_every_actions.to_string(),
        );
        if let Some(w) = self.confirmation_window {
            m.insert("confirmation_window".into(), w.to_string());
        }
        m.insert(
            "seeds".into(),
            self.seeds
                .iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>()
                .join(","),
        );
        m.insert("scenario".into(), self.scenario.name().to_string());
        match &self.scenario {
            Scenario::Lambda2Sweep { sizes } => {
                m.insert(
                    "sweep.sizes".into(),
                    sizes
                        .iter()
                        .map(|s| s.to_string())
                        .collect::<Vec<_>>()
                        .join(","),
                );
            }
            Scenario::Esd { mode } => {
                let name = match mode {
                    EsdMode::FixedK => "fixed_k",
                    EsdMode::GrowingK => "growing_k",
                };
                m.insert("esd.mode".into(), name.to_string());
            }
            Scenario::Attack(s) => {
                m.insert("attack.upsilon".into(), s.upsilon.to_string());
                m.insert("attack.stop_at".into(), s.stop_at.to_string());
            }
            Scenario::Regularize => {}
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FULL: &str = "\
# comment
n=100
k=6
protocol=cfor
activation_prob=0.99
beta=0.01
initial.avg_degree=5.2
iteration_budget=1000000
probe_every_actions=100
seeds=0, 1,2
scenario=regularize
";

    #[test]
    fn parses_full_config() {
        let cfg = ExperimentConfig::parse(FULL).unwrap();
        assert_eq!(cfg.n, 100);
        assert_eq!(cfg.k, 6);
        assert_eq!(cfg.protocol, ProtocolKind::Cfor);
        assert_eq!(cfg.initial, InitialGraph::AvgDegree(5.2));
        assert_eq!(cfg.seeds, vec![0, 1, 2]);
        assert_eq!(cfg.scenario, Scenario::Regularize);
    }

    #[test]
    fn defaults_fill_in() {
        let cfg = ExperimentConfig::parse(
            "n=50\nk=4\nprotocol=ufa\ninitial.regular_degree=4\niteration_budget=10\n",
        )
        .unwrap();
        assert_eq!(cfg.activation_prob, 0.99);
        assert_eq!(cfg.beta, 0.01);
        assert_eq!(cfg.probe_every_actions, 100);
        assert_eq!(cfg.seeds, vec![0]);
    }

    #[test]
    fn attack_scenario_keys() {
        let cfg = ExperimentConfig::parse(
            "n=50\nk=4\nprotocol=none\ninitial.regular_degree=4\niteration_budget=10\nscenario=attack\nattack.upsilon=5\n",
        )
        .unwrap();
        match cfg.scenario {
            Scenario::Attack(s) => {
                assert_eq!(s.upsilon, 5);
                assert_eq!(s.stop_at, 5, "defaults to k + 1");
            }
            other => panic!("wrong scenario {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(ExperimentConfig::parse("n=100\n").is_err(), "missing keys");
        assert!(ExperimentConfig::parse(&format!("{FULL}\nbogus_key=1\n")).is_err());
        assert!(ExperimentConfig::parse(&FULL.replace("k=6", "k=200")).is_err());
        assert!(ExperimentConfig::parse(&FULL.replace("protocol=cfor", "protocol=none")).is_err());
        assert!(ExperimentConfig::parse(&FULL.replace("beta=0.01", "beta=1.5")).is_err());
        assert!(
            ExperimentConfig::parse(&FULL.replace("n=100", "n=100\nn=50")).is_err(),
            "duplicate key"
        );
        assert!(ExperimentConfig::parse(
            "n=50\nk=4\nprotocol=ufa\ninitial.avg_degree=4\ninitial.regular_degree=4\niteration_budget=10\n"
        )
        .is_err());
    }

    #[test]
    fn sweep_requires_sizes() {
        let base = "n=100\nk=10\nprotocol=ufa\ninitial.avg_degree=9.2\niteration_budget=100\nscenario=lambda2_sweep\n";
        assert!(ExperimentConfig::parse(base).is_err());
        let cfg = ExperimentConfig::parse(&format!("{base}sweep.sizes=100,400,900\n")).unwrap();
        assert_eq!(
            cfg.scenario,
            Scenario::Lambda2Sweep {
                sizes: vec![100, 400, 900]
            }
        );
    }

    #[test]
    fn flat_map_round_trips_through_parse() {
        let cfg = ExperimentConfig::parse(FULL).unwrap();
        let text: String = cfg
            .to_flat_map()
            .into_iter()
            .map(|(k, v)| format!("{k}={v}\n"))
            .collect();
        let reparsed = ExperimentConfig::parse(&text).unwrap();
        assert_eq!(cfg, reparsed);
    }
}
