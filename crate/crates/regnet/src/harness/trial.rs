//! Seeded trial execution and Monte-Carlo aggregation.
//!
//! A trial owns its graph, protocol state, and RNG stream, so trials are
//! independent units of work; the Monte-Carlo driver distributes them over a
//! thread pool (or runs them inline without the `parallel` feature) and
//! folds results in seed-list order either way, making output independent of
//! execution mode.

use std::time::Instant;

use serde::Serialize;

use crate::graph::Graph;
use crate::protocol::{ActionLedger, Engine, ProtocolKind};
use crate::rng::trial_rng;
use crate::spectral::{
    self, average_histograms, esd_histogram, lambda2_lower_bound, EsdMode, MeanEsd, ESD_BINS,
};

use super::config::{ExperimentConfig, InitialGraph, Scenario};
use super::generate::{generate_initial_graph, generate_regular_graph};
use super::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminalStatus {
    /// Every degree equals k exactly.
    Regular,
    /// Degrees within {k, k+1} held through the confirmation window.
    ApproxRegular,
    BudgetExhausted,
    Disconnected,
}

/// One sampled point on the action axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeRow {
    pub action_units: u64,
    pub lambda2: f64,
    pub d_min: usize,
    pub d_max: usize,
    pub edges: usize,
    pub connected: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialResult {
    pub seed: u64,
    pub status: TerminalStatus,
    pub iterations: u64,
    pub series: Vec<ProbeRow>,
    pub ledger: ActionLedger,
    pub final_lambda2: f64,
    pub final_d_min: usize,
    pub final_d_max: usize,
    pub final_edges: usize,
    pub final_connected: bool,
    /// Iterations where the degree floor (min >= k), once reached, was lost.
    pub floor_violations: u64,
    /// Iterations where the ceiling (max <= k+1 with the floor), once
    /// reached, was exceeded.
    pub ceiling_violations: u64,
    pub wall_ms: u64,
    #[serde(skip_serializing)]
    pub final_graph: Graph,
}

impl TrialResult {
    /// First probe at which lambda2 reached the random-regular floor.
    pub fn units_to_lambda2_bound(&self, k: usize) -> Option<u64> {
        let lb = lambda2_lower_bound(k).ok()?;
        self.series
            .iter()
            .find(|r| r.lambda2 >= lb)
            .map(|r| r.action_units)
    }
}

fn build_initial(
    cfg: &ExperimentConfig,
    rng: &mut crate::rng::SimRng,
) -> Result<Graph, HarnessError> {
    let g = match &cfg.initial {
        InitialGraph::AvgDegree(avg) => generate_initial_graph(cfg.n, *avg, rng)?,
        InitialGraph::RegularDegree(r) => generate_regular_graph(cfg.n, *r, rng)?,
        InitialGraph::EdgeListPath(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                HarnessError::Invalid(format!("cannot read {}: {e}", path.display()))
            })?;
            let g = Graph::from_edge_list(&text)?;
            if g.node_count() != cfg.n {
                return Err(HarnessError::Invalid(format!(
                    "edge list has {} nodes, config says n = {}",
                    g.node_count(),
                    cfg.n
                )));
            }
            g
        }
    };
    if !g.is_connected()? {
        return Err(HarnessError::Invalid(
            "initial graph must be connected".into(),
        ));
    }
    Ok(g)
}

/// Run one protocol trial to its terminal state, probing the action axis
/// every `probe_every_actions` units.
pub fn run_trial(
    cfg: &ExperimentConfig,
    master_seed: u64,
    seed: u64,
) -> Result<TrialResult, HarnessError> {
    let started = Instant::now();
    let mut rng = trial_rng(master_seed, seed);
    let mut g = build_initial(cfg, &mut rng)?;
    let params = cfg.params();
    let mut engine = Engine::new(cfg.protocol, &g, &mut rng);

    let mut ledger = ActionLedger::default();
    let mut series = Vec::new();
    let probe = |g: &Graph, units: u64| -> Result<ProbeRow, HarnessError> {
        let st = g.degree_stats()?;
        Ok(ProbeRow {
            action_units: units,
            lambda2: spectral::lambda2_of(g)?,
            d_min: st.min,
            d_max: st.max,
            edges: g.edge_count(),
            connected: g.is_connected()?,
        })
    };
    series.push(probe(&g, 0)?);

    let confirmation_window = cfg.confirmation_window.unwrap_or(10 * cfg.n as u64);
    let mut stats = g.degree_stats()?;
    let mut floor_reached = false;
    let mut ceiling_reached = false;
    let mut floor_violations = 0u64;
    let mut ceiling_violations = 0u64;
    let mut approx_since: Option<u64> = None;
    let mut last_bucket = 0u64;
    let mut status = TerminalStatus::BudgetExhausted;
    let mut iterations = 0u64;

    for it in 1..=cfg.iteration_budget {
        iterations = it;
        let delta = engine.step(&mut g, &params, &mut rng);
        ledger.record(delta);
        if delta.adds + delta.removes + delta.moves > 0 {
            stats = g.degree_stats()?;
        }

        if floor_reached && stats.min < cfg.k {
            floor_violations += 1;
        }
        if ceiling_reached && stats.max > cfg.k + 1 {
            ceiling_violations += 1;
        }
        floor_reached |= stats.min >= cfg.k;
        ceiling_reached |= stats.min >= cfg.k && stats.max <= cfg.k + 1;

        let bucket = ledger.total_units / cfg.probe_every_actions;
        if bucket > last_bucket {
            last_bucket = bucket;
            let row = probe(&g, ledger.total_units)?;
            let disconnected = !row.connected;
            series.push(row);
            if disconnected {
                debug_assert!(
                    cfg.protocol != ProtocolKind::Cfor,
                    "coordinated protocol must preserve connectivity"
                );
                if cfg.protocol == ProtocolKind::Ufa {
                    status = TerminalStatus::Disconnected;
                    break;
                }
            }
        }

        match cfg.protocol {
            ProtocolKind::Cfor => {
                if stats.min == cfg.k && stats.max == cfg.k {
                    status = TerminalStatus::Regular;
                    break;
                }
            }
            ProtocolKind::Ufa => {
                if stats.min >= cfg.k && stats.max <= cfg.k + 1 {
                    let since = *approx_since.get_or_insert(it);
                    if it - since + 1 >= confirmation_window {
                        status = TerminalStatus::ApproxRegular;
                        break;
                    }
                } else {
                    approx_since = None;
                }
            }
            ProtocolKind::Idle => {}
        }
    }

    let final_row = probe(&g, ledger.total_units)?;
    if series.last().map(|r| r.action_units) != Some(final_row.action_units) {
        series.push(final_row);
    }

    Ok(TrialResult {
        seed,
        status,
        iterations,
        series,
        ledger,
        final_lambda2: final_row.lambda2,
        final_d_min: final_row.d_min,
        final_d_max: final_row.d_max,
        final_edges: final_row.edges,
        final_connected: final_row.connected,
        floor_violations,
        ceiling_violations,
        wall_ms: started.elapsed().as_millis() as u64,
        final_graph: g,
    })
}

/// Execution mode for seed ensembles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parallelism {
    Sequential,
    #[cfg(feature = "parallel")]
    Rayon,
}

impl Default for Parallelism {
    #[cfg(feature = "parallel")]
    fn default() -> Self {
        Parallelism::Rayon
    }
    #[cfg(not(feature = "parallel"))]
    fn default() -> Self {
        Parallelism::Sequential
    }
}

/// Map a closure over the seed list, in the requested execution mode. The
/// output order always matches the seed list order.
pub fn map_seeds<T, F>(seeds: &[u64], par: Parallelism, f: F) -> Result<Vec<T>, HarnessError>
where
    T: Send,
    F: Fn(u64) -> Result<T, HarnessError> + Sync,
{
    match par {
        Parallelism::Sequential => seeds.iter().map(|&s| f(s)).collect(),
        #[cfg(feature = "parallel")]
        Parallelism::Rayon => {
            use rayon::prelude::*;
            seeds.par_iter().map(|&s| f(s)).collect()
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialSummary {
    pub seed: u64,
    pub status: TerminalStatus,
    pub iterations: u64,
    pub action_units: u64,
    pub final_lambda2: f64,
    /// (lambda2 - bound) / bound against the k - 2 sqrt(k-1) floor.
    pub rel_distance: Option<f64>,
    pub final_d_min: usize,
    pub final_d_max: usize,
    pub connected_at_all_probes: bool,
    pub units_to_lambda2_bound: Option<u64>,
    pub floor_violations: u64,
    pub ceiling_violations: u64,
    pub wall_ms: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Aggregate {
    pub trials: usize,
    pub regular: usize,
    pub approx_regular: usize,
    pub budget_exhausted: usize,
    pub disconnected: usize,
    /// Fraction of trials ending regular or approx-regular.
    pub success_rate: f64,
    pub mean_rel_distance: Option<f64>,
    pub std_rel_distance: Option<f64>,
    pub mean_final_lambda2: f64,
    pub median_units_to_lambda2_bound: Option<f64>,
    pub median_units_to_terminal: Option<f64>,
    pub mean_iterations: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MonteCarloSummary {
    pub per_seed: Vec<TrialSummary>,
    pub aggregate: Aggregate,
}

fn median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let mid = values.len() / 2;
    Some(if values.len() % 2 == 1 {
        values[mid]
    } else {
        (values[mid - 1] + values[mid]) / 2.0
    })
}

pub fn summarize(cfg: &ExperimentConfig, trials: &[TrialResult]) -> MonteCarloSummary {
    let lb = lambda2_lower_bound(cfg.k).expect("k >= 2");
    let per_seed: Vec<TrialSummary> = trials
        .iter()
        .map(|t| TrialSummary {
            seed: t.seed,
            status: t.status,
            iterations: t.iterations,
            action_units: t.ledger.total_units,
            final_lambda2: t.final_lambda2,
            rel_distance: (lb > 0.0).then(|| (t.final_lambda2 - lb) / lb),
            final_d_min: t.final_d_min,
            final_d_max: t.final_d_max,
            connected_at_all_probes: t.series.iter().all(|r| r.connected),
            units_to_lambda2_bound: t.units_to_lambda2_bound(cfg.k),
            floor_violations: t.floor_violations,
            ceiling_violations: t.ceiling_violations,
            wall_ms: t.wall_ms,
        })
        .collect();

    let count = |s: TerminalStatus| per_seed.iter().filter(|t| t.status == s).count();
    let regular = count(TerminalStatus::Regular);
    let approx_regular = count(TerminalStatus::ApproxRegular);
    let rel: Vec<f64> = per_seed.iter().filter_map(|t| t.rel_distance).collect();
    let mean_rel = (!rel.is_empty()).then(|| rel.iter().sum::<f64>() / rel.len() as f64);
    let std_rel = mean_rel.filter(|_| rel.len() > 1).map(|m| {
        (rel.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (rel.len() - 1) as f64).sqrt()
    });
    let mut to_bound: Vec<f64> = per_seed
        .iter()
        .filter_map(|t| t.units_to_lambda2_bound.map(|u| u as f64))
        .collect();
    let mut to_terminal: Vec<f64> = per_seed
        .iter()
        .filter(|t| {
            matches!(
                t.status,
                TerminalStatus::Regular | TerminalStatus::ApproxRegular
            )
        })
        .map(|t| t.action_units as f64)
        .collect();

    let aggregate = Aggregate {
        trials: per_seed.len(),
        regular,
        approx_regular,
        budget_exhausted: count(TerminalStatus::BudgetExhausted),
        disconnected: count(TerminalStatus::Disconnected),
        success_rate: (regular + approx_regular) as f64 / per_seed.len().max(1) as f64,
        mean_rel_distance: mean_rel,
        std_rel_distance: std_rel,
        mean_final_lambda2: per_seed.iter().map(|t| t.final_lambda2).sum::<f64>()
            / per_seed.len().max(1) as f64,
        median_units_to_lambda2_bound: median(&mut to_bound),
        median_units_to_terminal: median(&mut to_terminal),
        mean_iterations: per_seed.iter().map(|t| t.iterations as f64).sum::<f64>()
            / per_seed.len().max(1) as f64,
    };
    MonteCarloSummary {
        per_seed,
        aggregate,
    }
}

/// Run every configured seed and aggregate, in the default execution mode.
pub fn run_monte_carlo(
    cfg: &ExperimentConfig,
    master_seed: u64,
) -> Result<(Vec<TrialResult>, MonteCarloSummary), HarnessError> {
    run_monte_carlo_with(cfg, master_seed, Parallelism::default())
}

pub fn run_monte_carlo_with(
    cfg: &ExperimentConfig,
    master_seed: u64,
    par: Parallelism,
) -> Result<(Vec<TrialResult>, MonteCarloSummary), HarnessError> {
    cfg.validate()?;
    let trials = map_seeds(&cfg.seeds, par, |seed| run_trial(cfg, master_seed, seed))?;
    let summary = summarize(cfg, &trials);
    Ok((trials, summary))
}

/// One point of the size sweep: k = floor(sqrt(n)), fresh random initial
/// graphs of average degree k - 0.8.
#[derive(Debug, Clone, Serialize)]
pub struct SweepPoint {
    pub n: usize,
    pub k: usize,
    pub mean_rel_distance: Option<f64>,
    pub std_rel_distance: Option<f64>,
    pub success_rate: f64,
    pub trials: usize,
}

pub fn run_lambda2_sweep(
    cfg: &ExperimentConfig,
    master_seed: u64,
) -> Result<Vec<SweepPoint>, HarnessError> {
    let Scenario::Lambda2Sweep { sizes } = &cfg.scenario else {
        return Err(HarnessError::Invalid(
            "config scenario is not lambda2_sweep".into(),
        ));
    };
    if cfg.protocol == ProtocolKind::Idle {
        return Err(HarnessError::Invalid(
            "sweep needs a rewiring protocol".into(),
        ));
    }
    let mut points = Vec::new();
    for &n in sizes {
        let k = (n as f64).sqrt().floor() as usize;
        let sub = ExperimentConfig {
            n,
            k,
            initial: InitialGraph::AvgDegree(k as f64 - 0.8),
            scenario: Scenario::Regularize,
            ..cfg.clone()
        };
        let (_, summary) = run_monte_carlo(&sub, master_seed)?;
        points.push(SweepPoint {
            n,
            k,
            mean_rel_distance: summary.aggregate.mean_rel_distance,
            std_rel_distance: summary.aggregate.std_rel_distance,
            success_rate: summary.aggregate.success_rate,
            trials: summary.aggregate.trials,
        });
    }
    Ok(points)
}

/// Mean terminal-graph spectral histogram against its reference density.
#[derive(Debug, Clone, Serialize)]
pub struct EsdSummary {
    pub mode: EsdMode,
    pub n: usize,
    pub k: usize,
    pub mean: MeanEsd,
    /// Bin averages of the limiting density the histogram should approach.
    pub reference: [f64; ESD_BINS],
    /// Largest per-bin deviation of the mean histogram from the reference.
    pub max_abs_deviation: f64,
    pub statuses: Vec<TerminalStatus>,
}

pub fn run_esd(
    cfg: &ExperimentConfig,
    master_seed: u64,
) -> Result<(Vec<TrialResult>, EsdSummary), HarnessError> {
    let Scenario::Esd { mode } = cfg.scenario else {
        return Err(HarnessError::Invalid("config scenario is not esd".into()));
    };
    let trials = map_seeds(&cfg.seeds, Parallelism::default(), |seed| {
        run_trial(cfg, master_seed, seed)
    })?;
    let hists = trials
        .iter()
        .map(|t| esd_histogram(&t.final_graph, cfg.k, mode))
        .collect::<Result<Vec<_>, _>>()?;
    let mean = average_histograms(&hists).expect("at least one seed");
    let reference = match mode {
        EsdMode::FixedK => spectral::mckay_bin_means(cfg.k)?,
        EsdMode::GrowingK => spectral::semicircle_bin_means(),
    };
    let max_abs_deviation = mean
        .densities
        .iter()
        .zip(&reference)
        .map(|(d, r)| (d - r).abs())
        .fold(0.0f64, f64::max);
    let statuses = trials.iter().map(|t| t.status).collect();
    let summary = EsdSummary {
        mode,
        n: cfg.n,
        k: cfg.k,
        mean,
        reference,
        max_abs_deviation,
        statuses,
    };
    Ok((trials, summary))
}

/// Per-seed attack runs (fresh initial graph and protocol state per seed).
#[derive(Debug, Clone, Serialize)]
pub struct AttackRun {
    pub seed: u64,
    pub records: Vec<crate::attack::AttackRecord>,
}

pub fn run_attack(
    cfg: &ExperimentConfig,
    master_seed: u64,
) -> Result<Vec<AttackRun>, HarnessError> {
    let Scenario::Attack(sched) = cfg.scenario else {
        return Err(HarnessError::Invalid(
            "config scenario is not attack".into(),
        ));
    };
    map_seeds(&cfg.seeds, Parallelism::default(), |seed| {
        let mut rng = trial_rng(master_seed, seed);
        let mut g = build_initial(cfg, &mut rng)?;
        let mut engine = Engine::new(cfg.protocol, &g, &mut rng);
        let records = crate::attack::run_attack_scenario(
            &mut g,
            &mut engine,
            &cfg.params(),
            &sched,
            &mut rng,
        )?;
        Ok(AttackRun { seed, records })
    })
}
