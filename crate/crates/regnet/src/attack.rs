//! Full-knowledge node-removal adversary.
//!
//! Every `upsilon` protocol iterations the attacker removes the node with
//! the most neighbors on the opposite side of the Fiedler-vector sign
//! partition; such nodes sit near the spectral center of the graph and their
//! loss is most likely to bisect it.

use rand::seq::IndexedRandom;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError, NodeId};
use crate::protocol::{ActionLedger, Engine, ProtocolKind, ProtocolParams};
use crate::rng::SimRng;
use crate::spectral::{laplacian_spectrum, SpectralError};

#[derive(Debug, Error)]
pub enum AttackError {
    #[error("attack target undefined: {0}")]
    TargetUndefined(String),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Attack cadence: protocol iterations granted between removals, and the
/// node-count floor at which the scenario stops.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttackSchedule {
    pub upsilon: usize,
    pub stop_at: usize,
}

impl AttackSchedule {
    pub fn new(upsilon: usize, stop_at: usize) -> Result<Self, AttackError> {
        if upsilon < 1 {
            return Err(AttackError::TargetUndefined("upsilon must be >= 1".into()));
        }
        if stop_at < 2 {
            return Err(AttackError::TargetUndefined("stop_at must be >= 2".into()));
        }
        Ok(AttackSchedule { upsilon, stop_at })
    }
}

/// Entries this close to zero count as positive-side, so numerical noise in
/// genuinely-zero Fiedler entries cannot flip the partition.
const ZERO_SIGN_EPS: f64 = 1e-12;

/// Fiedler-sign centrality pick: the node with the most opposite-sign
/// neighbors, ties broken uniformly at random. Zero entries count as
/// positive sign.
///
/// Errors on graphs with fewer than two nodes or disconnected graphs, where
/// the Fiedler vector carries no partition information; scenario drivers
/// should fall back to the largest component.
pub fn select_target(g: &Graph, rng: &mut SimRng) -> Result<NodeId, AttackError> {
    if g.node_count() < 2 {
        return Err(AttackError::TargetUndefined(format!(
            "graph has {} nodes",
            g.node_count()
        )));
    }
    let report = laplacian_spectrum(g)?;
    if !report.connected {
        return Err(AttackError::TargetUndefined("graph is disconnected".into()));
    }
    Ok(pick_from_report(g, &report, rng))
}

/// One sampled probe of an attack run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AttackRecord {
    /// Cumulative protocol iterations executed so far.
    pub step: u64,
    pub n: usize,
    pub edges: usize,
    pub d_min: usize,
    pub d_max: usize,
    pub lambda2: f64,
    pub connected: bool,
    pub action_units: u64,
}

fn snapshot(g: &Graph, step: u64, lambda2: f64, connected: bool, units: u64) -> AttackRecord {
    let st = g.degree_stats().expect("nonempty graph");
    AttackRecord {
        step,
        n: g.node_count(),
        edges: g.edge_count(),
        d_min: st.min,
        d_max: st.max,
        lambda2,
        connected,
        action_units: units,
    }
}

/// Alternate `upsilon` protocol iterations with one targeted removal until
/// the node floor is reached or the scenario-ending disconnection occurs.
///
/// One record is emitted for the initial state and one per attack round
/// (post-iterations, pre-removal). Disconnection ends the scenario for the
/// idle baseline and the coordinated protocol; the uncoordinated protocol
/// keeps running with the attacker targeting the largest component.
pub fn run_attack_scenario(
    g: &mut Graph,
    engine: &mut Engine,
    p: &ProtocolParams,
    sched: &AttackSchedule,
    rng: &mut SimRng,
) -> Result<Vec<AttackRecord>, AttackError> {
    let mut records = Vec::new();
    let mut ledger = ActionLedger::default();
    let mut iterations = 0u64;

    let connected = g.is_connected()?;
    let lambda2 = if connected {
        crate::spectral::lambda2_of(g)?
    } else {
        0.0
    };
    records.push(snapshot(
        g,
        iterations,
        lambda2,
        connected,
        ledger.total_units,
    ));

    while g.node_count() > sched.stop_at {
        for _ in 0..sched.upsilon {
            ledger.record(engine.step(g, p, rng));
            iterations += 1;
        }

        let connected = g.is_connected()?;
        let target = if connected {
            let report = laplacian_spectrum(g)?;
            records.push(snapshot(
                g,
                iterations,
                report.lambda2,
                true,
                ledger.total_units,
            ));
            pick_from_report(g, &report, rng)
        } else {
            records.push(snapshot(g, iterations, 0.0, false, ledger.total_units));
            match engine.kind() {
                // No self-repair in place: the attacker has won.
                ProtocolKind::Idle | ProtocolKind::Cfor => break,
                ProtocolKind::Ufa => {
                    let comp = g.largest_component();
                    if comp.len() < 2 {
                        break;
                    }
                    let sub = g.induced_subgraph(&comp);
                    select_target(&sub, rng)?
                }
            }
        };

        let former_neighbors = g.neighbors(target).to_vec();
        g.remove_node(target)?;
        engine.on_node_removed(target, &former_neighbors);
    }

    let connected = g.is_connected()?;
    let lambda2 = if connected && g.node_count() >= 2 {
        crate::spectral::lambda2_of(g)?
    } else {
        0.0
    };
    records.push(snapshot(
        g,
        iterations,
        lambda2,
        connected,
        ledger.total_units,
    ));
    Ok(records)
}

/// Argmax of the opposite-sign neighbor count, reusing an existing
/// decomposition.
fn pick_from_report(
    g: &Graph,
    report: &crate::spectral::SpectralReport,
    rng: &mut SimRng,
) -> NodeId {
    let positive: Vec<bool> = report
        .fiedler
        .iter()
        .map(|&v| v >= -ZERO_SIGN_EPS)
        .collect();
    let index = |node: NodeId| report.node_ids.binary_search(&node).expect("live node");
    let mut best_count = 0usize;
    let mut best: Vec<NodeId> = Vec::new();
    for &i in g.nodes() {
        let side = positive[index(i)];
        let count = g
            .neighbors(i)
            .iter()
            .filter(|&&j| positive[index(j)] != side)
            .count();
        match count.cmp(&best_count) {
            std::cmp::Ordering::Greater => {
                best_count = count;
                best = vec![i];
            }
            std::cmp::Ordering::Equal => best.push(i),
            std::cmp::Ordering::Less => {}
        }
    }
    *best.choose(rng).expect("node list nonempty")
}
