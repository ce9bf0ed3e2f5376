//! Shared protocol machinery: parameters, per-iteration action accounting,
//! and the engine wrapper that lets the harness drive either rewiring
//! protocol (or none at all) through one interface.

pub mod cfor;
pub mod ufa;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::rng::SimRng;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParamError {
    #[error("activation probability must lie strictly in (0,1), got {0}")]
    ActivationProb(String),
    #[error("beta must lie strictly in (0,1), got {0}")]
    Beta(String),
    #[error("target degree k must be at least 2, got {0}")]
    DegreeTooSmall(usize),
}

/// Run parameters shared by both protocols.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProtocolParams {
    /// Desired node degree.
    pub k: usize,
    /// Per-node activation probability per iteration.
    pub activation_prob: f64,
    /// Probability of adding an edge when not strictly needed.
    pub beta: f64,
}

impl ProtocolParams {
    pub fn new(k: usize, activation_prob: f64, beta: f64) -> Result<Self, ParamError> {
        if !(activation_prob > 0.0 && activation_prob < 1.0) {
            return Err(ParamError::ActivationProb(activation_prob.to_string()));
        }
        if !(beta > 0.0 && beta < 1.0) {
            return Err(ParamError::Beta(beta.to_string()));
        }
        if k < 2 {
            return Err(ParamError::DegreeTooSmall(k));
        }
        Ok(ProtocolParams {
            k,
            activation_prob,
            beta,
        })
    }

    /// Exact k-regularity is only reachable for even k >= 4 (and even n*k);
    /// other inputs are accepted for exploration but should carry a warning.
    pub fn exact_regularity_supported(&self) -> bool {
        self.k >= 4 && self.k.is_multiple_of(2)
    }
}

/// Topology actions performed during one protocol iteration.
///
/// The comparison metric weights an add or remove as one action unit, a move
/// as two, and a neighbor swap as four.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionDelta {
    pub adds: u64,
    pub removes: u64,
    pub moves: u64,
    pub swaps: u64,
}

impl ActionDelta {
    pub const ZERO: ActionDelta = ActionDelta {
        adds: 0,
        removes: 0,
        moves: 0,
        swaps: 0,
    };

    pub fn action_units(&self) -> u64 {
        self.adds + self.removes + 2 * self.moves + 4 * self.swaps
    }

    pub fn is_zero(&self) -> bool {
        *self == Self::ZERO
    }
}

impl std::ops::AddAssign for ActionDelta {
    fn add_assign(&mut self, rhs: ActionDelta) {
        self.adds += rhs.adds;
        self.removes += rhs.removes;
        self.moves += rhs.moves;
        self.swaps += rhs.swaps;
    }
}

/// Cumulative action counters over a run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionLedger {
    pub adds: u64,
    pub removes: u64,
    pub moves: u64,
    pub swaps: u64,
    pub total_units: u64,
}

impl ActionLedger {
    pub fn record(&mut self, delta: ActionDelta) {
        self.adds += delta.adds;
        self.removes += delta.removes;
        self.moves += delta.moves;
        self.swaps += delta.swaps;
        self.total_units += delta.action_units();
    }
}

/// Which rewiring protocol a run uses. `Idle` performs no-op iterations and
/// exists for unprotected-baseline attack runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProtocolKind {
    Cfor,
    Ufa,
    #[serde(rename = "none")]
    Idle,
}

impl ProtocolKind {
    pub fn name(self) -> &'static str {
        match self {
            ProtocolKind::Cfor => "cfor",
            ProtocolKind::Ufa => "ufa",
            ProtocolKind::Idle => "none",
        }
    }
}

impl std::str::FromStr for ProtocolKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cfor" => Ok(ProtocolKind::Cfor),
            "ufa" => Ok(ProtocolKind::Ufa),
            "none" => Ok(ProtocolKind::Idle),
            other => Err(format!(
                "unknown protocol {other:?} (expected cfor|ufa|none)"
            )),
        }
    }
}

/// Protocol state holder: the uncoordinated protocol carries edge ownership
/// with it, the coordinated one is stateless.
#[derive(Debug, Clone)]
pub enum Engine {
    Cfor,
    Ufa {
        ownership: ufa::OwnershipOrientation,
    },
    Idle,
}

impl Engine {
    pub fn new(kind: ProtocolKind, g: &Graph, rng: &mut SimRng) -> Engine {
        match kind {
            ProtocolKind::Cfor => Engine::Cfor,
            ProtocolKind::Ufa => Engine::Ufa {
                ownership: ufa::init_ownership(g, rng),
            },
            ProtocolKind::Idle => Engine::Idle,
        }
    }

    pub fn kind(&self) -> ProtocolKind {
        match self {
            Engine::Cfor => ProtocolKind::Cfor,
            Engine::Ufa { .. } => ProtocolKind::Ufa,
            Engine::Idle => ProtocolKind::Idle,
        }
    }

    /// One protocol iteration.
    pub fn step(&mut self, g: &mut Graph, p: &ProtocolParams, rng: &mut SimRng) -> ActionDelta {
        match self {
            Engine::Cfor => cfor::step(g, p, rng),
            Engine::Ufa { ownership } => ufa::step(g, ownership, p, rng),
            Engine::Idle => ActionDelta::ZERO,
        }
    }

    /// Forget protocol state attached to a node that was removed from the
    /// graph; `former_neighbors` are its neighbors just before removal.
    pub fn on_node_removed(
        &mut self,
        removed: crate::graph::NodeId,
        former_neighbors: &[crate::graph::NodeId],
    ) {
        if let Engine::Ufa { ownership } = self {
            for &j in former_neighbors {
                ownership.forget(removed, j);
            }
        }
    }
}
