//! Uncoordinated single-agent rewiring protocol with edge ownership.
//!
//! Each iteration one randomly chosen activated node first replenishes its
//! degree up to k through 2-hop additions (Rule 1), then runs one of: trim a
//! mutually over-full owned edge (Rule 2), rebalance by moving an owned edge
//! toward a low-degree 2-hop neighbor or occasionally adding one (Rule 3),
//! or hand ownership of an owned edge to the other endpoint (Rule 4).
//!
//! Every edge has exactly one owner and only the owner may remove it; that
//! is what makes the uncoordinated actions conflict-free.
//!
//! Randomness is drawn in a fixed order per iteration: one activation draw
//! per live node ascending, one pick of the acting node, Rule 1's per-pass
//! neighbor shuffle and candidate picks, one rule draw, then that rule's
//! picks.

use std::collections::HashMap;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use crate::graph::{Graph, NodeId};
use crate::rng::SimRng;

use super::{ActionDelta, ProtocolParams};

fn key(i: NodeId, j: NodeId) -> (NodeId, NodeId) {
    if i < j {
        (i, j)
    } else {
        (j, i)
    }
}

/// Directed overlay on a [`Graph`] assigning each edge a unique owner
/// endpoint. Entries exist exactly for live edges of the companion graph.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct OwnershipOrientation {
    owner: HashMap<(NodeId, NodeId), NodeId>,
}

impl OwnershipOrientation {
    pub fn len(&self) -> usize {
        self.owner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owner.is_empty()
    }

    pub fn owner_of(&self, i: NodeId, j: NodeId) -> Option<NodeId> {
        self.owner.get(&key(i, j)).copied()
    }

    pub fn set_owner(&mut self, i: NodeId, j: NodeId, owner: NodeId) {
        debug_assert!(owner == i || owner == j);
        self.owner.insert(key(i, j), owner);
    }

    pub fn forget(&mut self, i: NodeId, j: NodeId) {
        self.owner.remove(&key(i, j));
    }

    /// Neighbors of `i` whose connecting edge is owned by `i`, ascending.
    pub fn out_neighbors(&self, g: &Graph, i: NodeId) -> Vec<NodeId> {
        g.neighbors(i)
            .iter()
            .copied()
            .filter(|&j| self.owner_of(i, j) == Some(i))
            .collect()
    }

    /// Totality check: every live edge has exactly one owner endpoint and no
    /// stale entries exist. Test/debug helper.
    pub fn check_invariants(&self, g: &Graph) -> Result<(), String> {
        for (i, j) in g.edges() {
            match self.owner_of(i, j) {
                Some(o) if o == i || o == j => {}
                Some(o) => return Err(format!("edge ({i},{j}) owned by non-endpoint {o}")),
                None => return Err(format!("edge ({i},{j}) has no owner")),
            }
        }
        if self.owner.len() != g.edge_count() {
            return Err(format!(
                "{} ownership entries for {} edges",
                self.owner.len(),
                g.edge_count()
            ));
        }
        Ok(())
    }
}

/// Assign each edge an owner endpoint by fair coin, in lexicographic edge
/// order.
pub fn init_ownership(g: &Graph, rng: &mut SimRng) -> OwnershipOrientation {
    let mut own = OwnershipOrientation::default();
    for (i, j) in g.edges() {
        let owner = if rng.random::<bool>() { i } else { j };
        own.set_owner(i, j, owner);
    }
    own
}

/// Rule 1: while below k, add an edge to a random 2-hop neighbor reached
/// through a random neighbor. Neighbors are rescanned in fresh random order
/// each pass; the loop stops at degree k, when a full scan finds no
/// candidate, or after a hard cap of n passes.
pub fn rule1_replenish(
    g: &mut Graph,
    own: &mut OwnershipOrientation,
    i: NodeId,
    p: &ProtocolParams,
    rng: &mut SimRng,
) -> ActionDelta {
    let mut delta = ActionDelta::ZERO;
    let pass_cap = g.node_count();
    for _ in 0..pass_cap {
        if g.degree(i) > p.k - 1 {
            break;
        }
        let mut scan: Vec<NodeId> = g.neighbors(i).to_vec();
        scan.shuffle(rng);
        let mut added = false;
        for j in scan {
            let cands = g.two_hop_candidates(i, j).expect("j is a neighbor");
            if let Some(&s) = cands.choose(rng) {
                g.add_edge(i, s).expect("2-hop candidate is not adjacent");
                own.set_owner(i, s, i);
                delta.adds += 1;
                added = true;
                break;
            }
        }
        if !added {
            break;
        }
    }
    delta
}

/// Rule 2: an over-full node removes an owned edge to a random out-neighbor
/// that is also over-full, so neither endpoint falls below k.
pub fn rule2_trim(
    g: &mut Graph,
    own: &mut OwnershipOrientation,
    i: NodeId,
    p: &ProtocolParams,
    rng: &mut SimRng,
) -> ActionDelta {
    if g.degree(i) <= p.k {
        return ActionDelta::ZERO;
    }
    let out = own.out_neighbors(g, i);
    let Some(&j) = out.choose(rng) else {
        return ActionDelta::ZERO;
    };
    if g.degree(j) <= p.k {
        return ActionDelta::ZERO;
    }
    g.remove_edge(i, j).expect("out-neighbor is a neighbor");
    own.forget(i, j);
    ActionDelta {
        removes: 1,
        ..ActionDelta::ZERO
    }
}

/// Rule 3: target the highest-degree owned neighbor j. If j is over-full,
/// move the edge to a minimum-degree 2-hop candidate below the cap
/// `max(k, d_j - 1, d_i - 1)`; otherwise, if `i` itself is at or below k,
/// add such an edge with probability beta.
pub fn rule3_rebalance(
    g: &mut Graph,
    own: &mut OwnershipOrientation,
    i: NodeId,
    p: &ProtocolParams,
    rng: &mut SimRng,
) -> ActionDelta {
    let out = own.out_neighbors(g, i);
    if out.is_empty() {
        return ActionDelta::ZERO;
    }
    let max_deg = out.iter().map(|&j| g.degree(j)).max().expect("nonempty");
    let top: Vec<NodeId> = out
        .into_iter()
        .filter(|&j| g.degree(j) == max_deg)
        .collect();
    let j = *top.choose(rng).expect("nonempty");

    let cap = p.k.max(g.degree(j) - 1).max(g.degree(i).saturating_sub(1));
    let eligible: Vec<NodeId> = g
        .two_hop_candidates(i, j)
        .expect("out-neighbor is a neighbor")
        .into_iter()
        .filter(|&s| g.degree(s) <= cap)
        .collect();
    if eligible.is_empty() {
        return ActionDelta::ZERO;
    }
    let min_deg = eligible
        .iter()
        .map(|&s| g.degree(s))
        .min()
        .expect("nonempty");
    let bottom: Vec<NodeId> = eligible
        .into_iter()
        .filter(|&s| g.degree(s) == min_deg)
        .collect();
    let s = *bottom.choose(rng).expect("nonempty");

    if g.degree(j) > p.k {
        g.add_edge(i, s).expect("2-hop candidate is not adjacent");
        own.set_owner(i, s, i);
        g.remove_edge(i, j).expect("out-neighbor is a neighbor");
        own.forget(i, j);
        ActionDelta {
            moves: 1,
            ..ActionDelta::ZERO
        }
    } else if g.degree(i) <= p.k {
        let beta_draw: f64 = rng.random();
        if beta_draw > 1.0 - p.beta {
            g.add_edge(i, s).expect("2-hop candidate is not adjacent");
            own.set_owner(i, s, i);
            ActionDelta {
                adds: 1,
                ..ActionDelta::ZERO
            }
        } else {
            ActionDelta::ZERO
        }
    } else {
        ActionDelta::ZERO
    }
}

/// Rule 4: relinquish ownership of one owned edge to the other endpoint.
/// Pure bookkeeping; zero action units.
pub fn rule4_transfer(
    g: &Graph,
    own: &mut OwnershipOrientation,
    i: NodeId,
    rng: &mut SimRng,
) -> ActionDelta {
    let out = own.out_neighbors(g, i);
    if let Some(&j) = out.choose(rng) {
        own.set_owner(i, j, j);
    }
    ActionDelta::ZERO
}

/// One full protocol iteration: activate nodes, let one random activated
/// node replenish via Rule 1, then run one of Rules 2-4.
pub fn step(
    g: &mut Graph,
    own: &mut OwnershipOrientation,
    p: &ProtocolParams,
    rng: &mut SimRng,
) -> ActionDelta {
    let mut activated: Vec<NodeId> = Vec::new();
    for &v in g.nodes() {
        if rng.random::<f64>() < p.activation_prob {
            activated.push(v);
        }
    }
    let Some(&i) = activated.choose(rng) else {
        return ActionDelta::ZERO;
    };
    let mut delta = rule1_replenish(g, own, i, p, rng);
    delta += match rng.random_range(0..3u8) {
        0 => rule2_trim(g, own, i, p, rng),
        1 => rule3_rebalance(g, own, i, p, rng),
        _ => rule4_transfer(g, own, i, rng),
    };
    delta
}
