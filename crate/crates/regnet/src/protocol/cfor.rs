//! Coordinated pairwise rewiring protocol.
//!
//! Each iteration every node activates independently, picks one random
//! neighbor, and mutually-picking pairs execute one randomly chosen rule:
//! neighbor swap, move/add toward the lower-degree endpoint, removal of a
//! redundant common-neighbor edge, or degree correction toward the target
//! degree k. Degree guards are always re-evaluated against the live graph at
//! execution time, because pairs executed earlier in the same iteration can
//! change the degrees of shared neighbors.
//!
//! Randomness is drawn in a fixed, documented order so runs replay exactly
//! from a seed:
//! 1. one activation draw per live node, ascending id (plus one neighbor
//!    pick for each activated node with at least one neighbor);
//! 2. one orientation coin per degree-tied matched pair, ascending by the
//!    pair's lower endpoint;
//! 3. one shuffle of the matched-pair list;
//! 4. per pair, in shuffled order: a rule draw followed by that rule's picks.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use crate::graph::{Graph, NodeId};
use crate::rng::SimRng;

use super::{ActionDelta, ProtocolParams};

const NONE: u32 = u32::MAX;

/// Two neighbors that picked each other in an activation round, oriented so
/// `deg(i) >= deg(j)` at match time (ties broken by fair coin).
///
/// `r_i` / `r_j` hold the nodes that picked `i` / `j` (so `j ∈ r_i` and
/// `i ∈ r_j`), ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchedPair {
    pub i: NodeId,
    pub j: NodeId,
    pub r_i: Vec<NodeId>,
    pub r_j: Vec<NodeId>,
}

/// Activation, random neighbor picks, and mutual-pick matching.
///
/// Returned pairs are node-disjoint (every node picks exactly once) and
/// listed in ascending order of their lower endpoint.
pub fn activate_and_match(g: &Graph, p: &ProtocolParams, rng: &mut SimRng) -> Vec<MatchedPair> {
    let slab = g.nodes().last().map_or(0, |&m| m as usize + 1);
    let mut picks = vec![NONE; slab];
    for &i in g.nodes() {
        if rng.random::<f64>() < p.activation_prob {
            let nbrs = g.neighbors(i);
            if !nbrs.is_empty() {
                picks[i as usize] = nbrs[rng.random_range(0..nbrs.len())];
            }
        }
    }

    // Mutual picks, keyed by lower endpoint.
    let mut endpoints: Vec<(NodeId, NodeId)> = Vec::new();
    let mut pair_slot = vec![NONE; slab];
    for &a in g.nodes() {
        let b = picks[a as usize];
        if b == NONE || b < a {
            continue;
        }
        if picks[b as usize] == a {
            pair_slot[a as usize] = endpoints.len() as u32;
            pair_slot[b as usize] = endpoints.len() as u32;
            endpoints.push((a, b));
        }
    }
    if endpoints.is_empty() {
        return Vec::new();
    }

    // Picker sets for matched endpoints only; one pass keeps this O(n).
    let mut pickers: Vec<(Vec<NodeId>, Vec<NodeId>)> =
        vec![(Vec::new(), Vec::new()); endpoints.len()];
    for &x in g.nodes() {
        let t = picks[x as usize];
        if t == NONE {
            continue;
        }
        let slot = pair_slot[t as usize];
        if slot == NONE {
            continue;
        }
        let (ref mut r_lo, ref mut r_hi) = pickers[slot as usize];
        if t == endpoints[slot as usize].0 {
            r_lo.push(x);
        } else {
            r_hi.push(x);
        }
    }

    endpoints
        .iter()
        .zip(pickers)
        .map(|(&(a, b), (r_a, r_b))| {
            let a_first = match g.degree(a).cmp(&g.degree(b)) {
                std::cmp::Ordering::Greater => true,
                std::cmp::Ordering::Less => false,
                std::cmp::Ordering::Equal => rng.random::<bool>(),
            };
            if a_first {
                MatchedPair {
                    i: a,
                    j: b,
                    r_i: r_a,
                    r_j: r_b,
                }
            } else {
                MatchedPair {
                    i: b,
                    j: a,
                    r_i: r_b,
                    r_j: r_a,
                }
            }
        })
        .collect()
}

/// Uniform pick from `r \ {excluded}` restricted to current neighbors of
/// `of`. In-protocol the restriction is vacuous (picker sets are neighbor
/// subsets); it keeps the rule executors total for hand-built pairs.
fn pick_from(
    g: &Graph,
    r: &[NodeId],
    excluded: NodeId,
    of: NodeId,
    rng: &mut SimRng,
) -> Option<NodeId> {
    let cands: Vec<NodeId> = r
        .iter()
        .copied()
        .filter(|&h| h != excluded && g.has_edge(of, h))
        .collect();
    cands.choose(rng).copied()
}

/// Rule 1: swap neighbors across the pair. Both endpoints give up the picked
/// neighbor and adopt the other's; all four degrees are preserved.
pub fn exec_swap(g: &mut Graph, pair: &MatchedPair, rng: &mut SimRng) -> ActionDelta {
    let (i, j) = (pair.i, pair.j);
    if pair.r_i.len() < 2 || pair.r_j.len() < 2 {
        return ActionDelta::ZERO;
    }
    let Some(h) = pick_from(g, &pair.r_i, j, i, rng) else {
        return ActionDelta::ZERO;
    };
    let Some(f) = pick_from(g, &pair.r_j, i, j, rng) else {
        return ActionDelta::ZERO;
    };
    if h == f || g.has_edge(i, f) || g.has_edge(j, h) {
        return ActionDelta::ZERO;
    }
    g.remove_edge(i, h).expect("picker is a neighbor");
    g.remove_edge(j, f).expect("picker is a neighbor");
    g.add_edge(i, f).expect("checked absent");
    g.add_edge(j, h).expect("checked absent");
    ActionDelta {
        swaps: 1,
        ..ActionDelta::ZERO
    }
}

/// Rule 2: move an edge from the higher-degree endpoint to the lower one,
/// or (with probability beta) add it to the lower one outright.
pub fn exec_move_or_add(
    g: &mut Graph,
    pair: &MatchedPair,
    p: &ProtocolParams,
    rng: &mut SimRng,
) -> ActionDelta {
    let (i, j) = (pair.i, pair.j);
    if g.degree(i) <= g.degree(j) || pair.r_i.len() < 2 {
        return ActionDelta::ZERO;
    }
    let Some(h) = pick_from(g, &pair.r_i, j, i, rng) else {
        return ActionDelta::ZERO;
    };
    if g.has_edge(j, h) {
        return ActionDelta::ZERO;
    }
    let beta_draw: f64 = rng.random();
    if beta_draw > p.beta {
        g.remove_edge(i, h).expect("picker is a neighbor");
        g.add_edge(j, h).expect("checked absent");
        ActionDelta {
            moves: 1,
            ..ActionDelta::ZERO
        }
    } else {
        g.add_edge(j, h).expect("checked absent");
        ActionDelta {
            adds: 1,
            ..ActionDelta::ZERO
        }
    }
}

/// Rule 3: with probability beta, drop the edge from the higher-degree
/// endpoint to a picker that is already a neighbor of both.
pub fn exec_remove_common(
    g: &mut Graph,
    pair: &MatchedPair,
    p: &ProtocolParams,
    rng: &mut SimRng,
) -> ActionDelta {
    let (i, j) = (pair.i, pair.j);
    if g.degree(i) <= g.degree(j) || pair.r_i.len() < 2 {
        return ActionDelta::ZERO;
    }
    let beta_draw: f64 = rng.random();
    if beta_draw <= 1.0 - p.beta {
        return ActionDelta::ZERO;
    }
    let Some(h) = pick_from(g, &pair.r_i, j, i, rng) else {
        return ActionDelta::ZERO;
    };
    if !g.has_edge(j, h) {
        return ActionDelta::ZERO;
    }
    g.remove_edge(i, h).expect("picker is a neighbor");
    ActionDelta {
        removes: 1,
        ..ActionDelta::ZERO
    }
}

/// Rule 4: degree correction toward k. Over-full pairs sharing a neighbor
/// drop their own edge; an under-full `i` links to a 2-hop neighbor that is
/// also below k.
pub fn exec_degree_correction(
    g: &mut Graph,
    pair: &MatchedPair,
    p: &ProtocolParams,
    rng: &mut SimRng,
) -> ActionDelta {
    let (i, j) = (pair.i, pair.j);
    if !g.has_edge(i, j) {
        return ActionDelta::ZERO;
    }
    if g.degree(i) > p.k && g.degree(j) > p.k {
        let ni = g.neighbors(i);
        let share_neighbor = g.neighbors(j).iter().any(|&h| ni.binary_search(&h).is_ok());
        if share_neighbor {
            g.remove_edge(i, j).expect("pair edge exists");
            return ActionDelta {
                removes: 1,
                ..ActionDelta::ZERO
            };
        }
        return ActionDelta::ZERO;
    }
    if g.degree(i) < p.k {
        let cands = g.two_hop_candidates(i, j).expect("pair edge exists");
        let Some(&h) = cands.choose(rng) else {
            return ActionDelta::ZERO;
        };
        if g.degree(h) < p.k {
            g.add_edge(i, h).expect("2-hop candidate is not adjacent");
            return ActionDelta {
                adds: 1,
                ..ActionDelta::ZERO
            };
        }
    }
    ActionDelta::ZERO
}

/// One full protocol iteration: match pairs, then execute one random rule
/// per pair in uniformly shuffled order.
pub fn step(g: &mut Graph, p: &ProtocolParams, rng: &mut SimRng) -> ActionDelta {
    let mut pairs = activate_and_match(g, p, rng);
    pairs.shuffle(rng);
    let mut total = ActionDelta::ZERO;
    for pair in &pairs {
        let delta = match rng.random_range(0..4u8) {
            0 => exec_swap(g, pair, rng),
            1 => exec_move_or_add(g, pair, p, rng),
            2 => exec_remove_common(g, pair, p, rng),
            _ => exec_degree_correction(g, pair, p, rng),
        };
        total += delta;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{generate_initial_graph, generate_regular_graph};
    use crate::rng::trial_rng;

    fn params(k: usize, activation: f64, beta: f64) -> ProtocolParams {
        ProtocolParams {
            k,
            activation_prob: activation,
            beta,
        }
    }

    fn cycle(n: usize) -> Graph {
        let mut g = Graph::with_nodes(n);
        for v in 0..n as NodeId {
            g.add_edge(v, (v + 1) % n as NodeId).unwrap();
        }
        g
    }

    fn pair(i: NodeId, j: NodeId, r_i: &[NodeId], r_j: &[NodeId]) -> MatchedPair {
        MatchedPair {
            i,
            j,
            r_i: r_i.to_vec(),
            r_j: r_j.to_vec(),
        }
    }

    /// Independent replay of the documented activation/pick draw order.
    fn oracle_picks(g: &Graph, p: &ProtocolParams, rng: &mut SimRng) -> Vec<Option<NodeId>> {
        let slab = g.nodes().last().map(|&m| m as usize + 1).unwrap_or(0);
        let mut picks = vec![None; slab];
        for &i in g.nodes() {
            let draw: f64 = rng.random();
            if draw < p.activation_prob {
                let nbrs = g.neighbors(i);
                if !nbrs.is_empty() {
                    picks[i as usize] = Some(nbrs[rng.random_range(0..nbrs.len())]);
                }
            }
        }
        picks
    }

    #[test]
    fn vanishing_activation_yields_no_pairs() {
        let g = cycle(6);
        let p = params(4, 1e-12, 0.5);
        for seed in 0..32 {
            let mut rng = trial_rng(11, seed);
            assert!(activate_and_match(&g, &p, &mut rng).is_empty());
        }
    }

    #[test]
    fn forced_mutual_pick_on_k2() {
        let mut g = Graph::with_nodes(2);
        g.add_edge(0, 1).unwrap();
        let p = params(4, 0.999_999, 0.5);
        let mut found = false;
        for seed in 0..16 {
            let mut rng = trial_rng(3, seed);
            let pairs = activate_and_match(&g, &p, &mut rng);
            if pairs.len() == 1 {
                found = true;
                let pr = &pairs[0];
                assert_eq!(
                    (pr.r_i.clone(), pr.r_j.clone()),
                    (vec![pr.j], vec![pr.i]),
                    "each endpoint picked by exactly the other"
                );
            }
        }
        assert!(
            found,
            "both-activated realization must occur among 16 seeds"
        );
    }

    /// Matching agrees with a brute-force oracle over many seeds, and the
    /// specific path realization (ends pick center, center picks node 0)
    /// produces exactly the oriented pair (center, node 0).
    #[test]
    fn matching_agrees_with_pick_oracle_on_path() {
        let g = {
            let mut g = Graph::with_nodes(3);
            g.add_edge(0, 1).unwrap();
            g.add_edge(1, 2).unwrap();
            g
        };
        let p = params(4, 0.999_999, 0.5);
        let mut target_seen = false;
        for seed in 0..256 {
            let mut oracle_rng = trial_rng(5, seed);
            let picks = oracle_picks(&g, &p, &mut oracle_rng);
            let mut expected: Vec<(NodeId, NodeId)> = Vec::new();
            for a in 0..3u32 {
                if let Some(b) = picks[a as usize] {
                    if b > a && picks[b as usize] == Some(a) {
                        expected.push((a, b));
                    }
                }
            }

            let mut rng = trial_rng(5, seed);
            let pairs = activate_and_match(&g, &p, &mut rng);
            let got: Vec<(NodeId, NodeId)> = pairs
                .iter()
                .map(|pr| (pr.i.min(pr.j), pr.i.max(pr.j)))
                .collect();
            assert_eq!(got, expected, "seed {seed}");

            for pr in &pairs {
                assert!(g.degree(pr.i) >= g.degree(pr.j));
                assert!(pr.r_i.contains(&pr.j) && pr.r_j.contains(&pr.i));
            }

            if picks == vec![Some(1), Some(0), Some(1)] {
                target_seen = true;
                assert_eq!(pairs.len(), 1);
                let pr = &pairs[0];
                assert_eq!((pr.i, pr.j), (1, 0), "center has higher degree");
                assert_eq!(pr.r_i, vec![0, 2]);
                assert_eq!(pr.r_j, vec![1]);
            }
        }
        assert!(
            target_seen,
            "the traced pick realization must occur among 256 seeds"
        );
    }

    #[test]
    fn swap_trace_on_six_cycle() {
        // Pair endpoints 1 and 4 with pickers {0,2} and {3,5}; the (h,f) =
        // (2,3) realization rewires to (1,3),(4,2) and preserves all degrees.
        let mut hit = false;
        for seed in 0..64 {
            let mut g = cycle(6);
            let mut rng = trial_rng(9, seed);
            let delta = exec_swap(&mut g, &pair(1, 4, &[0, 2], &[3, 5]), &mut rng);
            assert_eq!(delta.swaps, 1, "all (h,f) realizations pass the guards");
            assert_eq!(g.edge_count(), 6);
            assert!(g.nodes().iter().all(|&v| g.degree(v) == 2));
            if g.has_edge(1, 3) && g.has_edge(4, 2) {
                assert!(!g.has_edge(1, 2) && !g.has_edge(3, 4));
                hit = true;
            }
            g.check_invariants().unwrap();
        }
        assert!(hit, "(h,f) = (2,3) must occur among 64 seeds");
    }

    #[test]
    fn swap_blocked_on_complete_graph() {
        let mut g = Graph::with_nodes(3);
        g.add_edge(0, 1).unwrap();
        g.add_edge(0, 2).unwrap();
        g.add_edge(1, 2).unwrap();
        let before = g.clone();
        let mut rng = trial_rng(1, 0);
        let delta = exec_swap(&mut g, &pair(0, 1, &[1, 2], &[0, 2]), &mut rng);
        assert_eq!(delta, ActionDelta::ZERO);
        assert_eq!(g, before);
    }

    #[test]
    fn swap_requires_two_pickers_each() {
        let mut g = cycle(6);
        let before = g.clone();
        let mut rng = trial_rng(1, 1);
        let delta = exec_swap(&mut g, &pair(1, 4, &[4], &[3, 5]), &mut rng);
        assert_eq!(delta, ActionDelta::ZERO);
        assert_eq!(g, before);
    }

    #[test]
    fn move_wins_as_beta_vanishes() {
        // Star center 0 with leaves {1,2,3}: pair (0,1), picker 2 forced.
        for seed in 0..16 {
            let mut g = Graph::with_nodes(4);
            g.add_edge(0, 1).unwrap();
            g.add_edge(0, 2).unwrap();
            g.add_edge(0, 3).unwrap();
            let mut rng = trial_rng(13, seed);
            let delta = exec_move_or_add(
                &mut g,
                &pair(0, 1, &[1, 2], &[0]),
                &params(4, 0.9, 1e-12),
                &mut rng,
            );
            assert_eq!(delta.moves, 1, "beta' > beta virtually surely");
            assert_eq!((g.degree(0), g.degree(1)), (2, 2));
            assert!(g.has_edge(1, 2) && !g.has_edge(0, 2));
            assert_eq!(g.edge_count(), 3, "move preserves edge count");
        }
    }

    #[test]
    fn add_wins_as_beta_approaches_one() {
        for seed in 0..16 {
            let mut g = Graph::with_nodes(4);
            g.add_edge(0, 1).unwrap();
            g.add_edge(0, 2).unwrap();
            g.add_edge(0, 3).unwrap();
            let mut rng = trial_rng(14, seed);
            let delta = exec_move_or_add(
                &mut g,
                &pair(0, 1, &[1, 2], &[0]),
                &params(4, 0.9, 1.0 - 1e-12),
                &mut rng,
            );
            assert_eq!(delta.adds, 1);
            assert_eq!(g.edge_count(), 4, "add grows edge count by one");
            assert!(g.has_edge(1, 2) && g.has_edge(0, 2));
        }
    }

    #[test]
    fn move_blocked_when_target_already_adjacent() {
        let mut g = Graph::with_nodes(4);
        g.add_edge(0, 1).unwrap();
        g.add_edge(0, 2).unwrap();
        g.add_edge(0, 3).unwrap();
        g.add_edge(1, 2).unwrap();
        let before = g.clone();
        let mut rng = trial_rng(15, 0);
        // only picker besides j is 2, already adjacent to j = 1
        let delta = exec_move_or_add(
            &mut g,
            &pair(0, 1, &[1, 2], &[0]),
            &params(4, 0.9, 0.5),
            &mut rng,
        );
        assert_eq!(delta, ActionDelta::ZERO);
        assert_eq!(g, before);
    }

    #[test]
    fn remove_common_fires_as_beta_approaches_one() {
        // Triangle {0,1,2} plus pendant 3 on 0, so deg(0)=3 > deg(1)=2 and
        // picker 2 is a common neighbor.
        for seed in 0..16 {
            let mut g = Graph::with_nodes(4);
            g.add_edge(0, 1).unwrap();
            g.add_edge(0, 2).unwrap();
            g.add_edge(1, 2).unwrap();
            g.add_edge(0, 3).unwrap();
            let mut rng = trial_rng(17, seed);
            let delta = exec_remove_common(
                &mut g,
                &pair(0, 1, &[1, 2], &[0]),
                &params(4, 0.9, 1.0 - 1e-12),
                &mut rng,
            );
            assert_eq!(delta.removes, 1, "probability gate passes as beta -> 1");
            assert!(!g.has_edge(0, 2), "edge to the common neighbor is dropped");
            assert!(g.is_connected().unwrap(), "path through 1 remains");
        }
    }

    #[test]
    fn remove_common_noop_without_common_neighbor() {
        // Path 3-0-1 plus 0-2: picker 2 is not adjacent to j = 1.
        let mut g = Graph::with_nodes(4);
        g.add_edge(0, 1).unwrap();
        g.add_edge(0, 2).unwrap();
        g.add_edge(0, 3).unwrap();
        let before = g.clone();
        let mut rng = trial_rng(18, 0);
        let delta = exec_remove_common(
            &mut g,
            &pair(0, 1, &[1, 2], &[0]),
            &params(4, 0.9, 1.0 - 1e-12),
            &mut rng,
        );
        assert_eq!(delta, ActionDelta::ZERO);
        assert_eq!(g, before);
    }

    #[test]
    fn degree_correction_removes_overfull_pair_edge() {
        // K4 minus edge (2,3): nodes 0,1 have degree 3 > k = 2 and share
        // common neighbors {2,3}.
        let mut g = Graph::with_nodes(4);
        for &(a, b) in &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)] {
            g.add_edge(a, b).unwrap();
        }
        let mut rng = trial_rng(19, 0);
        let delta = exec_degree_correction(
            &mut g,
            &pair(0, 1, &[1], &[0]),
            &params(2, 0.9, 0.5),
            &mut rng,
        );
        assert_eq!(delta.removes, 1);
        assert!(!g.has_edge(0, 1));
    }

    #[test]
    fn degree_correction_keeps_bridge_without_common_neighbor() {
        // 4-cycle with k = 1: adjacent nodes are over-full but share no
        // neighbor, so removal is blocked.
        let mut g = cycle(4);
        let before = g.clone();
        let mut rng = trial_rng(20, 0);
        let delta = exec_degree_correction(
            &mut g,
            &pair(0, 1, &[1], &[0]),
            &params(2, 0.9, 0.5),
            &mut rng,
        );
        // k = 2 leaves degrees exactly at k; use k = 1 via raw params below.
        assert_eq!(delta, ActionDelta::ZERO);
        assert_eq!(g, before);
        let delta = exec_degree_correction(
            &mut g,
            &pair(0, 1, &[1], &[0]),
            &ProtocolParams {
                k: 1,
                activation_prob: 0.9,
                beta: 0.5,
            },
            &mut rng,
        );
        assert_eq!(
            delta,
            ActionDelta::ZERO,
            "no shared neighbor blocks removal"
        );
        assert_eq!(g, before);
    }

    #[test]
    fn degree_correction_adds_two_hop_edge_below_k() {
        // Path 0-1-2 with k = 4: i = 0 has degree 1 < k, candidate 2 has
        // degree 1 < k.
        let mut g = Graph::with_nodes(3);
        g.add_edge(0, 1).unwrap();
        g.add_edge(1, 2).unwrap();
        let mut rng = trial_rng(21, 0);
        let delta = exec_degree_correction(
            &mut g,
            &pair(0, 1, &[1], &[0]),
            &params(4, 0.9, 0.5),
            &mut rng,
        );
        assert_eq!(delta.adds, 1);
        assert!(g.has_edge(0, 2));
    }

    #[test]
    fn degree_correction_respects_candidate_cap() {
        // Same path, but candidate already at k: no add.
        let mut g = Graph::with_nodes(3);
        g.add_edge(0, 1).unwrap();
        g.add_edge(1, 2).unwrap();
        let mut rng = trial_rng(22, 0);
        let delta = exec_degree_correction(
            &mut g,
            &pair(0, 1, &[1], &[0]),
            &params(1, 0.9, 0.5),
            &mut rng,
        );
        assert_eq!(delta, ActionDelta::ZERO, "candidate degree not below k");
    }

    #[test]
    fn step_without_activations_is_identity() {
        let mut g = cycle(8);
        let before = g.clone();
        let mut rng = trial_rng(23, 0);
        let delta = step(&mut g, &params(4, 1e-12, 0.01), &mut rng);
        assert_eq!(delta, ActionDelta::ZERO);
        assert_eq!(g, before);
    }

    #[test]
    fn regular_graph_admits_only_swaps() {
        // On an exactly k-regular graph every degree guard fails, so only
        // swaps can fire and the degree multiset is invariant.
        let mut rng = trial_rng(29, 0);
        let mut g = generate_regular_graph(10, 4, &mut rng).unwrap();
        let p = params(4, 0.95, 0.01);
        for _ in 0..400 {
            let delta = step(&mut g, &p, &mut rng);
            assert_eq!((delta.adds, delta.removes, delta.moves), (0, 0, 0));
            assert!(g.nodes().iter().all(|&v| g.degree(v) == 4));
        }
        g.check_invariants().unwrap();
    }

    #[test]
    fn sparse_cycle_grows_toward_higher_k() {
        let mut g = cycle(6);
        let mut rng = trial_rng(31, 0);
        let p = params(4, 0.9, 0.01);
        for _ in 0..1000 {
            step(&mut g, &p, &mut rng);
        }
        assert!(
            g.edge_count() > 6,
            "degree-correction adds chords over time"
        );
    }

    #[test]
    fn connectivity_and_invariants_preserved_over_random_runs() {
        // 10^4 steps spread over random connected seed graphs.
        for seed in 0..20 {
            let mut rng = trial_rng(37, seed);
            let n = 12 + (seed as usize % 8);
            let mut g = generate_initial_graph(n, 3.0, &mut rng).unwrap();
            let p = params(4, 0.9, 0.05);
            for _ in 0..500 {
                let before_edges = g.edge_count() as i64;
                let delta = step(&mut g, &p, &mut rng);
                let diff = g.edge_count() as i64 - before_edges;
                assert_eq!(
                    diff,
                    delta.adds as i64 - delta.removes as i64,
                    "moves and swaps preserve edge count"
                );
                assert!(
                    g.is_connected().unwrap(),
                    "seed {seed}: step disconnected the graph"
                );
            }
            g.check_invariants().unwrap();
        }
    }
}
