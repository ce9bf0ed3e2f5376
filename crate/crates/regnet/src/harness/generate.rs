//! Initial-graph generators: connected random graphs of a target average
//! degree, and randomized k-regular graphs.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{Graph, NodeId};
use crate::rng::SimRng;

use super::HarnessError;

/// Connected random graph on `n` nodes with average degree within `2/n` of
/// `target_avg_degree`: a uniform random spanning tree plus uniform random
/// extra edges up to `round(n * avg / 2)` edges total.
pub fn generate_initial_graph(
    n: usize,
    target_avg_degree: f64,
    rng: &mut SimRng,
) -> Result<Graph, HarnessError> {
    if n < 2 {
        return Err(HarnessError::Invalid(format!(
            "need at least 2 nodes, got {n}"
        )));
    }
    if target_avg_degree > (n - 1) as f64 {
        return Err(HarnessError::Invalid(format!(
            "average degree {target_avg_degree} infeasible for n = {n}"
        )));
    }
    let target_edges = (n as f64 * target_avg_degree / 2.0).round() as usize;
    if target_edges < n - 1 {
        return Err(HarnessError::Invalid(format!(
            "average degree {target_avg_degree} cannot keep {n} nodes connected"
        )));
    }
    let max_edges = n * (n - 1) / 2;

    let mut g = uniform_spanning_tree(n, rng);
    if g.edge_count() == target_edges {
        return Ok(g);
    }

    // Rejection sampling is fast while sparse; fall back to explicit
    // enumeration of the missing edges when the graph gets dense.
    let dense_cutoff = max_edges * 4 / 5;
    while g.edge_count() < target_edges.min(dense_cutoff) {
        let i = rng.random_range(0..n) as NodeId;
        let j = rng.random_range(0..n) as NodeId;
        if i != j {
            g.add_edge(i, j).expect("nodes exist");
        }
    }
    if g.edge_count() < target_edges {
        let mut missing: Vec<(NodeId, NodeId)> = Vec::with_capacity(max_edges - g.edge_count());
        for a in 0..n as NodeId {
            for b in (a + 1)..n as NodeId {
                if !g.has_edge(a, b) {
                    missing.push((a, b));
                }
            }
        }
        missing.shuffle(rng);
        for (a, b) in missing.into_iter().take(target_edges - g.edge_count()) {
            g.add_edge(a, b).expect("known missing");
        }
    }
    debug_assert!(g.is_connected().expect("nonempty"));
    Ok(g)
}

/// Uniform random labeled tree on `0..n` via a random Pruefer sequence.
fn uniform_spanning_tree(n: usize, rng: &mut SimRng) -> Graph {
    let mut g = Graph::with_nodes(n);
    if n == 2 {
        g.add_edge(0, 1).expect("nodes exist");
        return g;
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.random_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &s in &seq {
        degree[s] += 1;
    }
    let mut leaves: std::collections::BinaryHeap<std::cmp::Reverse<usize>> = (0..n)
        .filter(|&v| degree[v] == 1)
        .map(std::cmp::Reverse)
        .collect();
    for &s in &seq {
        let std::cmp::Reverse(leaf) = leaves.pop().expect("tree decode never runs dry");
        g.add_edge(leaf as NodeId, s as NodeId)
            .expect("distinct by construction");
        degree[leaf] -= 1;
        degree[s] -= 1;
        if degree[s] == 1 {
            leaves.push(std::cmp::Reverse(s));
        }
    }
    let std::cmp::Reverse(a) = leaves.pop().expect("two leaves remain");
    let std::cmp::Reverse(b) = leaves.pop().expect("two leaves remain");
    g.add_edge(a as NodeId, b as NodeId)
        .expect("distinct leaves");
    g
}

/// Connected k-regular graph on `n` nodes: a circulant base randomized by
/// degree-preserving double-edge swaps, retried until connected.
pub fn generate_regular_graph(n: usize, k: usize, rng: &mut SimRng) -> Result<Graph, HarnessError> {
    if k < 2 || k >= n {
        return Err(HarnessError::Invalid(format!(
            "k = {k} infeasible for n = {n}"
        )));
    }
    if !(n * k).is_multiple_of(2) {
        return Err(HarnessError::Invalid(format!(
            "no {k}-regular graph on {n} nodes: n * k must be even"
        )));
    }
    let mut g = Graph::with_nodes(n);
    for offset in 1..=(k / 2) {
        for v in 0..n {
            g.add_edge(v as NodeId, ((v + offset) % n) as NodeId)
                .expect("distinct");
        }
    }
    if k % 2 == 1 {
        for v in 0..n / 2 {
            g.add_edge(v as NodeId, ((v + n / 2) % n) as NodeId)
                .expect("distinct");
        }
    }

    let mut edges = g.edges();
    let batch = 10 * edges.len();
    for _round in 0..500 {
        for _ in 0..batch {
            let e1 = rng.random_range(0..edges.len());
            let e2 = rng.random_range(0..edges.len());
            if e1 == e2 {
                continue;
            }
            let (a, b) = edges[e1];
            let (c, d) = edges[e2];
            // Random orientation of the rewiring.
            let (c, d) = if rng.random::<bool>() { (c, d) } else { (d, c) };
            if a == c || a == d || b == c || b == d {
                continue;
            }
            if g.has_edge(a, c) || g.has_edge(b, d) {
                continue;
            }
            g.remove_edge(a, b).expect("tracked edge");
            g.remove_edge(c, d).expect("tracked edge");
            g.add_edge(a, c).expect("checked absent");
            g.add_edge(b, d).expect("checked absent");
            edges[e1] = if a < c { (a, c) } else { (c, a) };
            edges[e2] = if b < d { (b, d) } else { (d, b) };
        }
        if g.is_connected().expect("nonempty") {
            debug_assert!(g.nodes().iter().all(|&v| g.degree(v) == k));
            return Ok(g);
        }
    }
    Err(HarnessError::Invalid(format!(
        "failed to sample a connected {k}-regular graph on {n} nodes"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::trial_rng;

    #[test]
    fn max_density_gives_complete_graph() {
        let g = generate_initial_graph(5, 4.0, &mut trial_rng(81, 0)).unwrap();
        assert_eq!(g.edge_count(), 10);
    }

    #[test]
    fn two_nodes_give_single_edge() {
        let g = generate_initial_graph(2, 1.0, &mut trial_rng(81, 1)).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn large_sparse_graph_hits_target() {
        let g = generate_initial_graph(1000, 49.2, &mut trial_rng(81, 2)).unwrap();
        assert_eq!(g.edge_count(), 24600);
        assert!(g.is_connected().unwrap());
        let st = g.degree_stats().unwrap();
        assert!((st.avg() - 49.2).abs() <= 2.0 / 1000.0);
    }

    #[test]
    fn infeasible_targets_are_rejected() {
        assert!(generate_initial_graph(10, 9.5, &mut trial_rng(81, 3)).is_err());
        assert!(generate_initial_graph(10, 1.0, &mut trial_rng(81, 4)).is_err());
        assert!(generate_initial_graph(1, 0.0, &mut trial_rng(81, 5)).is_err());
    }

    #[test]
    fn average_degree_stays_within_rounding() {
        for seed in 0..20 {
            let mut rng = trial_rng(82, seed);
            let n = 20 + (seed as usize * 7) % 60;
            let avg = 2.0 + (seed as f64) * 0.37;
            let g = generate_initial_graph(n, avg, &mut rng).unwrap();
            assert!(g.is_connected().unwrap(), "seed {seed}");
            let st = g.degree_stats().unwrap();
            assert!(
                (st.avg() - avg).abs() <= 2.0 / n as f64 + 1e-12,
                "seed {seed}"
            );
            g.check_invariants().unwrap();
        }
    }

    #[test]
    fn trees_are_uniform_enough_to_vary() {
        let a = uniform_spanning_tree(8, &mut trial_rng(83, 0));
        let b = uniform_spanning_tree(8, &mut trial_rng(83, 1));
        assert_eq!(a.edge_count(), 7);
        assert_eq!(b.edge_count(), 7);
        assert!(a.is_connected().unwrap() && b.is_connected().unwrap());
        assert_ne!(a.edges(), b.edges(), "distinct seeds give distinct trees");
    }

    #[test]
    fn regular_generator_hits_exact_degrees() {
        for &(n, k) in &[(20usize, 4usize), (50, 6), (21, 4), (30, 7)] {
            let g = generate_regular_graph(n, k, &mut trial_rng(84, (n * k) as u64)).unwrap();
            assert!(g.nodes().iter().all(|&v| g.degree(v) == k), "n={n} k={k}");
            assert!(g.is_connected().unwrap());
            g.check_invariants().unwrap();
        }
    }

    #[test]
    fn regular_generator_randomizes_away_from_circulant() {
        let g = generate_regular_graph(40, 4, &mut trial_rng(85, 0)).unwrap();
        let circulant_edges = (0..40u32)
            .flat_map(|v| [(v, (v + 1) % 40), (v, (v + 2) % 40)])
            .count();
        let shared = g
            .edges()
            .iter()
            .filter(|&&(a, b)| {
                let diff = (b - a).min(40 - (b - a));
                diff == 1 || diff == 2
            })
            .count();
        assert!(
            shared * 2 < circulant_edges,
            "most circulant structure must be rewired"
        );
    }

    #[test]
    fn regular_generator_rejects_bad_parity() {
        assert!(generate_regular_graph(7, 3, &mut trial_rng(86, 0)).is_err());
        assert!(generate_regular_graph(5, 5, &mut trial_rng(86, 1)).is_err());
        assert!(generate_regular_graph(5, 1, &mut trial_rng(86, 2)).is_err());
    }
}
