//! Mutable undirected simple graph with stable node ids.
//!
//! Node ids survive removals (no re-indexing), so attack scenarios can delete
//! nodes mid-run while the rest of the toolkit keeps referring to the
//! survivors by their original ids. Adjacency lists are kept sorted, which
//! makes neighbor iteration deterministic and lets "pick a neighbor uniformly
//! at random" reproduce exactly from a seed.

use std::fmt::Write as _;

use thiserror::Error;

/// Agent identifier. Opaque; never re-used after removal within one graph.
pub type NodeId = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("unknown node id {0}")]
    UnknownNode(NodeId),
    #[error("self-loop on node {0} rejected")]
    SelfLoop(NodeId),
    #[error("node {1} is not a neighbor of node {0}")]
    NotANeighbor(NodeId, NodeId),
    #[error("operation undefined on an empty graph")]
    EmptyGraph,
    #[error("bad edge list: {0}")]
    BadEdgeList(String),
}

/// Exact degree summary: min, max, and the average as the ratio 2|E|/n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeStats {
    pub min: usize,
    pub max: usize,
    /// Sum of all degrees, i.e. 2|E| (exact numerator of the average).
    pub degree_total: usize,
    pub nodes: usize,
}

impl DegreeStats {
    pub fn avg(&self) -> f64 {
        self.degree_total as f64 / self.nodes as f64
    }
}

/// Undirected simple graph over `u32` node ids.
///
/// Invariants (checked by [`Graph::check_invariants`] in tests):
/// symmetric adjacency, no self-loops, no multi-edges, and
/// `sum(degrees) == 2 * edge_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    /// Slab indexed by node id; `None` marks removed / never-created ids.
    /// Each live entry is a sorted list of neighbor ids.
    slots: Vec<Option<Vec<NodeId>>>,
    /// Sorted list of live node ids.
    nodes: Vec<NodeId>,
    edge_count: usize,
}

impl Graph {
    /// Graph with nodes `0..n` and no edges.
    pub fn with_nodes(n: usize) -> Self {
        Graph {
            slots: (0..n).map(|_| Some(Vec::new())).collect(),
            nodes: (0..n as NodeId).collect(),
            edge_count: 0,
        }
    }

    /// Graph over an explicit id set (ids need not be contiguous).
    pub fn with_node_ids(ids: &[NodeId]) -> Self {
        let mut nodes: Vec<NodeId> = ids.to_vec();
        nodes.sort_unstable();
        nodes.dedup();
        let cap = nodes.last().map_or(0, |&m| m as usize + 1);
        let mut slots: Vec<Option<Vec<NodeId>>> = vec![None; cap];
        for &i in &nodes {
            slots[i as usize] = Some(Vec::new());
        }
        Graph {
            slots,
            nodes,
            edge_count: 0,
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn contains_node(&self, i: NodeId) -> bool {
        self.slots.get(i as usize).is_some_and(|s| s.is_some())
    }

    /// Live node ids in ascending order.
    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    /// Sorted neighbors of `i`. Panics if `i` is not a live node.
    pub fn neighbors(&self, i: NodeId) -> &[NodeId] {
        self.slots[i as usize]
            .as_deref()
            .unwrap_or_else(|| panic!("node {i} not in graph"))
    }

    pub fn degree(&self, i: NodeId) -> usize {
        self.neighbors(i).len()
    }

    pub fn has_edge(&self, i: NodeId, j: NodeId) -> bool {
        self.contains_node(i)
            && self.contains_node(j)
            && self.neighbors(i).binary_search(&j).is_ok()
    }

    fn adj_mut(&mut self, i: NodeId) -> &mut Vec<NodeId> {
        self.slots[i as usize].as_mut().expect("live node")
    }

    fn ensure_node(&self, i: NodeId) -> Result<(), GraphError> {
        if self.contains_node(i) {
            Ok(())
        } else {
            Err(GraphError::UnknownNode(i))
        }
    }

    /// Insert edge `(i, j)`. Returns `false` (and leaves the graph unchanged)
    /// if the edge already exists.
    pub fn add_edge(&mut self, i: NodeId, j: NodeId) -> Result<bool, GraphError> {
        self.ensure_node(i)?;
        self.ensure_node(j)?;
        if i == j {
            return Err(GraphError::SelfLoop(i));
        }
        let pos = match self.neighbors(i).binary_search(&j) {
            Ok(_) => return Ok(false),
            Err(pos) => pos,
        };
        self.adj_mut(i).insert(pos, j);
        let pos = self.neighbors(j).binary_search(&i).unwrap_err();
        self.adj_mut(j).insert(pos, i);
        self.edge_count += 1;
        Ok(true)
    }

    /// Delete edge `(i, j)`. Returns `false` if the edge was not present.
    pub fn remove_edge(&mut self, i: NodeId, j: NodeId) -> Result<bool, GraphError> {
        self.ensure_node(i)?;
        self.ensure_node(j)?;
        let pos = match self.neighbors(i).binary_search(&j) {
            Ok(pos) => pos,
            Err(_) => return Ok(false),
        };
        self.adj_mut(i).remove(pos);
        let pos = self
            .neighbors(j)
            .binary_search(&i)
            .expect("symmetric adjacency");
        self.adj_mut(j).remove(pos);
        self.edge_count -= 1;
        Ok(true)
    }

    /// 2-hop candidates reachable through neighbor `j`: the set
    /// `N(j) \ (N(i) ∪ {i})`, returned sorted. Errors unless `j ∈ N(i)`.
    pub fn two_hop_candidates(&self, i: NodeId, j: NodeId) -> Result<Vec<NodeId>, GraphError> {
        self.ensure_node(i)?;
        self.ensure_node(j)?;
        if !self.has_edge(i, j) {
            return Err(GraphError::NotANeighbor(i, j));
        }
        let ni = self.neighbors(i);
        Ok(self
            .neighbors(j)
            .iter()
            .copied()
            .filter(|&h| h != i && ni.binary_search(&h).is_err())
            .collect())
    }

    /// True iff a single traversal reaches every live node. A lone node is
    /// connected; the empty graph is an error.
    pub fn is_connected(&self) -> Result<bool, GraphError> {
        let &start = self.nodes.first().ok_or(GraphError::EmptyGraph)?;
        Ok(self.component_of(start).len() == self.nodes.len())
    }

    /// Nodes reachable from `start` (including it), ascending.
    pub fn component_of(&self, start: NodeId) -> Vec<NodeId> {
        let mut seen = vec![false; self.slots.len()];
        let mut stack = vec![start];
        seen[start as usize] = true;
        let mut out = Vec::new();
        while let Some(v) = stack.pop() {
            out.push(v);
            for &w in self.neighbors(v) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    stack.push(w);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Largest connected component (ties broken by smallest contained id).
    pub fn largest_component(&self) -> Vec<NodeId> {
        let mut seen = vec![false; self.slots.len()];
        let mut best: Vec<NodeId> = Vec::new();
        for &v in &self.nodes {
            if seen[v as usize] {
                continue;
            }
            let comp = self.component_of(v);
            for &w in &comp {
                seen[w as usize] = true;
            }
            if comp.len() > best.len() {
                best = comp;
            }
        }
        best
    }

    /// Remove node `i` and all incident edges; returns its former degree.
    pub fn remove_node(&mut self, i: NodeId) -> Result<usize, GraphError> {
        self.ensure_node(i)?;
        let neighbors = std::mem::take(self.adj_mut(i));
        for &j in &neighbors {
            let pos = self
                .neighbors(j)
                .binary_search(&i)
                .expect("symmetric adjacency");
            self.adj_mut(j).remove(pos);
        }
        self.edge_count -= neighbors.len();
        self.slots[i as usize] = None;
        let pos = self.nodes.binary_search(&i).expect("listed live node");
        self.nodes.remove(pos);
        Ok(neighbors.len())
    }

    pub fn degree_stats(&self) -> Result<DegreeStats, GraphError> {
        if self.nodes.is_empty() {
            return Err(GraphError::EmptyGraph);
        }
        let mut min = usize::MAX;
        let mut max = 0usize;
        for &i in &self.nodes {
            let d = self.degree(i);
            min = min.min(d);
            max = max.max(d);
        }
        Ok(DegreeStats {
            min,
            max,
            degree_total: 2 * self.edge_count,
            nodes: self.nodes.len(),
        })
    }

    /// All edges as `(i, j)` with `i < j`, lexicographically sorted.
    pub fn edges(&self) -> Vec<(NodeId, NodeId)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for &i in &self.nodes {
            for &j in self.neighbors(i) {
                if i < j {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Subgraph induced by `keep` (ids preserved).
    pub fn induced_subgraph(&self, keep: &[NodeId]) -> Graph {
        let mut g = Graph::with_node_ids(keep);
        for &i in g.nodes.clone().iter() {
            for &j in self.neighbors(i) {
                if i < j && g.contains_node(j) {
                    g.add_edge(i, j).expect("nodes exist");
                }
            }
        }
        g
    }

    /// Serialize as edge-list text: `"n m"` then one `"i j"` line per edge
    /// with `i < j`, lexicographic order. Ids are remapped to contiguous
    /// `0..n` (ascending original id), so graphs with removal holes stay
    /// loadable.
    pub fn to_edge_list(&self) -> String {
        let mut remap = vec![0 as NodeId; self.slots.len()];
        for (idx, &i) in self.nodes.iter().enumerate() {
            remap[i as usize] = idx as NodeId;
        }
        let mut s = String::new();
        let _ = writeln!(s, "{} {}", self.nodes.len(), self.edge_count);
        for (i, j) in self.edges() {
            let (a, b) = (remap[i as usize], remap[j as usize]);
            let (a, b) = if a < b { (a, b) } else { (b, a) };
            let _ = writeln!(s, "{a} {b}");
        }
        s
    }

    /// Parse the edge-list text format produced by [`Graph::to_edge_list`].
    pub fn from_edge_list(text: &str) -> Result<Graph, GraphError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| GraphError::BadEdgeList("missing header line".into()))?;
        let mut it = header.split_whitespace();
        let n: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| GraphError::BadEdgeList(format!("bad header {header:?}")))?;
        let m: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| GraphError::BadEdgeList(format!("bad header {header:?}")))?;
        let mut g = Graph::with_nodes(n);
        let mut count = 0usize;
        for line in lines {
            let mut it = line.split_whitespace();
            let parse = |t: Option<&str>| -> Result<NodeId, GraphError> {
                t.and_then(|t| t.parse().ok())
                    .ok_or_else(|| GraphError::BadEdgeList(format!("bad edge line {line:?}")))
            };
            let i = parse(it.next())?;
            let j = parse(it.next())?;
            if i >= j {
                return Err(GraphError::BadEdgeList(format!(
                    "edge {i} {j} violates i < j"
                )));
            }
            if (j as usize) >= n {
                return Err(GraphError::BadEdgeList(format!("node {j} out of range")));
            }
            if !g.add_edge(i, j)? {
                return Err(GraphError::BadEdgeList(format!("duplicate edge {i} {j}")));
            }
            count += 1;
        }
        if count != m {
            return Err(GraphError::BadEdgeList(format!(
                "header declares {m} edges, found {count}"
            )));
        }
        Ok(g)
    }

    /// Full structural validation; test/debug helper.
    pub fn check_invariants(&self) -> Result<(), String> {
        let mut total = 0usize;
        for &i in &self.nodes {
            let adj = self.neighbors(i);
            if !adj.windows(2).all(|w| w[0] < w[1]) {
                return Err(format!("adjacency of {i} not strictly sorted: {adj:?}"));
            }
            if adj.binary_search(&i).is_ok() {
                return Err(format!("self-loop on {i}"));
            }
            for &j in adj {
                if !self.contains_node(j) {
                    return Err(format!("edge ({i},{j}) points at dead node"));
                }
                if self.neighbors(j).binary_search(&i).is_err() {
                    return Err(format!("asymmetric edge ({i},{j})"));
                }
            }
            total += adj.len();
        }
        if total != 2 * self.edge_count {
            return Err(format!(
                "handshake violated: sum(deg) = {total}, 2|E| = {}",
                2 * self.edge_count
            ));
        }
        for (idx, slot) in self.slots.iter().enumerate() {
            let listed = self.nodes.binary_search(&(idx as NodeId)).is_ok();
            if slot.is_some() != listed {
                return Err(format!(
                    "slot {idx} live={} listed={listed}",
                    slot.is_some()
                ));
            }
        }
        Ok(())
    }
}
