//! Weighted undirected graphs and everything computed directly on them.

mod cut;
pub mod generators;
pub mod io;
pub mod oracle;
pub mod sampling;
mod union_find;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use cut::{cut_weight, part_val, Cut, Partition};
pub use generators::{generate, GeneratorSpec};
pub use union_find::UnionFind;

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph needs at least 2 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("edge {index}: endpoint {node} out of range for n = {n}")]
    NodeOutOfRange { index: usize, node: NodeId, n: usize },
    #[error("edge {index}: self-loop at node {node}")]
    SelfLoop { index: usize, node: NodeId },
    #[error("edge {index}: weight must be positive")]
    ZeroWeight { index: usize },
    #[error("edge {index}: weight {weight} exceeds bound n^4 = {bound}")]
    WeightTooLarge { index: usize, weight: u64, bound: u64 },
    #[error("duplicate edge between {u} and {v}")]
    DuplicateEdge { u: NodeId, v: NodeId },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("invalid cut: {0}")]
    InvalidCut(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("infeasible generator spec: {0}")]
    Infeasible(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub w: u64,
}

impl Edge {
    pub fn new(u: NodeId, v: NodeId, w: u64) -> Self {
        Edge { u, v, w }
    }

    /// Endpoints ordered as (min, max).
    pub fn ends(&self) -> (NodeId, NodeId) {
        if self.u < self.v {
            (self.u, self.v)
        } else {
            (self.v, self.u)
        }
    }

    pub fn other(&self, x: NodeId) -> NodeId {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// One entry of a node's adjacency list; its position in the list is the port number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Neighbor {
    pub node: NodeId,
    pub weight: u64,
    pub edge: usize,
}

/// A connected weighted graph. Edge order is preserved exactly as given.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<Neighbor>>,
}

pub fn weight_bound(n: usize) -> u64 {
    (n as u64).saturating_pow(4)
}

impl Graph {
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Self, GraphError> {
        if n < 2 {
            return Err(GraphError::TooFewNodes(n));
        }
        let bound = weight_bound(n);
        let mut adj: Vec<Vec<Neighbor>> = vec![Vec::new(); n];
        for (index, e) in edges.iter().enumerate() {
            for node in [e.u, e.v] {
                if node >= n {
                    return Err(GraphError::NodeOutOfRange { index, node, n });
                }
            }
            if e.u == e.v {
                return Err(GraphError::SelfLoop { index, node: e.u });
            }
            if e.w == 0 {
                return Err(GraphError::ZeroWeight { index });
            }
            if e.w > bound {
                return Err(GraphError::WeightTooLarge { index, weight: e.w, bound });
            }
            adj[e.u].push(Neighbor { node: e.v, weight: e.w, edge: index });
            adj[e.v].push(Neighbor { node: e.u, weight: e.w, edge: index });
        }
        for (x, list) in adj.iter_mut().enumerate() {
            list.sort_by_key(|nb| nb.node);
            if let Some(pair) = list.windows(2).find(|p| p[0].node == p[1].node) {
                let (u, v) = if x < pair[0].node { (x, pair[0].node) } else { (pair[0].node, x) };
                return Err(GraphError::DuplicateEdge { u, v });
            }
        }
        let g = Graph { n, edges, adj };
        if !g.is_connected_by(|_| true) {
            return Err(GraphError::Disconnected);
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of (weighted) edges.
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> Edge {
        self.edges[e]
    }

    /// Adjacency of `v`, sorted by neighbor id.
    pub fn adj(&self, v: NodeId) -> &[Neighbor] {
        &self.adj[v]
    }

    /// Σ w(e), the multigraph edge count.
    pub fn total_weight(&self) -> u64 {
        self.edges.iter().map(|e| e.w).sum()
    }

    pub fn weighted_degree(&self, v: NodeId) -> u64 {
        self.adj[v].iter().map(|nb| nb.weight).sum()
    }

    pub fn min_weighted_degree(&self) -> u64 {
        (0..self.n).map(|v| self.weighted_degree(v)).min().unwrap_or(0)
    }

    pub fn port_of(&self, v: NodeId, u: NodeId) -> Option<usize> {
        self.adj[v].binary_search_by_key(&u, |nb| nb.node).ok()
    }

    pub fn edge_between(&self, u: NodeId, v: NodeId) -> Option<usize> {
        self.port_of(u, v).map(|p| self.adj[u][p].edge)
    }

    /// Whether the subgraph of edges passing `keep` is connected.
    pub fn is_connected_by(&self, keep: impl Fn(usize) -> bool) -> bool {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = queue.pop_front() {
            for nb in &self.adj[x] {
                if !seen[nb.node] && keep(nb.edge) {
                    seen[nb.node] = true;
                    count += 1;
                    queue.push_back(nb.node);
                }
            }
        }
        count == self.n
    }

    /// Hop distances from `src`.
    pub fn bfs_distances(&self, src: NodeId) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        dist[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(x) = queue.pop_front() {
            for nb in &self.adj[x] {
                if dist[nb.node] == usize::MAX {
                    dist[nb.node] = dist[x] + 1;
                    queue.push_back(nb.node);
                }
            }
        }
        dist
    }

    pub fn eccentricity(&self, v: NodeId) -> usize {
        self.bfs_distances(v).into_iter().max().unwrap_or(0)
    }

    /// Exact hop diameter, O(n·m).
    pub fn diameter(&self) -> usize {
        (0..self.n).map(|v| self.eccentricity(v)).max().unwrap_or(0)
    }

    /// Component labels (min id) of the subgraph keeping edges passing `keep`.
    pub fn component_labels(&self, keep: impl Fn(usize) -> bool) -> Vec<NodeId> {
        let mut uf = UnionFind::new(self.n);
        for (i, e) in self.edges.iter().enumerate() {
            if keep(i) {
                uf.union(e.u, e.v);
            }
        }
        let mut min_of = vec![usize::MAX; self.n];
        for v in 0..self.n {
            let r = uf.find(v);
            min_of[r] = min_of[r].min(v);
        }
        (0..self.n).map(|v| min_of[uf.find(v)]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(u: usize, v: usize, w: u64) -> Edge {
        Edge::new(u, v, w)
    }

    #[test]
    fn constructor_rejects_bad_input() {
        assert_eq!(Graph::new(1, vec![]), Err(GraphError::TooFewNodes(1)));
        assert!(matches!(Graph::new(3, vec![e(0, 1, 1), e(1, 1, 1)]), Err(GraphError::SelfLoop { .. })));
        assert!(matches!(Graph::new(2, vec![e(0, 2, 1)]), Err(GraphError::NodeOutOfRange { .. })));
        assert!(matches!(Graph::new(2, vec![e(0, 1, 0)]), Err(GraphError::ZeroWeight { .. })));
        assert!(matches!(Graph::new(2, vec![e(0, 1, 17)]), Err(GraphError::WeightTooLarge { .. })));
        assert!(Graph::new(2, vec![e(0, 1, 16)]).is_ok());
        assert_eq!(Graph::new(2, vec![e(0, 1, 1), e(1, 0, 2)]), Err(GraphError::DuplicateEdge { u: 0, v: 1 }));
        assert_eq!(Graph::new(4, vec![e(0, 1, 1), e(2, 3, 1)]), Err(GraphError::Disconnected));
    }

    #[test]
    fn adjacency_is_sorted_and_ports_resolve() {
        let g = Graph::new(4, vec![e(0, 3, 2), e(0, 1, 1), e(2, 0, 5)]).unwrap();
        let ids: Vec<_> = g.adj(0).iter().map(|nb| nb.node).collect();
        assert_eq!(ids, vec![1, 2, 3]);
        assert_eq!(g.port_of(0, 2), Some(1));
        assert_eq!(g.edge_between(3, 0), Some(0));
        assert_eq!(g.edge_between(1, 2), None);
        assert_eq!(g.weighted_degree(0), 8);
        assert_eq!(g.total_weight(), 8);
        assert_eq!(g.diameter(), 2);
    }
}
