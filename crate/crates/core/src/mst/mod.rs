//! Rooted spanning trees, the distributed MST and fragment decomposition.

pub mod distributed;
pub mod fragments;
mod kruskal;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::sim::LocalTree;

pub use distributed::{dist_mst, dist_mst_on};
pub use fragments::{fragment_decompose, FragmentDecomposition, FragmentTree};
pub use kruskal::{edge_code, lexicographic_mst};

/// A spanning tree of a graph with parent pointers; children are sorted by id.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RootedTree {
    root: NodeId,
    parent: Vec<Option<NodeId>>,
    children: Vec<Vec<NodeId>>,
    depth: Vec<usize>,
    /// Nodes in BFS order from the root.
    order: Vec<NodeId>,
}

impl RootedTree {
    pub fn from_parents(g: &Graph, parent: Vec<Option<NodeId>>) -> Result<Self> {
        let n = g.n();
        if parent.len() != n {
            return Err(Error::InvalidArgument("parent vector length differs from n".into()));
        }
        let roots: Vec<NodeId> = (0..n).filter(|&v| parent[v].is_none()).collect();
        let [root] = roots[..] else {
            return Err(Error::InvalidArgument(format!("expected exactly one root, found {}", roots.len())));
        };
        let mut children = vec![Vec::new(); n];
        for v in 0..n {
            if let Some(p) = parent[v] {
                if p >= n || g.edge_between(v, p).is_none() {
                    return Err(Error::InvalidArgument(format!("tree edge {p}-{v} is not a graph edge")));
                }
                children[p].push(v);
            }
        }
        let mut depth = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        let mut queue = VecDeque::from([root]);
        depth[root] = 0;
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for &c in &children[x] {
                depth[c] = depth[x] + 1;
                queue.push_back(c);
            }
        }
        if order.len() != n {
            return Err(Error::InvalidArgument("parent pointers contain a cycle".into()));
        }
        Ok(RootedTree { root, parent, children, depth, order })
    }

    /// Orients a spanning tree given by edge ids away from `root`.
    pub fn from_edges(g: &Graph, edges: &[usize], root: NodeId) -> Result<Self> {
        let n = g.n();
        if edges.len() != n - 1 || root >= n {
            return Err(Error::InvalidArgument(format!("{} edges cannot span {n} nodes", edges.len())));
        }
        let mut adj = vec![Vec::new(); n];
        for &e in edges {
            let ed = g.edges().get(e).ok_or_else(|| Error::InvalidArgument(format!("edge {e} out of range")))?;
            adj[ed.u].push(ed.v);
            adj[ed.v].push(ed.u);
        }
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some(x);
                    queue.push_back(y);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidArgument("edge set does not span the graph".into()));
        }
        RootedTree::from_parents(g, parent)
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        self.parent[v]
    }

    pub fn parents(&self) -> &[Option<NodeId>] {
        &self.parent
    }

    pub fn children(&self, v: NodeId) -> &[NodeId] {
        &self.children[v]
    }

    pub fn depth(&self, v: NodeId) -> usize {
        self.depth[v]
    }

    pub fn height(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    pub fn bfs_order(&self) -> &[NodeId] {
        &self.order
    }

    /// v↓: v and all its descendants, sorted.
    pub fn subtree(&self, v: NodeId) -> Vec<NodeId> {
        let mut out = vec![v];
        let mut i = 0;
        while i < out.len() {
            out.extend_from_slice(&self.children[out[i]]);
            i += 1;
        }
        out.sort_unstable();
        out
    }

    pub fn is_ancestor(&self, a: NodeId, mut v: NodeId) -> bool {
        while self.depth[v] > self.depth[a] {
            v = self.parent[v].expect("non-root has a parent");
        }
        v == a
    }

    /// Lowest common ancestor by climbing.
    pub fn lca(&self, mut a: NodeId, mut b: NodeId) -> NodeId {
        while self.depth[a] > self.depth[b] {
            a = self.parent[a].expect("non-root");
        }
        while self.depth[b] > self.depth[a] {
            b = self.parent[b].expect("non-root");
        }
        while a != b {
            a = self.parent[a].expect("non-root");
            b = self.parent[b].expect("non-root");
        }
        a
    }

    /// Graph edge id of v's parent edge.
    pub fn parent_edge(&self, g: &Graph, v: NodeId) -> Option<usize> {
        self.parent[v].map(|p| g.edge_between(v, p).expect("tree edge"))
    }

    /// Sorted graph edge ids of the tree.
    pub fn edge_ids(&self, g: &Graph) -> Vec<usize> {
        let mut ids: Vec<usize> = (0..self.n()).filter_map(|v| self.parent_edge(g, v)).collect();
        ids.sort_unstable();
        ids
    }

    /// Per-node port view for node programs.
    pub fn local_views(&self, g: &Graph) -> Vec<LocalTree> {
        (0..self.n())
            .map(|v| {
                let mut children: Vec<usize> =
                    self.children[v].iter().map(|&c| g.port_of(v, c).expect("tree edge")).collect();
                children.sort_unstable();
                LocalTree { parent: self.parent[v].map(|p| g.port_of(v, p).expect("tree edge")), children }
            })
            .collect()
    }

    /// Inverse of [`RootedTree::local_views`].
    pub fn from_local_views(g: &Graph, views: &[LocalTree]) -> Result<Self> {
        let parent = views.iter().enumerate().map(|(v, t)| t.parent.map(|p| g.adj(v)[p].node)).collect();
        RootedTree::from_parents(g, parent)
    }
}
