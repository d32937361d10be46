//! Level records shared by the sequential and distributed drivers.

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, NodeId};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// More than (1−ε′)|V| components: the best component cut closes the run.
    ManyComponents,
    /// Contract the components and go one level down.
    Contract,
    /// Everything fell into one component; nothing left to contract into.
    Collapsed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRecord {
    /// Vertices of the contracted graph at this level.
    pub nodes: usize,
    /// Multigraph edges between distinct vertices (Σ w).
    pub edges: u64,
    pub trees: usize,
    pub pack_val: Rational,
    /// l_a = (1 − 2ε′) / pack_val.
    pub threshold: Rational,
    pub components: usize,
    pub branch: Branch,
    /// Smallest 1-respecting cut at this level: (weight, node, tree index).
    pub best_one_respect: Option<(u64, NodeId, usize)>,
    /// Smallest component cut (weight, component label) on the many-components branch.
    pub component_cut: Option<(u64, NodeId)>,
    #[serde(skip)]
    pub tree_edges: Vec<Vec<usize>>,
    #[serde(skip)]
    pub labels: Vec<NodeId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecursionTrace {
    pub eps: Rational,
    pub eps_prime: Rational,
    pub lambda_bound: u64,
    pub levels: Vec<LevelRecord>,
}

impl RecursionTrace {
    pub fn trees_packed(&self) -> usize {
        self.levels.iter().map(|l| l.trees).sum()
    }

    /// ⌈ln n / ε′⌉ + 1.
    pub fn level_bound(n: usize, eps_prime: &Rational) -> usize {
        ((n as f64).ln() / crate::rational::to_f64(eps_prime)).ceil() as usize + 1
    }

    /// Node and edge shrinkage across every contract level, and the level count.
    pub fn check_geometry(&self, n: usize) -> Result<(), String> {
        let one = Rational::from_integer(1);
        for (i, pair) in self.levels.windows(2).enumerate() {
            let (a, b) = (&pair[0], &pair[1]);
            if a.branch != Branch::Contract {
                return Err(format!("level {i} ended with {:?} but was followed by another", a.branch));
            }
            if Rational::from_integer(b.nodes as i128) > (one - self.eps_prime) * Rational::from_integer(a.nodes as i128) {
                return Err(format!("level {i}: nodes {} -> {} shrink by less than 1 - ε′", a.nodes, b.nodes));
            }
            if Rational::from_integer(b.edges as i128) * (one + self.eps_prime) > Rational::from_integer(a.edges as i128) {
                return Err(format!("level {i}: edges {} -> {} shrink by less than 1 + ε′", a.edges, b.edges));
            }
        }
        let bound = Self::level_bound(n, &self.eps_prime);
        if self.levels.len() > bound {
            return Err(format!("{} levels exceed the bound {bound}", self.levels.len()));
        }
        Ok(())
    }
}

/// Hard stop for the level loop: ⌈ln n / ε′⌉ + 2.
pub fn level_cap(n: usize, eps_prime: &Rational) -> usize {
    RecursionTrace::level_bound(n, eps_prime) + 1
}

/// Vertex and multigraph edge counts of the graph contracted along `labels`.
pub fn contracted_size(g: &Graph, labels: &[NodeId]) -> (usize, u64) {
    let nodes = (0..g.n()).filter(|&v| labels[v] == v).count();
    let edges = g.edges().iter().filter(|e| labels[e.u] != labels[e.v]).map(|e| e.w).sum();
    (nodes, edges)
}

/// Whether `components` exceeds (1 − ε′)·`nodes`.
pub fn many_components(components: usize, nodes: usize, eps_prime: &Rational) -> bool {
    Rational::from_integer(components as i128) > (Rational::from_integer(1) - eps_prime) * Rational::from_integer(nodes as i128)
}
