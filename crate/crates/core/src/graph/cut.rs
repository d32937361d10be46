use serde::{Deserialize, Serialize};

use super::{Graph, GraphError, NodeId};
use crate::rational::Rational;

/// A bipartition (S, V∖S) with its weight. `side` is sorted and proper.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cut {
    side: Vec<NodeId>,
    weight: u64,
}

fn side_mask(n: usize, side: &[NodeId]) -> Result<Vec<bool>, GraphError> {
    let mut mask = vec![false; n];
    for &v in side {
        if v >= n {
            return Err(GraphError::InvalidCut(format!("node {v} out of range")));
        }
        if mask[v] {
            return Err(GraphError::InvalidCut(format!("node {v} listed twice")));
        }
        mask[v] = true;
    }
    if side.is_empty() || side.len() == n {
        return Err(GraphError::InvalidCut("side must be a nonempty proper subset".into()));
    }
    Ok(mask)
}

fn mask_weight(g: &Graph, mask: &[bool]) -> u64 {
    g.edges().iter().filter(|e| mask[e.u] != mask[e.v]).map(|e| e.w).sum()
}

/// Σ w(uv) over u ∈ s, v ∉ s.
pub fn cut_weight(g: &Graph, s: &[NodeId]) -> Result<u64, GraphError> {
    let mask = side_mask(g.n(), s)?;
    Ok(mask_weight(g, &mask))
}

impl Cut {
    pub fn new(g: &Graph, side: impl IntoIterator<Item = NodeId>) -> Result<Self, GraphError> {
        let mut side: Vec<NodeId> = side.into_iter().collect();
        side.sort_unstable();
        let mask = side_mask(g.n(), &side)?;
        Ok(Cut { weight: mask_weight(g, &mask), side })
    }

    pub fn from_mask(g: &Graph, mask: &[bool]) -> Result<Self, GraphError> {
        if mask.len() != g.n() {
            return Err(GraphError::InvalidCut("mask length differs from n".into()));
        }
        Cut::new(g, (0..g.n()).filter(|&v| mask[v]))
    }

    pub fn side(&self) -> &[NodeId] {
        &self.side
    }

    pub fn weight(&self) -> u64 {
        self.weight
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.side.binary_search(&v).is_ok()
    }

    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for &v in &self.side {
            mask[v] = true;
        }
        mask
    }

    /// The side not containing node 0 is swapped in, so equal bipartitions compare equal.
    pub fn canonical(&self, n: usize) -> Vec<NodeId> {
        if self.contains(0) {
            let mask = self.mask(n);
            (0..n).filter(|&v| !mask[v]).collect()
        } else {
            self.side.clone()
        }
    }

    pub fn same_bipartition(&self, other: &Cut, n: usize) -> bool {
        self.canonical(n) == other.canonical(n)
    }

    /// Recomputes the weight on `g` and compares.
    pub fn verify(&self, g: &Graph) -> bool {
        cut_weight(g, &self.side).map(|w| w == self.weight).unwrap_or(false)
    }
}

/// Disjoint nonempty blocks covering V, each block sorted, blocks ordered by min element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    blocks: Vec<Vec<NodeId>>,
}

impl Partition {
    pub fn new(n: usize, blocks: Vec<Vec<NodeId>>) -> Result<Self, GraphError> {
        let mut seen = vec![false; n];
        let mut blocks: Vec<Vec<NodeId>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        for b in &blocks {
            if b.is_empty() {
                return Err(GraphError::InvalidPartition("empty block".into()));
            }
            for &v in b {
                if v >= n || seen[v] {
                    return Err(GraphError::InvalidPartition(format!("node {v} out of range or repeated")));
                }
                seen[v] = true;
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(GraphError::InvalidPartition(format!("node {v} not covered")));
        }
        blocks.sort_by_key(|b| b[0]);
        Ok(Partition { blocks })
    }

    /// Blocks = classes of equal labels.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut by_label = std::collections::BTreeMap::<usize, Vec<NodeId>>::new();
        for (v, &l) in labels.iter().enumerate() {
            by_label.entry(l).or_default().push(v);
        }
        let mut blocks: Vec<Vec<NodeId>> = by_label.into_values().collect();
        blocks.sort_by_key(|b| b[0]);
        Partition { blocks }
    }

    pub fn blocks(&self) -> &[Vec<NodeId>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Block index per node.
    pub fn block_of(&self, n: usize) -> Vec<usize> {
        let mut out = vec![0; n];
        for (i, b) in self.blocks.iter().enumerate() {
            for &v in b {
                out[v] = i;
            }
        }
        out
    }

    /// Total weight of edges between different blocks.
    pub fn crossing_weight(&self, g: &Graph) -> u64 {
        let block = self.block_of(g.n());
        g.edges().iter().filter(|e| block[e.u] != block[e.v]).map(|e| e.w).sum()
    }
}

/// Crossing weight divided by (|p| − 1), exactly.
pub fn part_val(g: &Graph, p: &Partition) -> Result<Rational, GraphError> {
    if p.len() < 2 {
        return Err(GraphError::InvalidPartition("partition value needs at least 2 blocks".into()));
    }
    Ok(Rational::new(p.crossing_weight(g) as i128, (p.len() - 1) as i128))
}
