//! Greedy tree packing over the multigraph view of a weighted graph.
//!
//! A weight-w edge stands for w parallel unit edges. Each new tree is the MST
//! under the current loads and takes the least loaded copy, so after t trees
//! used an edge its copies carry ⌊t/w⌋ or ⌈t/w⌉; storing t alone is exact.
//! Edges flagged internal belong to contracted components: they get key −1,
//! carry no load and are ignored by every load statistic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::oracle::min_partition_value;
use crate::graph::{Edge, Graph, NodeId, Partition};
use crate::mst::lexicographic_mst;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreePacking {
    weights: Vec<u64>,
    internal: Vec<bool>,
    count: Vec<u64>,
    trees: Vec<Vec<usize>>,
}

impl TreePacking {
    pub fn new(g: &Graph) -> Self {
        Self::contracted(g, vec![false; g.m()])
    }

    pub fn contracted(g: &Graph, internal: Vec<bool>) -> Self {
        assert_eq!(internal.len(), g.m());
        TreePacking { weights: g.edges().iter().map(|e| e.w).collect(), internal, count: vec![0; g.m()], trees: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn trees(&self) -> &[Vec<usize>] {
        &self.trees
    }

    pub fn internal(&self) -> &[bool] {
        &self.internal
    }

    /// Number of trees containing (a copy of) edge `e`.
    pub fn count(&self, e: usize) -> u64 {
        self.count[e]
    }

    /// Smallest and largest load over the parallel copies of `e`.
    pub fn copy_loads(&self, e: usize) -> (u64, u64) {
        let (t, w) = (self.count[e], self.weights[e]);
        (t / w, t.div_ceil(w))
    }

    /// Keys for the next greedy tree.
    pub fn mst_keys(&self) -> Vec<i64> {
        (0..self.count.len()).map(|e| if self.internal[e] { -1 } else { self.copy_loads(e).0 as i64 }).collect()
    }

    pub fn push_tree(&mut self, tree: Vec<usize>) {
        for &e in &tree {
            if !self.internal[e] {
                self.count[e] += 1;
            }
        }
        self.trees.push(tree);
    }

    /// Greedily adds trees until there are `k`.
    pub fn extend(&mut self, g: &Graph, k: usize) {
        while self.trees.len() < k {
            let tree = lexicographic_mst(g, &self.mst_keys());
            self.push_tree(tree);
        }
    }

    /// max over non-internal copies of the load.
    pub fn max_load(&self) -> u64 {
        (0..self.count.len()).filter(|&e| !self.internal[e]).map(|e| self.copy_loads(e).1).max().unwrap_or(0)
    }

    /// |𝒯| / max load.
    pub fn pack_val(&self) -> Rational {
        let max = self.max_load();
        assert!(max > 0, "pack_val of an empty packing");
        Rational::new(self.trees.len() as i128, max as i128)
    }

    /// Relative loads ⌊t/w⌋/|𝒯| and ⌈t/w⌉/|𝒯| of the copies of `e`.
    pub fn relative_loads(&self, e: usize) -> (Rational, Rational) {
        let k = self.trees.len() as i128;
        let (lo, hi) = self.copy_loads(e);
        (Rational::new(lo as i128, k), Rational::new(hi as i128, k))
    }

    /// Rebuilds the packing greedily and checks it reproduces the same trees and loads.
    pub fn replay(&self, g: &Graph) -> bool {
        let mut fresh = TreePacking::contracted(g, self.internal.clone());
        fresh.extend(g, self.trees.len());
        fresh == *self
    }

    pub fn to_json(&self, g: &Graph) -> String {
        let dump = PackingDump {
            trees: self.trees.iter().map(|t| t.iter().map(|&e| [g.edge(e).u, g.edge(e).v]).collect()).collect(),
        };
        serde_json::to_string(&dump).expect("plain data serializes")
    }

    pub fn from_json(g: &Graph, text: &str) -> Result<Self> {
        let dump: PackingDump = serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("packing dump: {e}")))?;
        let mut p = TreePacking::new(g);
        for tree in dump.trees {
            let mut ids = tree
                .iter()
                .map(|&[u, v]| g.edge_between(u, v).ok_or_else(|| Error::InvalidArgument(format!("no edge {u}-{v}"))))
                .collect::<Result<Vec<_>>>()?;
            ids.sort_unstable();
            p.push_tree(ids);
        }
        Ok(p)
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct PackingDump {
    trees: Vec<Vec<[NodeId; 2]>>,
}

pub fn greedy_pack(g: &Graph, k: usize) -> TreePacking {
    let mut p = TreePacking::new(g);
    p.extend(g, k);
    p
}

/// ⌈6·λ·ln m / ε²⌉, at least 1.
pub fn tree_count_for(lambda: u64, m: u64, eps: &Rational) -> Result<usize> {
    tree_count_ln(lambda, (m.max(1) as f64).ln(), eps)
}

/// [`tree_count_for`] with ln m supplied directly.
pub fn tree_count_ln(lambda: u64, ln_m: f64, eps: &Rational) -> Result<usize> {
    if *eps >= Rational::from_integer(2) || *eps <= Rational::from_integer(0) {
        return Err(Error::InvalidArgument(format!("tree count needs 0 < ε < 2, got {eps}")));
    }
    let e = crate::rational::to_f64(eps);
    let k = (6.0 * lambda as f64 * ln_m / (e * e)).ceil();
    Ok((k as usize).max(1))
}

/// l_a = (1 − 2ε′) / pack_val.
pub fn load_threshold(packing: &TreePacking, eps_prime: &Rational) -> Rational {
    (Rational::from_integer(1) - Rational::from_integer(2) * eps_prime) / packing.pack_val()
}

/// Whether edge `e` is in E_{<l_a}: internal, or some copy has relative load below l_a.
pub fn below_threshold(packing: &TreePacking, e: usize, l_a: &Rational) -> bool {
    packing.internal()[e] || packing.relative_loads(e).0 < *l_a
}

/// Components of (V, E_{<l_a}) as per-node labels (minimum id in the component).
pub fn threshold_labels(g: &Graph, packing: &TreePacking, l_a: &Rational) -> Vec<NodeId> {
    g.component_labels(|e| below_threshold(packing, e, l_a))
}

pub fn load_threshold_components(g: &Graph, packing: &TreePacking, l_a: &Rational) -> Partition {
    Partition::from_labels(&threshold_labels(g, packing, l_a))
}

/// Ideal relative loads ℓ*(e) by recursive optimal partitions (n ≤ 8).
pub fn ideal_loads(g: &Graph) -> Result<Vec<Rational>> {
    let mut out = vec![Rational::from_integer(0); g.m()];
    let ids: Vec<usize> = (0..g.m()).collect();
    ideal_rec(g, &ids, &mut out)?;
    Ok(out)
}

fn ideal_rec(g: &Graph, ids: &[usize], out: &mut [Rational]) -> Result<()> {
    let (phi, part) = min_partition_value(g)?;
    let block = part.block_of(g.n());
    for (e, edge) in g.edges().iter().enumerate() {
        if block[edge.u] != block[edge.v] {
            out[ids[e]] = phi.recip();
        }
    }
    for members in part.blocks() {
        if members.len() < 2 {
            continue;
        }
        let mut local = vec![usize::MAX; g.n()];
        for (i, &v) in members.iter().enumerate() {
            local[v] = i;
        }
        let (sub_ids, edges): (Vec<usize>, Vec<Edge>) = g
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, e)| local[e.u] != usize::MAX && local[e.v] != usize::MAX)
            .map(|(e, ed)| (ids[e], Edge::new(local[ed.u], local[ed.v], ed.w)))
            .unzip();
        let sub = Graph::new(members.len(), edges)?;
        ideal_rec(&sub, &sub_ids, out)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::{self, complete, cycle, path};
    use crate::rational::eps_prime;

    fn r(a: i128, b: i128) -> Rational {
        Rational::new(a, b)
    }

    #[test]
    fn tree_packs_itself() {
        let g = path(5).unwrap();
        let p = greedy_pack(&g, 7);
        assert!((0..g.m()).all(|e| p.count(e) == 7));
        assert_eq!(p.pack_val(), r(1, 1));
    }

    #[test]
    fn c4_two_trees_drop_different_edges() {
        let g = cycle(4).unwrap();
        let p = greedy_pack(&g, 2);
        assert_ne!(p.trees()[0], p.trees()[1]);
        assert!(p.max_load() <= 2);
        assert!(p.pack_val() >= r(1, 1));
    }

    #[test]
    fn k4_converges_to_two() {
        let g = complete(4).unwrap();
        let p = greedy_pack(&g, 600);
        let v = p.pack_val();
        assert!(v > r(18, 10) && v <= r(2, 1), "{v}");
    }

    #[test]
    fn tree_counts() {
        assert_eq!(tree_count_ln(2, 2.0, &r(1, 1)).unwrap(), 24);
        assert_eq!(tree_count_for(1, 3, &r(1, 2)).unwrap(), 27);
        assert!(tree_count_for(3, 10, &r(1, 2)).unwrap() > tree_count_for(2, 10, &r(1, 2)).unwrap());
        assert!(tree_count_for(1, 10, &r(2, 1)).is_err());
        assert_eq!(tree_count_for(5, 1, &r(1, 1)).unwrap(), 1);
    }

    #[test]
    fn thresholds_extremes() {
        let g = path(6).unwrap();
        let p = greedy_pack(&g, 3);
        // every relative load is 1
        assert_eq!(load_threshold_components(&g, &p, &r(99, 100)).len(), 6);
        assert_eq!(load_threshold_components(&g, &p, &r(101, 100)).len(), 1);
    }

    #[test]
    fn planted_cut_edges_exceed_threshold() {
        let g = generators::generate(&"planted:8,8,2,1.0".parse().unwrap(), 0).unwrap();
        let ep = eps_prime(&r(1, 2));
        let k = tree_count_for(2, g.total_weight(), &ep).unwrap();
        let p = greedy_pack(&g, k);
        let l_a = load_threshold(&p, &ep);
        let part = load_threshold_components(&g, &p, &l_a);
        assert_eq!(part.blocks(), &[(0..8).collect::<Vec<_>>(), (8..16).collect::<Vec<_>>()]);
    }

    #[test]
    fn ideal_loads_small_cases() {
        let g = Graph::new(2, vec![Edge::new(0, 1, 3)]).unwrap();
        assert_eq!(ideal_loads(&g).unwrap(), vec![r(1, 3)]);
        let g = complete(4).unwrap();
        assert!(ideal_loads(&g).unwrap().iter().all(|&l| l == r(1, 2)));
        // two triangles joined by a bridge
        let mut edges = vec![Edge::new(0, 1, 1), Edge::new(1, 2, 1), Edge::new(0, 2, 1)];
        edges.extend([Edge::new(3, 4, 1), Edge::new(4, 5, 1), Edge::new(3, 5, 1), Edge::new(2, 3, 1)]);
        let g = Graph::new(6, edges).unwrap();
        let loads = ideal_loads(&g).unwrap();
        assert_eq!(loads[6], r(1, 1));
        assert!(loads[..6].iter().all(|&l| l == r(2, 3)), "{loads:?}");
    }

    #[test]
    fn replay_and_json_round_trip() {
        let g = generators::generate(&"weighted:10,0.4,4".parse().unwrap(), 5).unwrap();
        let p = greedy_pack(&g, 40);
        assert!(p.replay(&g));
        let back = TreePacking::from_json(&g, &p.to_json(&g)).unwrap();
        assert_eq!(back, p);
    }
}
