//! Centralized counterparts: edge LCAs by Tarjan's offline algorithm and all
//! 1-respecting cut values in O(m α(n)) per tree.

use crate::graph::{Graph, NodeId, UnionFind};
use crate::mst::RootedTree;

/// LCA of the endpoints of every edge of `g` in `t`.
pub fn edge_lcas(g: &Graph, t: &RootedTree) -> Vec<NodeId> {
    let n = g.n();
    let mut uf = UnionFind::new(n);
    let mut anc: Vec<NodeId> = (0..n).collect();
    let mut finished = vec![false; n];
    let mut out = vec![usize::MAX; g.m()];
    let mut stack: Vec<(NodeId, usize)> = vec![(t.root(), 0)];
    while let Some(&mut (u, ref mut i)) = stack.last_mut() {
        if let Some(&c) = t.children(u).get(*i) {
            *i += 1;
            stack.push((c, 0));
            continue;
        }
        stack.pop();
        finished[u] = true;
        for nb in g.adj(u) {
            if finished[nb.node] && out[nb.edge] == usize::MAX {
                out[nb.edge] = anc[uf.find(nb.node)];
            }
        }
        if let Some(p) = t.parent(u) {
            uf.union(p, u);
            let r = uf.find(p);
            anc[r] = p;
        }
    }
    out
}

/// δ↓(v), ρ↓(v) and w(v↓) for every v (the root's cut value is 0).
pub fn cut_profile(g: &Graph, t: &RootedTree) -> (Vec<i64>, Vec<i64>, Vec<i64>) {
    let n = g.n();
    let mut delta: Vec<i64> = (0..n).map(|v| g.weighted_degree(v) as i64).collect();
    let mut rho = vec![0i64; n];
    for (e, z) in edge_lcas(g, t).into_iter().enumerate() {
        rho[z] += g.edge(e).w as i64;
    }
    for &v in t.bfs_order().iter().rev() {
        if let Some(p) = t.parent(v) {
            delta[p] += delta[v];
            rho[p] += rho[v];
        }
    }
    let cut = (0..n).map(|v| delta[v] - 2 * rho[v]).collect();
    (delta, rho, cut)
}

pub fn cut_values(g: &Graph, t: &RootedTree) -> Vec<u64> {
    cut_profile(g, t).2.into_iter().map(|c| c as u64).collect()
}

/// Smallest (w(v↓), v) over non-root v whose parent edge is not contracted.
pub fn one_respect_reference(g: &Graph, t: &RootedTree, contracted: &[bool]) -> Option<(u64, NodeId)> {
    let cuts = cut_values(g, t);
    (0..g.n())
        .filter_map(|v| {
            let e = t.parent_edge(g, v)?;
            (!contracted.get(e).copied().unwrap_or(false)).then_some((cuts[v], v))
        })
        .min()
}

/// F(v): the fragments whose root lies in v↓, sorted.
pub fn fsets_reference(t: &RootedTree, fragment_of: &[NodeId]) -> Vec<Vec<NodeId>> {
    let n = t.n();
    let mut sets: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    for &v in t.bfs_order().iter().rev() {
        if t.parent(v).is_none_or(|p| fragment_of[p] != fragment_of[v]) {
            sets[v].push(fragment_of[v]);
        }
        sets[v].sort_unstable();
        sets[v].dedup();
        if let Some(p) = t.parent(v) {
            let mine = sets[v].clone();
            sets[p].extend(mine);
        }
    }
    sets
}

/// Nodes with at least two children c having F(c) ≠ ∅.
pub fn merging_reference(t: &RootedTree, fsets: &[Vec<NodeId>]) -> Vec<NodeId> {
    (0..t.n()).filter(|&v| t.children(v).iter().filter(|&&c| !fsets[c].is_empty()).count() >= 2).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators;
    use crate::graph::Cut;

    #[test]
    fn lcas_match_climbing() {
        let g = generators::generate(&"weighted:30,0.2,5".parse().unwrap(), 3).unwrap();
        let t = RootedTree::from_edges(&g, &crate::mst::lexicographic_mst(&g, &vec![0; g.m()]), 0).unwrap();
        for (e, z) in edge_lcas(&g, &t).into_iter().enumerate() {
            let (u, v) = g.edge(e).ends();
            assert_eq!(z, t.lca(u, v));
        }
    }

    #[test]
    fn cut_values_match_direct_sums() {
        let g = generators::generate(&"planted:7,6,2,0.8".parse().unwrap(), 1).unwrap();
        let t = RootedTree::from_edges(&g, &crate::mst::lexicographic_mst(&g, &vec![0; g.m()]), 0).unwrap();
        let cuts = cut_values(&g, &t);
        assert_eq!(cuts[0], 0);
        for v in 1..g.n() {
            assert_eq!(cuts[v], Cut::new(&g, t.subtree(v)).unwrap().weight(), "node {v}");
        }
    }
}
