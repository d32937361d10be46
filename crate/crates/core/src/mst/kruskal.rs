use crate::graph::{Graph, UnionFind};

/// Packs (min endpoint, max endpoint) into one integer preserving lexicographic order.
pub fn edge_code(g: &Graph, e: usize) -> i64 {
    let (a, b) = g.edge(e).ends();
    (a * g.n() + b) as i64
}

/// Kruskal under the key (keys[e], min id, max id). Returns the tree edge ids sorted.
pub fn lexicographic_mst(g: &Graph, keys: &[i64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.m()).collect();
    order.sort_unstable_by_key(|&e| (keys[e], edge_code(g, e)));
    let mut uf = UnionFind::new(g.n());
    let mut tree = Vec::with_capacity(g.n() - 1);
    for e in order {
        let ed = g.edge(e);
        if uf.union(ed.u, ed.v) {
            tree.push(e);
            if tree.len() == g.n() - 1 {
                break;
            }
        }
    }
    tree.sort_unstable();
    tree
}
