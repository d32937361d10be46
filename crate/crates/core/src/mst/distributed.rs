//! Distributed MST: a pipelined upcast of candidate edges over the BFS tree.
//!
//! Every edge is injected by its smaller endpoint. A node forwards its smallest
//! pending edge once each BFS child has either finished or already sent an edge
//! with a key at least as large, and drops edges closing a cycle with edges it
//! has forwarded before. The root keeps the survivors, which form the MST under
//! the unique key (key, min id, max id); the edge list is then streamed back down
//! and the tree is oriented from node 0.

use std::collections::BTreeSet;

use super::kruskal::edge_code;
use super::RootedTree;
use crate::error::Result;
use crate::graph::{Graph, UnionFind};
use crate::sim::library::{Pair, PipelinedBroadcast};
use crate::sim::{EngineConfig, Incoming, LocalTree, Message, Network, NodeCtx, NodeProgram, Port, RoundReport};

const ITEM: u8 = 1;
const DONE: u8 = 2;
const PARENT: u8 = 3;

pub struct PipelineMst<'a> {
    pub keys: &'a [i64],
    pub bfs: &'a [LocalTree],
}

pub struct MstState {
    pending: BTreeSet<(i64, i64)>,
    last: Vec<Option<(i64, i64)>>,
    done: Vec<bool>,
    forwarded: UnionFind,
    accepted: Vec<i64>,
}

impl PipelineMst<'_> {
    fn advance(&self, st: &mut MstState, ctx: &mut NodeCtx<'_>) {
        let n = ctx.n() as i64;
        let parent = self.bfs[ctx.id()].parent;
        while let Some(&(key, code)) = st.pending.first() {
            let (a, b) = ((code / n) as usize, (code % n) as usize);
            if st.forwarded.same(a, b) {
                st.pending.pop_first();
                continue;
            }
            let safe = st.done.iter().zip(&st.last).all(|(&d, &l)| d || l.is_some_and(|l| l >= (key, code)));
            if !safe {
                return;
            }
            st.pending.pop_first();
            st.forwarded.union(a, b);
            match parent {
                Some(p) => {
                    ctx.send(p, Message::new(ITEM, key, code));
                    return;
                }
                None => st.accepted.push(code),
            }
        }
        if st.done.iter().all(|&d| d) {
            if let Some(p) = parent {
                ctx.send(p, Message::new(DONE, 0, 0));
            }
            ctx.halt();
        }
    }
}

impl NodeProgram for PipelineMst<'_> {
    type State = MstState;
    type Output = Vec<i64>;

    fn init(&self, ctx: &mut NodeCtx<'_>) -> MstState {
        let v = ctx.id();
        let n = ctx.n();
        let pending = ctx
            .neighbors()
            .iter()
            .filter(|nb| nb.node > v)
            .map(|nb| (self.keys[nb.edge], (v * n + nb.node) as i64))
            .collect();
        let k = self.bfs[v].children.len();
        let mut st = MstState { pending, last: vec![None; k], done: vec![false; k], forwarded: UnionFind::new(n), accepted: Vec::new() };
        self.advance(&mut st, ctx);
        st
    }

    fn on_round(&self, st: &mut MstState, ctx: &mut NodeCtx<'_>, inbox: &[Incoming]) {
        let children = &self.bfs[ctx.id()].children;
        for m in inbox {
            let Some(c) = children.iter().position(|&p| p == m.port) else { continue };
            match m.msg.tag {
                ITEM => {
                    st.pending.insert((m.msg.a, m.msg.b));
                    st.last[c] = Some((m.msg.a, m.msg.b));
                }
                DONE => st.done[c] = true,
                _ => {}
            }
        }
        self.advance(st, ctx);
    }

    fn output(&self, st: MstState) -> Vec<i64> {
        st.accepted
    }
}

/// Roots the tree given by per-node incident tree ports at node 0.
pub struct TreeOrient<'a> {
    pub tree_ports: &'a [Vec<Port>],
}

impl NodeProgram for TreeOrient<'_> {
    type State = LocalTree;
    type Output = LocalTree;

    fn init(&self, ctx: &mut NodeCtx<'_>) -> LocalTree {
        let mut t = LocalTree::default();
        if ctx.id() == 0 {
            t.children = self.tree_ports[0].clone();
            for &c in &t.children {
                ctx.send(c, Message::new(PARENT, 0, 0));
            }
            ctx.halt();
        }
        t
    }

    fn on_round(&self, t: &mut LocalTree, ctx: &mut NodeCtx<'_>, inbox: &[Incoming]) {
        let Some(m) = inbox.iter().find(|m| m.msg.tag == PARENT) else { return };
        t.parent = Some(m.port);
        t.children = self.tree_ports[ctx.id()].iter().copied().filter(|&p| p != m.port).collect();
        for &c in &t.children {
            ctx.send(c, Message::new(PARENT, 0, 0));
        }
        ctx.halt();
    }

    fn output(&self, t: LocalTree) -> LocalTree {
        t
    }
}

/// Runs the three MST phases on an existing network. Returns each node's view of
/// the tree rooted at node 0 and the assembled tree.
pub fn dist_mst_on(net: &mut Network<'_>, keys: &[i64]) -> Result<(Vec<LocalTree>, RootedTree)> {
    let g = net.graph();
    let n = g.n();
    let bfs = net.bfs().to_vec();
    let up = net.run(&PipelineMst { keys, bfs: &bfs }, "mst.upcast")?;
    let mut roots: Vec<Vec<Pair>> = vec![Vec::new(); n];
    roots[0] = up[0].iter().map(|&c| (c, 0)).collect();
    let lists = net.run(&PipelinedBroadcast { forest: &bfs, items: &roots }, "mst.broadcast")?;
    let tree_ports: Vec<Vec<Port>> = (0..n)
        .map(|v| {
            let mut codes: Vec<i64> = lists[v].iter().map(|&(c, _)| c).collect();
            codes.sort_unstable();
            g.adj(v)
                .iter()
                .enumerate()
                .filter(|(_, nb)| codes.binary_search(&edge_code(g, nb.edge)).is_ok())
                .map(|(p, _)| p)
                .collect()
        })
        .collect();
    let views = net.run(&TreeOrient { tree_ports: &tree_ports }, "mst.orient")?;
    let tree = RootedTree::from_local_views(g, &views)?;
    Ok((views, tree))
}

/// Stand-alone distributed MST under the lexicographic key.
pub fn dist_mst(g: &Graph, keys: &[i64], config: EngineConfig) -> Result<(RootedTree, RoundReport)> {
    let mut net = Network::new(g, config)?;
    let (_, tree) = dist_mst_on(&mut net, keys)?;
    Ok((tree, net.take_report()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::{self, GeneratorSpec};
    use crate::graph::Edge;
    use crate::mst::lexicographic_mst;

    #[test]
    fn c4_drops_heaviest_edge() {
        let g = Graph::new(4, vec![Edge::new(0, 1, 1), Edge::new(1, 2, 1), Edge::new(2, 3, 1), Edge::new(3, 0, 1)]).unwrap();
        let keys = [1, 2, 8, 4];
        let (t, report) = dist_mst(&g, &keys, EngineConfig::default()).unwrap();
        assert_eq!(t.edge_ids(&g), vec![0, 1, 3]);
        assert_eq!(t.root(), 0);
        assert_eq!(report.max_msgs_per_edge_per_round, 1);
    }

    #[test]
    fn matches_kruskal_on_generated_graphs() {
        let specs = ["complete:7", "planted:6,6,2,0.9", "regular:16,3", "weighted:14,0.3,9", "cycle:11"];
        for (i, s) in specs.iter().enumerate() {
            let spec: GeneratorSpec = s.parse().unwrap();
            let g = generators::generate(&spec, i as u64).unwrap();
            for salt in 0..3i64 {
                let keys: Vec<i64> = (0..g.m() as i64).map(|e| (e * 7 + salt) % 3).collect();
                let (t, _) = dist_mst(&g, &keys, EngineConfig::default()).unwrap();
                assert_eq!(t.edge_ids(&g), lexicographic_mst(&g, &keys), "{s} salt {salt}");
            }
        }
    }

    #[test]
    fn negative_keys_span_contracted_sets() {
        let g = generators::complete(8).unwrap();
        // contracted set {0,1,2,3}: internal edges get key -1
        let keys: Vec<i64> = g.edges().iter().map(|e| if e.u < 4 && e.v < 4 { -1 } else { 5 }).collect();
        let (t, _) = dist_mst(&g, &keys, EngineConfig::default()).unwrap();
        let inside = t.edge_ids(&g).into_iter().filter(|&e| keys[e] == -1).count();
        assert_eq!(inside, 3);
    }
}
