//! Every edge is assigned the LCA of its endpoints and a single owner,
//! and the per-node LCA weight ρ is summed.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::ancestors::AncestorKnowledge;
use crate::graph::NodeId;
use crate::mst::fragments::{FragNode, FragmentTree};
use crate::sim::{Incoming, LocalTree, Message, NodeCtx, NodeProgram, Port};

const ANCL: u8 = 1;
const LCAI: u8 = 2;
const CNT: u8 = 3;

/// T′_F: fragment roots and merging nodes, each linked to its nearest proper
/// ancestor in the set.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeTree {
    pub merging: Vec<NodeId>,
    pub parent: BTreeMap<NodeId, Option<NodeId>>,
}

impl MergeTree {
    pub fn contains(&self, v: NodeId) -> bool {
        self.parent.contains_key(&v)
    }

    fn chain(&self, mut v: NodeId) -> Vec<NodeId> {
        let mut out = vec![v];
        while let Some(&Some(p)) = self.parent.get(&v) {
            out.push(p);
            v = p;
        }
        out
    }

    pub fn lca(&self, a: NodeId, b: NodeId) -> Option<NodeId> {
        let ca = self.chain(a);
        let cb = self.chain(b);
        let (mut i, mut j) = (ca.len(), cb.len());
        let mut last = None;
        while i > 0 && j > 0 && ca[i - 1] == cb[j - 1] {
            last = Some(ca[i - 1]);
            i -= 1;
            j -= 1;
        }
        last
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PortKind {
    /// Tree edge, or the far side decides: the LCA is known from the start.
    Known(NodeId),
    /// Same fragment, non-tree: ancestor lists are exchanged.
    Stream,
    /// Far endpoint's fragment is an ancestor of ours: it tells us the LCA.
    Wait,
}

/// Per node: the LCA seen on every port and the tokens it owns, split into those
/// whose LCA is a merging node in another fragment (type i) and those whose LCA
/// lies in the owner's fragment (type ii).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LcaNode {
    pub lca: Vec<Option<NodeId>>,
    pub tokens_i: Vec<(NodeId, i64)>,
    pub tokens_ii: Vec<(NodeId, i64)>,
}

pub struct LcaExchange<'a> {
    pub tree: &'a [LocalTree],
    pub frags: &'a [FragNode],
    pub nbr_frag: &'a [Vec<NodeId>],
    pub know: &'a [AncestorKnowledge],
    pub ftree: &'a Arc<FragmentTree>,
    pub merge: &'a MergeTree,
}

pub struct LcaState {
    kinds: Vec<PortKind>,
    list: Vec<NodeId>,
    sent: Vec<usize>,
    node: LcaNode,
}

impl LcaExchange<'_> {
    fn classify(&self, ctx: &mut NodeCtx<'_>, st: &mut LcaState) {
        let v = ctx.id();
        let t = &self.tree[v];
        let fv = self.frags[v].frag;
        for port in 0..ctx.degree() {
            let nb = *ctx.neighbor(port);
            let y = nb.node;
            let w = nb.weight as i64;
            let fy = self.nbr_frag[v][port];
            let kind = if t.parent == Some(port) {
                PortKind::Known(y)
            } else if t.children.contains(&port) {
                st.node.tokens_ii.push((v, w));
                PortKind::Known(v)
            } else if fy == fv {
                PortKind::Stream
            } else {
                let fl = self.ftree.lca(fv, fy);
                if fl == fv {
                    // y's fragment hangs below ours
                    let z = self.know[v].lowest_containing(fy).expect("descendant fragment is in some F(u)");
                    ctx.send(port, Message::new(LCAI, z as i64, 0));
                    st.node.tokens_ii.push((z, w));
                    PortKind::Known(z)
                } else if fl == fy {
                    PortKind::Wait
                } else {
                    let z = self
                        .merge
                        .lca(self.ftree.root_node(fv), self.ftree.root_node(fy))
                        .expect("fragment roots share the tree root");
                    if v < y {
                        st.node.tokens_i.push((z, w));
                    }
                    PortKind::Known(z)
                }
            };
            if let PortKind::Known(z) = kind {
                st.node.lca[port] = Some(z);
            }
            st.kinds.push(kind);
        }
    }

    fn settle(&self, st: &mut LcaState, ctx: &mut NodeCtx<'_>) {
        let mut busy = false;
        for port in 0..st.kinds.len() {
            match st.kinds[port] {
                PortKind::Stream => {
                    let done = st.node.lca[port].is_some_and(|z| st.list[..st.sent[port]].contains(&z));
                    if !done && st.sent[port] < st.list.len() {
                        ctx.send(port, Message::new(ANCL, st.list[st.sent[port]] as i64, 0));
                        st.sent[port] += 1;
                    }
                    let done = st.node.lca[port].is_some_and(|z| st.list[..st.sent[port]].contains(&z));
                    busy |= !done;
                }
                PortKind::Wait => busy |= st.node.lca[port].is_none(),
                PortKind::Known(_) => {}
            }
        }
        if !busy {
            ctx.halt();
        }
    }
}

impl NodeProgram for LcaExchange<'_> {
    type State = LcaState;
    type Output = LcaNode;

    fn init(&self, ctx: &mut NodeCtx<'_>) -> LcaState {
        let deg = ctx.degree();
        let mut st = LcaState {
            kinds: Vec::with_capacity(deg),
            list: self.know[ctx.id()].in_fragment().collect(),
            sent: vec![0; deg],
            node: LcaNode { lca: vec![None; deg], ..LcaNode::default() },
        };
        self.classify(ctx, &mut st);
        self.settle(&mut st, ctx);
        st
    }

    fn on_round(&self, st: &mut LcaState, ctx: &mut NodeCtx<'_>, inbox: &[Incoming]) {
        let v = ctx.id();
        for m in inbox {
            let port = m.port;
            match (st.kinds[port], m.msg.tag) {
                (PortKind::Stream, ANCL) => {
                    let a = m.msg.a as NodeId;
                    if st.node.lca[port].is_none() && st.list.contains(&a) {
                        st.node.lca[port] = Some(a);
                        if v < m.from {
                            st.node.tokens_ii.push((a, ctx.neighbor(port).weight as i64));
                        }
                    }
                }
                (PortKind::Wait, LCAI) => st.node.lca[port] = Some(m.msg.a as NodeId),
                _ => {}
            }
        }
        self.settle(st, ctx);
    }

    fn output(&self, st: LcaState) -> LcaNode {
        st.node
    }
}

/// Type (ii) tallies, summed up each fragment. A node with in-fragment strict
/// ancestors a_0 (parent), a_1, … sends its parent, one per round, the total
/// token weight in its fragment subtree with LCA a_j, for j = 0, 1, …; entry j
/// goes out once every child has delivered entry j + 1.
///
/// `initial[v][0]` holds v's own tokens with LCA v, `initial[v][j + 1]` those
/// with LCA a_j. Output: ρ_ii(v).
pub struct RhoCounters<'a> {
    pub frags: &'a [FragNode],
    pub chains: &'a [Vec<NodeId>],
    pub initial: &'a [Vec<i64>],
}

pub struct RhoState {
    acc: Vec<i64>,
    recv: Vec<usize>,
    next: usize,
}

impl RhoCounters<'_> {
    fn advance(&self, st: &mut RhoState, ctx: &mut NodeCtx<'_>) {
        let v = ctx.id();
        let chain = &self.chains[v];
        if st.next < chain.len() && st.recv.iter().all(|&r| r >= st.next + 2) {
            let parent = self.frags[v].local.parent.expect("non-root has a parent");
            ctx.send(parent, Message::new(CNT, st.acc[st.next + 1], chain[st.next] as i64));
            st.next += 1;
        }
        if st.next == chain.len() && st.recv.iter().all(|&r| r == chain.len() + 1) {
            ctx.halt();
        }
    }
}

impl NodeProgram for RhoCounters<'_> {
    type State = RhoState;
    type Output = i64;

    fn init(&self, ctx: &mut NodeCtx<'_>) -> RhoState {
        let v = ctx.id();
        let mut st = RhoState { acc: self.initial[v].clone(), recv: vec![0; self.frags[v].local.children.len()], next: 0 };
        self.advance(&mut st, ctx);
        st
    }

    fn on_round(&self, st: &mut RhoState, ctx: &mut NodeCtx<'_>, inbox: &[Incoming]) {
        let v = ctx.id();
        let children: &[Port] = &self.frags[v].local.children;
        for m in inbox.iter().filter(|m| m.msg.tag == CNT) {
            let Some(c) = children.iter().position(|&p| p == m.port) else { continue };
            let e = st.recv[c];
            let expected = if e == 0 { v } else { self.chains[v][e - 1] };
            debug_assert_eq!(m.msg.b as NodeId, expected);
            st.acc[e] += m.msg.a;
            st.recv[c] += 1;
        }
        self.advance(st, ctx);
    }

    fn output(&self, st: RhoState) -> i64 {
        st.acc[0]
    }
}
