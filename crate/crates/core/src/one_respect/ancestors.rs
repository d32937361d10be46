//! Every node learns its ancestors in its own and its parent fragment,
//! and enough of the F(·) sets to evaluate F(u) for each of them.

use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::graph::NodeId;
use crate::mst::fragments::{FragNode, FragmentTree};
use crate::sim::{Incoming, LocalTree, Message, NodeCtx, NodeProgram};

const ANC: u8 = 1;
const FSET: u8 = 2;
const MARK: u8 = 3;

/// A(v) with fragment ids, nearest first (v itself at index 0), F(v), and for each
/// fragment F′ ∉ F(v) seen from an ancestor in A(v), the lowest such ancestor u
/// with F′ ∈ F(u).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AncestorKnowledge {
    pub ancestors: Vec<(NodeId, NodeId)>,
    pub fset: Vec<NodeId>,
    pub lowest: BTreeMap<NodeId, NodeId>,
}

impl AncestorKnowledge {
    pub fn node(&self) -> NodeId {
        self.ancestors[0].0
    }

    pub fn frag(&self) -> NodeId {
        self.ancestors[0].1
    }

    pub fn contains(&self, u: NodeId) -> bool {
        self.ancestors.iter().any(|&(a, _)| a == u)
    }

    fn position(&self, u: NodeId) -> Option<usize> {
        self.ancestors.iter().position(|&(a, _)| a == u)
    }

    /// F(u) for u ∈ A(v), sorted.
    pub fn fset_of(&self, u: NodeId) -> Option<Vec<NodeId>> {
        let at = self.position(u)?;
        let mut out = self.fset.clone();
        for (&f, &w) in &self.lowest {
            if self.position(w).is_some_and(|pw| pw <= at) {
                out.push(f);
            }
        }
        out.sort_unstable();
        Some(out)
    }

    /// The lowest node u of A(v) with `f` ∈ F(u).
    pub fn lowest_containing(&self, f: NodeId) -> Option<NodeId> {
        if self.fset.binary_search(&f).is_ok() {
            Some(self.node())
        } else {
            self.lowest.get(&f).copied()
        }
    }

    /// Ancestors inside v's own fragment, nearest first, v included.
    pub fn in_fragment(&self) -> impl Iterator<Item = NodeId> + '_ {
        let f = self.frag();
        self.ancestors.iter().filter(move |&&(_, g)| g == f).map(|&(a, _)| a)
    }
}

/// F(v) from the child fragments whose attachment node lies in v↓ ∩ F_i.
pub fn fset_from_children(frag: &FragNode, children: &[NodeId], ftree: &FragmentTree) -> Vec<NodeId> {
    let mut out: Vec<NodeId> = children.iter().flat_map(|&c| ftree.subtree(c)).collect();
    if frag.is_root {
        out.extend(ftree.subtree(frag.frag));
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Streams, down the whole tree, each node's id and F-set followed by whatever
/// the parent streamed that is still relevant. Fragment roots append a marker
/// for their fragment; a node is done once the marker of its parent fragment
/// (or its own, in the root fragment) has gone by.
pub struct AncestorStream<'a> {
    pub tree: &'a [LocalTree],
    pub frags: &'a [FragNode],
    pub fsets: &'a [Vec<NodeId>],
    pub ftree: &'a Arc<FragmentTree>,
}

pub struct StreamState {
    queue: VecDeque<Message>,
    know: AncestorKnowledge,
    relevant: [Option<NodeId>; 2],
    target: NodeId,
    complete: bool,
}

impl AncestorStream<'_> {
    fn pump(&self, st: &mut StreamState, ctx: &mut NodeCtx<'_>) {
        let children = &self.tree[ctx.id()].children;
        if let Some(msg) = st.queue.pop_front() {
            for &c in children {
                ctx.send(c, msg);
            }
        }
        if st.complete && st.queue.is_empty() {
            ctx.halt();
        }
    }
}

impl NodeProgram for AncestorStream<'_> {
    type State = StreamState;
    type Output = AncestorKnowledge;

    fn init(&self, ctx: &mut NodeCtx<'_>) -> StreamState {
        let v = ctx.id();
        let fr = &self.frags[v];
        let parent_frag = self.ftree.parent(fr.frag);
        let mut st = StreamState {
            queue: VecDeque::new(),
            know: AncestorKnowledge { ancestors: vec![(v, fr.frag)], fset: self.fsets[v].clone(), lowest: BTreeMap::new() },
            relevant: [Some(fr.frag), parent_frag],
            target: parent_frag.unwrap_or(fr.frag),
            complete: self.tree[v].is_root(),
        };
        if !self.tree[v].is_leaf() {
            st.queue.push_back(Message::new(ANC, v as i64, fr.frag as i64));
            for &f in &self.fsets[v] {
                st.queue.push_back(Message::new(FSET, v as i64, f as i64));
            }
            if fr.is_root {
                st.queue.push_back(Message::new(MARK, fr.frag as i64, 0));
            }
        }
        self.pump(&mut st, ctx);
        st
    }

    fn on_round(&self, st: &mut StreamState, ctx: &mut NodeCtx<'_>, inbox: &[Incoming]) {
        let parent = self.tree[ctx.id()].parent;
        let forward = !self.tree[ctx.id()].is_leaf();
        for m in inbox.iter().filter(|m| Some(m.port) == parent) {
            if st.complete {
                break;
            }
            let msg = m.msg;
            let keep = match msg.tag {
                ANC => {
                    let (u, f) = (msg.a as NodeId, msg.b as NodeId);
                    let rel = st.relevant.contains(&Some(f));
                    if rel {
                        st.know.ancestors.push((u, f));
                    }
                    rel
                }
                FSET => {
                    let (u, f) = (msg.a as NodeId, msg.b as NodeId);
                    let rel = st.know.contains(u) && st.know.fset.binary_search(&f).is_err();
                    if rel {
                        st.know.lowest.entry(f).or_insert(u);
                    }
                    rel
                }
                MARK => {
                    let f = msg.a as NodeId;
                    if f == st.target {
                        st.complete = true;
                    }
                    st.relevant.contains(&Some(f))
                }
                _ => false,
            };
            if keep && forward {
                st.queue.push_back(msg);
            }
        }
        self.pump(st, ctx);
    }

    fn output(&self, st: StreamState) -> AncestorKnowledge {
        st.know
    }
}
