//! Size-threshold fragment decomposition of a rooted tree and the fragment tree T_F.
//!
//! With s = ⌈√n⌉, nodes report their open subtree size upwards; a node whose
//! open part reaches s (or the tree root) closes a fragment. Every non-root
//! fragment has at least s nodes, so k ≤ ⌈√n⌉ + 1, and an open part has depth
//! below s, so a fragment's diameter is at most 2s.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::RootedTree;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::sim::library::{ItemOp, Pair};
use crate::sim::{agreed, Incoming, LocalTree, Message, Network, NodeCtx, NodeProgram, Port};

const OPEN: u8 = 1;
const CLOSED: u8 = 2;
const FRAG: u8 = 3;
const PFRAG: u8 = 4;

/// Maximum fragment diameter is at most `DIAMETER_FACTOR · ⌈√n⌉`.
pub const DIAMETER_FACTOR: usize = 2;

pub fn size_threshold(n: usize) -> usize {
    let mut s = (n as f64).sqrt() as usize;
    while s * s < n {
        s += 1;
    }
    while s > 1 && (s - 1) * (s - 1) >= n {
        s -= 1;
    }
    s.max(1)
}

/// What a node knows after the partition phase.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FragNode {
    pub frag: NodeId,
    pub is_root: bool,
    /// For fragment roots other than the tree root: the parent fragment.
    pub parent_frag: Option<NodeId>,
    /// Tree children that root other fragments, with their fragment ids.
    pub closed_children: Vec<(Port, NodeId)>,
    /// The node's view of its own fragment as a rooted subtree.
    pub local: LocalTree,
}

pub struct FragmentPartition<'a> {
    pub tree: &'a [LocalTree],
}

pub struct PartState {
    waiting: usize,
    size: usize,
    min_id: NodeId,
    open_children: Vec<Port>,
    tree_parent: Option<Port>,
    node: FragNode,
    known: bool,
    needs_parent_frag: bool,
}

impl FragmentPartition<'_> {
    fn distribute(&self, st: &mut PartState, ctx: &mut NodeCtx<'_>) {
        for &c in &st.open_children {
            ctx.send(c, Message::new(FRAG, st.node.frag as i64, 0));
        }
        for &(c, _) in &st.node.closed_children {
            ctx.send(c, Message::new(PFRAG, st.node.frag as i64, 0));
        }
        st.known = true;
    }

    fn collected(&self, st: &mut PartState, ctx: &mut NodeCtx<'_>) {
        let parent = self.tree[ctx.id()].parent;
        if st.size >= size_threshold(ctx.n()) || parent.is_none() {
            st.node.frag = st.min_id;
            st.node.is_root = true;
            if let Some(p) = parent {
                ctx.send(p, Message::new(CLOSED, st.min_id as i64, 0));
                st.needs_parent_frag = true;
            }
            self.distribute(st, ctx);
        } else if let Some(p) = parent {
            ctx.send(p, Message::new(OPEN, st.size as i64, st.min_id as i64));
        }
        self.maybe_halt(st, ctx);
    }

    fn maybe_halt(&self, st: &PartState, ctx: &mut NodeCtx<'_>) {
        if st.known && !st.needs_parent_frag {
            ctx.halt();
        }
    }
}

impl NodeProgram for FragmentPartition<'_> {
    type State = PartState;
    type Output = FragNode;

    fn init(&self, ctx: &mut NodeCtx<'_>) -> PartState {
        let v = ctx.id();
        let t = &self.tree[v];
        let mut st = PartState {
            waiting: t.children.len(),
            size: 1,
            min_id: v,
            open_children: Vec::new(),
            tree_parent: t.parent,
            node: FragNode { frag: v, is_root: false, parent_frag: None, closed_children: Vec::new(), local: LocalTree::default() },
            known: false,
            needs_parent_frag: false,
        };
        if st.waiting == 0 {
            self.collected(&mut st, ctx);
        }
        st
    }

    fn on_round(&self, st: &mut PartState, ctx: &mut NodeCtx<'_>, inbox: &[Incoming]) {
        let mut reported = false;
        for m in inbox {
            match m.msg.tag {
                OPEN => {
                    st.size += m.msg.a as usize;
                    st.min_id = st.min_id.min(m.msg.b as NodeId);
                    st.open_children.push(m.port);
                    st.waiting -= 1;
                    reported = true;
                }
                CLOSED => {
                    st.node.closed_children.push((m.port, m.msg.a as NodeId));
                    st.waiting -= 1;
                    reported = true;
                }
                FRAG => {
                    st.node.frag = m.msg.a as NodeId;
                    self.distribute(st, ctx);
                }
                PFRAG => {
                    st.node.parent_frag = Some(m.msg.a as NodeId);
                    st.needs_parent_frag = false;
                }
                _ => {}
            }
        }
        if reported && st.waiting == 0 {
            self.collected(st, ctx);
        } else {
            self.maybe_halt(st, ctx);
        }
    }

    fn output(&self, mut st: PartState) -> FragNode {
        st.open_children.sort_unstable();
        st.node.closed_children.sort_unstable();
        let parent = if st.node.is_root { None } else { st.tree_parent };
        st.node.local = LocalTree { parent, children: st.open_children };
        st.node
    }
}

/// T_F as every node learns it: fragment ids, parents, roots and attachment nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FragmentTree {
    ids: Vec<NodeId>,
    index: Vec<usize>,
    parent: Vec<Option<usize>>,
    root_node: Vec<NodeId>,
    attach: Vec<Option<NodeId>>,
    depth: Vec<usize>,
}

const FIELD_PARENT: i64 = 0;
const FIELD_ROOT: i64 = 1;
const FIELD_ATTACH: i64 = 2;

impl FragmentTree {
    /// Items contributed by a fragment root: (fragment, field) → value.
    pub fn items_for(frag: NodeId, root: NodeId, parent_frag: Option<NodeId>, attach: Option<NodeId>) -> Vec<Pair> {
        let f = frag as i64 * 4;
        let opt = |x: Option<NodeId>| x.map_or(-1, |x| x as i64);
        vec![(f + FIELD_PARENT, opt(parent_frag)), (f + FIELD_ROOT, root as i64), (f + FIELD_ATTACH, opt(attach))]
    }

    pub fn from_items(n: usize, items: &[Pair]) -> Result<Self> {
        let mut rows: BTreeMap<NodeId, [i64; 3]> = BTreeMap::new();
        for &(key, val) in items {
            let (f, field) = ((key / 4) as NodeId, (key % 4) as usize);
            if f >= n || field > 2 {
                return Err(Error::invariant(format!("bad fragment tree item ({key}, {val})")));
            }
            rows.entry(f).or_insert([-2; 3])[field] = val;
        }
        let ids: Vec<NodeId> = rows.keys().copied().collect();
        let mut index = vec![usize::MAX; n];
        for (i, &f) in ids.iter().enumerate() {
            index[f] = i;
        }
        let lookup = |x: i64| -> Result<Option<NodeId>> {
            match x {
                -1 => Ok(None),
                x if x >= 0 && (x as usize) < n => Ok(Some(x as NodeId)),
                _ => Err(Error::invariant("incomplete fragment tree row")),
            }
        };
        let mut parent = Vec::with_capacity(ids.len());
        let mut root_node = Vec::with_capacity(ids.len());
        let mut attach = Vec::with_capacity(ids.len());
        for row in rows.values() {
            let p = lookup(row[0])?;
            parent.push(match p {
                Some(p) if index[p] != usize::MAX => Some(index[p]),
                Some(_) => return Err(Error::invariant("unknown parent fragment")),
                None => None,
            });
            root_node.push(lookup(row[1])?.ok_or_else(|| Error::invariant("fragment without root"))?);
            attach.push(lookup(row[2])?);
        }
        let k = ids.len();
        let mut depth = vec![usize::MAX; k];
        for i in 0..k {
            let mut chain = Vec::new();
            let mut x = i;
            while depth[x] == usize::MAX {
                match parent[x] {
                    Some(p) if chain.len() <= k => {
                        chain.push(x);
                        x = p;
                    }
                    Some(_) => return Err(Error::invariant("fragment tree has a cycle")),
                    None => depth[x] = 0,
                }
            }
            let mut d = depth[x];
            for &y in chain.iter().rev() {
                d += 1;
                depth[y] = d;
            }
        }
        if parent.iter().filter(|p| p.is_none()).count() != 1 {
            return Err(Error::invariant("fragment tree must have exactly one root"));
        }
        Ok(FragmentTree { ids, index, parent, root_node, attach, depth })
    }

    pub fn k(&self) -> usize {
        self.ids.len()
    }

    pub fn ids(&self) -> &[NodeId] {
        &self.ids
    }

    fn idx(&self, f: NodeId) -> usize {
        let i = self.index[f];
        assert!(i != usize::MAX, "{f} is not a fragment id");
        i
    }

    pub fn contains(&self, f: NodeId) -> bool {
        f < self.index.len() && self.index[f] != usize::MAX
    }

    pub fn parent(&self, f: NodeId) -> Option<NodeId> {
        self.parent[self.idx(f)].map(|p| self.ids[p])
    }

    pub fn root_node(&self, f: NodeId) -> NodeId {
        self.root_node[self.idx(f)]
    }

    /// T-parent of the fragment's root.
    pub fn attach(&self, f: NodeId) -> Option<NodeId> {
        self.attach[self.idx(f)]
    }

    pub fn depth(&self, f: NodeId) -> usize {
        self.depth[self.idx(f)]
    }

    /// Whether `a` is an ancestor of `b` or equal to it.
    pub fn is_ancestor(&self, a: NodeId, b: NodeId) -> bool {
        let (a, mut b) = (self.idx(a), self.idx(b));
        while self.depth[b] > self.depth[a] {
            b = self.parent[b].expect("non-root fragment");
        }
        a == b
    }

    pub fn lca(&self, a: NodeId, b: NodeId) -> NodeId {
        let (mut a, mut b) = (self.idx(a), self.idx(b));
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
        self.ids[a]
    }

    /// `f` and all fragments below it, sorted.
    pub fn subtree(&self, f: NodeId) -> Vec<NodeId> {
        self.ids.iter().copied().filter(|&x| self.is_ancestor(f, x)).collect()
    }
}

/// Global picture of a decomposition, for checks and reference comparisons.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FragmentDecomposition {
    pub fragment_of: Vec<NodeId>,
    pub root_of: BTreeMap<NodeId, NodeId>,
    pub parent_of: BTreeMap<NodeId, Option<NodeId>>,
}

impl FragmentDecomposition {
    pub fn k(&self) -> usize {
        self.root_of.len()
    }

    pub fn members(&self, f: NodeId) -> Vec<NodeId> {
        (0..self.fragment_of.len()).filter(|&v| self.fragment_of[v] == f).collect()
    }

    /// Largest hop diameter of a fragment measured along tree edges.
    pub fn max_diameter(&self, t: &RootedTree) -> usize {
        let n = t.n();
        let mut best = 0;
        for &f in self.root_of.keys() {
            for &src in &self.members(f) {
                let mut dist = vec![usize::MAX; n];
                dist[src] = 0;
                let mut stack = vec![src];
                while let Some(x) = stack.pop() {
                    let nbrs = t.children(x).iter().copied().chain(t.parent(x));
                    for y in nbrs {
                        if self.fragment_of[y] == f && dist[y] == usize::MAX {
                            dist[y] = dist[x] + 1;
                            best = best.max(dist[y]);
                            stack.push(y);
                        }
                    }
                }
            }
        }
        best
    }

    /// Structural checks: connected subtrees with min-id labels, the fragment
    /// count bound and the diameter bound.
    pub fn check(&self, t: &RootedTree) -> std::result::Result<(), String> {
        let n = t.n();
        let s = size_threshold(n);
        for v in 0..n {
            let f = self.fragment_of[v];
            let is_root = self.root_of.get(&f) == Some(&v);
            match t.parent(v) {
                Some(p) if !is_root && self.fragment_of[p] != f => return Err(format!("node {v} is cut off from fragment {f}")),
                Some(p) if is_root && self.parent_of.get(&f) != Some(&Some(self.fragment_of[p])) => {
                    return Err(format!("fragment {f} has the wrong parent"))
                }
                None if !is_root => return Err("tree root must root its fragment".into()),
                _ => {}
            }
            if f > v {
                return Err(format!("fragment id {f} is not the minimum member (node {v})"));
            }
        }
        if self.k() > s + 1 {
            return Err(format!("{} fragments exceed bound {}", self.k(), s + 1));
        }
        let d = self.max_diameter(t);
        if d > DIAMETER_FACTOR * s {
            return Err(format!("fragment diameter {d} exceeds {}", DIAMETER_FACTOR * s));
        }
        Ok(())
    }
}

/// The same size-threshold rule evaluated centrally.
pub fn fragment_decompose_reference(t: &RootedTree) -> FragmentDecomposition {
    let n = t.n();
    let s = size_threshold(n);
    let mut open_size = vec![0usize; n];
    let mut open_min = vec![0usize; n];
    let mut closes = vec![false; n];
    for &v in t.bfs_order().iter().rev() {
        let mut size = 1;
        let mut min = v;
        for &c in t.children(v) {
            if !closes[c] {
                size += open_size[c];
                min = min.min(open_min[c]);
            }
        }
        open_size[v] = size;
        open_min[v] = min;
        closes[v] = size >= s || t.parent(v).is_none();
    }
    let mut fragment_of = vec![0; n];
    let mut root_of = BTreeMap::new();
    let mut parent_of = BTreeMap::new();
    for &v in t.bfs_order() {
        if closes[v] {
            fragment_of[v] = open_min[v];
            root_of.insert(open_min[v], v);
            parent_of.insert(open_min[v], t.parent(v).map(|p| fragment_of[p]));
        } else {
            fragment_of[v] = fragment_of[t.parent(v).expect("non-closing node has a parent")];
        }
    }
    FragmentDecomposition { fragment_of, root_of, parent_of }
}

/// Runs the partition and the T_F gather/broadcast. Returns per-node fragment
/// knowledge, the fragment tree every node holds, and the assembled decomposition.
pub fn fragment_decompose(
    net: &mut Network<'_>,
    tree: &[LocalTree],
) -> Result<(Vec<FragNode>, Arc<FragmentTree>, FragmentDecomposition)> {
    let g: &Graph = net.graph();
    let n = g.n();
    let nodes = net.run(&FragmentPartition { tree }, "fragments.partition")?;
    let items: Vec<Vec<Pair>> = (0..n)
        .map(|v| {
            let f = &nodes[v];
            if f.is_root {
                FragmentTree::items_for(f.frag, v, f.parent_frag, tree[v].parent.map(|p| g.adj(v)[p].node))
            } else {
                Vec::new()
            }
        })
        .collect();
    let lists = net.gather_broadcast(&items, ItemOp::First, "fragments.tree")?;
    let list = agreed(&lists)?;
    let ftree = Arc::new(FragmentTree::from_items(n, &list)?);
    let mut root_of = BTreeMap::new();
    let mut parent_of = BTreeMap::new();
    for &f in ftree.ids() {
        root_of.insert(f, ftree.root_node(f));
        parent_of.insert(f, ftree.parent(f));
    }
    let decomposition = FragmentDecomposition { fragment_of: nodes.iter().map(|f| f.frag).collect(), root_of, parent_of };
    Ok((nodes, ftree, decomposition))
}
