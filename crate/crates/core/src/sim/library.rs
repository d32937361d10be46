//! Reusable node programs: BFS tree, convergecasts, pipelined up/downcasts and
//! one-round exchanges. Forest-shaped programs take a per-node [`LocalTree`].

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{Incoming, Message, NodeCtx, NodeProgram, Port};
use crate::graph::NodeId;

/// A node's view of a rooted tree or forest: ports to its parent and children.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LocalTree {
    pub parent: Option<Port>,
    pub children: Vec<Port>,
}

impl LocalTree {
    pub fn is_root(&self) -> bool {
        self.parent.is_none()
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }
}

pub type Pair = (i64, i64);

const OFFER: u8 = 1;
const ACK: u8 = 2;
const UP: u8 = 3;
const DOWN: u8 = 4;
const ITEM: u8 = 5;
const DONE: u8 = 6;
const VALUE: u8 = 7;

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BfsNode {
    pub tree: LocalTree,
    pub depth: usize,
}

/// Layered BFS from `root`. A joining node adopts the offer from the smallest id
/// and offers itself only to neighbors that did not offer in the same round.
pub struct BfsTree {
    pub root: NodeId,
}

pub struct BfsState {
    joined: bool,
    node: BfsNode,
    deadline: Option<u64>,
}

impl NodeProgram for BfsTree {
    type State = BfsState;
    type Output = BfsNode;

    fn init(&self, ctx: &mut NodeCtx<'_>) -> BfsState {
        let mut st = BfsState { joined: false, node: BfsNode { tree: LocalTree::default(), depth: 0 }, deadline: None };
        if ctx.id() == self.root {
            st.joined = true;
            ctx.send_all(Message::new(OFFER, 0, 0));
            st.deadline = Some(2);
        }
        st
    }

    fn on_round(&self, st: &mut BfsState, ctx: &mut NodeCtx<'_>, inbox: &[Incoming]) {
        for m in inbox.iter().filter(|m| m.msg.tag == ACK) {
            st.node.tree.children.push(m.port);
        }
        if !st.joined {
            let offers: Vec<&Incoming> = inbox.iter().filter(|m| m.msg.tag == OFFER).collect();
            let Some(first) = offers.first() else { return };
            st.joined = true;
            st.node.tree.parent = Some(first.port);
            st.node.depth = first.msg.a as usize + 1;
            ctx.send(first.port, Message::new(ACK, 0, 0));
            let mut offered = false;
            for port in 0..ctx.degree() {
                if offers.iter().all(|m| m.port != port) {
                    ctx.send(port, Message::new(OFFER, st.node.depth as i64, 0));
                    offered = true;
                }
            }
            if offered {
                st.deadline = Some(ctx.round() + 2);
            } else {
                ctx.halt();
            }
        } else if st.deadline == Some(ctx.round()) {
            ctx.halt();
        }
    }

    fn output(&self, mut st: BfsState) -> BfsNode {
        st.node.tree.children.sort_unstable();
        st.node
    }
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairOp {
    Sum,
    /// Lexicographic minimum.
    Min,
    /// Lexicographic maximum.
    Max,
}

impl PairOp {
    pub fn apply(self, x: Pair, y: Pair) -> Pair {
        match self {
            PairOp::Sum => (x.0 + y.0, x.1 + y.1),
            PairOp::Min => x.min(y),
            PairOp::Max => x.max(y),
        }
    }
}

/// Each node learns the aggregate of its own subtree; one message per tree edge.
pub struct Convergecast<'a> {
    pub forest: &'a [LocalTree],
    pub values: &'a [Pair],
    pub op: PairOp,
}

pub struct CastState {
    acc: Pair,
    waiting: usize,
    result: Option<Pair>,
}

impl Convergecast<'_> {
    fn finish(&self, st: &mut CastState, ctx: &mut NodeCtx<'_>) {
        if let Some(p) = self.forest[ctx.id()].parent {
            ctx.send(p, Message::new(UP, st.acc.0, st.acc.1));
        }
        st.result = Some(st.acc);
        ctx.halt();
    }
}

impl NodeProgram for Convergecast<'_> {
    type State = CastState;
    type Output = Pair;

    fn init(&self, ctx: &mut NodeCtx<'_>) -> CastState {
        let v = ctx.id();
        let mut st = CastState { acc: self.values[v], waiting: self.forest[v].children.len(), result: None };
        if st.waiting == 0 {
            self.finish(&mut st, ctx);
        }
        st
    }

    fn on_round(&self, st: &mut CastState, ctx: &mut NodeCtx<'_>, inbox: &[Incoming]) {
        for m in inbox.iter().filter(|m| m.msg.tag == UP) {
            st.acc = self.op.apply(st.acc, (m.msg.a, m.msg.b));
            st.waiting -= 1;
        }
        if st.waiting == 0 {
            self.finish(st, ctx);
        }
    }

    fn output(&self, st: CastState) -> Pair {
        st.result.expect("convergecast finished")
    }
}

/// Convergecast to the roots, then the root value is sent back down.
/// Every node outputs its tree's aggregate.
pub struct AllReduce<'a> {
    pub tree: &'a [LocalTree],
    pub values: &'a [Pair],
    pub op: PairOp,
}

impl AllReduce<'_> {
    fn settle(&self, st: &mut CastState, ctx: &mut NodeCtx<'_>) {
        let t = &self.tree[ctx.id()];
        match t.parent {
            Some(p) => ctx.send(p, Message::new(UP, st.acc.0, st.acc.1)),
            None => self.release(st.acc, st, ctx),
        }
    }

    fn release(&self, value: Pair, st: &mut CastState, ctx: &mut NodeCtx<'_>) {
        for &c in &self.tree[ctx.id()].children {
            ctx.send(c, Message::new(DOWN, value.0, value.1));
        }
        st.result = Some(value);
        ctx.halt();
    }
}

impl NodeProgram for AllReduce<'_> {
    type State = CastState;
    type Output = Pair;

    fn init(&self, ctx: &mut NodeCtx<'_>) -> CastState {
        let v = ctx.id();
        let mut st = CastState { acc: self.values[v], waiting: self.tree[v].children.len(), result: None };
        if st.waiting == 0 {
            self.settle(&mut st, ctx);
        }
        st
    }

    fn on_round(&self, st: &mut CastState, ctx: &mut NodeCtx<'_>, inbox: &[Incoming]) {
        let mut got_up = false;
        for m in inbox {
            match m.msg.tag {
                UP => {
                    st.acc = self.op.apply(st.acc, (m.msg.a, m.msg.b));
                    st.waiting -= 1;
                    got_up = true;
                }
                DOWN => {
                    self.release((m.msg.a, m.msg.b), st, ctx);
                    return;
                }
                _ => {}
            }
        }
        if got_up && st.waiting == 0 {
            self.settle(st, ctx);
        }
    }

    fn output(&self, st: CastState) -> Pair {
        st.result.expect("all-reduce finished")
    }
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ItemOp {
    Sum,
    Min,
    Max,
    /// Keys are unique; keep the value.
    First,
}

impl ItemOp {
    fn apply(self, x: i64, y: i64) -> i64 {
        match self {
            ItemOp::Sum => x + y,
            ItemOp::Min => x.min(y),
            ItemOp::Max => x.max(y),
            ItemOp::First => x,
        }
    }
}

/// Keyed items flow up the forest in increasing key order, one per round per
/// edge, combining equal keys. A key is forwarded once every child has either
/// finished or already sent a key at least as large. Each node outputs the
/// aggregated items of its subtree, sorted by key.
pub struct PipelinedConvergecast<'a> {
    pub forest: &'a [LocalTree],
    pub items: &'a [Vec<Pair>],
    pub op: ItemOp,
}

pub struct PipeUpState {
    pending: BTreeMap<i64, i64>,
    last: Vec<Option<i64>>,
    done: Vec<bool>,
    out: Vec<Pair>,
}

impl PipelinedConvergecast<'_> {
    fn safe(st: &PipeUpState, key: i64) -> bool {
        st.done.iter().zip(&st.last).all(|(&d, &l)| d || l.is_some_and(|l| l >= key))
    }

    fn advance(&self, st: &mut PipeUpState, ctx: &mut NodeCtx<'_>) {
        let parent = self.forest[ctx.id()].parent;
        loop {
            match st.pending.first_key_value() {
                Some((&k, &v)) if Self::safe(st, k) => {
                    st.pending.pop_first();
                    st.out.push((k, v));
                    if let Some(p) = parent {
                        ctx.send(p, Message::new(ITEM, k, v));
                        return;
                    }
                }
                Some(_) => return,
                None => {
                    if st.done.iter().all(|&d| d) {
                        if let Some(p) = parent {
                            ctx.send(p, Message::new(DONE, 0, 0));
                        }
                        ctx.halt();
                    }
                    return;
                }
            }
        }
    }
}

impl NodeProgram for PipelinedConvergecast<'_> {
    type State = PipeUpState;
    type Output = Vec<Pair>;

    fn init(&self, ctx: &mut NodeCtx<'_>) -> PipeUpState {
        let v = ctx.id();
        let k = self.forest[v].children.len();
        let mut pending = BTreeMap::new();
        for &(key, val) in &self.items[v] {
            pending.entry(key).and_modify(|x| *x = self.op.apply(*x, val)).or_insert(val);
        }
        let mut st = PipeUpState { pending, last: vec![None; k], done: vec![false; k], out: Vec::new() };
        self.advance(&mut st, ctx);
        st
    }

    fn on_round(&self, st: &mut PipeUpState, ctx: &mut NodeCtx<'_>, inbox: &[Incoming]) {
        let children = &self.forest[ctx.id()].children;
        for m in inbox {
            let Some(c) = children.iter().position(|&p| p == m.port) else { continue };
            match m.msg.tag {
                ITEM => {
                    let (k, v) = (m.msg.a, m.msg.b);
                    st.pending.entry(k).and_modify(|x| *x = self.op.apply(*x, v)).or_insert(v);
                    st.last[c] = Some(k);
                }
                DONE => st.done[c] = true,
                _ => {}
            }
        }
        self.advance(st, ctx);
    }

    fn output(&self, st: PipeUpState) -> Vec<Pair> {
        st.out
    }
}

/// Roots stream their items down the forest, one item per round per edge,
/// followed by an end marker. Every node outputs the roots' list.
pub struct PipelinedBroadcast<'a> {
    pub forest: &'a [LocalTree],
    pub items: &'a [Vec<Pair>],
}

pub struct PipeDownState {
    queue: VecDeque<Pair>,
    received: Vec<Pair>,
    complete: bool,
}

impl PipelinedBroadcast<'_> {
    fn pump(&self, st: &mut PipeDownState, ctx: &mut NodeCtx<'_>) {
        let children = &self.forest[ctx.id()].children;
        if let Some((a, b)) = st.queue.pop_front() {
            for &c in children {
                ctx.send(c, Message::new(ITEM, a, b));
            }
        } else if st.complete {
            for &c in children {
                ctx.send(c, Message::new(DONE, 0, 0));
            }
            ctx.halt();
        }
    }
}

impl NodeProgram for PipelinedBroadcast<'_> {
    type State = PipeDownState;
    type Output = Vec<Pair>;

    fn init(&self, ctx: &mut NodeCtx<'_>) -> PipeDownState {
        let v = ctx.id();
        let mut st = PipeDownState { queue: VecDeque::new(), received: Vec::new(), complete: false };
        if self.forest[v].is_root() {
            st.received = self.items[v].clone();
            st.queue = self.items[v].iter().copied().collect();
            st.complete = true;
            self.pump(&mut st, ctx);
        }
        st
    }

    fn on_round(&self, st: &mut PipeDownState, ctx: &mut NodeCtx<'_>, inbox: &[Incoming]) {
        let parent = self.forest[ctx.id()].parent;
        for m in inbox.iter().filter(|m| Some(m.port) == parent) {
            match m.msg.tag {
                ITEM => {
                    st.received.push((m.msg.a, m.msg.b));
                    st.queue.push_back((m.msg.a, m.msg.b));
                }
                DONE => st.complete = true,
                _ => {}
            }
        }
        self.pump(st, ctx);
    }

    fn output(&self, st: PipeDownState) -> Vec<Pair> {
        st.received
    }
}

// ---------------------------------------------------------------------------

/// One round: node v sends `values[v][p]` on port p when present.
/// Output: the value received on each port.
pub struct Exchange<'a> {
    pub values: &'a [Vec<Option<Pair>>],
}

impl NodeProgram for Exchange<'_> {
    type State = Vec<Option<Pair>>;
    type Output = Vec<Option<Pair>>;

    fn init(&self, ctx: &mut NodeCtx<'_>) -> Self::State {
        for (port, val) in self.values[ctx.id()].iter().enumerate() {
            if let Some((a, b)) = *val {
                ctx.send(port, Message::new(VALUE, a, b));
            }
        }
        vec![None; ctx.degree()]
    }

    fn on_round(&self, st: &mut Self::State, ctx: &mut NodeCtx<'_>, inbox: &[Incoming]) {
        for m in inbox {
            st[m.port] = Some((m.msg.a, m.msg.b));
        }
        ctx.halt();
    }

    fn output(&self, st: Self::State) -> Self::Output {
        st
    }
}
