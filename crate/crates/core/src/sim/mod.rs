//! Synchronous CONGEST engine.
//!
//! Round r: every message queued during round r−1 (or by `init` for r = 1) is
//! delivered, then every live node runs `on_round` with its inbox. A node only
//! sees its own id, its incident edges, `n` and a 2-approximation of the diameter.
//! Program structs hold per-node inputs indexed by node id; a handler must only
//! read the entry for `ctx.id()`.

pub mod library;
pub mod network;
mod trace;

use std::collections::BTreeMap;
use std::sync::OnceLock;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::sampling::mix_seed;
use crate::graph::{Graph, Neighbor, NodeId};
use crate::par;

pub use library::LocalTree;
pub use network::{agreed, Network};
pub use trace::TraceSink;

pub type Port = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Message {
    pub tag: u8,
    pub a: i64,
    pub b: i64,
}

impl Message {
    pub const fn new(tag: u8, a: i64, b: i64) -> Self {
        Message { tag, a, b }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Incoming {
    pub from: NodeId,
    /// Port of the receiving node on which the message arrived.
    pub port: Port,
    pub msg: Message,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

/// Nodes per round below which the parallel mode still runs handlers inline.
pub const PARALLEL_MIN_NODES: usize = 256;

#[derive(Debug, Clone)]
pub struct EngineConfig {
    pub congestion: u32,
    pub max_rounds: u64,
    pub seed: u64,
    pub execution: Execution,
    pub trace: Option<TraceSink>,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig { congestion: 1, max_rounds: 1_000_000, seed: 0, execution: Execution::default(), trace: None }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseStats {
    pub rounds: u64,
    pub messages: u64,
    pub runs: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundReport {
    pub rounds: u64,
    pub max_msgs_per_edge_per_round: u32,
    pub total_messages: u64,
    pub runs: u64,
    pub phases: BTreeMap<String, PhaseStats>,
}

impl RoundReport {
    /// Sequential composition: rounds and messages add up.
    pub fn merge(&mut self, other: &RoundReport) {
        self.rounds += other.rounds;
        self.total_messages += other.total_messages;
        self.runs += other.runs;
        self.max_msgs_per_edge_per_round = self.max_msgs_per_edge_per_round.max(other.max_msgs_per_edge_per_round);
        for (k, v) in &other.phases {
            let p = self.phases.entry(k.clone()).or_default();
            p.rounds += v.rounds;
            p.messages += v.messages;
            p.runs += v.runs;
        }
    }

    /// Rounds summed over phases whose label starts with `prefix`.
    pub fn rounds_with_prefix(&self, prefix: &str) -> u64 {
        self.phases.iter().filter(|(k, _)| k.starts_with(prefix)).map(|(_, v)| v.rounds).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("congestion budget violated in round {round} on edge {edge} ({from} -> {to}): {count} messages, budget {budget}")]
    BudgetViolation { round: u64, edge: usize, from: NodeId, to: NodeId, count: u32, budget: u32 },
    #[error("phase {phase:?} did not finish within {max_rounds} rounds")]
    Timeout { phase: String, max_rounds: u64, partial: Box<RoundReport> },
    #[error("invalid engine configuration: {0}")]
    Config(String),
}

/// What a handler may see and do.
pub struct NodeCtx<'a> {
    id: NodeId,
    n: usize,
    d_approx: usize,
    round: u64,
    seed: u64,
    neighbors: &'a [Neighbor],
    outbox: &'a mut Vec<(Port, Message)>,
    halted: &'a mut bool,
    rng: &'a mut Option<ChaCha8Rng>,
}

impl NodeCtx<'_> {
    pub fn id(&self) -> NodeId {
        self.id
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// An upper bound on the diameter D with D ≤ d_approx ≤ 2D.
    pub fn d_approx(&self) -> usize {
        self.d_approx
    }

    /// 0 during `init`, r during round r.
    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn neighbors(&self) -> &[Neighbor] {
        self.neighbors
    }

    pub fn degree(&self) -> usize {
        self.neighbors.len()
    }

    pub fn neighbor(&self, port: Port) -> &Neighbor {
        &self.neighbors[port]
    }

    /// Queues a message for delivery at the start of the next round.
    pub fn send(&mut self, port: Port, msg: Message) {
        debug_assert!(port < self.neighbors.len());
        self.outbox.push((port, msg));
    }

    pub fn send_all(&mut self, msg: Message) {
        for port in 0..self.neighbors.len() {
            self.outbox.push((port, msg));
        }
    }

    /// Stops the node after this handler; queued messages are still sent.
    pub fn halt(&mut self) {
        *self.halted = true;
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        let (seed, id) = (self.seed, self.id);
        self.rng.get_or_insert_with(|| ChaCha8Rng::seed_from_u64(mix_seed(seed, id as u64)))
    }
}

pub trait NodeProgram: Sync {
    type State: Send;
    type Output: Send;

    fn init(&self, ctx: &mut NodeCtx<'_>) -> Self::State;
    fn on_round(&self, state: &mut Self::State, ctx: &mut NodeCtx<'_>, inbox: &[Incoming]);
    fn output(&self, state: Self::State) -> Self::Output;
}

pub struct Run<O> {
    pub outputs: Vec<O>,
    pub report: RoundReport,
}

struct Slot<S> {
    state: Option<S>,
    halted: bool,
    outbox: Vec<(Port, Message)>,
    rng: Option<ChaCha8Rng>,
}

#[derive(Debug, Clone)]
pub struct Engine<'g> {
    graph: &'g Graph,
    config: EngineConfig,
    d_approx: usize,
    offsets: Vec<usize>,
    reverse_port: Vec<Port>,
    diameter: OnceLock<usize>,
}

impl<'g> Engine<'g> {
    pub fn new(graph: &'g Graph, config: EngineConfig) -> Result<Self, SimError> {
        if config.congestion == 0 {
            return Err(SimError::Config("congestion budget must be at least 1".into()));
        }
        if config.max_rounds == 0 {
            return Err(SimError::Config("max_rounds must be positive".into()));
        }
        let n = graph.n();
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for v in 0..n {
            offsets.push(offsets[v] + graph.adj(v).len());
        }
        let mut reverse_port = vec![0; offsets[n]];
        for v in 0..n {
            for (p, nb) in graph.adj(v).iter().enumerate() {
                reverse_port[offsets[v] + p] = graph.port_of(nb.node, v).expect("adjacency is symmetric");
            }
        }
        let d_approx = 2 * graph.eccentricity(0);
        Ok(Engine { graph, config, d_approx, offsets, reverse_port, diameter: OnceLock::new() })
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn d_approx(&self) -> usize {
        self.d_approx
    }

    /// Exact hop diameter, for assertions only; never handed to programs.
    pub fn exact_diameter(&self) -> usize {
        *self.diameter.get_or_init(|| self.graph.diameter())
    }

    fn ctx<'a, S>(&'a self, v: NodeId, round: u64, slot: &'a mut Slot<S>) -> (NodeCtx<'a>, &'a mut Option<S>) {
        let Slot { state, halted, outbox, rng } = slot;
        let ctx = NodeCtx {
            id: v,
            n: self.graph.n(),
            d_approx: self.d_approx,
            round,
            seed: self.config.seed,
            neighbors: self.graph.adj(v),
            outbox,
            halted,
            rng,
        };
        (ctx, state)
    }

    pub fn run<P: NodeProgram>(&self, program: &P, phase: &str) -> Result<Run<P::Output>, SimError> {
        let n = self.graph.n();
        let exec = if n >= PARALLEL_MIN_NODES { self.config.execution } else { Execution::Sequential };
        let mut slots: Vec<Slot<P::State>> =
            (0..n).map(|_| Slot { state: None, halted: false, outbox: Vec::new(), rng: None }).collect();
        par::for_each_mut(&mut slots, exec, |v, slot| {
            let (mut ctx, _) = self.ctx(v, 0, slot);
            let st = program.init(&mut ctx);
            slot.state = Some(st);
        });

        let mut inboxes: Vec<Vec<Incoming>> = vec![Vec::new(); n];
        let mut stamp = vec![0u64; self.offsets[n]];
        let mut count = vec![0u32; self.offsets[n]];
        let mut report = RoundReport { runs: 1, ..RoundReport::default() };
        let mut round = 0u64;
        loop {
            if slots.iter().all(|s| s.halted) {
                break;
            }
            if round == self.config.max_rounds {
                report.phases.insert(phase.to_string(), PhaseStats { rounds: round, messages: report.total_messages, runs: 1 });
                return Err(SimError::Timeout { phase: phase.to_string(), max_rounds: round, partial: Box::new(report) });
            }
            round += 1;
            for inbox in inboxes.iter_mut() {
                inbox.clear();
            }
            for sender in 0..n {
                if slots[sender].outbox.is_empty() {
                    continue;
                }
                let outbox = std::mem::take(&mut slots[sender].outbox);
                for &(port, msg) in &outbox {
                    let idx = self.offsets[sender] + port;
                    if stamp[idx] != round {
                        stamp[idx] = round;
                        count[idx] = 0;
                    }
                    count[idx] += 1;
                    let nb = self.graph.adj(sender)[port];
                    if count[idx] > self.config.congestion {
                        return Err(SimError::BudgetViolation {
                            round,
                            edge: nb.edge,
                            from: sender,
                            to: nb.node,
                            count: count[idx],
                            budget: self.config.congestion,
                        });
                    }
                    report.max_msgs_per_edge_per_round = report.max_msgs_per_edge_per_round.max(count[idx]);
                    report.total_messages += 1;
                    if let Some(sink) = &self.config.trace {
                        sink.record(phase, round, self.graph.edge(nb.edge), nb.edge, sender, nb.node, &msg);
                    }
                    if !slots[nb.node].halted {
                        inboxes[nb.node].push(Incoming { from: sender, port: self.reverse_port[idx], msg });
                    }
                }
                let mut outbox = outbox;
                outbox.clear();
                slots[sender].outbox = outbox;
            }
            if self.config.congestion > 1 {
                for inbox in inboxes.iter_mut() {
                    inbox.sort_by_key(|m| (m.from, m.msg.tag));
                }
            }
            let inboxes = &inboxes;
            par::for_each_mut(&mut slots, exec, |v, slot| {
                if slot.halted {
                    return;
                }
                let (mut ctx, state) = self.ctx(v, round, slot);
                program.on_round(state.as_mut().expect("initialised"), &mut ctx, &inboxes[v]);
            });
        }
        report.rounds = round;
        report.phases.insert(phase.to_string(), PhaseStats { rounds: round, messages: report.total_messages, runs: 1 });
        let outputs = slots.into_iter().map(|s| program.output(s.state.expect("initialised"))).collect();
        Ok(Run { outputs, report })
    }
}

/// One-shot run with a fresh engine.
pub fn run<P: NodeProgram>(
    g: &Graph,
    program: &P,
    budget: u32,
    max_rounds: u64,
    seed: u64,
) -> Result<Run<P::Output>, SimError> {
    let config = EngineConfig { congestion: budget, max_rounds, seed, ..EngineConfig::default() };
    Engine::new(g, config)?.run(program, "run")
}
