//! The distributed driver: greedy packing through repeated distributed MSTs,
//! 1-respecting cuts per tree, load thresholds, component counting and the
//! component cut values, all on the simulated network.
//!
//! The controller below only sequences engine runs. Everything it branches on
//! has been made known to every node by a broadcast or all-reduce first, and
//! `agreed` checks that the nodes indeed hold the same value.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::sampling::karger_sample_connected;
use crate::graph::{Cut, Graph, NodeId};
use crate::mst::dist_mst_on;
use crate::mst::fragments::size_threshold;
use crate::one_respect::{dist_side_bits, run_one_respect, OneRespectOutcome};
use crate::packing::{below_threshold, tree_count_for, TreePacking};
use crate::par;
use crate::rational::{eps_prime, sampling_eps_prime, Rational};
use crate::recursion::{level_cap, many_components, Branch, LevelRecord, RecursionTrace};
use crate::seq_mincut::{exact_eps, sampling_probability, LambdaEstimate};
use crate::sim::library::{Convergecast, Exchange, ItemOp, Pair, PairOp};
use crate::sim::{agreed, EngineConfig, Incoming, LocalTree, Message, Network, NodeCtx, NodeProgram, Port, RoundReport};

const LABEL: u8 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DistRun {
    pub cut: Cut,
    /// Each node's output bit: 1 iff it is on the reported side.
    pub bits: Vec<bool>,
    pub trace: RecursionTrace,
    pub lambda: Option<LambdaEstimate>,
    pub report: RoundReport,
}

// ---------------------------------------------------------------------------
// Components

/// Min-id flooding over kept ports for a fixed number of rounds. A node sends
/// its label whenever it drops (and once at the start). Output: the label and
/// whether it dropped in the last round.
struct FloodEpoch<'a> {
    keep: &'a [Vec<bool>],
    labels: &'a [NodeId],
    rounds: u64,
}

struct FloodState {
    label: NodeId,
    changed: bool,
}

impl FloodEpoch<'_> {
    fn announce(&self, st: &FloodState, ctx: &mut NodeCtx<'_>) {
        for (port, &k) in self.keep[ctx.id()].iter().enumerate() {
            if k {
                ctx.send(port, Message::new(LABEL, st.label as i64, 0));
            }
        }
    }
}

impl NodeProgram for FloodEpoch<'_> {
    type State = FloodState;
    type Output = (NodeId, bool);

    fn init(&self, ctx: &mut NodeCtx<'_>) -> FloodState {
        let st = FloodState { label: self.labels[ctx.id()], changed: false };
        self.announce(&st, ctx);
        st
    }

    fn on_round(&self, st: &mut FloodState, ctx: &mut NodeCtx<'_>, inbox: &[Incoming]) {
        let best = inbox.iter().map(|m| m.msg.a as NodeId).min().unwrap_or(usize::MAX);
        st.changed = best < st.label;
        if st.changed {
            st.label = best;
        }
        if ctx.round() >= self.rounds {
            ctx.halt();
        } else if st.changed {
            self.announce(st, ctx);
        }
    }

    fn output(&self, st: FloodState) -> (NodeId, bool) {
        (st.label, st.changed)
    }
}

fn keep_ports(g: &Graph, keep: &[bool]) -> Vec<Vec<bool>> {
    (0..g.n()).map(|v| g.adj(v).iter().map(|nb| keep[nb.edge]).collect()).collect()
}

/// Labels every node with the smallest id reachable over kept edges, then
/// counts the nodes whose label is their own id.
pub fn dist_count_components(net: &mut Network<'_>, keep: &[bool]) -> Result<(usize, Vec<NodeId>)> {
    let g = net.graph();
    let n = g.n();
    let ports = keep_ports(g, keep);
    let rounds = 2 * (size_threshold(n) + net.engine().d_approx()) as u64;
    let mut labels: Vec<NodeId> = (0..n).collect();
    loop {
        let out = net.run(&FloodEpoch { keep: &ports, labels: &labels, rounds }, "components.flood")?;
        labels = out.iter().map(|&(l, _)| l).collect();
        let flags: Vec<Pair> = out.iter().map(|&(_, c)| (i64::from(c), 0)).collect();
        let any = agreed(&net.all_reduce(&flags, PairOp::Max, "components.check")?)?;
        if any.0 == 0 {
            break;
        }
    }
    let roots: Vec<Pair> = (0..n).map(|v| (i64::from(labels[v] == v), 0)).collect();
    let count = agreed(&net.all_reduce(&roots, PairOp::Sum, "components.count")?)?;
    Ok((count.0 as usize, labels))
}

/// Depth-limited min-id BFS inside each component. Output: (smallest id heard,
/// port towards it).
struct LocalBfs<'a> {
    keep: &'a [Vec<bool>],
    rounds: u64,
}

impl NodeProgram for LocalBfs<'_> {
    type State = (NodeId, Option<Port>);
    type Output = (NodeId, Option<Port>);

    fn init(&self, ctx: &mut NodeCtx<'_>) -> Self::State {
        let st = (ctx.id(), None);
        for (port, &k) in self.keep[ctx.id()].iter().enumerate() {
            if k {
                ctx.send(port, Message::new(LABEL, st.0 as i64, 0));
            }
        }
        st
    }

    fn on_round(&self, st: &mut Self::State, ctx: &mut NodeCtx<'_>, inbox: &[Incoming]) {
        if let Some(m) = inbox.iter().min_by_key(|m| (m.msg.a, m.port)) {
            if (m.msg.a as NodeId) < st.0 {
                *st = (m.msg.a as NodeId, Some(m.port));
                if ctx.round() < self.rounds {
                    for (port, &k) in self.keep[ctx.id()].iter().enumerate() {
                        if k && port != m.port {
                            ctx.send(port, Message::new(LABEL, st.0 as i64, 0));
                        }
                    }
                }
            }
        }
        if ctx.round() >= self.rounds {
            ctx.halt();
        }
    }

    fn output(&self, st: Self::State) -> Self::Output {
        st
    }
}

/// w(C, V∖C) for the component C of every node. Components with fewer than
/// ⌈√n⌉ nodes are summed over a local BFS tree of depth ⌈√n⌉+1; the others,
/// of which there are at most √n, through the global BFS tree.
pub fn component_cut_values(net: &mut Network<'_>, labels: &[NodeId]) -> Result<Vec<u64>> {
    let g = net.graph();
    let n = g.n();
    let s = size_threshold(n);
    let announce: Vec<Vec<Option<Pair>>> = (0..n).map(|v| vec![Some((labels[v] as i64, 0)); g.adj(v).len()]).collect();
    let heard = net.run(&Exchange { values: &announce }, "compcut.labels")?;
    let boundary: Vec<i64> = (0..n)
        .map(|v| {
            g.adj(v)
                .iter()
                .zip(&heard[v])
                .filter(|(_, l)| l.is_some_and(|(l, _)| l as NodeId != labels[v]))
                .map(|(nb, _)| nb.weight as i64)
                .sum()
        })
        .collect();
    let same: Vec<Vec<bool>> =
        (0..n).map(|v| heard[v].iter().map(|l| l.is_some_and(|(l, _)| l as NodeId == labels[v])).collect()).collect();

    let bfs = net.run(&LocalBfs { keep: &same, rounds: s as u64 + 1 }, "compcut.local_bfs")?;
    let reached: Vec<bool> = (0..n).map(|v| bfs[v].0 == labels[v]).collect();
    let to_parent: Vec<Vec<Option<Pair>>> = (0..n)
        .map(|v| {
            let mut out = vec![None; g.adj(v).len()];
            if let (true, Some(p)) = (reached[v], bfs[v].1) {
                out[p] = Some((1, 0));
            }
            out
        })
        .collect();
    let child_marks = net.run(&Exchange { values: &to_parent }, "compcut.children")?;
    let forest: Vec<LocalTree> = (0..n)
        .map(|v| {
            if !reached[v] {
                return LocalTree::default();
            }
            let children = child_marks[v].iter().enumerate().filter(|(_, m)| m.is_some()).map(|(p, _)| p).collect();
            LocalTree { parent: bfs[v].1, children }
        })
        .collect();
    let values: Vec<Pair> = (0..n).map(|v| if reached[v] { (1, boundary[v]) } else { (0, 0) }).collect();
    let sums = net.run(&Convergecast { forest: &forest, values: &values, op: PairOp::Sum }, "compcut.local_sum")?;
    // the local root decides and streams (small, value) down its tree
    let root_says: Vec<Pair> = (0..n)
        .map(|v| {
            if reached[v] && forest[v].parent.is_none() {
                let (size, w) = sums[v];
                if (size as usize) < s {
                    (1, w)
                } else {
                    (0, 0)
                }
            } else {
                (0, 0)
            }
        })
        .collect();
    let verdict = net.run(&DownCast { forest: &forest, values: &root_says }, "compcut.local_flag")?;
    let small: Vec<bool> = (0..n).map(|v| reached[v] && verdict[v].0 == 1).collect();

    let big_items: Vec<Vec<Pair>> = (0..n).map(|v| if small[v] { Vec::new() } else { vec![(labels[v] as i64, boundary[v])] }).collect();
    let big = net.gather_broadcast(&big_items, ItemOp::Sum, "compcut.big")?;
    (0..n)
        .map(|v| {
            if small[v] {
                Ok(verdict[v].1 as u64)
            } else {
                big[v]
                    .iter()
                    .find(|&&(l, _)| l as NodeId == labels[v])
                    .map(|&(_, w)| w as u64)
                    .ok_or_else(|| Error::invariant(format!("no value for the component of node {v}")))
            }
        })
        .collect()
}

/// Roots send one value down their tree. Output: the root's value.
struct DownCast<'a> {
    forest: &'a [LocalTree],
    values: &'a [Pair],
}

impl NodeProgram for DownCast<'_> {
    type State = Pair;
    type Output = Pair;

    fn init(&self, ctx: &mut NodeCtx<'_>) -> Pair {
        let t = &self.forest[ctx.id()];
        if t.parent.is_some() {
            return (0, 0);
        }
        let val = self.values[ctx.id()];
        for &c in &t.children {
            ctx.send(c, Message::new(LABEL, val.0, val.1));
        }
        ctx.halt();
        val
    }

    fn on_round(&self, st: &mut Pair, ctx: &mut NodeCtx<'_>, inbox: &[Incoming]) {
        let t = &self.forest[ctx.id()];
        if let Some(m) = inbox.iter().find(|m| Some(m.port) == t.parent) {
            *st = (m.msg.a, m.msg.b);
            for &c in &t.children {
                ctx.send(c, m.msg);
            }
            ctx.halt();
        }
    }

    fn output(&self, st: Pair) -> Pair {
        st
    }
}

// ---------------------------------------------------------------------------
// Packing

/// Adds distributed MST trees until the packing has `k`. Each node keys its
/// incident edges from the tree counts it has seen on them.
pub fn dist_extend_packing(net: &mut Network<'_>, packing: &mut TreePacking, k: usize) -> Result<()> {
    let g = net.graph();
    while packing.len() < k {
        let keys = packing.mst_keys();
        let (_, tree) = dist_mst_on(net, &keys)?;
        packing.push_tree(tree.edge_ids(g));
    }
    Ok(())
}

/// pack_val from the all-reduced maximum copy load.
pub fn dist_pack_val(net: &mut Network<'_>, packing: &TreePacking) -> Result<Rational> {
    let g = net.graph();
    let local: Vec<Pair> = (0..g.n())
        .map(|v| {
            let m = g.adj(v).iter().filter(|nb| !packing.internal()[nb.edge]).map(|nb| packing.copy_loads(nb.edge).1).max();
            (m.unwrap_or(0) as i64, 0)
        })
        .collect();
    let max = agreed(&net.all_reduce(&local, PairOp::Max, "packing.maxload")?)?.0;
    if max <= 0 {
        return Err(Error::invariant("packing carries no load"));
    }
    Ok(Rational::new(packing.len() as i128, max as i128))
}

/// Best 1-respecting cut over the packing's trees, one run per distinct tree with
/// its rounds charged once per occurrence. Returns (weight, node, tree index) and
/// the outcome for that tree.
fn best_over_trees(net: &mut Network<'_>, packing: &TreePacking) -> Result<Option<(u64, NodeId, usize, OneRespectOutcome)>> {
    const CHUNK: usize = 16;
    let mut rep: HashMap<&[usize], usize> = HashMap::new();
    let mut distinct: Vec<usize> = Vec::new();
    let occurrence: Vec<usize> = packing
        .trees()
        .iter()
        .enumerate()
        .map(|(i, t)| {
            *rep.entry(t.as_slice()).or_insert_with(|| {
                distinct.push(i);
                distinct.len() - 1
            })
        })
        .collect();
    let g = net.graph();
    let exec = net.engine().config().execution;
    let mut reports: Vec<RoundReport> = Vec::with_capacity(distinct.len());
    let mut best: Option<(u64, NodeId, usize, OneRespectOutcome)> = None;
    for chunk in distinct.chunks(CHUNK) {
        let base = &*net;
        let results = par::map(chunk, exec, |&i| -> Result<(OneRespectOutcome, RoundReport)> {
            let mut local = base.fork();
            let views = tree_views(g, &packing.trees()[i])?;
            let out = run_one_respect(&mut local, &views, packing.internal())?;
            Ok((out, local.take_report()))
        });
        for (&i, res) in chunk.iter().zip(results) {
            let (out, report) = res?;
            reports.push(report);
            if let Some((w, v)) = out.best {
                if best.as_ref().is_none_or(|b| w < b.0) {
                    best = Some((w, v, i, out));
                }
            }
        }
    }
    for &d in &occurrence {
        net.absorb(&reports[d]);
    }
    Ok(best)
}

// ---------------------------------------------------------------------------
// Drivers

/// Distributed version of the doubling λ estimate; identical decisions to the
/// sequential one because the packings coincide.
pub fn dist_estimate_lambda(net: &mut Network<'_>) -> Result<LambdaEstimate> {
    let g = net.graph();
    let n = g.n();
    let mut packing = TreePacking::new(g);
    let one = Rational::from_integer(1);
    let mut guess = 1u64;
    loop {
        let k = tree_count_for(guess, g.total_weight(), &one)?;
        dist_extend_packing(net, &mut packing, k)?;
        let pv = dist_pack_val(net, &packing)?;
        if Rational::from_integer(3) * pv > Rational::from_integer(guess as i128) {
            guess *= 2;
            continue;
        }
        let seen = best_over_trees(net, &packing)?.map_or(u64::MAX, |b| b.0);
        let degrees: Vec<Pair> = (0..n).map(|v| (g.weighted_degree(v) as i64, 0)).collect();
        let min_deg = agreed(&net.all_reduce(&degrees, PairOp::Min, "lambda.degree")?)?.0 as u64;
        let bound = guess.min(min_deg).min(seen);
        return Ok(LambdaEstimate { guess, bound, trees: packing.len(), pack_val: pv });
    }
}

fn tree_views(g: &Graph, t: &[usize]) -> Result<Vec<LocalTree>> {
    Ok(crate::mst::RootedTree::from_edges(g, t, 0)?.local_views(g))
}

/// The level loop on the network with a known bound on λ.
pub fn dist_approx_on(net: &mut Network<'_>, eps: &Rational, lambda_bound: u64) -> Result<(Vec<bool>, RecursionTrace)> {
    if *eps <= Rational::from_integer(0) || *eps > Rational::from_integer(1) {
        return Err(Error::InvalidArgument(format!("ε must lie in (0, 1], got {eps}")));
    }
    let g = net.graph();
    let n = g.n();
    let ep = eps_prime(eps);
    let mut trace = RecursionTrace { eps: *eps, eps_prime: ep, lambda_bound, levels: Vec::new() };
    let mut labels: Vec<NodeId> = (0..n).collect();
    let mut nodes = n;
    let mut best: Option<(u64, Vec<bool>)> = None;
    for _ in 0..level_cap(n, &ep) {
        let internal: Vec<bool> = g.edges().iter().map(|e| labels[e.u] == labels[e.v]).collect();
        // each node adds up w over incident non-internal edges; every edge is seen twice
        let local: Vec<Pair> =
            (0..n).map(|v| (g.adj(v).iter().filter(|nb| !internal[nb.edge]).map(|nb| nb.weight as i64).sum(), 0)).collect();
        let edges = agreed(&net.all_reduce(&local, PairOp::Sum, "level.size")?)?.0 as u64 / 2;
        let k = tree_count_for(lambda_bound, edges, &ep)?;
        let mut packing = TreePacking::contracted(g, internal);
        dist_extend_packing(net, &mut packing, k)?;

        let one = best_over_trees(net, &packing)?;
        let pack_val = dist_pack_val(net, &packing)?;
        let l_a = (Rational::from_integer(1) - Rational::from_integer(2) * ep) / pack_val;
        let keep: Vec<bool> = (0..g.m()).map(|e| below_threshold(&packing, e, &l_a)).collect();
        let (components, next) = dist_count_components(net, &keep)?;

        let mut record = LevelRecord {
            nodes,
            edges,
            trees: k,
            pack_val,
            threshold: l_a,
            components,
            branch: Branch::Contract,
            best_one_respect: one.as_ref().map(|b| (b.0, b.1, b.2)),
            component_cut: None,
            tree_edges: packing.trees().to_vec(),
            labels: next.clone(),
        };
        if let Some((w, v, _, outcome)) = &one {
            if best.as_ref().is_none_or(|b| *w < b.0) {
                best = Some((*w, dist_side_bits(net, outcome, *v)?));
            }
        }
        if many_components(components, nodes, &ep) {
            record.branch = Branch::ManyComponents;
            let values = component_cut_values(net, &next)?;
            let cand: Vec<Pair> = (0..n).map(|v| (values[v] as i64, next[v] as i64)).collect();
            let (w, label) = agreed(&net.all_reduce(&cand, PairOp::Min, "compcut.min")?)?;
            record.component_cut = Some((w as u64, label as NodeId));
            if best.as_ref().is_none_or(|b| (w as u64) < b.0) {
                best = Some((w as u64, (0..n).map(|v| next[v] == label as NodeId).collect()));
            }
        } else if components == 1 {
            record.branch = Branch::Collapsed;
        }
        let stop = record.branch != Branch::Contract;
        trace.levels.push(record);
        if stop {
            let (_, bits) = best.ok_or_else(|| Error::invariant("no candidate cut"))?;
            return Ok((bits, trace));
        }
        labels = next;
        nodes = components;
    }
    Err(Error::invariant(format!("level cap {} exceeded", level_cap(n, &ep))))
}

fn finish(g: &Graph, bits: Vec<bool>, trace: RecursionTrace, lambda: Option<LambdaEstimate>, report: RoundReport) -> Result<DistRun> {
    let cut = Cut::from_mask(g, &bits)?;
    Ok(DistRun { cut, bits, trace, lambda, report })
}

pub fn dist_approx_min_cut(g: &Graph, eps: &Rational, config: EngineConfig) -> Result<DistRun> {
    let mut net = Network::new(g, config)?;
    let est = dist_estimate_lambda(&mut net)?;
    let (bits, trace) = dist_approx_on(&mut net, eps, est.bound)?;
    finish(g, bits, trace, Some(est), net.take_report())
}

pub fn dist_exact_min_cut(g: &Graph, config: EngineConfig) -> Result<DistRun> {
    let mut net = Network::new(g, config)?;
    let est = dist_estimate_lambda(&mut net)?;
    let (bits, trace) = dist_approx_on(&mut net, &exact_eps(est.bound), est.bound)?;
    finish(g, bits, trace, Some(est), net.take_report())
}

/// Karger sampling as a preprocessing step (no communication: both endpoints
/// of an edge can draw its coin from the shared per-edge stream), then the
/// approximate driver with ε′ on the sample. Bits are reported against G.
pub fn dist_sampled_approx_min_cut(g: &Graph, eps: &Rational, d: u32, config: EngineConfig) -> Result<(DistRun, f64, u32)> {
    let mut net = Network::new(g, config.clone())?;
    let est = dist_estimate_lambda(&mut net)?;
    let p = sampling_probability(g.n(), eps, est.bound, d);
    if p >= 1.0 {
        let (bits, trace) = dist_approx_on(&mut net, eps, est.bound)?;
        return Ok((finish(g, bits, trace, Some(est), net.take_report())?, 1.0, 0));
    }
    let (h, attempts) = karger_sample_connected(g, p, config.seed)?;
    let mut report = net.take_report();
    let run = dist_approx_min_cut(&h, &sampling_eps_prime(eps), config)?;
    report.merge(&run.report);
    Ok((finish(g, run.bits, run.trace, run.lambda, report)?, p, attempts))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValueEstimate {
    pub value: Rational,
    pub one_respect: Option<u64>,
    pub pack_val: Rational,
    pub trees: usize,
    pub report: RoundReport,
}

/// min(best 1-respecting cut, (2+ε)·pack_val) over ⌈6·U·ln m/ε²⌉ greedy trees.
pub fn dist_estimate_value(g: &Graph, eps: &Rational, config: EngineConfig) -> Result<ValueEstimate> {
    let mut net = Network::new(g, config)?;
    let est = dist_estimate_lambda(&mut net)?;
    let k = tree_count_for(est.bound, g.total_weight(), eps)?;
    let mut packing = TreePacking::new(g);
    dist_extend_packing(&mut net, &mut packing, k)?;
    let one = best_over_trees(&mut net, &packing)?.map(|b| b.0);
    let pack_val = dist_pack_val(&mut net, &packing)?;
    let packed = (Rational::from_integer(2) + eps) * pack_val;
    let value = match one {
        Some(c) if Rational::from_integer(c as i128) < packed => Rational::from_integer(c as i128),
        _ => packed,
    };
    Ok(ValueEstimate { value, one_respect: one, pack_val, trees: k, report: net.take_report() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::{self, complete, cycle};
    use crate::graph::oracle::brute_force_mincut;
    use crate::graph::Edge;

    fn net(g: &Graph) -> Network<'_> {
        Network::new(g, EngineConfig::default()).unwrap()
    }

    #[test]
    fn component_counts() {
        let g = generators::generate(&"planted:6,6,2,1.0".parse().unwrap(), 0).unwrap();
        let mut nw = net(&g);
        let (c, labels) = dist_count_components(&mut nw, &vec![false; g.m()]).unwrap();
        assert_eq!((c, labels), (12, (0..12).collect()));
        let (c, labels) = dist_count_components(&mut nw, &vec![true; g.m()]).unwrap();
        assert_eq!((c, labels), (1, vec![0; 12]));
        let intra: Vec<bool> = g.edges().iter().map(|e| (e.u < 6) == (e.v < 6)).collect();
        let (c, labels) = dist_count_components(&mut nw, &intra).unwrap();
        assert_eq!(c, 2);
        assert_eq!(labels, g.component_labels(|e| intra[e]));
        assert!(nw.report().max_msgs_per_edge_per_round <= 1);
    }

    #[test]
    fn component_values_small_and_big() {
        let g = generators::generate(&"planted:4,4,2,1.0".parse().unwrap(), 0).unwrap();
        let labels: Vec<NodeId> = (0..8).map(|v| if v < 4 { 0 } else { 4 }).collect();
        assert_eq!(component_cut_values(&mut net(&g), &labels).unwrap(), vec![2; 8]);
        assert_eq!(component_cut_values(&mut net(&g), &[0; 8]).unwrap(), vec![0; 8]);

        // 60-node path component plus 40 singletons hanging off it
        let mut edges: Vec<Edge> = (0..59).map(|i| Edge::new(i, i + 1, 1)).collect();
        edges.extend((60..100).map(|i| Edge::new(i, (i * 7) % 60, 1 + (i as u64 % 3))));
        let g = Graph::new(100, edges).unwrap();
        let labels: Vec<NodeId> = (0..100).map(|v| if v < 60 { 0 } else { v }).collect();
        let got = component_cut_values(&mut net(&g), &labels).unwrap();
        for v in 0..100 {
            let side: Vec<NodeId> = (0..100).filter(|&u| labels[u] == labels[v]).collect();
            assert_eq!(got[v], crate::graph::cut_weight(&g, &side).unwrap(), "node {v}");
        }
    }

    #[test]
    fn approx_on_small_graphs() {
        let g = generators::generate(&"planted:8,8,2,1.0".parse().unwrap(), 0).unwrap();
        let run = dist_approx_min_cut(&g, &Rational::new(2, 5), EngineConfig::default()).unwrap();
        assert_eq!(run.cut.weight(), 2);
        assert_eq!(run.cut.canonical(16), (8..16).collect::<Vec<_>>());
        assert!(run.report.max_msgs_per_edge_per_round <= 1);

        let run = dist_approx_min_cut(&complete(4).unwrap(), &Rational::new(1, 2), EngineConfig::default()).unwrap();
        assert_eq!(run.cut.weight(), 3);
        assert_eq!(run.cut.side().len().min(4 - run.cut.side().len()), 1);
    }

    #[test]
    fn exact_and_value() {
        let g = cycle(7).unwrap();
        assert_eq!(dist_exact_min_cut(&g, EngineConfig::default()).unwrap().cut.weight(), 2);
        let g = generators::generate(&"planted:10,10,4,0.9".parse().unwrap(), 1).unwrap();
        let run = dist_exact_min_cut(&g, EngineConfig::default()).unwrap();
        assert_eq!(run.cut.weight(), brute_force_mincut(&g).unwrap().weight());

        let v = dist_estimate_value(&complete(4).unwrap(), &Rational::new(1, 2), EngineConfig::default()).unwrap();
        assert!(v.value >= Rational::from_integer(3) && v.value <= Rational::new(15, 4), "{:?}", v.value);
    }

    #[test]
    fn matches_sequential_structure() {
        let g = generators::generate(&"weighted:9,0.5,3".parse().unwrap(), 4).unwrap();
        let eps = Rational::new(1, 2);
        let (cut, seq) = crate::seq_mincut::approx_min_cut(&g, &eps).unwrap();
        let run = dist_approx_min_cut(&g, &eps, EngineConfig::default()).unwrap();
        assert_eq!(run.trace, seq);
        for (a, b) in run.trace.levels.iter().zip(&seq.levels) {
            assert_eq!(a.tree_edges, b.tree_edges);
            assert_eq!(a.labels, b.labels);
        }
        assert_eq!(run.cut, cut);
    }
}
