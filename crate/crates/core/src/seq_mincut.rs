//! Sequential reference solver: greedy packing, 1-respecting cuts per tree,
//! load thresholding and virtual contraction, level by level.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::sampling::karger_sample_connected;
use crate::graph::{Cut, Graph, NodeId};
use crate::mst::RootedTree;
use crate::one_respect::one_respect_reference;
use crate::packing::{below_threshold, load_threshold, tree_count_for, TreePacking};
use crate::par;
use crate::rational::{eps_prime, sampling_eps_prime, to_f64, Rational};
use crate::recursion::{contracted_size, level_cap, many_components, Branch, LevelRecord, RecursionTrace};
use crate::sim::Execution;

/// Default failure exponent d in the sampling probability.
pub const DEFAULT_SAMPLE_D: u32 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaEstimate {
    /// The accepted doubling guess λ̂.
    pub guess: u64,
    /// min(λ̂, minimum weighted degree, best 1-respecting cut of the packing),
    /// an upper bound on λ.
    pub bound: u64,
    pub trees: usize,
    pub pack_val: Rational,
}

/// Doubling search: extend one greedy packing to ⌈6·λ̂·ln m⌉ trees and accept
/// the first λ̂ with 3·pack_val ≤ λ̂. Every tree cut seen on the way is a real
/// cut, so the smallest one also bounds λ from above.
pub fn estimate_lambda(g: &Graph) -> Result<LambdaEstimate> {
    let mut p = TreePacking::new(g);
    let mut guess = 1u64;
    let one = Rational::from_integer(1);
    loop {
        let k = tree_count_for(guess, g.total_weight(), &one)?;
        p.extend(g, k);
        let pv = p.pack_val();
        if Rational::from_integer(3) * pv <= Rational::from_integer(guess as i128) {
            let seen = best_one_respect(g, &p, Execution::default())?.map_or(u64::MAX, |(w, _, _)| w);
            let bound = guess.min(g.min_weighted_degree()).min(seen);
            return Ok(LambdaEstimate { guess, bound, trees: p.len(), pack_val: pv });
        }
        guess *= 2;
    }
}

/// Smallest 1-respecting cut over all trees of the packing, skipping nodes whose
/// parent edge is internal. Ties keep the earliest tree, then the smallest node.
pub fn best_one_respect(g: &Graph, packing: &TreePacking, exec: Execution) -> Result<Option<(u64, NodeId, usize)>> {
    let mut first_index: HashMap<&[usize], usize> = HashMap::new();
    let mut distinct: Vec<usize> = Vec::new();
    for (i, t) in packing.trees().iter().enumerate() {
        first_index.entry(t.as_slice()).or_insert_with(|| {
            distinct.push(i);
            i
        });
    }
    let values = par::map(&distinct, exec, |&i| -> Result<Option<(u64, NodeId)>> {
        let t = RootedTree::from_edges(g, &packing.trees()[i], 0)?;
        Ok(one_respect_reference(g, &t, packing.internal()))
    });
    let mut best: Option<(u64, NodeId, usize)> = None;
    for (i, v) in distinct.into_iter().zip(values) {
        if let Some((w, node)) = v? {
            if best.is_none_or(|(bw, _, _)| w < bw) {
                best = Some((w, node, i));
            }
        }
    }
    Ok(best)
}

/// The minimum cut over all trees of an uncontracted packing.
pub fn one_respect_all_trees(g: &Graph, packing: &TreePacking) -> Result<Cut> {
    let (_, v, i) = best_one_respect(g, packing, Execution::Sequential)?.ok_or_else(|| Error::InvalidArgument("empty packing".into()))?;
    let t = RootedTree::from_edges(g, &packing.trees()[i], 0)?;
    Ok(Cut::new(g, t.subtree(v))?)
}

/// Smallest (cut weight, label) over the components given by `labels`.
pub fn min_component_cut(g: &Graph, labels: &[NodeId]) -> Option<(u64, NodeId)> {
    let mut weight: HashMap<NodeId, u64> = HashMap::new();
    for v in 0..g.n() {
        weight.entry(labels[v]).or_insert(0);
    }
    for e in g.edges() {
        if labels[e.u] != labels[e.v] {
            *weight.get_mut(&labels[e.u]).expect("seeded") += e.w;
            *weight.get_mut(&labels[e.v]).expect("seeded") += e.w;
        }
    }
    weight.into_iter().map(|(l, w)| (w, l)).min()
}

/// The level loop with a known upper bound on λ.
pub fn approx_with_bound(g: &Graph, eps: &Rational, lambda_bound: u64, exec: Execution) -> Result<(Cut, RecursionTrace)> {
    if *eps <= Rational::from_integer(0) || *eps > Rational::from_integer(1) {
        return Err(Error::InvalidArgument(format!("ε must lie in (0, 1], got {eps}")));
    }
    let n = g.n();
    let ep = eps_prime(eps);
    let mut trace = RecursionTrace { eps: *eps, eps_prime: ep, lambda_bound, levels: Vec::new() };
    let mut labels: Vec<NodeId> = (0..n).collect();
    let mut best: Option<Cut> = None;
    let offer = |cut: Cut, best: &mut Option<Cut>| {
        if best.as_ref().is_none_or(|b| cut.weight() < b.weight()) {
            *best = Some(cut);
        }
    };
    for _ in 0..level_cap(n, &ep) {
        let (nodes, edges) = contracted_size(g, &labels);
        let internal: Vec<bool> = g.edges().iter().map(|e| labels[e.u] == labels[e.v]).collect();
        let k = tree_count_for(lambda_bound, edges, &ep)?;
        let mut packing = TreePacking::contracted(g, internal);
        packing.extend(g, k);

        let one = best_one_respect(g, &packing, exec)?;
        if let Some((_, v, i)) = one {
            let t = RootedTree::from_edges(g, &packing.trees()[i], 0)?;
            offer(Cut::new(g, t.subtree(v))?, &mut best);
        }
        let l_a = load_threshold(&packing, &ep);
        let next = g.component_labels(|e| below_threshold(&packing, e, &l_a));
        let components = (0..n).filter(|&v| next[v] == v).count();
        let mut record = LevelRecord {
            nodes,
            edges,
            trees: k,
            pack_val: packing.pack_val(),
            threshold: l_a,
            components,
            branch: Branch::Contract,
            best_one_respect: one,
            component_cut: None,
            tree_edges: packing.trees().to_vec(),
            labels: next.clone(),
        };
        if many_components(components, nodes, &ep) {
            record.branch = Branch::ManyComponents;
            let (w, label) = min_component_cut(g, &next).expect("at least two components");
            record.component_cut = Some((w, label));
            offer(Cut::new(g, (0..n).filter(|&v| next[v] == label))?, &mut best);
        } else if components == 1 {
            record.branch = Branch::Collapsed;
        }
        let stop = record.branch != Branch::Contract;
        trace.levels.push(record);
        if stop {
            let cut = best.ok_or_else(|| Error::invariant("no candidate cut"))?;
            return Ok((cut, trace));
        }
        labels = next;
    }
    Err(Error::invariant(format!("level cap {} exceeded", level_cap(n, &ep))))
}

/// (1+ε)-approximate minimum cut; λ is bounded by [`estimate_lambda`].
pub fn approx_min_cut(g: &Graph, eps: &Rational) -> Result<(Cut, RecursionTrace)> {
    let est = estimate_lambda(g)?;
    approx_with_bound(g, eps, est.bound, Execution::default())
}

/// ε for exact mode: 1/(U+1) makes (1+ε)λ < λ+1.
pub fn exact_eps(bound: u64) -> Rational {
    Rational::new(1, bound as i128 + 1)
}

pub fn exact_min_cut(g: &Graph) -> Result<(Cut, RecursionTrace)> {
    let est = estimate_lambda(g)?;
    approx_with_bound(g, &exact_eps(est.bound), est.bound, Execution::default())
}

/// p = 6(d+2)·ln n / (ε′²·U), clamped to 1.
pub fn sampling_probability(n: usize, eps: &Rational, lambda_bound: u64, d: u32) -> f64 {
    let es = to_f64(&sampling_eps_prime(eps));
    let p = 6.0 * (d as f64 + 2.0) * (n as f64).ln() / (es * es * lambda_bound as f64);
    p.min(1.0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampledRun {
    pub cut: Cut,
    pub trace: RecursionTrace,
    pub p: String,
    /// 0 when sampling was skipped.
    pub attempts: u32,
}

/// Karger-samples G when λ is large, solves on the sample with ε′ and returns
/// the chosen side evaluated in G.
pub fn sampled_approx_min_cut(g: &Graph, eps: &Rational, seed: u64, d: u32) -> Result<SampledRun> {
    let est = estimate_lambda(g)?;
    let p = sampling_probability(g.n(), eps, est.bound, d);
    if p >= 1.0 {
        let (cut, trace) = approx_with_bound(g, eps, est.bound, Execution::default())?;
        return Ok(SampledRun { cut, trace, p: "1".into(), attempts: 0 });
    }
    let (h, attempts) = karger_sample_connected(g, p, seed)?;
    let es = sampling_eps_prime(eps);
    let (cut_h, trace) = approx_min_cut(&h, &es)?;
    let cut = Cut::new(g, cut_h.side().iter().copied())?;
    Ok(SampledRun { cut, trace, p: format!("{p}"), attempts })
}
