//! Minimum 1-respecting cut of a spanning tree in the CONGEST model.
//!
//! For a tree T rooted at node 0 the cut C_v = v↓ has weight δ↓(v) − 2ρ↓(v),
//! where δ↓ sums weighted degrees over v↓ and ρ↓ sums the weight of edges whose
//! endpoints have their LCA in v↓. Both are assembled from a fragment
//! decomposition of T: sums inside a fragment travel up the fragment, sums
//! over whole fragments are shared globally through the BFS tree.

pub mod ancestors;
pub mod lca;
pub mod reference;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use ancestors::AncestorKnowledge;
pub use lca::MergeTree;
pub use reference::{cut_values, edge_lcas, one_respect_reference};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::mst::fragments::{fragment_decompose, FragNode, FragmentDecomposition, FragmentTree};
use crate::mst::RootedTree;
use crate::sim::library::{Convergecast, Exchange, ItemOp, Pair, PairOp, PipelinedConvergecast};
use crate::sim::{agreed, EngineConfig, LocalTree, Network, RoundReport};
use ancestors::{fset_from_children, AncestorStream};
use lca::{LcaExchange, RhoCounters};

/// Per-node sums behind every 1-respecting cut of one tree.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutProfile {
    pub delta_down: Vec<i64>,
    pub rho_down: Vec<i64>,
    pub cut: Vec<i64>,
}

#[derive(Debug, Clone)]
pub struct OneRespectOutcome {
    /// Minimum (w(v↓), v) over eligible v, as agreed by all nodes.
    pub best: Option<(u64, NodeId)>,
    pub profile: CutProfile,
    pub frags: Vec<FragNode>,
    pub ftree: Arc<FragmentTree>,
    pub decomposition: FragmentDecomposition,
    pub knowledge: Vec<AncestorKnowledge>,
    pub merge: MergeTree,
    /// LCA of every edge's endpoints, indexed by edge id.
    pub lca: Vec<NodeId>,
}

const NONE: Pair = (i64::MAX, i64::MAX);

fn fragment_sums(net: &mut Network<'_>, frags: &[FragNode], local: &[i64], phase: &str) -> Result<Vec<BTreeMap<NodeId, i64>>> {
    let n = net.n();
    let forest: Vec<LocalTree> = frags.iter().map(|f| f.local.clone()).collect();
    let values: Vec<Pair> = local.iter().map(|&x| (x, 0)).collect();
    let intra = net.run(&Convergecast { forest: &forest, values: &values, op: PairOp::Sum }, &format!("{phase}.intra"))?;
    let items: Vec<Vec<Pair>> =
        (0..n).map(|v| if frags[v].is_root { vec![(frags[v].frag as i64, intra[v].0)] } else { Vec::new() }).collect();
    let lists = net.gather_broadcast(&items, ItemOp::First, &format!("{phase}.fragments"))?;
    Ok((0..n)
        .map(|v| {
            let mut m: BTreeMap<NodeId, i64> = lists[v].iter().map(|&(f, x)| (f as NodeId, x)).collect();
            m.insert(usize::MAX, intra[v].0);
            m
        })
        .collect())
}

/// x↓(v) from the intra-fragment subtree sum (stored under `usize::MAX`) and the
/// whole-fragment sums of F(v) minus v's own fragment.
fn down_sum(sums: &BTreeMap<NodeId, i64>, know: &AncestorKnowledge) -> i64 {
    let own = know.frag();
    sums[&usize::MAX] + know.fset.iter().filter(|&&f| f != own).map(|f| sums.get(f).copied().unwrap_or(0)).sum::<i64>()
}

/// Runs the 1-respecting cut phases for the tree given by per-node views.
/// `contracted[e]` marks edges inside a contracted component; nodes whose tree
/// parent edge is contracted (and the root) are not candidates.
pub fn run_one_respect(net: &mut Network<'_>, tree: &[LocalTree], contracted: &[bool]) -> Result<OneRespectOutcome> {
    let g: &Graph = net.graph();
    let n = g.n();
    let (frags, ftree, decomposition) = fragment_decompose(net, tree)?;
    let forest: Vec<LocalTree> = frags.iter().map(|f| f.local.clone()).collect();

    let ids: Vec<Vec<Option<Pair>>> = (0..n).map(|v| vec![Some((frags[v].frag as i64, 0)); g.adj(v).len()]).collect();
    let nbr_frag: Vec<Vec<NodeId>> = net
        .run(&Exchange { values: &ids }, "fragments.exchange")?
        .into_iter()
        .map(|ports| ports.into_iter().map(|p| p.map_or(usize::MAX, |(f, _)| f as NodeId)).collect())
        .collect();

    // F(v) and ancestor knowledge.
    let closed: Vec<Vec<Pair>> = frags.iter().map(|f| f.closed_children.iter().map(|&(_, c)| (c as i64, 0)).collect()).collect();
    let below = net.run(&PipelinedConvergecast { forest: &forest, items: &closed, op: ItemOp::First }, "ancestors.children")?;
    let fsets: Vec<Vec<NodeId>> = (0..n)
        .map(|v| {
            let children: Vec<NodeId> = below[v].iter().map(|&(c, _)| c as NodeId).collect();
            fset_from_children(&frags[v], &children, &ftree)
        })
        .collect();
    let knowledge = net.run(&AncestorStream { tree, frags: &frags, fsets: &fsets, ftree: &ftree }, "ancestors.stream")?;

    // δ↓.
    let degrees: Vec<i64> = (0..n).map(|v| g.weighted_degree(v) as i64).collect();
    let dsums = fragment_sums(net, &frags, &degrees, "delta")?;
    let delta_down: Vec<i64> = (0..n).map(|v| down_sum(&dsums[v], &knowledge[v])).collect();

    // merging nodes and T′_F.
    let flags: Vec<Vec<Option<Pair>>> = (0..n)
        .map(|v| {
            let mut out = vec![None; g.adj(v).len()];
            if let Some(p) = tree[v].parent {
                out[p] = Some((i64::from(!fsets[v].is_empty()), 0));
            }
            out
        })
        .collect();
    let got = net.run(&Exchange { values: &flags }, "merging.flags")?;
    let merging_items: Vec<Vec<Pair>> = (0..n)
        .map(|v| {
            let count = tree[v].children.iter().filter(|&&c| got[v][c].is_some_and(|(b, _)| b == 1)).count();
            if count >= 2 {
                vec![(v as i64, 0)]
            } else {
                Vec::new()
            }
        })
        .collect();
    let merging_lists = net.gather_broadcast(&merging_items, ItemOp::First, "merging.nodes")?;
    let merging: Vec<NodeId> = agreed(&merging_lists)?.into_iter().map(|(v, _)| v as NodeId).collect();
    let mut members: Vec<NodeId> = ftree.ids().iter().map(|&f| ftree.root_node(f)).chain(merging.iter().copied()).collect();
    members.sort_unstable();
    members.dedup();
    let mut link_items: Vec<Vec<Pair>> = vec![Vec::new(); n];
    for &v in &members {
        let up = knowledge[v].ancestors[1..].iter().map(|&(a, _)| a).find(|a| members.binary_search(a).is_ok());
        if up.is_none() && tree[v].parent.is_some() {
            return Err(Error::invariant(format!("no T'_F parent visible from node {v}")));
        }
        link_items[v].push((v as i64, up.map_or(-1, |u| u as i64)));
    }
    let links = agreed(&net.gather_broadcast(&link_items, ItemOp::First, "merging.tree")?)?;
    let merge = MergeTree {
        merging,
        parent: links.iter().map(|&(v, p)| (v as NodeId, (p >= 0).then_some(p as NodeId))).collect(),
    };

    // LCAs, ρ, ρ↓.
    let lca_nodes =
        net.run(&LcaExchange { tree, frags: &frags, nbr_frag: &nbr_frag, know: &knowledge, ftree: &ftree, merge: &merge }, "lca.exchange")?;
    let mut lca = vec![usize::MAX; g.m()];
    for v in 0..n {
        for (port, z) in lca_nodes[v].lca.iter().enumerate() {
            let e = g.adj(v)[port].edge;
            let z = z.ok_or_else(|| Error::invariant(format!("node {v} has no LCA on port {port}")))?;
            if lca[e] != usize::MAX && lca[e] != z {
                return Err(Error::invariant(format!("endpoints of edge {e} disagree on its LCA")));
            }
            lca[e] = z;
        }
    }
    let type_i: Vec<Vec<Pair>> = lca_nodes.iter().map(|l| l.tokens_i.iter().map(|&(z, w)| (z as i64, w)).collect()).collect();
    let rho_i = net.gather_broadcast(&type_i, ItemOp::Sum, "rho.merging")?;

    let chains: Vec<Vec<NodeId>> = knowledge.iter().map(|k| k.in_fragment().skip(1).collect()).collect();
    let mut initial: Vec<Vec<i64>> = chains.iter().map(|c| vec![0; c.len() + 1]).collect();
    for v in 0..n {
        for &(z, w) in &lca_nodes[v].tokens_ii {
            let slot = if z == v { Some(0) } else { chains[v].iter().position(|&a| a == z).map(|j| j + 1) };
            let slot = slot.ok_or_else(|| Error::invariant(format!("token at {v} with LCA {z} outside its fragment")))?;
            initial[v][slot] += w;
        }
    }
    let rho_ii = net.run(&RhoCounters { frags: &frags, chains: &chains, initial: &initial }, "rho.counters")?;
    let rho: Vec<i64> = (0..n)
        .map(|v| rho_ii[v] + rho_i[v].iter().find(|&&(z, _)| z == v as i64).map_or(0, |&(_, w)| w))
        .collect();
    let rsums = fragment_sums(net, &frags, &rho, "rho")?;
    let rho_down: Vec<i64> = (0..n).map(|v| down_sum(&rsums[v], &knowledge[v])).collect();

    let cut: Vec<i64> = (0..n).map(|v| delta_down[v] - 2 * rho_down[v]).collect();
    if let Some(r) = (0..n).find(|&v| tree[v].is_root()).filter(|&r| cut[r] != 0) {
        return Err(Error::invariant(format!("root sums disagree: δ↓ = {}, ρ↓ = {}", delta_down[r], rho_down[r])));
    }
    let candidates: Vec<Pair> = (0..n)
        .map(|v| match tree[v].parent {
            Some(p) if !contracted.get(g.adj(v)[p].edge).copied().unwrap_or(false) => (cut[v], v as i64),
            _ => NONE,
        })
        .collect();
    let best = agreed(&net.all_reduce(&candidates, PairOp::Min, "cut.min")?)?;
    let best = (best != NONE).then_some((best.0 as u64, best.1 as NodeId));

    Ok(OneRespectOutcome {
        best,
        profile: CutProfile { delta_down, rho_down, cut },
        frags,
        ftree,
        decomposition,
        knowledge,
        merge,
        lca,
    })
}

/// Every node decides whether it lies in v*↓: either v* is one of its known
/// ancestors or its fragment belongs to F(v*), which is broadcast.
pub fn dist_side_bits(net: &mut Network<'_>, outcome: &OneRespectOutcome, v_star: NodeId) -> Result<Vec<bool>> {
    let n = net.n();
    let mut items: Vec<Vec<Pair>> = vec![Vec::new(); n];
    items[v_star] = outcome.knowledge[v_star].fset.iter().map(|&f| (f as i64, 0)).collect();
    let lists = net.gather_broadcast(&items, ItemOp::First, "side.fset")?;
    Ok((0..n)
        .map(|u| {
            let k = &outcome.knowledge[u];
            k.contains(v_star) || lists[u].iter().any(|&(f, _)| f as NodeId == k.frag())
        })
        .collect())
}

/// Stand-alone run on a fixed tree: builds the network, runs all phases and
/// returns the outcome with the round report (BFS construction included).
pub fn one_respect_min_cut(g: &Graph, t: &RootedTree, config: EngineConfig) -> Result<(OneRespectOutcome, RoundReport)> {
    let mut net = Network::new(g, config)?;
    let views = t.local_views(g);
    let outcome = run_one_respect(&mut net, &views, &[])?;
    Ok((outcome, net.take_report()))
}
