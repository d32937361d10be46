//! Distributed components against their centralized counterparts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mincut_core::dist_mincut::{component_cut_values, dist_count_components, dist_extend_packing, dist_pack_val};
use mincut_core::graph::generators::generate;
use mincut_core::graph::oracle::{enumerate_min_cut, stoer_wagner};
use mincut_core::graph::cut_weight;
use mincut_core::mst::{dist_mst, fragment_decompose, lexicographic_mst, RootedTree};
use mincut_core::mst::fragments::fragment_decompose_reference;
use mincut_core::one_respect::reference::{fsets_reference, merging_reference};
use mincut_core::one_respect::{dist_side_bits, one_respect_reference, run_one_respect};
use mincut_core::packing::{greedy_pack, TreePacking};
use mincut_core::sim::Network;
use mincut_core::{EngineConfig, Execution, Graph, NodeId};

const SPECS: [&str; 8] = [
    "cycle:17",
    "path:12",
    "star:9",
    "complete:8",
    "planted:9,11,3,0.5",
    "regular:30,3",
    "weighted:25,0.2,6",
    "weighted:40,0.1,3",
];

fn graphs() -> Vec<(String, Graph)> {
    SPECS.iter().flat_map(|s| (0..3u64).map(move |seed| (format!("{s}#{seed}"), generate(&s.parse().unwrap(), seed).unwrap()))).collect()
}

fn random_keys(g: &Graph, rng: &mut ChaCha8Rng) -> Vec<i64> {
    (0..g.m()).map(|_| rng.random_range(0..6)).collect()
}

#[test]
fn distributed_mst_matches_kruskal() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (name, g) in graphs() {
        let keys = random_keys(&g, &mut rng);
        let (t, report) = dist_mst(&g, &keys, EngineConfig::default()).unwrap();
        let mut got = t.edge_ids(&g);
        let mut want = lexicographic_mst(&g, &keys);
        got.sort_unstable();
        want.sort_unstable();
        assert_eq!(got, want, "{name}");
        assert!(report.max_msgs_per_edge_per_round <= 1);
    }
}

#[test]
fn fragments_and_merging_nodes_match_reference() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for (name, g) in graphs() {
        let root = rng.random_range(0..g.n());
        let t = RootedTree::from_edges(&g, &lexicographic_mst(&g, &random_keys(&g, &mut rng)), root).unwrap();
        let mut net = Network::new(&g, EngineConfig::default()).unwrap();
        let views = t.local_views(&g);
        let (_, _, dec) = fragment_decompose(&mut net, &views).unwrap();
        assert_eq!(dec, fragment_decompose_reference(&t), "{name}");
        dec.check(&t).unwrap();

        let out = run_one_respect(&mut net, &views, &[]).unwrap();
        let fsets = fsets_reference(&t, &dec.fragment_of);
        for v in 0..g.n() {
            let mut got = out.knowledge[v].fset.clone();
            let mut want = fsets[v].clone();
            got.sort_unstable();
            want.sort_unstable();
            assert_eq!(got, want, "{name} node {v}");
        }
        let mut merging = out.merge.merging.clone();
        merging.sort_unstable();
        assert_eq!(merging, merging_reference(&t, &fsets), "{name}");
    }
}

#[test]
fn one_respect_with_contracted_edges() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (name, g) in graphs() {
        let t = RootedTree::from_edges(&g, &lexicographic_mst(&g, &random_keys(&g, &mut rng)), 0).unwrap();
        let contracted: Vec<bool> = (0..g.m()).map(|_| rng.random_bool(0.3)).collect();
        let mut net = Network::new(&g, EngineConfig::default()).unwrap();
        let out = run_one_respect(&mut net, &t.local_views(&g), &contracted).unwrap();
        assert_eq!(out.best, one_respect_reference(&g, &t, &contracted), "{name}");
        if let Some((w, v)) = out.best {
            let bits = dist_side_bits(&mut net, &out, v).unwrap();
            let side: Vec<NodeId> = (0..g.n()).filter(|&u| bits[u]).collect();
            let mut sub = t.subtree(v);
            sub.sort_unstable();
            assert_eq!(side, sub, "{name}");
            assert_eq!(cut_weight(&g, &side).unwrap(), w);
        }
    }
}

#[test]
fn components_match_union_find() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for (name, g) in graphs() {
        for keep_p in [0.0, 0.3, 0.7, 1.0] {
            let keep: Vec<bool> = (0..g.m()).map(|_| rng.random_bool(keep_p)).collect();
            let mut net = Network::new(&g, EngineConfig::default()).unwrap();
            let (count, labels) = dist_count_components(&mut net, &keep).unwrap();
            let want = g.component_labels(|e| keep[e]);
            assert_eq!(labels, want, "{name} p={keep_p}");
            assert_eq!(count, (0..g.n()).filter(|&v| want[v] == v).count());

            let values = component_cut_values(&mut net, &labels).unwrap();
            for v in 0..g.n() {
                let side: Vec<NodeId> = (0..g.n()).filter(|&u| labels[u] == labels[v]).collect();
                let expect = if side.len() == g.n() { 0 } else { cut_weight(&g, &side).unwrap() };
                assert_eq!(values[v], expect, "{name} p={keep_p} node {v}");
            }
        }
    }
}

#[test]
fn distributed_packing_matches_greedy() {
    for (name, g) in graphs().into_iter().step_by(3) {
        let reference = greedy_pack(&g, 25);
        let mut packing = TreePacking::new(&g);
        let mut net = Network::new(&g, EngineConfig::default()).unwrap();
        dist_extend_packing(&mut net, &mut packing, 25).unwrap();
        assert_eq!(packing, reference, "{name}");
        assert_eq!(dist_pack_val(&mut net, &packing).unwrap(), reference.pack_val());
        assert!(packing.replay(&g));
    }
}

#[test]
fn stoer_wagner_matches_enumeration() {
    for (name, g) in graphs().into_iter().filter(|(_, g)| g.n() <= 20) {
        assert_eq!(stoer_wagner(&g).weight(), enumerate_min_cut(&g).unwrap().weight(), "{name}");
    }
}

#[test]
fn execution_modes_agree() {
    let g = generate(&"regular:300,3".parse().unwrap(), 1).unwrap();
    let t = RootedTree::from_edges(&g, &lexicographic_mst(&g, &vec![0; g.m()]), 0).unwrap();
    let run = |execution| {
        let mut net = Network::new(&g, EngineConfig { execution, ..EngineConfig::default() }).unwrap();
        let out = run_one_respect(&mut net, &t.local_views(&g), &[]).unwrap();
        (out.best, out.profile, net.take_report())
    };
    assert_eq!(run(Execution::Sequential), run(Execution::Parallel));
}
