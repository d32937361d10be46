//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero
//! if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mincut_core::dist_mincut::{dist_approx_min_cut, dist_estimate_value, dist_exact_min_cut, DistRun};
use mincut_core::graph::generators::{complete, generate, GeneratorSpec};
use mincut_core::graph::oracle::{brute_force_mincut, min_partition_value};
use mincut_core::graph::sampling::sample_weights;
use mincut_core::graph::{cut_weight, Edge};
use mincut_core::mst::{lexicographic_mst, RootedTree};
use mincut_core::one_respect::one_respect_min_cut;
use mincut_core::packing::{greedy_pack, ideal_loads, tree_count_for};
use mincut_core::recursion::RecursionTrace;
use mincut_core::seq_mincut::{approx_min_cut, exact_min_cut};
use mincut_core::sim::{Incoming, Message, NodeCtx, NodeProgram};
use mincut_core::{Cut, EngineConfig, Graph, Rational, RoundReport, SimError};

const ONE_RESPECT_PAIRS: usize = 500;
const EXACT_GRAPHS: usize = 200;
const EXACT_MAX_LAMBDA: u64 = 6;
const APPROX_GRAPHS: usize = 300;
const PARTITION_GRAPHS: usize = 50;
const VALUE_GRAPHS: usize = 100;
const EQUIVALENCE_RUNS: usize = 100;
const SAMPLING_SEEDS: u64 = 500;
const SAMPLING_N: usize = 12;
const SAMPLING_D: f64 = 2.0;
const SAMPLING_EPS: f64 = 0.5;
const SAMPLING_MAX_FRACTION: f64 = 0.05;
const DIAGNOSTIC_WEIGHT: u64 = 40;
const ROUND_SIZES: [usize; 3] = [64, 256, 1024];
const ROUND_MAX_EXPONENT: f64 = 0.75;
const BUDGET: u32 = 1;

fn r(a: i128, b: i128) -> Rational {
    Rational::new(a, b)
}

fn int(x: u64) -> Rational {
    Rational::from_integer(x as i128)
}

fn engine() -> EngineConfig {
    EngineConfig { congestion: BUDGET, ..EngineConfig::default() }
}

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: String) -> Self {
        Verdict { pass, detail }
    }
}

/// Everything later criteria reuse from the exact and approximate sweeps.
#[derive(Default)]
struct Ledger {
    traces: Vec<(usize, RecursionTrace, &'static str)>,
    reports: Vec<(RoundReport, &'static str)>,
    failures: Vec<String>,
    equivalence: Vec<(String, bool)>,
}

impl Ledger {
    fn dist(&mut self, g: &Graph, run: &DistRun) {
        self.traces.push((g.n(), run.trace.clone(), "dist"));
        self.reports.push((run.report.clone(), "dist"));
    }
}

// ---------------------------------------------------------------------------
// Corpora

fn pick<T: Copy>(rng: &mut ChaCha8Rng, xs: &[T]) -> T {
    xs[rng.random_range(0..xs.len())]
}

/// Small oracle-friendly graph, λ mostly ≤ 4.
fn small_spec(rng: &mut ChaCha8Rng, slot: usize) -> GeneratorSpec {
    match slot % 8 {
        0 => GeneratorSpec::Cycle(rng.random_range(4..=12)),
        1 => GeneratorSpec::PlantedCut {
            n1: rng.random_range(3..=6),
            n2: rng.random_range(3..=6),
            k: rng.random_range(1..=3),
            p: pick(rng, &[0.7, 0.8, 0.9, 1.0]),
        },
        2 => GeneratorSpec::RandomRegular { n: pick(rng, &[6, 8, 10, 12]), d: 3 },
        3 => GeneratorSpec::WeightedRandom { n: rng.random_range(5..=10), p: pick(rng, &[0.4, 0.5, 0.6]), w_max: 2 },
        4 => GeneratorSpec::Path(rng.random_range(4..=10)),
        5 => GeneratorSpec::PlantedCut {
            n1: rng.random_range(4..=7),
            n2: rng.random_range(4..=7),
            k: rng.random_range(2..=4),
            p: pick(rng, &[0.8, 1.0]),
        },
        6 => GeneratorSpec::Star(rng.random_range(4..=10)),
        _ => GeneratorSpec::WeightedRandom { n: rng.random_range(6..=12), p: pick(rng, &[0.3, 0.4]), w_max: 3 },
    }
}

/// `count` graphs with oracle λ ≤ `max_lambda`, drawn reproducibly from `seed`.
fn corpus(count: usize, seed: u64, max_lambda: u64) -> Vec<(String, Graph, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut slot = 0;
    while out.len() < count {
        let spec = small_spec(&mut rng, slot);
        slot += 1;
        let Ok(g) = generate(&spec, rng.random()) else { continue };
        let lambda = brute_force_mincut(&g).expect("oracle-sized").weight();
        if lambda <= max_lambda {
            out.push((spec.to_string(), g, lambda));
        }
    }
    out
}

/// Graph family for the 1-respecting check, n ∈ [4, 64].
fn medium_spec(rng: &mut ChaCha8Rng, slot: usize) -> GeneratorSpec {
    let n = rng.random_range(4..=64);
    match slot % 7 {
        0 => GeneratorSpec::Cycle(n),
        1 => GeneratorSpec::Path(n),
        2 => GeneratorSpec::Star(n),
        3 => GeneratorSpec::Complete(n.min(24)),
        4 => GeneratorSpec::PlantedCut { n1: n.div_ceil(2).max(2), n2: (n / 2).max(2), k: rng.random_range(1..=4), p: pick(rng, &[0.3, 0.6, 1.0]) },
        5 => GeneratorSpec::RandomRegular { n: n + n % 2, d: pick(rng, &[3, 4]) },
        _ => GeneratorSpec::WeightedRandom { n, p: pick(rng, &[0.1, 0.3, 0.6]), w_max: 5 },
    }
}

fn random_tree(g: &Graph, rng: &mut ChaCha8Rng) -> RootedTree {
    let keys: Vec<i64> = (0..g.m()).map(|_| rng.random_range(0..1000)).collect();
    let root = rng.random_range(0..g.n());
    RootedTree::from_edges(g, &lexicographic_mst(g, &keys), root).expect("spanning tree")
}

/// Connected graphs for the partition and load criteria (n ≤ 8).
fn tiny_corpus() -> Vec<(String, Graph)> {
    let mut out = Vec::new();
    for n in [4usize, 5] {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let stride = if n == 4 { 1 } else { 13 };
        for mask in (1u32..1 << pairs.len()).step_by(stride) {
            let edges: Vec<Edge> = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &(u, v))| Edge::new(u, v, 1)).collect();
            if let Ok(g) = Graph::new(n, edges) {
                out.push((format!("k{n}-subset:{mask}"), g));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    for i in 0..20 {
        let spec = GeneratorSpec::WeightedRandom { n: 6 + i % 3, p: pick(&mut rng, &[0.4, 0.6]), w_max: 4 };
        if let Ok(g) = generate(&spec, i as u64) {
            out.push((format!("{spec}#{i}"), g));
        }
    }
    out
}

fn load_corpus() -> Vec<(String, Graph)> {
    let mut out: Vec<(String, Graph)> = Vec::new();
    for n in 4..=8 {
        out.push((format!("cycle:{n}"), generate(&GeneratorSpec::Cycle(n), 0).unwrap()));
    }
    for n in 4..=6 {
        out.push((format!("complete:{n}"), complete(n).unwrap()));
    }
    for (i, spec) in ["planted:4,4,1,1.0", "planted:3,3,1,1.0", "planted:4,4,2,0.8", "weighted:6,0.6,3", "weighted:7,0.5,2", "weighted:8,0.4,2", "regular:8,3"]
        .iter()
        .enumerate()
    {
        out.push((spec.to_string(), generate(&spec.parse().unwrap(), i as u64).unwrap()));
    }
    out
}

// ---------------------------------------------------------------------------
// Criteria

fn criterion_1() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut pairs, mut checked, mut slot) = (0usize, 0usize, 0usize);
    let mut bad = Vec::new();
    while pairs < ONE_RESPECT_PAIRS {
        let spec = medium_spec(&mut rng, slot);
        slot += 1;
        let Ok(g) = generate(&spec, rng.random()) else { continue };
        let t = random_tree(&g, &mut rng);
        pairs += 1;
        let (outcome, report) = match one_respect_min_cut(&g, &t, engine()) {
            Ok(x) => x,
            Err(e) => {
                bad.push(format!("{spec}: {e}"));
                continue;
            }
        };
        if report.max_msgs_per_edge_per_round > BUDGET {
            bad.push(format!("{spec}: budget"));
        }
        for v in 0..g.n() {
            let want = if v == t.root() { 0 } else { cut_weight(&g, &t.subtree(v)).unwrap() };
            checked += 1;
            if outcome.profile.cut[v] != want as i64 {
                bad.push(format!("{spec} node {v}: {} != {want}", outcome.profile.cut[v]));
            }
        }
    }
    Verdict::new(bad.is_empty(), format!("{pairs} (graph, tree) pairs, {checked} node values, {} mismatches {:?}", bad.len(), bad.first()))
}

fn criterion_2(ledger: &mut Ledger) -> Verdict {
    let mut graphs = corpus(EXACT_GRAPHS - 4, 2, EXACT_MAX_LAMBDA);
    for n in 4..=7 {
        graphs.push((format!("complete:{n}"), complete(n).unwrap(), n as u64 - 1));
    }
    let mut bad = Vec::new();
    let mut max_lambda = 0;
    for (name, g, lambda) in &graphs {
        max_lambda = max_lambda.max(*lambda);
        match exact_min_cut(g) {
            Ok((cut, trace)) => {
                if cut.weight() != *lambda || !cut.verify(g) {
                    bad.push(format!("seq {name}: {} vs {lambda}", cut.weight()));
                }
                ledger.traces.push((g.n(), trace, "seq-exact"));
            }
            Err(e) => bad.push(format!("seq {name}: {e}")),
        }
        match dist_exact_min_cut(g, engine()) {
            Ok(run) => {
                if run.cut.weight() != *lambda || !run.cut.verify(g) {
                    bad.push(format!("dist {name}: {} vs {lambda}", run.cut.weight()));
                }
                ledger.dist(g, &run);
            }
            Err(e) => {
                ledger.failures.push(format!("dist-exact {name}: {e}"));
                bad.push(format!("dist {name}: {e}"));
            }
        }
    }
    Verdict::new(bad.is_empty(), format!("{} graphs (λ ≤ {max_lambda}), {} mismatches {:?}", graphs.len(), bad.len(), bad.first()))
}

fn criterion_3(ledger: &mut Ledger) -> Verdict {
    let graphs = corpus(APPROX_GRAPHS, 3, EXACT_MAX_LAMBDA);
    let mut bad = Vec::new();
    let mut worst = 1.0f64;
    let mut runs = 0;
    for eps in [r(1, 1), r(1, 2), r(1, 4)] {
        let bound = Rational::from_integer(1) + eps;
        for (name, g, lambda) in &graphs {
            let seq = approx_min_cut(g, &eps);
            let dist = dist_approx_min_cut(g, &eps, engine());
            runs += 2;
            let mut check = |tag: &str, cut: &Cut| {
                let ratio = int(cut.weight()) / int(*lambda);
                worst = worst.max(cut.weight() as f64 / *lambda as f64);
                if ratio > bound || !cut.verify(g) {
                    bad.push(format!("{tag} {name} ε={eps}: {} vs λ={lambda}", cut.weight()));
                }
            };
            match (&seq, &dist) {
                (Ok((sc, st)), Ok(run)) => {
                    check("seq", sc);
                    check("dist", &run.cut);
                    let same = run.trace == *st
                        && run.cut == *sc
                        && run.trace.levels.iter().zip(&st.levels).all(|(a, b)| a.tree_edges == b.tree_edges && a.labels == b.labels);
                    ledger.equivalence.push((format!("{name} ε={eps}"), same));
                    ledger.traces.push((g.n(), st.clone(), "seq-approx"));
                    ledger.dist(g, run);
                }
                _ => {
                    for e in [seq.as_ref().err(), dist.as_ref().err()].into_iter().flatten() {
                        ledger.failures.push(format!("approx {name} ε={eps}: {e}"));
                        bad.push(format!("{name} ε={eps}: {e}"));
                    }
                }
            }
        }
    }
    Verdict::new(bad.is_empty(), format!("{} graphs × 3 ε, {runs} runs, max ratio {worst:.4}, {} violations {:?}", graphs.len(), bad.len(), bad.first()))
}

fn criterion_4() -> Verdict {
    let graphs = tiny_corpus();
    let mut bad = Vec::new();
    for (name, g) in &graphs {
        let lambda = int(brute_force_mincut(g).unwrap().weight());
        let (phi, _) = min_partition_value(g).unwrap();
        if !(lambda / Rational::from_integer(2) < phi && phi <= lambda) {
            bad.push(format!("{name}: Φ = {phi}, λ = {lambda}"));
        }
    }
    let pass = bad.is_empty() && graphs.len() >= PARTITION_GRAPHS;
    Verdict::new(pass, format!("{} graphs (n ≤ 8), {} violations {:?}", graphs.len(), bad.len(), bad.first()))
}

fn criterion_5() -> Verdict {
    let mut bad = Vec::new();
    let mut worst = (Rational::from_integer(0), String::new());
    let mut edges = 0;
    let graphs = load_corpus();
    for (name, g) in &graphs {
        let lambda = brute_force_mincut(g).unwrap().weight();
        let ideal = ideal_loads(g).unwrap();
        for eps in [r(1, 1), r(1, 2)] {
            let k = tree_count_for(lambda, g.total_weight(), &eps).unwrap();
            let p = greedy_pack(g, k);
            let tol = eps / int(lambda);
            for e in 0..g.m() {
                edges += 1;
                let (lo, hi) = p.relative_loads(e);
                let dev = (lo - ideal[e]).abs().max((hi - ideal[e]).abs());
                if dev / tol > worst.0 {
                    worst = (dev / tol, format!("{name} ε={eps} edge {e}: ℓ* = {}, ℓ ∈ [{lo}, {hi}]", ideal[e]));
                }
                if dev > tol {
                    bad.push(format!("{name} ε={eps} edge {e}"));
                }
            }
        }
    }
    Verdict::new(
        bad.is_empty(),
        format!(
            "{} graphs × 2 ε, {edges} edge checks, {} over ε/λ; worst deviation {:.3}·ε/λ at {}",
            graphs.len(),
            bad.len(),
            mincut_core::rational::to_f64(&worst.0),
            worst.1
        ),
    )
}

fn criterion_6(ledger: &mut Ledger) -> Verdict {
    let mut bad = Vec::new();
    let mut sandwich = 0;
    for (name, g) in load_corpus().iter().chain(&tiny_corpus()) {
        let lambda = brute_force_mincut(g).unwrap().weight();
        for eps in [r(1, 1), r(1, 2)] {
            let k = tree_count_for(lambda, g.total_weight(), &eps).unwrap();
            let pv = greedy_pack(g, k).pack_val();
            sandwich += 1;
            if int(lambda) > (Rational::from_integer(2) + eps) * pv {
                bad.push(format!("{name} ε={eps}: pack_val {pv}, λ {lambda}"));
            }
        }
    }
    let graphs = corpus(VALUE_GRAPHS, 6, 4);
    let mut worst = 1.0f64;
    for (name, g, lambda) in &graphs {
        for eps in [r(1, 1), r(1, 2)] {
            match dist_estimate_value(g, &eps, engine()) {
                Ok(est) => {
                    let hi = (Rational::from_integer(1) + eps / Rational::from_integer(2)) * int(*lambda);
                    worst = worst.max(mincut_core::rational::to_f64(&(est.value / int(*lambda))));
                    if est.value < int(*lambda) || est.value > hi {
                        bad.push(format!("{name} ε={eps}: value {} outside [{lambda}, {hi}]", est.value));
                    }
                    if int(*lambda) > (Rational::from_integer(2) + eps) * est.pack_val {
                        bad.push(format!("{name} ε={eps}: dist pack_val {}", est.pack_val));
                    }
                    ledger.reports.push((est.report, "dist-value"));
                }
                Err(e) => {
                    ledger.failures.push(format!("dist-value {name}: {e}"));
                    bad.push(format!("{name}: {e}"));
                }
            }
        }
    }
    Verdict::new(
        bad.is_empty(),
        format!("{sandwich} packings checked for λ ≤ (2+ε)·pack_val; {} graphs × 2 ε estimated, max value/λ {worst:.4}; {} violations {:?}", graphs.len(), bad.len(), bad.first()),
    )
}

fn criterion_7(ledger: &Ledger) -> Verdict {
    let mut bad = Vec::new();
    let mut levels = 0;
    for (n, trace, tag) in &ledger.traces {
        levels += trace.levels.len();
        if let Err(e) = trace.check_geometry(*n) {
            bad.push(format!("{tag} n={n}: {e}"));
        }
    }
    Verdict::new(!ledger.traces.is_empty() && bad.is_empty(), format!("{} traces, {levels} levels, {} violations {:?}", ledger.traces.len(), bad.len(), bad.first()))
}

/// Sends two messages over one edge in the first round.
struct Burst;

impl NodeProgram for Burst {
    type State = ();
    type Output = ();

    fn init(&self, ctx: &mut NodeCtx<'_>) {
        if ctx.id() == 0 {
            ctx.send(0, Message::new(0, 0, 0));
            ctx.send(0, Message::new(0, 1, 0));
        }
    }

    fn on_round(&self, _: &mut (), ctx: &mut NodeCtx<'_>, _: &[Incoming]) {
        ctx.halt();
    }

    fn output(&self, _: ()) {}
}

fn criterion_8(ledger: &Ledger) -> Verdict {
    let g = complete(4).unwrap();
    let e = mincut_core::sim::Engine::new(&g, engine()).unwrap();
    let enforced = matches!(e.run(&Burst, "burst"), Err(SimError::BudgetViolation { count: 2, budget: 1, .. }));
    let budget_errors = ledger.failures.iter().filter(|f| f.contains("budget")).count();
    let over = ledger.reports.iter().filter(|(r, _)| r.max_msgs_per_edge_per_round > BUDGET).count();
    let max = ledger.reports.iter().map(|(r, _)| r.max_msgs_per_edge_per_round).max().unwrap_or(0);
    let pass = enforced && budget_errors == 0 && over == 0 && !ledger.reports.is_empty();
    Verdict::new(
        pass,
        format!("{} distributed runs, max msgs/edge/round {max} (budget {BUDGET}), violations {}, engine rejects a 2-message burst: {enforced}", ledger.reports.len(), over + budget_errors),
    )
}

/// Fraction of seeds where some cut of the sample leaves (1±ε′)·p·w(C).
fn deviating_fraction(g: &Graph, p: f64) -> f64 {
    let n = g.n();
    let mut bad = 0;
    for seed in 0..SAMPLING_SEEDS {
        let w = sample_weights(g, p, seed).unwrap();
        let deviates = (1u32..1 << (n - 1)).any(|mask| {
            let (mut full, mut kept) = (0u64, 0u64);
            for (e, edge) in g.edges().iter().enumerate() {
                if (mask >> edge.u & 1) != (mask >> edge.v & 1) {
                    full += edge.w;
                    kept += w[e];
                }
            }
            let expect = p * full as f64;
            (kept as f64 - expect).abs() > SAMPLING_EPS * expect
        });
        bad += deviates as u32;
    }
    bad as f64 / SAMPLING_SEEDS as f64
}

fn karger_p(n: usize, lambda: u64) -> f64 {
    (6.0 * (SAMPLING_D + 2.0) * (n as f64).ln() / (SAMPLING_EPS * SAMPLING_EPS * lambda as f64)).min(1.0)
}

fn criterion_9() -> Verdict {
    let k12 = complete(SAMPLING_N).unwrap();
    let p = karger_p(SAMPLING_N, SAMPLING_N as u64 - 1);
    let frac = deviating_fraction(&k12, p);
    // p clamps to 1 above; a heavier K_12 gives an unclamped p for information only
    let heavy_edges = k12.edges().iter().map(|e| Edge::new(e.u, e.v, DIAGNOSTIC_WEIGHT)).collect();
    let heavy = Graph::new(SAMPLING_N, heavy_edges).unwrap();
    let hp = karger_p(SAMPLING_N, (SAMPLING_N as u64 - 1) * DIAGNOSTIC_WEIGHT);
    let hfrac = deviating_fraction(&heavy, hp);
    Verdict::new(
        frac <= SAMPLING_MAX_FRACTION,
        format!(
            "K_{SAMPLING_N}, {SAMPLING_SEEDS} seeds, p = {p:.3}: deviating fraction {frac:.3} (limit {SAMPLING_MAX_FRACTION}); diagnostic weight-{DIAGNOSTIC_WEIGHT} K_{SAMPLING_N} at p = {hp:.3}: {hfrac:.3}"
        ),
    )
}

fn criterion_10(ledger: &Ledger) -> Verdict {
    let differ: Vec<&String> = ledger.equivalence.iter().filter(|(_, same)| !same).map(|(name, _)| name).collect();
    let pass = ledger.equivalence.len() >= EQUIVALENCE_RUNS && differ.is_empty();
    Verdict::new(pass, format!("{} seeded runs compared (trees, thresholds, components, labels, cut), {} differ {:?}", ledger.equivalence.len(), differ.len(), differ.first()))
}

fn criterion_11() -> Verdict {
    let mut lines = Vec::new();
    let mut bad = Vec::new();
    let mut slopes = Vec::new();
    for d in [3usize, 4] {
        let mut points = Vec::new();
        for &n in &ROUND_SIZES {
            let g = generate(&GeneratorSpec::RandomRegular { n, d }, 11).unwrap();
            let t = RootedTree::from_edges(&g, &lexicographic_mst(&g, &vec![0; g.m()]), 0).unwrap();
            match one_respect_min_cut(&g, &t, engine()) {
                Ok((outcome, report)) => {
                    let want = mincut_core::one_respect::one_respect_reference(&g, &t, &[]).map(|(w, _)| w);
                    if outcome.best.map(|b| b.0) != want {
                        bad.push(format!("regular:{n},{d}: wrong c*"));
                    }
                    let rounds = report.rounds - report.rounds_with_prefix("bfs");
                    points.push((n as f64, rounds as f64));
                }
                Err(e) => bad.push(format!("regular:{n},{d}: {e}")),
            }
        }
        if points.windows(2).any(|w| w[1].1 < w[0].1) {
            bad.push(format!("d={d}: rounds not monotone {points:?}"));
        }
        let slope = fit(&points);
        if slope > ROUND_MAX_EXPONENT {
            bad.push(format!("d={d}: exponent {slope:.3}"));
        }
        slopes.push(slope);
        lines.push(format!("d={d}: rounds {:?} exponent {slope:.3}", points.iter().map(|p| p.1 as u64).collect::<Vec<_>>()));
    }
    Verdict::new(bad.is_empty() && slopes.len() == 2, format!("{} (limit {ROUND_MAX_EXPONENT}); {:?}", lines.join("; "), bad.first()))
}

fn fit(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        f64::INFINITY
    } else {
        sxy / sxx
    }
}

fn main() -> ExitCode {
    let filter: Option<Vec<usize>> = std::env::var("ACCEPTANCE_ONLY").ok().map(|s| s.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let wanted = |i: usize| filter.as_ref().is_none_or(|f| f.contains(&i));
    let mut ledger = Ledger::default();
    let mut failed = 0;
    let mut report = |i: usize, run: &mut dyn FnMut(&mut Ledger) -> Verdict, ledger: &mut Ledger| {
        if !wanted(i) {
            return;
        }
        let start = Instant::now();
        let v = run(ledger);
        let tag = if v.pass { "PASS" } else { "FAIL" };
        println!("{tag} criterion {i}: {} [{:.1}s]", v.detail, start.elapsed().as_secs_f64());
        failed += !v.pass as usize;
    };
    report(1, &mut |_| criterion_1(), &mut ledger);
    report(2, &mut criterion_2, &mut ledger);
    report(3, &mut criterion_3, &mut ledger);
    report(4, &mut |_| criterion_4(), &mut ledger);
    report(5, &mut |_| criterion_5(), &mut ledger);
    report(6, &mut criterion_6, &mut ledger);
    report(7, &mut |l| criterion_7(l), &mut ledger);
    report(8, &mut |l| criterion_8(l), &mut ledger);
    report(9, &mut |_| criterion_9(), &mut ledger);
    report(10, &mut |l| criterion_10(l), &mut ledger);
    report(11, &mut |_| criterion_11(), &mut ledger);
    if failed > 0 {
        println!("{failed} criteria failed");
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}
