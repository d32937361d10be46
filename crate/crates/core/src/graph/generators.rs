//! Seeded graph families.

use std::fmt;
use std::str::FromStr;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{oracle, weight_bound, Edge, Graph, GraphError};

const ATTEMPTS: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum GeneratorSpec {
    Cycle(usize),
    Path(usize),
    Star(usize),
    Complete(usize),
    /// Two G(n_i, p) blocks joined by exactly `k` unit edges; nodes `0..n1` form the first block.
    PlantedCut { n1: usize, n2: usize, k: usize, p: f64 },
    RandomRegular { n: usize, d: usize },
    WeightedRandom { n: usize, p: f64, w_max: u64 },
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorSpec::Cycle(n) => write!(f, "cycle:{n}"),
            GeneratorSpec::Path(n) => write!(f, "path:{n}"),
            GeneratorSpec::Star(n) => write!(f, "star:{n}"),
            GeneratorSpec::Complete(n) => write!(f, "complete:{n}"),
            GeneratorSpec::PlantedCut { n1, n2, k, p } => write!(f, "planted:{n1},{n2},{k},{p}"),
            GeneratorSpec::RandomRegular { n, d } => write!(f, "regular:{n},{d}"),
            GeneratorSpec::WeightedRandom { n, p, w_max } => write!(f, "weighted:{n},{p},{w_max}"),
        }
    }
}

impl FromStr for GeneratorSpec {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GraphError::Infeasible(format!("cannot parse generator spec {s:?}"));
        let (name, args) = s.split_once(':').ok_or_else(bad)?;
        let args: Vec<&str> = args.split(',').map(str::trim).collect();
        let int = |i: usize| -> Result<usize, GraphError> { args.get(i).and_then(|a| a.parse().ok()).ok_or_else(bad) };
        let float = |i: usize| -> Result<f64, GraphError> { args.get(i).and_then(|a| a.parse().ok()).ok_or_else(bad) };
        let arity = |k: usize| if args.len() == k { Ok(()) } else { Err(bad()) };
        let spec = match name {
            "cycle" => GeneratorSpec::Cycle(int(0)?),
            "path" => GeneratorSpec::Path(int(0)?),
            "star" => GeneratorSpec::Star(int(0)?),
            "complete" => GeneratorSpec::Complete(int(0)?),
            "planted" => {
                arity(4)?;
                GeneratorSpec::PlantedCut { n1: int(0)?, n2: int(1)?, k: int(2)?, p: float(3)? }
            }
            "regular" => {
                arity(2)?;
                GeneratorSpec::RandomRegular { n: int(0)?, d: int(1)? }
            }
            "weighted" => {
                arity(3)?;
                GeneratorSpec::WeightedRandom { n: int(0)?, p: float(1)?, w_max: int(2)? as u64 }
            }
            _ => return Err(bad()),
        };
        if matches!(name, "cycle" | "path" | "star" | "complete") {
            arity(1)?;
        }
        Ok(spec)
    }
}

pub fn generate(spec: &GeneratorSpec, seed: u64) -> Result<Graph, GraphError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match *spec {
        GeneratorSpec::Cycle(n) => cycle(n),
        GeneratorSpec::Path(n) => path(n),
        GeneratorSpec::Star(n) => star(n),
        GeneratorSpec::Complete(n) => complete(n),
        GeneratorSpec::PlantedCut { n1, n2, k, p } => planted_cut(n1, n2, k, p, &mut rng),
        GeneratorSpec::RandomRegular { n, d } => random_regular(n, d, &mut rng),
        GeneratorSpec::WeightedRandom { n, p, w_max } => weighted_random(n, p, w_max, &mut rng),
    }
}

fn unit(pairs: impl IntoIterator<Item = (usize, usize)>) -> Vec<Edge> {
    pairs.into_iter().map(|(u, v)| Edge::new(u, v, 1)).collect()
}

pub fn cycle(n: usize) -> Result<Graph, GraphError> {
    if n < 3 {
        return Err(GraphError::Infeasible(format!("cycle needs n >= 3, got {n}")));
    }
    Graph::new(n, unit((0..n).map(|i| (i, (i + 1) % n))))
}

pub fn path(n: usize) -> Result<Graph, GraphError> {
    Graph::new(n, unit((1..n).map(|i| (i - 1, i))))
}

pub fn star(n: usize) -> Result<Graph, GraphError> {
    Graph::new(n, unit((1..n).map(|i| (0, i))))
}

pub fn complete(n: usize) -> Result<Graph, GraphError> {
    Graph::new(n, unit((0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))))
}

fn check_prob(p: f64) -> Result<(), GraphError> {
    if p > 0.0 && p <= 1.0 {
        Ok(())
    } else {
        Err(GraphError::Infeasible(format!("edge probability must lie in (0, 1], got {p}")))
    }
}

fn gnp_pairs(n: usize, offset: usize, p: f64, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                out.push((u + offset, v + offset));
            }
        }
    }
    out
}

fn planted_cut(n1: usize, n2: usize, k: usize, p: f64, rng: &mut ChaCha8Rng) -> Result<Graph, GraphError> {
    check_prob(p)?;
    if k == 0 || n1 < k + 2 || n2 < k + 2 || k > n1 * n2 {
        return Err(GraphError::Infeasible(format!(
            "planted cut needs k >= 1 and blocks of at least k+2 nodes (n1={n1}, n2={n2}, k={k})"
        )));
    }
    let block_ok = |n: usize, pairs: &[(usize, usize)], offset: usize| -> bool {
        let edges = unit(pairs.iter().map(|&(u, v)| (u - offset, v - offset)));
        match Graph::new(n, edges) {
            Ok(b) => oracle::stoer_wagner(&b).weight() as usize > k,
            Err(_) => false,
        }
    };
    for _ in 0..ATTEMPTS {
        let a = gnp_pairs(n1, 0, p, rng);
        if !block_ok(n1, &a, 0) {
            continue;
        }
        let b = gnp_pairs(n2, n1, p, rng);
        if !block_ok(n2, &b, n1) {
            continue;
        }
        let cross = index::sample(rng, n1 * n2, k).into_iter().map(|i| (i / n2, n1 + i % n2));
        let mut pairs = a;
        pairs.extend(b);
        pairs.extend(cross);
        return Graph::new(n1 + n2, unit(pairs));
    }
    Err(GraphError::Infeasible(format!(
        "could not draw blocks with edge connectivity above {k} at p = {p}"
    )))
}

fn random_regular(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Result<Graph, GraphError> {
    if d == 0 || d >= n || (n * d) % 2 == 1 || (d == 1 && n > 2) {
        return Err(GraphError::Infeasible(format!("no connected simple {d}-regular graph on {n} nodes")));
    }
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    'attempt: for _ in 0..ATTEMPTS {
        stubs.shuffle(rng);
        let mut seen = std::collections::HashSet::new();
        let mut pairs = Vec::with_capacity(n * d / 2);
        for ch in stubs.chunks(2) {
            let (u, v) = (ch[0].min(ch[1]), ch[0].max(ch[1]));
            if u == v || !seen.insert((u, v)) {
                continue 'attempt;
            }
            pairs.push((u, v));
        }
        if let Ok(g) = Graph::new(n, unit(pairs)) {
            return Ok(g);
        }
    }
    Err(GraphError::Infeasible(format!("configuration model failed for n={n}, d={d}")))
}

fn weighted_random(n: usize, p: f64, w_max: u64, rng: &mut ChaCha8Rng) -> Result<Graph, GraphError> {
    check_prob(p)?;
    if n < 2 || w_max == 0 || w_max > weight_bound(n) {
        return Err(GraphError::Infeasible(format!("weighted graph needs n >= 2 and 1 <= w_max <= n^4 (n={n}, w_max={w_max})")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut present = std::collections::BTreeSet::new();
    for i in 1..n {
        let j = rng.random_range(0..i);
        let (u, v) = (order[i].min(order[j]), order[i].max(order[j]));
        present.insert((u, v));
    }
    for pair in gnp_pairs(n, 0, p, rng) {
        present.insert(pair);
    }
    let edges = present.into_iter().map(|(u, v)| Edge::new(u, v, rng.random_range(1..=w_max))).collect();
    Graph::new(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_families() {
        let c4 = cycle(4).unwrap();
        assert_eq!(c4.m(), 4);
        assert_eq!(oracle::brute_force_mincut(&c4).unwrap().weight(), 2);
        assert_eq!(complete(5).unwrap().m(), 10);
        assert!(cycle(2).is_err());
    }

    #[test]
    fn planted_cut_is_the_unique_minimum() {
        let spec: GeneratorSpec = "planted:10,10,3,0.8".parse().unwrap();
        let g = generate(&spec, 5).unwrap();
        let cut = oracle::brute_force_mincut(&g).unwrap();
        assert_eq!(cut.weight(), 3);
        assert_eq!(cut.canonical(20), (10..20).collect::<Vec<_>>());
        assert!(generate(&GeneratorSpec::PlantedCut { n1: 3, n2: 3, k: 3, p: 1.0 }, 0).is_err());
    }

    #[test]
    fn regular_and_weighted_are_deterministic() {
        let r = GeneratorSpec::RandomRegular { n: 12, d: 3 };
        let g = generate(&r, 9).unwrap();
        assert!((0..12).all(|v| g.adj(v).len() == 3));
        assert_eq!(g, generate(&r, 9).unwrap());
        let w = GeneratorSpec::WeightedRandom { n: 10, p: 0.3, w_max: 9 };
        let h = generate(&w, 4).unwrap();
        assert!(h.edges().iter().all(|e| (1..=9).contains(&e.w)));
        assert_eq!(h, generate(&w, 4).unwrap());
    }

    #[test]
    fn spec_strings_round_trip() {
        for s in ["cycle:8", "complete:5", "planted:10,10,3,0.9", "regular:16,4", "weighted:12,0.25,20", "star:6", "path:9"] {
            let spec: GeneratorSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("cycle:8,1".parse::<GeneratorSpec>().is_err());
        assert!("blob:3".parse::<GeneratorSpec>().is_err());
    }
}
