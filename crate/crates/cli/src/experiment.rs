use std::fmt;
use std::io::{self, Write};
use std::path::PathBuf;
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use mincut_core::dist_mincut::{dist_estimate_value, dist_exact_min_cut, dist_sampled_approx_min_cut, DistRun};
use mincut_core::graph::generators::{generate, GeneratorSpec};
use mincut_core::graph::io::{read_edge_list, write_edge_list};
use mincut_core::graph::oracle::{brute_force_mincut, STOER_WAGNER_LIMIT};
use mincut_core::graph::cut_weight;
use mincut_core::mst::{lexicographic_mst, RootedTree};
use mincut_core::one_respect::one_respect_min_cut;
use mincut_core::rational::to_f64;
use mincut_core::recursion::RecursionTrace;
use mincut_core::seq_mincut::{exact_min_cut, sampled_approx_min_cut};
use mincut_core::{Cut, EngineConfig, Error, Graph, Rational, RoundReport, SimError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    SeqApprox,
    SeqExact,
    DistApprox,
    DistExact,
    DistValue,
    OneRespect,
    Oracle,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::SeqApprox => "seq-approx",
            Algorithm::SeqExact => "seq-exact",
            Algorithm::DistApprox => "dist-approx",
            Algorithm::DistExact => "dist-exact",
            Algorithm::DistValue => "dist-value",
            Algorithm::OneRespect => "one-respect",
            Algorithm::Oracle => "oracle",
        }
    }

    /// Largest ratio the algorithm guarantees, if any.
    fn bound(self, eps: &Rational) -> Option<f64> {
        match self {
            Algorithm::SeqApprox | Algorithm::DistApprox => Some(1.0 + to_f64(eps)),
            Algorithm::DistValue => Some(1.0 + to_f64(eps) / 2.0),
            Algorithm::SeqExact | Algorithm::DistExact | Algorithm::Oracle => Some(1.0),
            Algorithm::OneRespect => None,
        }
    }
}

#[derive(Debug, Clone)]
pub enum GraphSource {
    File(PathBuf),
    Generator(GeneratorSpec),
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    pub source: GraphSource,
    pub eps: Rational,
    pub seed: u64,
    pub trials: u32,
    pub sample_d: u32,
    pub verbose: bool,
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    OracleCapacity(String),
    Engine(SimError),
    Io(String, io::Error),
    Other(Error),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::OracleCapacity(_) => 3,
            Failure::Engine(_) => 4,
            Failure::Io(..) | Failure::Other(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "{m}"),
            Failure::OracleCapacity(m) => write!(f, "{m}"),
            Failure::Engine(e) => write!(f, "engine: {e}"),
            Failure::Io(what, e) => write!(f, "{what}: {e}"),
            Failure::Other(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Sim(s) => Failure::Engine(s),
            Error::OracleCapacity { .. } => Failure::OracleCapacity(e.to_string()),
            Error::InvalidArgument(m) => Failure::Usage(m),
            Error::Graph(g) => Failure::Usage(g.to_string()),
            other => Failure::Other(other),
        }
    }
}

#[derive(Debug, Serialize)]
struct GraphInfo {
    source: String,
    n: usize,
    m: usize,
    hash: String,
}

#[derive(Debug, Default, Serialize)]
struct Sampling {
    p: f64,
    attempts: u32,
}

#[derive(Debug, Serialize)]
struct TrialRecord {
    record: &'static str,
    algorithm: &'static str,
    trial: u32,
    seed: u64,
    graph: GraphInfo,
    eps: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    weight: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    side: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    argmin: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_weight: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda_bound: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    levels: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trees_packed: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trees_per_level: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rounds: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_msgs_per_edge: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    total_messages: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sampling: Option<Sampling>,
    wall_ms: f64,
}

#[derive(Debug, Serialize)]
struct RoundFit {
    exponent: f64,
    points: usize,
}

#[derive(Debug, Serialize)]
struct SummaryRecord {
    record: &'static str,
    algorithm: &'static str,
    trials: u32,
    max_ratio: Option<f64>,
    within_bound: Option<bool>,
    round_fit: Option<RoundFit>,
}

fn graph_hash(g: &Graph) -> String {
    hex::encode(Sha256::digest(write_edge_list(g).as_bytes()))
}

fn load(source: &GraphSource, seed: u64) -> Result<(Graph, String), Failure> {
    match source {
        GraphSource::File(p) => Ok((read_edge_list(p)?, p.display().to_string())),
        GraphSource::Generator(spec) => Ok((generate(spec, seed).map_err(Error::from)?, spec.to_string())),
    }
}

fn verified(g: &Graph, cut: &Cut) -> Result<u64, Failure> {
    let w = cut_weight(g, cut.side()).map_err(Error::from)?;
    if w != cut.weight() {
        return Err(Failure::Other(Error::Invariant(format!("reported weight {} but the side weighs {w}", cut.weight()))));
    }
    Ok(w)
}

impl TrialRecord {
    fn new(cfg: &ExperimentConfig, trial: u32, seed: u64, g: &Graph, source: String) -> Self {
        TrialRecord {
            record: "trial",
            algorithm: cfg.algorithm.name(),
            trial,
            seed,
            graph: GraphInfo { source, n: g.n(), m: g.m(), hash: graph_hash(g) },
            eps: cfg.eps.to_string(),
            weight: None,
            value: None,
            side: None,
            argmin: None,
            oracle_weight: None,
            ratio: None,
            oracle_note: None,
            lambda_bound: None,
            levels: None,
            trees_packed: None,
            trees_per_level: None,
            rounds: None,
            max_msgs_per_edge: None,
            total_messages: None,
            sampling: None,
            wall_ms: 0.0,
        }
    }

    fn cut(&mut self, g: &Graph, cut: &Cut) -> Result<(), Failure> {
        self.weight = Some(verified(g, cut)?);
        self.side = Some(cut.side().to_vec());
        Ok(())
    }

    fn trace(&mut self, t: &RecursionTrace) {
        self.lambda_bound = Some(t.lambda_bound);
        self.levels = Some(t.levels.len());
        self.trees_packed = Some(t.trees_packed());
        self.trees_per_level = Some(t.levels.iter().map(|l| l.trees).collect());
    }

    fn report(&mut self, r: &RoundReport) {
        self.rounds = Some(r.rounds);
        self.max_msgs_per_edge = Some(r.max_msgs_per_edge_per_round);
        self.total_messages = Some(r.total_messages);
    }

    fn dist(&mut self, g: &Graph, run: &DistRun) -> Result<(), Failure> {
        self.cut(g, &run.cut)?;
        self.trace(&run.trace);
        self.report(&run.report);
        Ok(())
    }
}

fn run_trial(cfg: &ExperimentConfig, engine: &EngineConfig, trial: u32) -> Result<TrialRecord, Failure> {
    let seed = cfg.seed + u64::from(trial);
    let (g, source) = load(&cfg.source, seed)?;
    let mut rec = TrialRecord::new(cfg, trial, seed, &g, source);
    let engine = EngineConfig { seed, ..engine.clone() };
    let start = Instant::now();
    let mut value: Option<f64> = None;
    match cfg.algorithm {
        Algorithm::SeqApprox => {
            let run = sampled_approx_min_cut(&g, &cfg.eps, seed, cfg.sample_d)?;
            rec.cut(&g, &run.cut)?;
            rec.trace(&run.trace);
            rec.sampling = Some(Sampling { p: run.p.parse().unwrap_or(1.0), attempts: run.attempts });
        }
        Algorithm::SeqExact => {
            let (cut, trace) = exact_min_cut(&g)?;
            rec.cut(&g, &cut)?;
            rec.trace(&trace);
        }
        Algorithm::DistApprox => {
            let (run, p, attempts) = dist_sampled_approx_min_cut(&g, &cfg.eps, cfg.sample_d, engine)?;
            rec.dist(&g, &run)?;
            rec.sampling = Some(Sampling { p, attempts });
        }
        Algorithm::DistExact => {
            let run = dist_exact_min_cut(&g, engine)?;
            rec.dist(&g, &run)?;
        }
        Algorithm::DistValue => {
            let est = dist_estimate_value(&g, &cfg.eps, engine)?;
            rec.value = Some(est.value.to_string());
            rec.trees_packed = Some(est.trees);
            rec.report(&est.report);
            value = Some(to_f64(&est.value));
        }
        Algorithm::OneRespect => {
            let t = RootedTree::from_edges(&g, &lexicographic_mst(&g, &vec![0; g.m()]), 0)?;
            let (out, report) = one_respect_min_cut(&g, &t, engine)?;
            let (w, v) = out.best.ok_or_else(|| Failure::Other(Error::Invariant("tree has no candidate".into())))?;
            let cut = Cut::new(&g, t.subtree(v)).map_err(Error::from)?;
            if cut.weight() != w {
                return Err(Failure::Other(Error::Invariant(format!("c* = {w} but the subtree of {v} weighs {}", cut.weight()))));
            }
            rec.cut(&g, &cut)?;
            rec.argmin = Some(v);
            rec.report(&report);
        }
        Algorithm::Oracle => {
            let cut = brute_force_mincut(&g)?;
            rec.cut(&g, &cut)?;
        }
    }
    rec.wall_ms = start.elapsed().as_secs_f64() * 1e3;

    if g.n() <= STOER_WAGNER_LIMIT {
        let lambda = brute_force_mincut(&g)?.weight();
        rec.oracle_weight = Some(lambda);
        let got = value.or(rec.weight.map(|w| w as f64));
        rec.ratio = got.map(|x| x / lambda as f64);
    } else {
        rec.oracle_note = Some(format!("oracle capacity exceeded: n = {} > {STOER_WAGNER_LIMIT}", g.n()));
    }
    Ok(rec)
}

/// Least-squares slope of ln(rounds) against ln(n).
fn fit(points: &[(usize, u64)]) -> Option<RoundFit> {
    let pts: Vec<(f64, f64)> = points.iter().filter(|p| p.1 > 0).map(|&(n, r)| ((n as f64).ln(), (r as f64).ln())).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if pts.len() < 2 || sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(RoundFit { exponent: sxy / sxx, points: pts.len() })
}

pub fn run_experiment(cfg: &ExperimentConfig, engine: EngineConfig, out: &mut dyn Write) -> Result<(), Failure> {
    if cfg.trials == 0 {
        return Err(Failure::Usage("--trials must be positive".into()));
    }
    let io = |e| Failure::Io("report".into(), e);
    let mut max_ratio: Option<f64> = None;
    let mut rounds = Vec::new();
    for trial in 0..cfg.trials {
        let rec = run_trial(cfg, &engine, trial)?;
        if cfg.verbose {
            eprintln!("trial {trial}: weight {:?} ratio {:?} rounds {:?} ({:.1} ms)", rec.weight, rec.ratio, rec.rounds, rec.wall_ms);
        }
        if let Some(r) = rec.ratio {
            max_ratio = Some(max_ratio.map_or(r, |m: f64| m.max(r)));
        }
        if let Some(r) = rec.rounds {
            rounds.push((rec.graph.n, r));
        }
        serde_json::to_writer(&mut *out, &rec).map_err(|e| io(e.into()))?;
        writeln!(out).map_err(io)?;
    }
    let bound = cfg.algorithm.bound(&cfg.eps);
    let summary = SummaryRecord {
        record: "summary",
        algorithm: cfg.algorithm.name(),
        trials: cfg.trials,
        max_ratio,
        within_bound: max_ratio.zip(bound).map(|(r, b)| r <= b + 1e-12),
        round_fit: fit(&rounds),
    };
    serde_json::to_writer(&mut *out, &summary).map_err(|e| io(e.into()))?;
    writeln!(out).map_err(io)
}
