//! A sequence of engine runs over one graph sharing a BFS tree rooted at node 0,
//! with the round reports of all runs accumulated.

use std::sync::Arc;

use super::library::{AllReduce, BfsTree, ItemOp, Pair, PairOp, PipelinedBroadcast, PipelinedConvergecast};
use super::{Engine, EngineConfig, LocalTree, NodeProgram, RoundReport, SimError};
use crate::graph::Graph;

#[derive(Debug, Clone)]
pub struct Network<'g> {
    engine: Engine<'g>,
    bfs: Arc<Vec<LocalTree>>,
    bfs_depth: usize,
    report: RoundReport,
}

impl<'g> Network<'g> {
    pub fn new(graph: &'g Graph, config: EngineConfig) -> Result<Self, SimError> {
        let engine = Engine::new(graph, config)?;
        let run = engine.run(&BfsTree { root: 0 }, "bfs")?;
        let bfs_depth = run.outputs.iter().map(|b| b.depth).max().unwrap_or(0);
        let bfs = Arc::new(run.outputs.into_iter().map(|b| b.tree).collect());
        Ok(Network { engine, bfs, bfs_depth, report: run.report })
    }

    pub fn graph(&self) -> &'g Graph {
        self.engine.graph()
    }

    pub fn engine(&self) -> &Engine<'g> {
        &self.engine
    }

    pub fn n(&self) -> usize {
        self.engine.graph().n()
    }

    pub fn bfs(&self) -> &[LocalTree] {
        &self.bfs
    }

    pub fn bfs_depth(&self) -> usize {
        self.bfs_depth
    }

    pub fn report(&self) -> &RoundReport {
        &self.report
    }

    pub fn take_report(&mut self) -> RoundReport {
        std::mem::take(&mut self.report)
    }

    /// Same graph and BFS tree, empty report.
    pub fn fork(&self) -> Network<'g> {
        Network { engine: self.engine.clone(), bfs: self.bfs.clone(), bfs_depth: self.bfs_depth, report: RoundReport::default() }
    }

    pub fn absorb(&mut self, report: &RoundReport) {
        self.report.merge(report);
    }

    pub fn run<P: NodeProgram>(&mut self, program: &P, phase: &str) -> Result<Vec<P::Output>, SimError> {
        match self.engine.run(program, phase) {
            Ok(run) => {
                self.report.merge(&run.report);
                Ok(run.outputs)
            }
            Err(SimError::Timeout { phase, max_rounds, partial }) => {
                self.report.merge(&partial);
                let partial = Box::new(self.report.clone());
                Err(SimError::Timeout { phase, max_rounds, partial })
            }
            Err(e) => Err(e),
        }
    }

    /// Upcasts keyed items over the BFS tree and streams the root's aggregate
    /// back down; every node ends with the same sorted list.
    pub fn gather_broadcast(&mut self, items: &[Vec<Pair>], op: ItemOp, phase: &str) -> Result<Vec<Vec<Pair>>, SimError> {
        let bfs = Arc::clone(&self.bfs);
        let up = self.run(&PipelinedConvergecast { forest: &bfs, items, op }, phase)?;
        let mut roots = vec![Vec::new(); self.n()];
        roots[0] = up.into_iter().next().unwrap_or_default();
        self.run(&PipelinedBroadcast { forest: &bfs, items: &roots }, phase)
    }

    pub fn all_reduce(&mut self, values: &[Pair], op: PairOp, phase: &str) -> Result<Vec<Pair>, SimError> {
        let bfs = Arc::clone(&self.bfs);
        self.run(&AllReduce { tree: &bfs, values, op }, phase)
    }
}

/// The common value of a quantity every node computed independently.
pub fn agreed<T: PartialEq + Clone + std::fmt::Debug>(values: &[T]) -> Result<T, crate::Error> {
    let first = values.first().ok_or_else(|| crate::Error::invariant("no nodes"))?;
    if let Some((v, other)) = values.iter().enumerate().find(|(_, x)| *x != first) {
        return Err(crate::Error::invariant(format!("nodes disagree: node 0 has {first:?}, node {v} has {other:?}")));
    }
    Ok(first.clone())
}
