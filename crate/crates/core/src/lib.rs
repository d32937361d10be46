//! CONGEST-model network simulator with a distributed minimum cut suite.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`]: weighted graphs, cuts, partitions, generators, oracles and sampling.
//! * [`sim`]: the synchronous round engine and reusable node programs.
//! * [`mst`]: rooted trees, the distributed MST and the fragment decomposition.
//! * [`one_respect`]: the distributed computation of all cuts that 1-respect a tree.
//! * [`packing`]: greedy tree packing and the load/threshold machinery.
//! * [`seq_mincut`]: the sequential reference solver.
//! * [`dist_mincut`]: the distributed driver running on the simulator.

pub mod dist_mincut;
pub mod error;
pub mod graph;
pub mod mst;
pub mod one_respect;
pub mod packing;
pub mod par;
pub mod rational;
pub mod recursion;
pub mod seq_mincut;
pub mod sim;

pub use error::{Error, Result};
pub use graph::{Cut, Edge, Graph, GraphError, NodeId, Partition};
pub use rational::Rational;
pub use sim::{EngineConfig, Execution, RoundReport, SimError};
