use thiserror::Error;

use crate::graph::GraphError;
use crate::sim::SimError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("oracle capacity exceeded: n = {n}, limit = {limit}")]
    OracleCapacity { n: usize, limit: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("sampled graph disconnected in all {attempts} attempts (p = {p})")]
    SamplingFailed { attempts: u32, p: f64 },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }
}
