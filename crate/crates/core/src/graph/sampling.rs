//! Karger sampling in the multigraph view: each of the w(e) unit copies of an
//! edge survives independently with probability p.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use super::{Edge, Graph, GraphError};
use crate::error::{Error, Result};

pub const MAX_RESAMPLES: u32 = 100;

pub fn mix_seed(seed: u64, salt: u64) -> u64 {
    // splitmix64 finaliser over the combined word
    let mut z = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn edge_stream(seed: u64, e: &Edge) -> ChaCha8Rng {
    let (a, b) = e.ends();
    ChaCha8Rng::seed_from_u64(mix_seed(mix_seed(seed, a as u64), b as u64))
}

/// Sampled weights per edge (0 = dropped). Each edge draws from its own stream,
/// so both endpoints could compute the same coin locally.
pub fn sample_weights(g: &Graph, p: f64, seed: u64) -> Result<Vec<u64>> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidArgument(format!("sampling probability must lie in (0, 1], got {p}")));
    }
    if p == 1.0 {
        return Ok(g.edges().iter().map(|e| e.w).collect());
    }
    Ok(g.edges()
        .iter()
        .map(|e| {
            let binom = Binomial::new(e.w, p).expect("p checked above");
            binom.sample(&mut edge_stream(seed, e))
        })
        .collect())
}

/// One draw of G(p). A disconnected draw is reported as `GraphError::Disconnected`
/// so the caller can resample.
pub fn karger_sample(g: &Graph, p: f64, seed: u64) -> Result<Graph> {
    let weights = sample_weights(g, p, seed)?;
    let edges = g
        .edges()
        .iter()
        .zip(&weights)
        .filter(|(_, &w)| w > 0)
        .map(|(e, &w)| Edge::new(e.u, e.v, w))
        .collect();
    Graph::new(g.n(), edges).map_err(Error::from)
}

/// Resamples with derived seeds until the draw is connected.
/// Returns the sample and the number of attempts used.
pub fn karger_sample_connected(g: &Graph, p: f64, seed: u64) -> Result<(Graph, u32)> {
    for attempt in 0..MAX_RESAMPLES {
        let s = if attempt == 0 { seed } else { mix_seed(seed, 0xA5A5_0000 + attempt as u64) };
        match karger_sample(g, p, s) {
            Ok(h) => return Ok((h, attempt + 1)),
            Err(Error::Graph(GraphError::Disconnected)) => continue,
            Err(other) => return Err(other),
        }
    }
    Err(Error::SamplingFailed { attempts: MAX_RESAMPLES, p })
}
