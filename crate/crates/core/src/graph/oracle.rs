//! Independent exact oracles: bipartition enumeration, Stoer–Wagner and
//! partition enumeration. None of them touches tree packing.

use super::{Cut, Graph, NodeId, Partition};
use crate::error::{Error, Result};
use crate::rational::Rational;

pub const ENUMERATION_LIMIT: usize = 20;
pub const STOER_WAGNER_LIMIT: usize = 400;
pub const PARTITION_LIMIT: usize = 8;

/// Exact minimum cut: enumeration up to 20 nodes, Stoer–Wagner up to 400.
pub fn brute_force_mincut(g: &Graph) -> Result<Cut> {
    if g.n() <= ENUMERATION_LIMIT {
        enumerate_min_cut(g)
    } else if g.n() <= STOER_WAGNER_LIMIT {
        Ok(stoer_wagner(g))
    } else {
        Err(Error::OracleCapacity { n: g.n(), limit: STOER_WAGNER_LIMIT })
    }
}

/// Visits all 2^(n−1) − 1 bipartitions in Gray-code order (node n−1 stays outside S).
/// Ties go to the numerically smallest membership mask.
pub fn enumerate_min_cut(g: &Graph) -> Result<Cut> {
    let n = g.n();
    if n > ENUMERATION_LIMIT {
        return Err(Error::OracleCapacity { n, limit: ENUMERATION_LIMIT });
    }
    let mut mask: u32 = 0;
    let mut weight: i64 = 0;
    let mut best = (u64::MAX, 0u32);
    for i in 1u32..(1 << (n - 1)) {
        let v = i.trailing_zeros() as usize;
        let adding = mask & (1 << v) == 0;
        for nb in g.adj(v) {
            let inside = nb.node < n - 1 && mask & (1 << nb.node) != 0;
            let w = nb.weight as i64;
            weight += if inside == adding { -w } else { w };
        }
        mask ^= 1 << v;
        let key = (weight as u64, mask);
        if key < best {
            best = key;
        }
    }
    Ok(Cut::new(g, (0..n - 1).filter(|&v| best.1 & (1 << v) != 0))?)
}

/// Stoer–Wagner maximum-adjacency contraction, O(n³).
pub fn stoer_wagner(g: &Graph) -> Cut {
    let n = g.n();
    let mut w = vec![vec![0u64; n]; n];
    for e in g.edges() {
        w[e.u][e.v] += e.w;
        w[e.v][e.u] += e.w;
    }
    let mut groups: Vec<Vec<NodeId>> = (0..n).map(|v| vec![v]).collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut best: (u64, Vec<NodeId>) = (u64::MAX, Vec::new());
    let mut conn = vec![0u64; n];
    let mut added = vec![false; n];
    while active.len() > 1 {
        for &v in &active {
            conn[v] = 0;
            added[v] = false;
        }
        let mut prev = active[0];
        let mut last = active[0];
        for step in 0..active.len() {
            let mut pick = usize::MAX;
            for &v in &active {
                if !added[v] && (pick == usize::MAX || conn[v] > conn[pick]) {
                    pick = v;
                }
            }
            added[pick] = true;
            if step == active.len() - 1 && conn[pick] < best.0 {
                best = (conn[pick], groups[pick].clone());
            }
            prev = last;
            last = pick;
            for &v in &active {
                if !added[v] {
                    conn[v] += w[pick][v];
                }
            }
        }
        let moved = std::mem::take(&mut groups[last]);
        groups[prev].extend(moved);
        for &v in &active {
            let x = w[last][v];
            w[prev][v] += x;
            w[v][prev] = w[prev][v];
        }
        w[prev][prev] = 0;
        active.retain(|&v| v != last);
    }
    Cut::new(g, best.1).expect("Stoer–Wagner phase cut is a proper side")
}

/// Calls `f` with the block label of every node, for every set partition of
/// `0..n`, in lexicographic order of the label sequence (restricted growth strings).
pub fn for_each_partition(n: usize, mut f: impl FnMut(&[usize])) {
    let mut labels = vec![0usize; n];
    let mut maxes = vec![0usize; n];
    loop {
        f(&labels);
        let mut i = n;
        loop {
            if i <= 1 {
                return;
            }
            i -= 1;
            if labels[i] <= maxes[i - 1] {
                break;
            }
        }
        labels[i] += 1;
        maxes[i] = maxes[i - 1].max(labels[i]);
        for j in i + 1..n {
            labels[j] = 0;
            maxes[j] = maxes[i];
        }
    }
}

/// Φ = min part_val over all partitions with ≥ 2 blocks, with the
/// first optimal partition in enumeration order.
pub fn min_partition_value(g: &Graph) -> Result<(Rational, Partition)> {
    let n = g.n();
    if n > PARTITION_LIMIT {
        return Err(Error::OracleCapacity { n, limit: PARTITION_LIMIT });
    }
    let mut best: Option<(Rational, Vec<usize>)> = None;
    for_each_partition(n, |labels| {
        let blocks = labels.iter().max().map_or(0, |m| m + 1);
        if blocks < 2 {
            return;
        }
        let crossing: u64 = g.edges().iter().filter(|e| labels[e.u] != labels[e.v]).map(|e| e.w).sum();
        let val = Rational::new(crossing as i128, (blocks - 1) as i128);
        if best.as_ref().is_none_or(|(b, _)| val < *b) {
            best = Some((val, labels.to_vec()));
        }
    });
    let (val, labels) = best.expect("n >= 2 has a partition with two blocks");
    Ok((val, Partition::from_labels(&labels)))
}
