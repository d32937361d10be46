//! Edge-list text format: a header line `n m`, then one `u v w` line per edge.

use std::fmt::Write as _;
use std::path::Path;

use super::{Edge, Graph, GraphError};

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::with_capacity(16 * (g.m() + 1));
    let _ = writeln!(out, "{} {}", g.n(), g.m());
    for e in g.edges() {
        let _ = writeln!(out, "{} {} {}", e.u, e.v, e.w);
    }
    out
}

fn parse_fields<const K: usize>(line: &str, lineno: usize) -> Result<[u64; K], GraphError> {
    let err = |msg: String| GraphError::Parse { line: lineno, msg };
    let mut out = [0u64; K];
    let mut fields = line.split_whitespace();
    for slot in out.iter_mut() {
        let tok = fields.next().ok_or_else(|| err(format!("expected {K} fields")))?;
        *slot = tok.parse().map_err(|_| err(format!("not a non-negative integer: {tok:?}")))?;
    }
    if fields.next().is_some() {
        return Err(err(format!("expected {K} fields")));
    }
    Ok(out)
}

pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (hline, header) = lines.next().ok_or(GraphError::Parse { line: 1, msg: "missing header".into() })?;
    let [n, m] = parse_fields::<2>(header, hline + 1)?;
    let mut edges = Vec::with_capacity(m as usize);
    for (i, line) in lines {
        let [u, v, w] = parse_fields::<3>(line, i + 1)?;
        edges.push(Edge::new(u as usize, v as usize, w));
    }
    if edges.len() as u64 != m {
        return Err(GraphError::Parse { line: hline + 1, msg: format!("header says {m} edges, found {}", edges.len()) });
    }
    Graph::new(n as usize, edges)
}

pub fn read_edge_list(path: &Path) -> Result<Graph, crate::Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| crate::Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_edge_list(&text)?)
}
