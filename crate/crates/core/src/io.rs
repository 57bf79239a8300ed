//! The `.hg` text format.
//!
//! ```text
//! # optional comments
//! n m
//! v v v      (one edge per line, distinct ids in 1..=n)
//! ```
//!
//! The writer emits each edge with ascending ids and edges in
//! lexicographic order.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Vertex};

pub fn parse_hg(text: &str) -> Result<Hypergraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or(Error::Parse { line: 0, msg: "missing header".into() })?;
    let nums = parse_ids(hline, header)?;
    let [n, m] = nums[..] else {
        return Err(Error::Parse { line: hline, msg: "header must be \"n m\"".into() });
    };

    let mut edges = Vec::with_capacity(m as usize);
    for (line, body) in lines {
        if edges.len() == m as usize {
            return Err(Error::Parse { line, msg: format!("more than {m} edge lines") });
        }
        let ids = parse_ids(line, body)?;
        edges.push((line, ids));
    }
    if edges.len() != m as usize {
        return Err(Error::Parse {
            line: 0,
            msg: format!("header announces {m} edges, found {}", edges.len()),
        });
    }
    let lines_of: Vec<usize> = edges.iter().map(|(l, _)| *l).collect();
    Hypergraph::new(n, edges.into_iter().map(|(_, e)| e).collect()).map_err(|e| match e {
        Error::EmptyEdge { index }
        | Error::RepeatedVertex { index, .. } => Error::Parse { line: lines_of[index], msg: e.to_string() },
        other => Error::Parse { line: 0, msg: other.to_string() },
    })
}

fn parse_ids(line: usize, body: &str) -> Result<Vec<Vertex>> {
    body.split_whitespace()
        .map(|t| {
            t.parse::<Vertex>()
                .map_err(|_| Error::Parse { line, msg: format!("not a non-negative integer: {t:?}") })
        })
        .collect()
}

/// Serializes `h` over its full universe. Vertices outside `h.vertices()`
/// are not representable in the format and must not appear in any edge.
pub fn write_hg(h: &Hypergraph) -> String {
    let mut edges: Vec<&[Vertex]> = h.edges().iter().map(|e| e.as_slice()).collect();
    edges.sort_unstable();
    let mut out = String::new();
    writeln!(out, "{} {}", h.universe(), edges.len()).unwrap();
    for e in edges {
        let mut first = true;
        for v in e {
            if !first {
                out.push(' ');
            }
            first = false;
            write!(out, "{v}").unwrap();
        }
        out.push('\n');
    }
    out
}
