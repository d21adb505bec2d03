//! Plain-text graph format.
//!
//! ```text
//! c optional comment lines
//! p <n> <m>
//! e <u> <v>
//! ```
//!
//! Vertex indices are 0-based; repeated `e` lines encode parallel edges and
//! `e u u` encodes a loop. Edge ids are assigned in line order, so writing
//! and re-reading a graph with contiguous edge ids preserves them.

use super::{MultiGraph, SimpleGraph};
use std::fs;
use std::io::Write;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphIoError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("graph is not simple: {0}")]
    NotSimple(String),
}

fn parse_err(line: usize, message: impl Into<String>) -> GraphIoError {
    GraphIoError::Parse {
        line,
        message: message.into(),
    }
}

pub fn parse_graph(text: &str) -> Result<MultiGraph, GraphIoError> {
    let mut graph: Option<MultiGraph> = None;
    let mut declared_edges = 0usize;
    let mut seen_edges = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let mut tokens = line.split_ascii_whitespace();
        match tokens.next() {
            Some("p") => {
                if graph.is_some() {
                    return Err(parse_err(lineno, "duplicate p line"));
                }
                let n: usize = tokens
                    .next()
                    .ok_or_else(|| parse_err(lineno, "p line missing vertex count"))?
                    .parse()
                    .map_err(|_| parse_err(lineno, "bad vertex count"))?;
                let m: usize = tokens
                    .next()
                    .ok_or_else(|| parse_err(lineno, "p line missing edge count"))?
                    .parse()
                    .map_err(|_| parse_err(lineno, "bad edge count"))?;
                if tokens.next().is_some() {
                    return Err(parse_err(lineno, "trailing tokens on p line"));
                }
                graph = Some(MultiGraph::new(n));
                declared_edges = m;
            }
            Some("e") => {
                let g = graph
                    .as_mut()
                    .ok_or_else(|| parse_err(lineno, "e line before p line"))?;
                let u: usize = tokens
                    .next()
                    .ok_or_else(|| parse_err(lineno, "e line missing endpoint"))?
                    .parse()
                    .map_err(|_| parse_err(lineno, "bad endpoint"))?;
                let v: usize = tokens
                    .next()
                    .ok_or_else(|| parse_err(lineno, "e line missing endpoint"))?
                    .parse()
                    .map_err(|_| parse_err(lineno, "bad endpoint"))?;
                if tokens.next().is_some() {
                    return Err(parse_err(lineno, "trailing tokens on e line"));
                }
                if u >= g.vertex_slots() || v >= g.vertex_slots() {
                    return Err(parse_err(lineno, "endpoint out of range"));
                }
                g.add_edge(u, v);
                seen_edges += 1;
            }
            Some(other) => {
                return Err(parse_err(lineno, format!("unknown record '{other}'")));
            }
            None => unreachable!(),
        }
    }
    let g = graph.ok_or_else(|| parse_err(0, "missing p line"))?;
    if seen_edges != declared_edges {
        return Err(parse_err(
            0,
            format!("p line declared {declared_edges} edges, found {seen_edges}"),
        ));
    }
    Ok(g)
}

pub fn parse_simple_graph(text: &str) -> Result<SimpleGraph, GraphIoError> {
    let g = parse_graph(text)?;
    SimpleGraph::from_multigraph(g).map_err(|e| GraphIoError::NotSimple(e.to_string()))
}

pub fn format_graph(g: &MultiGraph) -> String {
    let mut out = String::new();
    out.push_str(&format!("p {} {}\n", g.vertex_slots(), g.m()));
    for e in g.edge_ids() {
        let (u, v) = g.endpoints(e).unwrap();
        out.push_str(&format!("e {u} {v}\n"));
    }
    out
}

pub fn read_graph(path: &Path) -> Result<MultiGraph, GraphIoError> {
    parse_graph(&fs::read_to_string(path)?)
}

pub fn read_simple_graph(path: &Path) -> Result<SimpleGraph, GraphIoError> {
    parse_simple_graph(&fs::read_to_string(path)?)
}

pub fn write_graph(g: &MultiGraph, path: &Path) -> Result<(), GraphIoError> {
    let mut f = fs::File::create(path)?;
    f.write_all(format_graph(g).as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_preserves_edges_and_ids() {
        let g = MultiGraph::from_pairs(4, &[(0, 1), (1, 2), (1, 2), (3, 3)]);
        let text = format_graph(&g);
        let h = parse_graph(&text).unwrap();
        assert_eq!(h.vertex_slots(), 4);
        assert_eq!(h.m(), 4);
        assert_eq!(h.digest(), g.digest());
        for e in 0..4 {
            assert_eq!(g.endpoints(e), h.endpoints(e));
        }
    }

    #[test]
    fn comments_and_blanks_skipped() {
        let text = "c hello\n\np 3 2\nc mid\ne 0 1\ne 1 2\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.m(), 2);
    }

    #[test]
    fn errors_reported() {
        assert!(parse_graph("e 0 1\n").is_err());
        assert!(parse_graph("p 2 1\n").is_err());
        assert!(parse_graph("p 2 1\ne 0 5\n").is_err());
        assert!(parse_simple_graph("p 2 2\ne 0 1\ne 0 1\n").is_err());
    }
}
