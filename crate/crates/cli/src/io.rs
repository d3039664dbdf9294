//! Edge-list and vertex-list files.
//!
//! Edge lists: a header line `n m`, then `m` lines `u v`. Blank lines and
//! lines starting with `#` are ignored. Vertex lists: one id per line, same
//! comment rules.

use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use flipwide_core::{Graph, Vertex};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File { path: String, source: io::Error },
    #[error("{path}:{line}: {msg}")]
    Parse { path: String, line: usize, msg: String },
    #[error("{path}: {source}")]
    Graph { path: String, source: flipwide_core::Error },
    #[error("{path}: invalid JSON: {source}")]
    Json { path: String, source: serde_json::Error },
}

/// Reads a whole file, or stdin for `-`.
pub fn read_input(path: &str) -> Result<String, IoError> {
    let mut text = String::new();
    let res = if path == "-" {
        io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|source| IoError::File { path: path.to_owned(), source })?;
    Ok(text)
}

/// Writes to a file, or stdout for `-`.
pub fn write_output(path: &str, text: &str) -> Result<(), IoError> {
    let res = if path == "-" {
        let mut out = io::stdout().lock();
        out.write_all(text.as_bytes()).and_then(|_| out.flush())
    } else {
        fs::write(Path::new(path), text)
    };
    res.map_err(|source| IoError::File { path: path.to_owned(), source })
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_ids<const N: usize>(path: &str, line: usize, text: &str) -> Result<[usize; N], IoError> {
    let err = |msg: String| IoError::Parse { path: path.to_owned(), line, msg };
    let fields: Vec<&str> = text.split_whitespace().collect();
    if fields.len() != N {
        return Err(err(format!("expected {N} integers, found {}", fields.len())));
    }
    let mut out = [0; N];
    for (slot, f) in out.iter_mut().zip(fields) {
        *slot = f.parse().map_err(|_| err(format!("not a vertex id: {f:?}")))?;
    }
    Ok(out)
}

pub fn parse_edge_list(path: &str, text: &str) -> Result<Graph, IoError> {
    let mut lines = content_lines(text);
    let (line, header) = lines
        .next()
        .ok_or_else(|| IoError::Parse { path: path.to_owned(), line: 1, msg: "missing `n m` header".into() })?;
    let [n, m] = parse_ids::<2>(path, line, header)?;
    let mut edges = Vec::with_capacity(m);
    for (line, l) in lines {
        let [u, v] = parse_ids::<2>(path, line, l)?;
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(IoError::Parse {
            path: path.to_owned(),
            line,
            msg: format!("header announces {m} edges, found {}", edges.len()),
        });
    }
    Graph::new(n, edges).map_err(|source| IoError::Graph { path: path.to_owned(), source })
}

pub fn read_graph(path: &str) -> Result<Graph, IoError> {
    parse_edge_list(path, &read_input(path)?)
}

/// Canonical edge list: `u < v`, lexicographic order.
pub fn format_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn parse_vertex_list(path: &str, text: &str) -> Result<Vec<Vertex>, IoError> {
    content_lines(text).map(|(line, l)| parse_ids::<1>(path, line, l).map(|[v]| v)).collect()
}

pub fn read_vertex_list(path: &str) -> Result<Vec<Vertex>, IoError> {
    parse_vertex_list(path, &read_input(path)?)
}
