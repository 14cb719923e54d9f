//! Edge-list text and JSON graph forms.
//!
//! Edge list: one `u v` pair per line (0-based), blank lines and `#`
//! comments ignored, optional `n=<k>` header fixing the vertex count.
//! JSON: `{"n": 4, "edges": [[0, 1], ...]}`.

use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl From<Graph> for GraphJson {
    fn from(g: Graph) -> Self {
        GraphJson {
            n: g.vertex_count(),
            edges: g.edges().map(|(u, v)| [u, v]).collect(),
        }
    }
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;

    fn try_from(j: GraphJson) -> Result<Graph> {
        let edges: Vec<_> = j.edges.iter().map(|&[u, v]| (u, v)).collect();
        Graph::from_edges(j.n, &edges)
    }
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut header: Option<usize> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("n=") {
            if header.is_some() || !edges.is_empty() {
                return Err(parse_err(line_no, "header must precede edges and appear once"));
            }
            header = Some(
                rest.trim()
                    .parse()
                    .map_err(|_| parse_err(line_no, "bad vertex count"))?,
            );
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(parse_err(line_no, "expected two vertex indices"));
        }
        let parse = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| parse_err(line_no, &format!("bad vertex index {s:?}")))
        };
        edges.push((parse(fields[0])?, parse(fields[1])?, line_no));
    }
    let n = header.unwrap_or_else(|| {
        edges
            .iter()
            .map(|&(u, v, _)| u.max(v) + 1)
            .max()
            .unwrap_or(0)
    });
    let mut g = Graph::empty(n);
    for (u, v, line_no) in edges {
        g.add_edge(u, v).map_err(|e| parse_err(line_no, &e.to_string()))?;
    }
    Ok(g)
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("n={}\n", g.vertex_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Accepts either form, choosing JSON when the text starts with `{`.
pub fn parse_graph(text: &str) -> Result<Graph> {
    if text.trim_start().starts_with('{') {
        let j: GraphJson = serde_json::from_str(text)?;
        Graph::try_from(j)
    } else {
        parse_edge_list(text)
    }
}

fn parse_err(line: usize, msg: &str) -> Error {
    Error::Parse {
        line,
        msg: msg.to_string(),
    }
}
