//! Graph input files.
//!
//! A graph file is one JSON object:
//!
//! ```json
//! {"version": 1, "vertices": 3, "edges": [[0, 1], [1, 2], {"source": 2, "target": 0}]}
//! ```
//!
//! `version` is optional and must be 1 when present. Edges are 0-indexed and
//! may be written as `[u, v]` pairs or `{"source", "target"}` objects; for a
//! quiver the pair order is the arrow direction.

use std::path::Path;

use serde::Deserialize;

use ngo_strings::Quiver;

pub const GRAPH_FILE_VERSION: u32 = 1;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    version: Option<u32>,
    vertices: usize,
    edges: Vec<EdgeSpec>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum EdgeSpec {
    Pair([usize; 2]),
    Named { source: usize, target: usize },
}

impl EdgeSpec {
    fn ends(&self) -> (usize, usize) {
        match *self {
            EdgeSpec::Pair([u, v]) => (u, v),
            EdgeSpec::Named { source, target } => (source, target),
        }
    }
}

pub fn parse_quiver(text: &str) -> Result<Quiver, String> {
    let file: GraphFile = serde_json::from_str(text).map_err(|e| format!("malformed graph file: {e}"))?;
    if let Some(v) = file.version {
        if v != GRAPH_FILE_VERSION {
            return Err(format!("unsupported graph file version {v} (expected {GRAPH_FILE_VERSION})"));
        }
    }
    Quiver::new(file.vertices, file.edges.iter().map(EdgeSpec::ends).collect()).map_err(|e| e.to_string())
}

pub fn read_quiver(path: &Path) -> Result<Quiver, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_quiver(&text).map_err(|e| format!("{}: {e}", path.display()))
}
