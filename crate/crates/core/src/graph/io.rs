//! Plain-text edge lists.
//!
//! ```text
//! # optional comment lines
//! <n> <m>
//! <u> <v>      (m lines, 0-based, u < v, lexicographic order)
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{Graph, GraphError};

/// Canonical text of `g`: header, then every edge once with `u < v` in
/// ascending order, LF line endings.
pub fn format_edge_list(g: &Graph) -> String {
    let mut out = String::with_capacity(16 + g.edge_count() * 12);
    writeln!(out, "{} {}", g.n(), g.edge_count()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let pair = parse_pair(line, line_no)?;
        match header {
            None => header = Some(pair),
            Some((n, _)) => {
                let (u, v) = pair;
                if u >= n || v >= n {
                    return Err(GraphError::Parse {
                        line: line_no,
                        message: format!("vertex out of range for n = {n}"),
                    });
                }
                if u == v {
                    return Err(GraphError::Parse {
                        line: line_no,
                        message: format!("self-loop at vertex {u}"),
                    });
                }
                edges.push(pair);
            }
        }
    }
    let Some((n, m)) = header else {
        return Err(GraphError::Parse { line: 1, message: "missing \"<n> <m>\" header".into() });
    };
    if edges.len() != m {
        return Err(GraphError::Parse {
            line: text.lines().count(),
            message: format!("header announces {m} edges, found {}", edges.len()),
        });
    }
    Graph::from_edges(n, &edges).map_err(|e| match e {
        GraphError::DuplicateEdge { .. } => GraphError::InvariantViolation(e.to_string()),
        other => other,
    })
}

fn parse_pair(line: &str, line_no: usize) -> Result<(usize, usize), GraphError> {
    let mut fields = line.split_whitespace();
    let mut next = || -> Result<usize, GraphError> {
        let field = fields.next().ok_or_else(|| GraphError::Parse {
            line: line_no,
            message: "expected two integers".into(),
        })?;
        field.parse().map_err(|_| GraphError::Parse {
            line: line_no,
            message: format!("not a non-negative integer: {field:?}"),
        })
    };
    let pair = (next()?, next()?);
    if fields.next().is_some() {
        return Err(GraphError::Parse { line: line_no, message: "trailing fields".into() });
    }
    Ok(pair)
}

pub fn write_edge_list(g: &Graph, path: impl AsRef<Path>) -> Result<(), GraphError> {
    fs::write(path, format_edge_list(g))?;
    Ok(())
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Graph, GraphError> {
    parse_edge_list(&fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_complete, gen_hypercube};

    #[test]
    fn triangle_text() {
        assert_eq!(format_edge_list(&gen_complete(3)), "3 3\n0 1\n0 2\n1 2\n");
    }

    #[test]
    fn self_loop_is_a_parse_error() {
        let err = parse_edge_list("2 1\n1 1\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn comments_and_blank_lines() {
        let g = parse_edge_list("# path\n3 2\n\n0 1\n# mid\n1 2\n").unwrap();
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn malformed_input() {
        assert!(matches!(parse_edge_list(""), Err(GraphError::Parse { .. })));
        assert!(matches!(parse_edge_list("3 2\n0 1\n"), Err(GraphError::Parse { .. })));
        assert!(matches!(parse_edge_list("3 1\n0 x\n"), Err(GraphError::Parse { line: 2, .. })));
        assert!(matches!(parse_edge_list("3 1\n0 5\n"), Err(GraphError::Parse { line: 2, .. })));
        assert!(matches!(
            parse_edge_list("3 2\n0 1\n1 0\n"),
            Err(GraphError::InvariantViolation(_))
        ));
    }

    #[test]
    fn hypercube_roundtrip_through_a_file() {
        let g = gen_hypercube(4).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("q4.el");
        write_edge_list(&g, &path).unwrap();
        let back = read_edge_list(&path).unwrap();
        assert_eq!(back, g);
        assert_eq!(format_edge_list(&back), format_edge_list(&g));
    }
}
