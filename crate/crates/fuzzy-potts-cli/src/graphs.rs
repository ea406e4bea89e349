//! Graph sources for the command line: a small text file format and a set
//! of built-in families.
//!
//! # File format
//!
//! ```text
//! # comment lines start with '#'; blank lines are ignored
//! vertices 3
//! 0 1
//! 1 2
//! 0 2
//! ```
//!
//! The first non-comment line must be `vertices N`; every following line is
//! one edge `u v` with 0-based endpoints. Loops (`u u`) and repeated edges
//! are allowed — measures are defined on multigraphs. Parse errors name the
//! file and line.

use fuzzy_potts::graph::{figure1_graph, Graph};

use crate::CliError;

/// Upper bound on edges accepted from a file: configuration ranks are
/// 64-bit masks, so a table index needs one bit per edge.
pub const MAX_FILE_EDGES: usize = 63;

fn line_error(source: &str, line_no: usize, message: impl Into<String>) -> CliError {
    CliError::new(format!("{source}:{line_no}: {}", message.into()))
}

/// Parses the graph file format from already-read text. `source` names the
/// input in error messages (a path, or `<stdin>`).
pub fn parse_graph_text(source: &str, text: &str) -> Result<Graph, CliError> {
    let mut declared: Option<usize> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match declared {
            None => {
                if fields.len() != 2 || fields[0] != "vertices" {
                    return Err(line_error(
                        source,
                        line_no,
                        format!("expected `vertices N` as the first line, found {line:?}"),
                    ));
                }
                let n: usize = fields[1].parse().map_err(|_| {
                    line_error(
                        source,
                        line_no,
                        format!("invalid vertex count {:?}", fields[1]),
                    )
                })?;
                if n == 0 {
                    return Err(line_error(source, line_no, "graphs need at least one vertex"));
                }
                declared = Some(n);
            }
            Some(n) => {
                if fields.len() != 2 {
                    return Err(line_error(
                        source,
                        line_no,
                        format!("expected an edge line `u v`, found {line:?}"),
                    ));
                }
                let endpoint = |text: &str| -> Result<usize, CliError> {
                    let v: usize = text.parse().map_err(|_| {
                        line_error(source, line_no, format!("invalid vertex index {text:?}"))
                    })?;
                    if v >= n {
                        return Err(line_error(
                            source,
                            line_no,
                            format!("vertex {v} out of range ({n} vertices declared)"),
                        ));
                    }
                    Ok(v)
                };
                let u = endpoint(fields[0])?;
                let v = endpoint(fields[1])?;
                if edges.len() == MAX_FILE_EDGES {
                    return Err(line_error(
                        source,
                        line_no,
                        format!("more than {MAX_FILE_EDGES} edges; ranks are 64-bit masks"),
                    ));
                }
                edges.push((u, v));
            }
        }
    }
    let n = declared
        .ok_or_else(|| CliError::new(format!("{source}: missing `vertices N` line")))?;
    Graph::new(n, edges).map_err(|err| CliError::new(format!("{source}: {err}")))
}

/// Reads and parses a graph file from disk.
pub fn read_graph_file(path: &std::path::Path) -> Result<Graph, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|err| CliError::new(format!("{}: {err}", path.display())))?;
    parse_graph_text(&path.display().to_string(), &text)
}

/// A graph produced by [`resolve_source`], along with the designated
/// (vertex, edge) pair when the family defines one.
#[derive(Clone, Debug)]
pub struct ResolvedGraph {
    pub graph: Graph,
    /// Human-readable description of where the graph came from.
    pub label: String,
    /// The family's designated conditioning site, if it has one: the
    /// `figure1` family designates its direct edge and one endpoint.
    pub designated: Option<(usize, usize)>,
}

/// Names of the built-in families, for help and error text.
pub const FAMILY_NAMES: &str = "k2, path, cycle, complete, star, triangle, figure1";

/// Builds a graph from a built-in family name.
///
/// * `k2` — two vertices joined by one edge.
/// * `path --n N` — path on `N >= 1` vertices.
/// * `cycle --n N` — cycle on `N >= 3` vertices.
/// * `complete --n N` — complete graph on `N >= 1` vertices.
/// * `star --n N` — star on `N >= 2` vertices; vertex 0 is the center.
/// * `triangle` — shorthand for `complete --n 3`.
/// * `figure1 --m M` — two hubs joined by one direct edge plus `M` disjoint
///   two-edge paths; designates vertex 0 and edge 0 (the direct edge).
pub fn family_graph(name: &str, n: Option<usize>, m: Option<usize>) -> Result<ResolvedGraph, CliError> {
    let need_n = |what: &str, min: usize| -> Result<usize, CliError> {
        match n {
            Some(v) if v >= min => Ok(v),
            Some(v) => Err(CliError::new(format!(
                "--family {name} needs --n at least {min}, got {v}"
            ))),
            None => Err(CliError::new(format!(
                "--family {name} needs --n (number of {what})"
            ))),
        }
    };
    let simple = |graph: Graph, label: String| ResolvedGraph {
        graph,
        label,
        designated: None,
    };
    let built = match name {
        "k2" => simple(
            Graph::new(2, vec![(0, 1)]).map_err(CliError::from)?,
            "k2".to_string(),
        ),
        "path" => {
            let n = need_n("vertices", 1)?;
            let edges: Vec<(usize, usize)> = (1..n).map(|v| (v - 1, v)).collect();
            simple(
                Graph::new(n, edges).map_err(CliError::from)?,
                format!("path-{n}"),
            )
        }
        "cycle" => {
            let n = need_n("vertices", 3)?;
            let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (v - 1, v)).collect();
            edges.push((0, n - 1));
            simple(
                Graph::new(n, edges).map_err(CliError::from)?,
                format!("cycle-{n}"),
            )
        }
        "complete" => {
            let n = need_n("vertices", 1)?;
            let mut edges = Vec::new();
            for u in 0..n {
                for v in (u + 1)..n {
                    edges.push((u, v));
                }
            }
            if edges.len() > MAX_FILE_EDGES {
                return Err(CliError::new(format!(
                    "complete graph on {n} vertices has {} edges; ranks are 64-bit masks",
                    edges.len()
                )));
            }
            simple(
                Graph::new(n, edges).map_err(CliError::from)?,
                format!("complete-{n}"),
            )
        }
        "star" => {
            let n = need_n("vertices", 2)?;
            let edges: Vec<(usize, usize)> = (1..n).map(|v| (0, v)).collect();
            simple(
                Graph::new(n, edges).map_err(CliError::from)?,
                format!("star-{n}"),
            )
        }
        "triangle" => simple(
            Graph::new(3, vec![(0, 1), (0, 2), (1, 2)]).map_err(CliError::from)?,
            "triangle".to_string(),
        ),
        "figure1" => {
            let m = m.ok_or_else(|| {
                CliError::new("--family figure1 needs --m (number of two-edge paths)")
            })?;
            let (graph, x, e) = figure1_graph(m).map_err(CliError::from)?;
            ResolvedGraph {
                graph,
                label: format!("figure1-{m}"),
                designated: Some((x, e)),
            }
        }
        other => {
            return Err(CliError::new(format!(
                "unknown family {other:?}; available: {FAMILY_NAMES}"
            )))
        }
    };
    Ok(built)
}

/// Resolves the `--file` / `--family` pair into a graph.
pub fn resolve_source(
    file: Option<&std::path::Path>,
    family: Option<&str>,
    n: Option<usize>,
    m: Option<usize>,
) -> Result<ResolvedGraph, CliError> {
    match (file, family) {
        (Some(path), None) => Ok(ResolvedGraph {
            graph: read_graph_file(path)?,
            label: path.display().to_string(),
            designated: None,
        }),
        (None, Some(name)) => family_graph(name, n, m),
        (None, None) => Err(CliError::new(format!(
            "no graph given; use --file PATH or --family NAME ({FAMILY_NAMES})"
        ))),
        (Some(_), Some(_)) => Err(CliError::new("give either --file or --family, not both")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_triangle_file() {
        let text = "# triangle\nvertices 3\n0 1\n1 2\n0 2\n";
        let g = parse_graph_text("tri.graph", text).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edges(), &[(0, 1), (1, 2), (0, 2)]);
    }

    #[test]
    fn accepts_loops_and_parallel_edges() {
        let text = "vertices 2\n0 0\n0 1\n0 1\n";
        let g = parse_graph_text("multi.graph", text).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.edges()[0], (0, 0));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = "vertices 3\n0 1\n0 three\n";
        let err = parse_graph_text("bad.graph", text).unwrap_err();
        assert_eq!(err.message, "bad.graph:3: invalid vertex index \"three\"");

        let text = "vertices 2\n0 5\n";
        let err = parse_graph_text("bad.graph", text).unwrap_err();
        assert_eq!(
            err.message,
            "bad.graph:2: vertex 5 out of range (2 vertices declared)"
        );

        let text = "0 1\n";
        let err = parse_graph_text("bad.graph", text).unwrap_err();
        assert!(err.message.starts_with("bad.graph:1: expected `vertices N`"));

        let err = parse_graph_text("empty.graph", "# nothing\n").unwrap_err();
        assert_eq!(err.message, "empty.graph: missing `vertices N` line");
    }

    #[test]
    fn families_build_expected_shapes() {
        let star = family_graph("star", Some(4), None).unwrap();
        assert_eq!(star.graph.edges(), &[(0, 1), (0, 2), (0, 3)]);

        let cyc = family_graph("cycle", Some(4), None).unwrap();
        assert_eq!(cyc.graph.edges(), &[(0, 1), (1, 2), (2, 3), (0, 3)]);

        let fig = family_graph("figure1", None, Some(2)).unwrap();
        assert_eq!(fig.designated, Some((0, 0)));
        assert_eq!(fig.graph.vertex_count(), 4);
        assert_eq!(fig.graph.edge_count(), 5);

        let tri = family_graph("triangle", None, None).unwrap();
        assert_eq!(tri.graph.edge_count(), 3);

        assert!(family_graph("petersen", None, None)
            .unwrap_err()
            .message
            .contains("unknown family"));
        assert!(family_graph("cycle", Some(2), None)
            .unwrap_err()
            .message
            .contains("at least 3"));
    }
}
