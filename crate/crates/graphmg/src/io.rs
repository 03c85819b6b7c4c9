//! Graph file formats.
//!
//! Two formats are supported:
//!
//! * **Matrix Market** coordinate files (`%%MatrixMarket matrix coordinate
//!   {real|integer|pattern} {general|symmetric}`). Off-diagonal entries are
//!   read as adjacency: entry `(i, j, w)` is an edge of weight `w` (1 for
//!   pattern files). In `symmetric` files each stored entry is one undirected
//!   edge and repeated coordinates are summed. In `general` files the two
//!   triangles are treated as redundant storage of the same edge: if both
//!   `(i, j)` and `(j, i)` appear their weights must agree, and the edge is
//!   taken once.
//! * **Edge lists**: one `u v [w]` triple per line, 0-based vertex ids,
//!   optional weight defaulting to 1, `#` starts a comment. The vertex count
//!   is one past the largest id seen. Duplicate edges are summed regardless
//!   of endpoint order.
//!
//! Diagonal Matrix Market entries and edge-list self-loops are dropped and
//! counted rather than treated as errors.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::laplacian::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    MatrixMarket,
    EdgeList,
}

/// Parsed graph plus loader diagnostics.
#[derive(Debug)]
pub struct LoadedGraph {
    pub graph: Graph,
    pub self_loops_dropped: usize,
}

/// Picks a format from the file extension: `.mtx` and `.mm` mean Matrix
/// Market, anything else is an edge list.
pub fn detect_format(path: &Path) -> GraphFormat {
    match path.extension().and_then(|e| e.to_str()) {
        Some("mtx") | Some("mm") => GraphFormat::MatrixMarket,
        _ => GraphFormat::EdgeList,
    }
}

/// Loads a graph file, auto-detecting the format when none is given.
pub fn load_graph(path: &Path, format: Option<GraphFormat>) -> Result<LoadedGraph> {
    let format = format.unwrap_or_else(|| detect_format(path));
    let reader = BufReader::new(File::open(path)?);
    match format {
        GraphFormat::MatrixMarket => parse_matrix_market(reader),
        GraphFormat::EdgeList => parse_edge_list(reader),
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Parses a Matrix Market coordinate file as an undirected graph.
pub fn parse_matrix_market<R: BufRead>(reader: R) -> Result<LoadedGraph> {
    let mut lines = reader.lines().enumerate();

    let (header_no, header) = loop {
        match lines.next() {
            Some((no, line)) => {
                let line = line?;
                if !line.trim().is_empty() {
                    break (no + 1, line);
                }
            }
            None => return Err(parse_err(1, "empty file")),
        }
    };
    let fields: Vec<String> = header
        .split_whitespace()
        .map(|s| s.to_ascii_lowercase())
        .collect();
    if fields.len() != 5 || fields[0] != "%%matrixmarket" || fields[1] != "matrix" {
        return Err(parse_err(header_no, "expected '%%MatrixMarket matrix ...' header"));
    }
    if fields[2] != "coordinate" {
        return Err(parse_err(header_no, format!("unsupported storage '{}'", fields[2])));
    }
    let pattern = match fields[3].as_str() {
        "real" | "integer" => false,
        "pattern" => true,
        other => return Err(parse_err(header_no, format!("unsupported field type '{other}'"))),
    };
    let symmetric = match fields[4].as_str() {
        "symmetric" => true,
        "general" => false,
        other => return Err(parse_err(header_no, format!("unsupported symmetry '{other}'"))),
    };

    let (size_no, size_line) = loop {
        match lines.next() {
            Some((no, line)) => {
                let line = line?;
                let t = line.trim();
                if !t.is_empty() && !t.starts_with('%') {
                    break (no + 1, line);
                }
            }
            None => return Err(parse_err(1, "missing size line")),
        }
    };
    let dims: Vec<&str> = size_line.split_whitespace().collect();
    if dims.len() != 3 {
        return Err(parse_err(size_no, "size line must be 'rows cols nnz'"));
    }
    let nrows: usize = dims[0]
        .parse()
        .map_err(|_| parse_err(size_no, "bad row count"))?;
    let ncols: usize = dims[1]
        .parse()
        .map_err(|_| parse_err(size_no, "bad column count"))?;
    let nnz: usize = dims[2]
        .parse()
        .map_err(|_| parse_err(size_no, "bad entry count"))?;
    if nrows != ncols {
        return Err(parse_err(
            size_no,
            format!("graph matrix must be square, got {nrows}x{ncols}"),
        ));
    }

    let mut self_loops = 0usize;
    let mut read = 0usize;
    // unordered pair -> (forward sum, reverse sum, seen flags)
    let mut pairs: HashMap<(usize, usize), (f64, f64, bool, bool)> = HashMap::new();
    for (no, line) in &mut lines {
        let line = line?;
        let no = no + 1;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        let parts: Vec<&str> = t.split_whitespace().collect();
        let want = if pattern { 2 } else { 3 };
        if parts.len() != want {
            return Err(parse_err(no, format!("expected {want} fields, got {}", parts.len())));
        }
        let i: usize = parts[0].parse().map_err(|_| parse_err(no, "bad row index"))?;
        let j: usize = parts[1].parse().map_err(|_| parse_err(no, "bad column index"))?;
        if i == 0 || j == 0 || i > nrows || j > nrows {
            return Err(parse_err(no, format!("index ({i}, {j}) outside 1..={nrows}")));
        }
        let w = if pattern {
            1.0
        } else {
            parts[2]
                .parse::<f64>()
                .map_err(|_| parse_err(no, "bad value"))?
        };
        read += 1;
        let (u, v) = (i - 1, j - 1);
        if u == v {
            self_loops += 1;
            continue;
        }
        if w < 0.0 {
            return Err(parse_err(no, format!("negative weight {w} on edge ({u}, {v})")));
        }
        let key = (u.min(v), u.max(v));
        let slot = pairs.entry(key).or_insert((0.0, 0.0, false, false));
        if u < v {
            slot.0 += w;
            slot.2 = true;
        } else {
            slot.1 += w;
            slot.3 = true;
        }
    }
    if read != nnz {
        return Err(parse_err(
            size_no,
            format!("size line promises {nnz} entries, file has {read}"),
        ));
    }

    let mut edges: Vec<(usize, usize, f64)> = Vec::with_capacity(pairs.len());
    for (&(u, v), &(fw, rw, seen_f, seen_r)) in &pairs {
        let w = if symmetric {
            // symmetric storage holds one triangle; tolerate files that
            // nonetheless wrote both by summing everything for the pair
            fw + rw
        } else if seen_f && seen_r {
            let scale = fw.abs().max(rw.abs()).max(1.0);
            if (fw - rw).abs() > 1e-12 * scale {
                return Err(Error::Parse {
                    line: 0,
                    msg: format!(
                        "general file stores edge ({u}, {v}) with mismatched weights {fw} and {rw}"
                    ),
                });
            }
            fw
        } else {
            fw + rw
        };
        if w == 0.0 {
            continue;
        }
        edges.push((u, v, w));
    }
    let graph = Graph::new(nrows, edges)?;
    Ok(LoadedGraph {
        graph,
        self_loops_dropped: self_loops,
    })
}

/// Parses a `u v [w]` edge list.
pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<LoadedGraph> {
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    let mut max_id: Option<usize> = None;
    let mut self_loops = 0usize;
    for (no, line) in reader.lines().enumerate() {
        let line = line?;
        let no = no + 1;
        let t = match line.find('#') {
            Some(k) => line[..k].trim(),
            None => line.trim(),
        };
        if t.is_empty() {
            continue;
        }
        let parts: Vec<&str> = t.split_whitespace().collect();
        if parts.len() != 2 && parts.len() != 3 {
            return Err(parse_err(no, format!("expected 'u v [w]', got {} fields", parts.len())));
        }
        let u: usize = parts[0].parse().map_err(|_| parse_err(no, "bad vertex id"))?;
        let v: usize = parts[1].parse().map_err(|_| parse_err(no, "bad vertex id"))?;
        let w: f64 = if parts.len() == 3 {
            parts[2].parse().map_err(|_| parse_err(no, "bad weight"))?
        } else {
            1.0
        };
        max_id = Some(max_id.unwrap_or(0).max(u).max(v));
        if u == v {
            self_loops += 1;
            continue;
        }
        if !(w > 0.0) {
            return Err(parse_err(no, format!("nonpositive weight {w} on edge ({u}, {v})")));
        }
        edges.push((u, v, w));
    }
    let n = match max_id {
        Some(m) => m + 1,
        None => return Err(parse_err(1, "no edges in file")),
    };
    let graph = Graph::new(n, edges)?;
    Ok(LoadedGraph {
        graph,
        self_loops_dropped: self_loops,
    })
}

/// Writes a graph as an edge list that [`parse_edge_list`] reads back
/// verbatim. Weights use enough digits to round-trip exactly.
pub fn save_edge_list(g: &Graph, path: &Path) -> Result<()> {
    let mut f = File::create(path)?;
    writeln!(f, "# {} vertices, {} edges", g.num_vertices(), g.num_edges())?;
    for e in g.edges() {
        if e.w == 1.0 {
            writeln!(f, "{} {}", e.u, e.v)?;
        } else {
            writeln!(f, "{} {} {:?}", e.u, e.v, e.w)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn mm(content: &str) -> Result<LoadedGraph> {
        parse_matrix_market(Cursor::new(content))
    }

    fn el(content: &str) -> Result<LoadedGraph> {
        parse_edge_list(Cursor::new(content))
    }

    #[test]
    fn matrix_market_symmetric_path() {
        let loaded = mm("%%MatrixMarket matrix coordinate real symmetric\n3 3 2\n2 1 1.0\n3 2 1.0\n").unwrap();
        let g = loaded.graph;
        assert_eq!(g.num_vertices(), 3);
        assert_eq!(g.num_edges(), 2);
        assert_eq!(g.edges()[0].u, 0);
        assert_eq!(g.edges()[0].v, 1);
        assert_eq!(loaded.self_loops_dropped, 0);
    }

    #[test]
    fn matrix_market_pattern_and_comments() {
        let loaded = mm(
            "%%MatrixMarket matrix coordinate pattern symmetric\n% a comment\n3 3 3\n2 1\n3 1\n1 1\n",
        )
        .unwrap();
        assert_eq!(loaded.graph.num_edges(), 2);
        assert_eq!(loaded.self_loops_dropped, 1);
        assert_eq!(loaded.graph.edges()[0].w, 1.0);
    }

    #[test]
    fn matrix_market_general_both_triangles() {
        let loaded = mm(
            "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 2 3.0\n2 1 3.0\n",
        )
        .unwrap();
        assert_eq!(loaded.graph.num_edges(), 1);
        assert_eq!(loaded.graph.edges()[0].w, 3.0);
    }

    #[test]
    fn matrix_market_general_mismatch_is_an_error() {
        let r = mm("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 2 3.0\n2 1 4.0\n");
        assert!(r.is_err());
    }

    #[test]
    fn matrix_market_errors_carry_line_numbers() {
        let r = mm("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n1 x 1.0\n");
        match r {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn matrix_market_rejects_nonsquare_and_bad_header() {
        assert!(mm("%%MatrixMarket matrix coordinate real symmetric\n2 3 0\n").is_err());
        assert!(mm("%%MatrixMarket matrix array real general\n2 2 0\n").is_err());
        assert!(mm("hello\n").is_err());
    }

    #[test]
    fn matrix_market_rejects_negative_weight() {
        assert!(mm("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n2 1 -1.0\n").is_err());
    }

    #[test]
    fn matrix_market_entry_count_must_match() {
        assert!(mm("%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n2 1 1.0\n").is_err());
    }

    #[test]
    fn edge_list_with_comments_weights_and_loops() {
        let loaded = el("# header\n0 1\n1 2 2.5  # trailing comment\n3 3\n").unwrap();
        assert_eq!(loaded.graph.num_vertices(), 4);
        assert_eq!(loaded.graph.num_edges(), 2);
        assert_eq!(loaded.graph.edges()[1].w, 2.5);
        assert_eq!(loaded.self_loops_dropped, 1);
    }

    #[test]
    fn edge_list_duplicates_sum() {
        let loaded = el("0 1 1.0\n1 0 2.0\n").unwrap();
        assert_eq!(loaded.graph.num_edges(), 1);
        assert_eq!(loaded.graph.edges()[0].w, 3.0);
    }

    #[test]
    fn edge_list_bad_line_reports_position() {
        match el("0 1\n0 1 2 3\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn edge_list_without_edges_is_an_error() {
        for content in ["", "# comment only\n", "   \n"] {
            assert!(matches!(el(content), Err(Error::Parse { .. })), "{content:?}");
        }
    }

    #[test]
    fn edge_list_roundtrip_through_file() {
        let g = Graph::new(4, vec![(0, 1, 1.0), (1, 2, 0.125), (2, 3, 7.0)]).unwrap();
        let dir = std::env::temp_dir();
        let path = dir.join("graphmg_roundtrip_test.txt");
        save_edge_list(&g, &path).unwrap();
        let loaded = load_graph(&path, None).unwrap();
        std::fs::remove_file(&path).ok();
        assert_eq!(loaded.graph, g);
    }

    #[test]
    fn format_detection() {
        assert_eq!(detect_format(Path::new("a.mtx")), GraphFormat::MatrixMarket);
        assert_eq!(detect_format(Path::new("a.txt")), GraphFormat::EdgeList);
        assert_eq!(detect_format(Path::new("a")), GraphFormat::EdgeList);
    }
}
