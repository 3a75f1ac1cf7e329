//! Plain-text tree and edge-list formats.
//!
//! Tree file: the element count on the first data line, then `n`
//! whitespace-separated parent indices (`-1` for the root). Lines starting
//! with `#` are comments.
//!
//! ```text
//! # chain of three
//! 3
//! -1 0 1
//! ```
//!
//! Edge list: one `parent child` pair per line, same comment rule.

use std::fmt::Write as _;

use crate::poset::{Edge, EdgeSet, ElementId, TreePoset};

use super::BenchError;

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_error(line: usize, message: impl Into<String>) -> BenchError {
    BenchError::Parse {
        line,
        message: message.into(),
    }
}

pub fn parse_tree_file(text: &str) -> Result<TreePoset, BenchError> {
    let mut lines = data_lines(text);
    let (line_no, header) = lines
        .next()
        .ok_or_else(|| parse_error(0, "missing element count"))?;
    let n: usize = header
        .parse()
        .map_err(|_| parse_error(line_no, format!("bad element count {header:?}")))?;
    let mut parents = Vec::with_capacity(n);
    for (line_no, line) in lines {
        for token in line.split_whitespace() {
            let p: i64 = token
                .parse()
                .map_err(|_| parse_error(line_no, format!("bad parent index {token:?}")))?;
            parents.push(p);
        }
    }
    if parents.len() != n {
        return Err(parse_error(
            0,
            format!("expected {n} parent entries, found {}", parents.len()),
        ));
    }
    Ok(TreePoset::from_signed_parents(&parents)?)
}

pub fn format_tree_file(tree: &TreePoset) -> String {
    let mut out = format!("{}\n", tree.len());
    let parents: Vec<String> = tree.signed_parents().iter().map(i64::to_string).collect();
    out.push_str(&parents.join(" "));
    out.push('\n');
    out
}

pub fn parse_edge_list(text: &str) -> Result<EdgeSet, BenchError> {
    let mut edges = Vec::new();
    for (line_no, line) in data_lines(text) {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [parent, child] = fields[..] else {
            return Err(parse_error(line_no, "expected `parent child`"));
        };
        let id = |s: &str| {
            s.parse::<u32>()
                .map(ElementId::new)
                .map_err(|_| parse_error(line_no, format!("bad element index {s:?}")))
        };
        edges.push(Edge::new(id(parent)?, id(child)?));
    }
    Ok(EdgeSet::from_edges(edges)?)
}

/// One `parent child` line per edge, in child order.
pub fn format_edge_list(edges: &EdgeSet) -> String {
    let mut out = String::with_capacity(edges.len() * 12);
    for e in edges {
        let _ = writeln!(out, "{e}");
    }
    out
}
