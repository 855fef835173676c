//! Text renderings of witness trees.
//!
//! The tree file holds one node per line:
//! `bfs_index parent edge_pattern point_id...`, with parent `0` and edge `-`
//! at the root.

use std::fmt::Write as _;

use super::littlestone::LittlestoneTree;
use super::vcl::VclTree;
use crate::concepts::Domain;
use crate::error::{Error, Result};

/// One parsed line of a tree file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeLine {
    pub index: u64,
    pub parent: u64,
    pub edge: Option<String>,
    pub points: Vec<String>,
}

fn line(out: &mut String, index: u64, parent: u64, edge: Option<String>, ids: &[&str]) {
    let _ = writeln!(out, "{index} {parent} {} {}", edge.as_deref().unwrap_or("-"), ids.join(" "));
}

pub fn littlestone_tree_file(tree: &LittlestoneTree, domain: &Domain) -> String {
    let mut out = String::new();
    for (index, parent, edge, point) in tree.nodes() {
        line(&mut out, index, parent, edge.map(|l| l.to_string()), &[domain.id(point)]);
    }
    out
}

pub fn vcl_tree_file(tree: &VclTree) -> String {
    let domain = tree.space().domain();
    let mut out = String::new();
    for node in tree.nodes() {
        let ids: Vec<&str> = node.points.iter().map(|&x| domain.id(x)).collect();
        line(
            &mut out,
            node.index as u64,
            node.parent.unwrap_or(0) as u64,
            node.edge.map(|e| e.to_string()),
            &ids,
        );
    }
    out
}

pub fn parse_tree_file(text: &str) -> Result<Vec<TreeLine>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let raw = raw.trim();
        if raw.is_empty() || raw.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = raw.split_whitespace().collect();
        if fields.len() < 4 {
            return Err(Error::Parse {
                line: line_no,
                msg: "expected index, parent, edge and at least one point".into(),
            });
        }
        let num = |s: &str| {
            s.parse::<u64>().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("invalid number {s:?}"),
            })
        };
        out.push(TreeLine {
            index: num(fields[0])?,
            parent: num(fields[1])?,
            edge: (fields[2] != "-").then(|| fields[2].to_string()),
            points: fields[3..].iter().map(|s| s.to_string()).collect(),
        });
    }
    Ok(out)
}

/// Indented outline, one node per line, children below their parent.
pub fn littlestone_tree_text(tree: &LittlestoneTree, domain: &Domain) -> String {
    let mut out = String::new();
    for (index, _, edge, point) in tree.nodes() {
        let depth = 63 - index.leading_zeros() as usize;
        let _ = writeln!(
            out,
            "{}{}{}",
            "  ".repeat(depth),
            edge.map_or(String::new(), |l| format!("[{l}] ")),
            domain.id(point)
        );
    }
    out
}

pub fn vcl_tree_text(tree: &VclTree) -> String {
    let domain = tree.space().domain();
    let mut out = String::new();
    write_vcl_subtree(tree, domain, 1, &mut out);
    out
}

fn write_vcl_subtree(tree: &VclTree, domain: &Domain, k: usize, out: &mut String) {
    if k > tree.node_count() {
        return;
    }
    let node = tree.node(k);
    let ids: Vec<&str> = node.points.iter().map(|&x| domain.id(x)).collect();
    let _ = writeln!(
        out,
        "{}{}#{} {{{}}}",
        "  ".repeat(node.level),
        node.edge.map_or(String::new(), |e| format!("[{e}] ")),
        node.index,
        ids.join(" ")
    );
    for child in tree.nodes().iter().filter(|c| c.parent == Some(k)) {
        write_vcl_subtree(tree, domain, child.index, out);
    }
}
