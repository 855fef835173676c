//! The reweighted, indifferent VCL tree walked by the VCL adversary.
//!
//! Nodes are numbered in BFS order from 1 and node `k` carries `2^(k-1)`
//! points. A node with `s` points has `2^s` children, one per pattern, in
//! lexicographic pattern order. Only the first `K` nodes are materialized;
//! children with a larger index are virtual.
//!
//! A walk labels its own nodes with the patterns it chooses. Every other
//! node `v` is labeled by the first walk edge whose child `c` comes after
//! `v`: by default point `j` of `v` gets bit `j mod |e|` of the pattern `e`
//! on that edge. When that labeling is not realizable the builder searches
//! for one that is and stores it as an override. Either way the labels of
//! `v` depend only on the edge into `c`, which is what makes the tree
//! indifferent.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use super::dims::{shattered_children, vcl_depth};
use super::game::Pattern;
use crate::concepts::{HypothesisSpace, Label, Point};
use crate::error::{Error, Result};

/// Largest number of materialized nodes (node 5 carries 16 points).
pub const MAX_VCL_NODES: usize = 5;

/// Largest number of off-branch label bits searched when the default
/// labeling is not realizable.
const MAX_OVERRIDE_BITS: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VclNode {
    /// 1-based BFS index.
    pub index: usize,
    pub parent: Option<usize>,
    /// Pattern on the parent's points leading here.
    pub edge: Option<Pattern>,
    pub level: usize,
    pub points: Vec<Point>,
}

/// A root-to-leaf walk: each materialized node visited and the pattern
/// chosen there. The last pattern leads to a virtual child.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VclWalk {
    pub steps: Vec<(usize, Pattern)>,
}

#[derive(Clone, Debug)]
pub struct VclTree {
    space: HypothesisSpace,
    nodes: Vec<VclNode>,
    overrides: HashMap<(usize, Pattern), Vec<Vec<Label>>>,
}

fn node_size(k: usize) -> usize {
    1 << (k - 1)
}

/// Index of the first child of node `u`.
fn first_child(u: usize) -> u128 {
    2 + (1..u).map(|v| 1u128 << node_size(v)).sum::<u128>()
}

/// Number of nodes in the first `levels` levels of the unbounded tree.
pub fn nodes_for_levels(levels: usize) -> usize {
    let mut total = 0usize;
    let mut frontier = 1u128;
    for _ in 0..levels {
        let start = total as u128 + 1;
        let end = start + frontier;
        let next: u128 = (start..end)
            .map(|k| if k <= 7 { 1u128 << node_size(k as usize) } else { u128::MAX / 4 })
            .fold(0u128, |a, b| a.saturating_add(b));
        total = total.saturating_add(frontier.min(usize::MAX as u128) as usize);
        frontier = next;
        if total > 64 {
            break;
        }
    }
    total
}

/// Builds the tree with the first `levels` complete levels.
pub fn build_vcl_adversary_tree(space: &HypothesisSpace, levels: usize) -> Result<VclTree> {
    let nodes = nodes_for_levels(levels);
    if nodes > MAX_VCL_NODES {
        return Err(Error::size("VCL tree node count", nodes, MAX_VCL_NODES));
    }
    build_vcl_tree_nodes(space, nodes)
}

/// Builds the tree truncated to its first `count` BFS nodes.
pub fn build_vcl_tree_nodes(space: &HypothesisSpace, count: usize) -> Result<VclTree> {
    if count > MAX_VCL_NODES {
        return Err(Error::size("VCL tree node count", count, MAX_VCL_NODES));
    }
    let mut nodes: Vec<VclNode> = Vec::with_capacity(count);
    for k in 1..=count {
        let (parent, edge, level) = if k == 1 {
            (None, None, 0)
        } else {
            let p = (1..k)
                .find(|&u| {
                    let first = first_child(u);
                    (k as u128) >= first && (k as u128) < first + (1u128 << node_size(u))
                })
                .expect("every node has a parent");
            let bits = (k as u128 - first_child(p)) as u64;
            (Some(p), Some(Pattern::new(node_size(p), bits)?), nodes[p - 1].level + 1)
        };
        nodes.push(VclNode {
            index: k,
            parent,
            edge,
            level,
            points: Vec::new(),
        });
    }
    if let HypothesisSpace::Table(class) = space {
        let levels = nodes.iter().map(|n| n.level + 1).max().unwrap_or(0);
        let depth = vcl_depth(class, levels).map_or(0, |d| d.value());
        if depth < levels {
            return Err(Error::Infeasible(format!(
                "VCL depth {depth} is below the {levels} levels requested"
            )));
        }
    }
    choose_points(space, &mut nodes)?;
    let mut tree = VclTree {
        space: space.clone(),
        nodes,
        overrides: HashMap::new(),
    };
    if count > 0 && !tree.assign(1, &mut Vec::new())? {
        return Err(Error::Infeasible(
            "no realizable off-branch labeling exists for the chosen points".into(),
        ));
    }
    Ok(tree)
}

/// Lowest fresh points for every node such that the path to the node
/// shatters them.
fn choose_points(space: &HypothesisSpace, nodes: &mut [VclNode]) -> Result<()> {
    let n = space.domain().len();
    let mut used = vec![false; n];
    for k in 0..nodes.len() {
        let size = node_size(k + 1);
        let fresh: Vec<Point> = (0..n).filter(|&i| !used[i]).map(Point).collect();
        if fresh.len() < size {
            return Err(Error::Infeasible(format!(
                "node {} needs {size} fresh points, {} remain",
                k + 1,
                fresh.len()
            )));
        }
        let chosen = match space {
            HypothesisSpace::AllFunctions(_) => fresh[..size].to_vec(),
            HypothesisSpace::Table(class) => {
                let live = class.version_space(&path_pairs(nodes, k + 1))?;
                super::dims::combinations(fresh.len(), size)
                    .map(|c| c.iter().map(|i| fresh[i.0]).collect::<Vec<_>>())
                    .find(|pts| shattered_children(class, &live, pts).is_some())
                    .ok_or_else(|| {
                        Error::Infeasible(format!("no {size} fresh points are shattered at node {}", k + 1))
                    })?
            }
        };
        for x in &chosen {
            used[x.0] = true;
        }
        nodes[k].points = chosen;
    }
    Ok(())
}

/// Labels the path from the root to node `k` puts on its ancestors.
fn path_pairs(nodes: &[VclNode], k: usize) -> Vec<(Point, Label)> {
    let mut pairs = Vec::new();
    let mut cur = k;
    while let (Some(p), Some(e)) = (nodes[cur - 1].parent, nodes[cur - 1].edge) {
        pairs.extend(nodes[p - 1].points.iter().copied().zip(e.labels()));
        cur = p;
    }
    pairs
}

impl VclTree {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[VclNode] {
        &self.nodes
    }

    pub fn node(&self, k: usize) -> &VclNode {
        &self.nodes[k - 1]
    }

    pub fn space(&self) -> &HypothesisSpace {
        &self.space
    }

    /// Total number of points, `2^K - 1`.
    pub fn total_points(&self) -> usize {
        (1usize << self.nodes.len()) - 1
    }

    /// Every point in emission order: BFS order across nodes, domain order inside.
    pub fn points_in_order(&self) -> Vec<(usize, Point)> {
        self.nodes
            .iter()
            .flat_map(|n| n.points.iter().map(move |&x| (n.index, x)))
            .collect()
    }

    /// BFS index of the child of `u` along `q`; may exceed the node count.
    pub fn child(&self, u: usize, q: Pattern) -> u128 {
        first_child(u) + q.bits() as u128
    }

    fn default_labels(&self, v: usize, edge: Pattern) -> Vec<Label> {
        (0..self.node(v).points.len())
            .map(|j| edge.label(j % edge.len()))
            .collect()
    }

    /// Off-branch nodes decided by the edge `(u, q)`, with their labels.
    fn decided_by(&self, u: usize, q: Pattern) -> Vec<(usize, Vec<Label>)> {
        let c = self.child(u, q);
        let upper = (self.nodes.len() as u128 + 1).min(c) as usize;
        let nodes: Vec<usize> = (u + 1..upper).collect();
        match self.overrides.get(&(u, q)) {
            Some(labels) => nodes.into_iter().zip(labels.iter().cloned()).collect(),
            None => nodes.into_iter().map(|v| (v, self.default_labels(v, q))).collect(),
        }
    }

    /// Depth-first check over every walk, recording overrides where the
    /// default off-branch labeling is not realizable.
    fn assign(&mut self, u: usize, fixed: &mut Vec<(Point, Label)>) -> Result<bool> {
        let points = self.node(u).points.clone();
        for q in Pattern::all(points.len()) {
            let base = fixed.len();
            fixed.extend(points.iter().copied().zip(q.labels()));
            let c = self.child(u, q);
            let between: Vec<usize> = (u + 1..(self.nodes.len() as u128 + 1).min(c) as usize).collect();
            let ok = self.try_labels(u, q, c, &between, fixed)?;
            fixed.truncate(base);
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn try_labels(&mut self, u: usize, q: Pattern, c: u128, between: &[usize], fixed: &mut Vec<(Point, Label)>) -> Result<bool> {
        let preferred: Vec<Vec<Label>> = between.iter().map(|&v| self.default_labels(v, q)).collect();
        if self.descend(c, between, &preferred, fixed)? {
            return Ok(true);
        }
        let bits: usize = between.iter().map(|&v| self.node(v).points.len()).sum();
        if bits > MAX_OVERRIDE_BITS {
            return Ok(false);
        }
        for code in 0u64..1 << bits {
            let mut labels = Vec::with_capacity(between.len());
            let mut offset = 0;
            for &v in between {
                let len = self.node(v).points.len();
                labels.push((0..len).map(|j| Label::from_bit(code >> (offset + j) & 1 == 1)).collect::<Vec<_>>());
                offset += len;
            }
            if labels == preferred {
                continue;
            }
            if self.descend(c, between, &labels, fixed)? {
                self.overrides.insert((u, q), labels);
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn descend(&mut self, c: u128, between: &[usize], labels: &[Vec<Label>], fixed: &mut Vec<(Point, Label)>) -> Result<bool> {
        let base = fixed.len();
        for (&v, l) in between.iter().zip(labels) {
            fixed.extend(self.node(v).points.iter().copied().zip(l.iter().copied()));
        }
        let mut ok = self.space.is_realizable(fixed)?;
        if ok && c <= self.nodes.len() as u128 {
            ok = self.assign(c as usize, fixed)?;
        }
        fixed.truncate(base);
        Ok(ok)
    }

    /// Walk taking the pattern `choose(node, size)` at each visited node.
    pub fn walk_from(&self, mut choose: impl FnMut(usize, usize) -> Pattern) -> VclWalk {
        let mut steps = Vec::new();
        let mut u = 1u128;
        while u >= 1 && u <= self.nodes.len() as u128 {
            let node = u as usize;
            let q = choose(node, self.node(node).points.len());
            steps.push((node, q));
            u = self.child(node, q);
        }
        VclWalk { steps }
    }

    /// Every complete walk, in lexicographic order of choices.
    pub fn walks(&self) -> Vec<VclWalk> {
        let mut out = Vec::new();
        if !self.nodes.is_empty() {
            self.collect_walks(1, &mut Vec::new(), &mut out);
        }
        out
    }

    fn collect_walks(&self, u: usize, prefix: &mut Vec<(usize, Pattern)>, out: &mut Vec<VclWalk>) {
        for q in Pattern::all(self.node(u).points.len()) {
            prefix.push((u, q));
            let c = self.child(u, q);
            if c <= self.nodes.len() as u128 {
                self.collect_walks(c as usize, prefix, out);
            } else {
                out.push(VclWalk { steps: prefix.clone() });
            }
            prefix.pop();
        }
    }

    /// Labels of every node's points under `walk`, indexed by node.
    pub fn labeling(&self, walk: &VclWalk) -> Result<Vec<Vec<Label>>> {
        let mut labels: Vec<Option<Vec<Label>>> = vec![None; self.nodes.len()];
        for &(u, q) in &walk.steps {
            if u == 0 || u > self.nodes.len() || q.len() != self.node(u).points.len() {
                return Err(Error::State(format!("walk step at node {u} does not fit the tree")));
            }
            labels[u - 1] = Some(q.labels());
            for (v, l) in self.decided_by(u, q) {
                labels[v - 1] = Some(l);
            }
        }
        labels
            .into_iter()
            .enumerate()
            .map(|(i, l)| l.ok_or_else(|| Error::State(format!("walk leaves node {} unlabeled", i + 1))))
            .collect()
    }

    /// `2^k - 1` for every node `k` on the walk.
    pub fn boundaries(&self, walk: &VclWalk) -> Vec<usize> {
        walk.steps.iter().map(|&(u, _)| (1usize << u) - 1).collect()
    }

    pub fn on_path(walk: &VclWalk, k: usize) -> bool {
        walk.steps.iter().any(|&(u, _)| u == k)
    }

    /// Number of off-branch labelings the builder had to search for.
    pub fn override_count(&self) -> usize {
        self.overrides.len()
    }
}

/// All version-space bitsets realizing each node's path, for inspection.
pub fn path_version_spaces(tree: &VclTree) -> Result<Vec<Option<FixedBitSet>>> {
    let class = match tree.space() {
        HypothesisSpace::Table(c) => c,
        HypothesisSpace::AllFunctions(_) => return Ok(vec![None; tree.node_count()]),
    };
    (1..=tree.node_count())
        .map(|k| class.version_space(&path_pairs(&tree.nodes, k)).map(Some))
        .collect()
}
