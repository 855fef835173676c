use fixedbitset::FixedBitSet;

use super::dims::{split, LittlestoneSolver};
use crate::concepts::{HypothesisSpace, Label, Point};
use crate::error::{Error, Result};

/// Deepest explicit witness tree built from a table.
pub const MAX_EXPLICIT_DEPTH: usize = 20;

/// A complete binary mistake tree of finite depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LittlestoneTree {
    /// Every node at depth `t` carries the same point `points[t]`.
    Levelwise(Vec<Point>),
    /// Heap order: node `i` has children `2i+1` (edge 0) and `2i+2` (edge 1).
    Explicit { depth: usize, points: Vec<Point> },
}

impl LittlestoneTree {
    pub fn depth(&self) -> usize {
        match self {
            LittlestoneTree::Levelwise(points) => points.len(),
            LittlestoneTree::Explicit { depth, .. } => *depth,
        }
    }

    /// Point at the node reached from the root by `path`.
    pub fn point_at(&self, path: &[Label]) -> Result<Point> {
        if path.len() >= self.depth() {
            return Err(Error::State(format!(
                "path of length {} leaves a tree of depth {}",
                path.len(),
                self.depth()
            )));
        }
        Ok(match self {
            LittlestoneTree::Levelwise(points) => points[path.len()],
            LittlestoneTree::Explicit { points, .. } => points[heap_index(path)],
        })
    }

    /// Checks that every root path is consistent with `space`.
    pub fn verify(&self, space: &HypothesisSpace) -> Result<bool> {
        match self {
            LittlestoneTree::Levelwise(points) => {
                let distinct: std::collections::HashSet<_> = points.iter().collect();
                if distinct.len() != points.len() {
                    return Ok(false);
                }
                match space {
                    HypothesisSpace::AllFunctions(d) => {
                        for &x in points {
                            d.check(x)?;
                        }
                        Ok(true)
                    }
                    HypothesisSpace::Table(_) => self.verify_paths(space),
                }
            }
            LittlestoneTree::Explicit { .. } => self.verify_paths(space),
        }
    }

    fn verify_paths(&self, space: &HypothesisSpace) -> Result<bool> {
        let d = self.depth();
        if d > MAX_EXPLICIT_DEPTH {
            return Err(Error::size("verified tree depth", d, MAX_EXPLICIT_DEPTH));
        }
        for code in 0u64..1 << d {
            let path: Vec<Label> = (0..d).map(|i| Label::from_bit(code >> i & 1 == 1)).collect();
            let mut pairs = Vec::with_capacity(d);
            for t in 0..d {
                pairs.push((self.point_at(&path[..t])?, path[t]));
            }
            if !space.is_realizable(&pairs)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `(bfs_index, parent, edge, point)` for every node, root first. Indices
    /// are 1-based heap indices.
    pub fn nodes(&self) -> Vec<(u64, u64, Option<Label>, Point)> {
        let d = self.depth();
        let mut out = Vec::new();
        let count = if d >= 64 { u64::MAX } else { (1u64 << d) - 1 };
        let mut i = 1u64;
        while i <= count && out.len() < 1 << MAX_EXPLICIT_DEPTH {
            let level = 63 - i.leading_zeros() as usize;
            let path: Vec<Label> = (0..level)
                .rev()
                .map(|b| Label::from_bit(i >> b & 1 == 1))
                .collect();
            let point = self.point_at(&path).expect("index within depth");
            let edge = path.last().copied();
            out.push((i, i / 2, edge, point));
            i += 1;
        }
        out
    }
}

fn heap_index(path: &[Label]) -> usize {
    path.iter().fold(0usize, |i, l| 2 * i + 1 + l.bit() as usize)
}

/// 1-based BFS index of the node reached by `path`, if it fits in 64 bits.
pub fn bfs_index(path: &[Label]) -> Option<u64> {
    if path.len() >= 63 {
        return None;
    }
    Some(path.iter().fold(1u64, |i, l| 2 * i + l.bit() as u64))
}

/// A witness tree of the given depth for `space`.
///
/// For the all-functions space the tree asks the first `depth` points in
/// order. For tables it is found by game search, taking the lowest point at
/// each node that keeps enough depth on both sides.
pub fn littlestone_witness(space: &HypothesisSpace, depth: usize) -> Result<LittlestoneTree> {
    match space {
        HypothesisSpace::AllFunctions(d) => {
            if depth > d.len() {
                return Err(Error::Infeasible(format!(
                    "a depth-{depth} tree needs {depth} points, the domain has {}",
                    d.len()
                )));
            }
            Ok(LittlestoneTree::Levelwise((0..depth).map(Point).collect()))
        }
        HypothesisSpace::Table(class) => {
            if depth > MAX_EXPLICIT_DEPTH {
                return Err(Error::size("explicit tree depth", depth, MAX_EXPLICIT_DEPTH));
            }
            let mut solver = LittlestoneSolver::new(class.clone());
            let all = class.everything();
            match solver.dimension(&all, depth) {
                Some(d) if d >= depth => {}
                found => {
                    return Err(Error::Infeasible(format!(
                        "Littlestone dimension {} is below the requested depth {depth}",
                        found.map_or("undefined".to_string(), |d| d.to_string())
                    )))
                }
            }
            let mut points = vec![Point(0); (1usize << depth) - 1];
            fill(&mut solver, &all, depth, 0, &mut points)?;
            Ok(LittlestoneTree::Explicit { depth, points })
        }
    }
}

fn fill(solver: &mut LittlestoneSolver, set: &FixedBitSet, remaining: usize, node: usize, out: &mut [Point]) -> Result<()> {
    if remaining == 0 {
        return Ok(());
    }
    let class = solver.class().clone();
    for x in class.domain().points() {
        let (zero, one) = split(&class, set, x);
        let deep = |s: &mut LittlestoneSolver, v: &FixedBitSet| s.dimension(v, remaining - 1).is_some_and(|d| d >= remaining - 1);
        if deep(solver, &zero) && deep(solver, &one) {
            out[node] = x;
            fill(solver, &zero, remaining - 1, 2 * node + 1, out)?;
            fill(solver, &one, remaining - 1, 2 * node + 2, out)?;
            return Ok(());
        }
    }
    Err(Error::Invariant("game search promised a deeper subtree".into()))
}
