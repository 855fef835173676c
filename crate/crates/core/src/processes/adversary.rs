//! The two tree-walk adversaries. Labels come from a dedicated seed stream,
//! so they never depend on what a learner predicts.

use rand::Rng;

use super::model::ProcessOracle;
use super::rng::{rng_for, stream};
use crate::concepts::{full_mask, HypothesisSpace, Label, Point, RealizabilityTracker};
use crate::error::{Error, Result};
use crate::trees::{bfs_index, LittlestoneTree, Pattern, VclTree};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdversaryRow {
    pub t: usize,
    pub point: Point,
    pub y: Label,
    /// BFS index of the tree node emitting the point, when it fits in 64 bits.
    pub node: Option<u64>,
    pub on_path: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdversaryTrace {
    pub rows: Vec<AdversaryRow>,
    /// Edge patterns chosen by the walk, root first.
    pub path: Vec<Pattern>,
    /// Round counts at which a walk node is complete (`2^k - 1` for node `k`).
    pub boundaries: Vec<usize>,
}

impl AdversaryTrace {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn points(&self) -> Vec<Point> {
        self.rows.iter().map(|r| r.point).collect()
    }

    pub fn pairs(&self) -> Vec<(Point, Label)> {
        self.rows.iter().map(|r| (r.point, r.y)).collect()
    }
}

/// Random walk of length `rounds` down a Littlestone tree with uniform labels.
pub fn littlestone_adversary(
    tree: &LittlestoneTree,
    space: &HypothesisSpace,
    rounds: usize,
    seed: u64,
) -> Result<AdversaryTrace> {
    if rounds > tree.depth() {
        return Err(Error::Infeasible(format!(
            "{rounds} rounds need a witness of depth {rounds}, got {}",
            tree.depth()
        )));
    }
    let mut rng = rng_for(seed, &[stream::LABELS]);
    let mut tracker = RealizabilityTracker::new(space);
    let mut path = Vec::with_capacity(rounds);
    let mut rows = Vec::with_capacity(rounds);
    for t in 1..=rounds {
        let x = tree.point_at(&path)?;
        let y = Label::from_bit(rng.gen::<bool>());
        tracker.push(x, y).map_err(|e| Error::Invariant(format!("walk left the class: {e}")))?;
        rows.push(AdversaryRow {
            t,
            point: x,
            y,
            node: bfs_index(&path),
            on_path: true,
        });
        path.push(y);
    }
    Ok(AdversaryTrace {
        rows,
        path: path.iter().map(|&l| Pattern::from_labels(&[l])).collect(),
        boundaries: Vec::new(),
    })
}

/// Uniformly random walk through a VCL tree, emitting every node's points.
pub fn vcl_adversary(tree: &VclTree, seed: u64) -> Result<AdversaryTrace> {
    let mut rng = rng_for(seed, &[stream::WALK]);
    let walk = tree.walk_from(|_, len| {
        let bits: u64 = rng.gen();
        Pattern::new(len, bits & full_mask(len)).expect("masked to length")
    });
    let labels = tree.labeling(&walk)?;
    let mut tracker = RealizabilityTracker::new(tree.space());
    let mut rows = Vec::with_capacity(tree.total_points());
    for node in tree.nodes() {
        let on_path = VclTree::on_path(&walk, node.index);
        for (j, &x) in node.points.iter().enumerate() {
            let y = labels[node.index - 1][j];
            tracker
                .push(x, y)
                .map_err(|e| Error::Invariant(format!("VCL walk left the class: {e}")))?;
            rows.push(AdversaryRow {
                t: rows.len() + 1,
                point: x,
                y,
                node: Some(node.index as u64),
                on_path,
            });
        }
    }
    Ok(AdversaryTrace {
        rows,
        path: walk.steps.iter().map(|s| s.1).collect(),
        boundaries: tree.boundaries(&walk),
    })
}

/// Rollouts for a Littlestone walk: the path so far is read off the points,
/// the remaining labels are drawn uniformly.
#[derive(Clone, Debug)]
pub struct LittlestoneWalkOracle {
    tree: LittlestoneTree,
}

impl LittlestoneWalkOracle {
    pub fn new(tree: LittlestoneTree) -> Self {
        LittlestoneWalkOracle { tree }
    }
}

impl ProcessOracle for LittlestoneWalkOracle {
    fn rollout(&self, history: &[Point], horizon: usize, seed: u64) -> Result<Vec<Point>> {
        let depth = self.tree.depth();
        let mut path: Vec<Label> = Vec::new();
        for next in history.iter().skip(1) {
            if path.len() + 1 >= depth {
                break;
            }
            let zero = [path.clone(), vec![Label::Zero]].concat();
            let label = if self.tree.point_at(&zero)? == *next {
                Label::Zero
            } else {
                Label::One
            };
            path.push(label);
        }
        let mut rng = rng_for(seed, &[stream::ROLLOUT]);
        let mut out = Vec::with_capacity(horizon);
        while out.len() < horizon && path.len() + 1 < depth {
            path.push(Label::from_bit(rng.gen::<bool>()));
            out.push(self.tree.point_at(&path)?);
        }
        Ok(out)
    }

    fn is_deterministic(&self) -> bool {
        matches!(self.tree, LittlestoneTree::Levelwise(_))
    }
}
