use std::collections::HashMap;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use super::{ConceptClass, Domain, Label, LabeledPrefix, Point};
use crate::error::{Error, Result};

/// A concept class as seen by learners and adversaries.
///
/// `Table` is an extensional [`ConceptClass`]. `AllFunctions` stands for every
/// total labeling of its domain without materializing `2^n` tables, which is
/// what the tree-walk adversaries need on domains of a few dozen points.
#[derive(Clone, Debug)]
pub enum HypothesisSpace {
    Table(Arc<ConceptClass>),
    AllFunctions(Arc<Domain>),
}

impl HypothesisSpace {
    pub fn all_functions(n: usize) -> Result<Self> {
        Ok(HypothesisSpace::AllFunctions(Arc::new(Domain::numbered(n)?)))
    }

    pub fn domain(&self) -> &Domain {
        match self {
            HypothesisSpace::Table(c) => c.domain(),
            HypothesisSpace::AllFunctions(d) => d,
        }
    }

    pub fn table(&self) -> Option<&Arc<ConceptClass>> {
        match self {
            HypothesisSpace::Table(c) => Some(c),
            HypothesisSpace::AllFunctions(_) => None,
        }
    }

    pub fn is_realizable(&self, pairs: &[(Point, Label)]) -> Result<bool> {
        match self {
            HypothesisSpace::Table(c) => super::is_realizable(c, &LabeledPrefix::new(pairs.to_vec())),
            HypothesisSpace::AllFunctions(d) => {
                let mut seen = std::collections::HashMap::new();
                for &(x, y) in pairs {
                    d.check(x)?;
                    if *seen.entry(x).or_insert(y) != y {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }
}

/// Incremental prefix realizability check for a labeled stream.
#[derive(Clone, Debug)]
pub struct RealizabilityTracker {
    space: HypothesisSpace,
    live: Option<FixedBitSet>,
    seen: HashMap<Point, Label>,
    rounds: usize,
}

impl RealizabilityTracker {
    pub fn new(space: &HypothesisSpace) -> Self {
        RealizabilityTracker {
            space: space.clone(),
            live: space.table().map(|c| c.everything()),
            seen: HashMap::new(),
            rounds: 0,
        }
    }

    /// Adds `(x, y)` and fails if the prefix stops being realizable.
    pub fn push(&mut self, x: Point, y: Label) -> Result<()> {
        self.space.domain().check(x)?;
        self.rounds += 1;
        let ok = match (&self.space, &mut self.live) {
            (HypothesisSpace::Table(c), Some(live)) => {
                c.restrict_set(live, x, y);
                live.count_ones(..) > 0
            }
            _ => *self.seen.entry(x).or_insert(y) == y,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Realizability(format!(
                "prefix of length {} labels point {} with {y} and no hypothesis agrees",
                self.rounds,
                self.space.domain().id(x)
            )))
        }
    }

    pub fn version_space(&self) -> Option<&FixedBitSet> {
        self.live.as_ref()
    }
}

impl From<ConceptClass> for HypothesisSpace {
    fn from(c: ConceptClass) -> Self {
        HypothesisSpace::Table(Arc::new(c))
    }
}
