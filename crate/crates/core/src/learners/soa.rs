use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use fixedbitset::FixedBitSet;

use super::OnlineLearner;
use crate::concepts::{ConceptClass, HypothesisSpace, Label, Point};
use crate::error::{Error, Result};
use crate::trees::LittlestoneSolver;

/// A Littlestone solver shared by several learners over the same class.
pub type SharedSolver = Arc<Mutex<LittlestoneSolver>>;

pub fn shared_solver(class: Arc<ConceptClass>) -> SharedSolver {
    Arc::new(Mutex::new(LittlestoneSolver::new(class)))
}

/// The standard optimal algorithm: predict the label whose version space
/// keeps the larger Littlestone dimension, ties to 0.
///
/// In lenient mode an inconsistent label empties the version space and the
/// learner predicts 0 from then on instead of failing. Experts need this,
/// since they feed back their own (possibly flipped) predictions.
#[derive(Clone, Debug)]
pub struct Soa {
    space: HypothesisSpace,
    state: State,
    lenient: bool,
}

#[derive(Clone, Debug)]
enum State {
    Table { solver: SharedSolver, live: FixedBitSet },
    AllFunctions { labeled: HashMap<Point, Label>, broken: bool },
}

impl Soa {
    pub fn new(space: &HypothesisSpace) -> Self {
        let state = match space {
            HypothesisSpace::Table(class) => State::Table {
                solver: shared_solver(class.clone()),
                live: class.everything(),
            },
            HypothesisSpace::AllFunctions(_) => State::AllFunctions {
                labeled: HashMap::new(),
                broken: false,
            },
        };
        Soa {
            space: space.clone(),
            state,
            lenient: false,
        }
    }

    /// A learner reusing `solver`'s memo table; `solver` must belong to `class`.
    pub fn with_solver(class: Arc<ConceptClass>, solver: SharedSolver) -> Self {
        Soa {
            state: State::Table {
                solver,
                live: class.everything(),
            },
            space: HypothesisSpace::Table(class),
            lenient: false,
        }
    }

    pub fn lenient(mut self) -> Self {
        self.lenient = true;
        self
    }

    pub fn version_space(&self) -> Option<&FixedBitSet> {
        match &self.state {
            State::Table { live, .. } => Some(live),
            State::AllFunctions { .. } => None,
        }
    }
}

/// SOA's choice at `x` for the version space `live` of `solver`'s class.
pub fn soa_choice(solver: &mut LittlestoneSolver, live: &FixedBitSet, x: Point) -> Label {
    let class = solver.class().clone();
    let cap = class.domain().len() + 1;
    let side = |solver: &mut LittlestoneSolver, y: Label| {
        let mut set = live.clone();
        class.restrict_set(&mut set, x, y);
        solver.dimension(&set, cap)
    };
    let zero = side(solver, Label::Zero);
    let one = side(solver, Label::One);
    if one > zero {
        Label::One
    } else {
        Label::Zero
    }
}

impl OnlineLearner for Soa {
    fn name(&self) -> &str {
        "soa"
    }

    fn predict(&mut self, x: Point) -> Result<Label> {
        self.space.domain().check(x)?;
        Ok(match &mut self.state {
            State::Table { solver, live } => {
                if live.count_ones(..) == 0 {
                    Label::Zero
                } else {
                    let mut solver = solver.lock().map_err(|_| Error::State("solver lock poisoned".into()))?;
                    soa_choice(&mut solver, live, x)
                }
            }
            // unseen points leave equal dimension on both sides
            State::AllFunctions { labeled, broken } => {
                if *broken {
                    Label::Zero
                } else {
                    labeled.get(&x).copied().unwrap_or(Label::Zero)
                }
            }
        })
    }

    fn observe(&mut self, x: Point, y: Label) -> Result<()> {
        self.space.domain().check(x)?;
        let consistent = match (&mut self.state, &self.space) {
            (State::Table { live, .. }, HypothesisSpace::Table(class)) => {
                let was_empty = live.count_ones(..) == 0;
                class.restrict_set(live, x, y);
                was_empty || live.count_ones(..) > 0
            }
            (State::AllFunctions { labeled, broken }, _) => {
                if *labeled.entry(x).or_insert(y) != y {
                    *broken = true;
                }
                !*broken
            }
            _ => unreachable!("state matches the space"),
        };
        if !consistent && !self.lenient {
            return Err(Error::Realizability(format!(
                "label {y} at point {} leaves no consistent hypothesis",
                self.space.domain().id(x)
            )));
        }
        Ok(())
    }
}
