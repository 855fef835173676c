//! Online learners for binary labels.
//!
//! Every learner follows the same protocol: `predict(x)` then `observe(x, y)`
//! for the same point, once per round.

mod aggregate;
pub mod experts;
mod game;
mod soa;
mod weight;

pub use aggregate::{
    ln_prior, squint_decide, wm_bound, wm_predict, wm_step, RegretSignal, Squint, SquintConfig, SquintState,
    WeightVector, WeightedMajority, ETA_GRID,
};
pub use experts::{Expert, ExpertSet, LearnerFactory};
pub use game::{GameLearner, DEFAULT_HISTORY_CAP};
pub use soa::{shared_solver, soa_choice, SharedSolver, Soa};
pub use weight::{batch_end, check_reports, BatchReport, WeightConfig, WeightLearner, DEFAULT_ROLLOUTS};

use crate::concepts::{Label, Point};
use crate::error::Result;

pub trait OnlineLearner: Send {
    fn name(&self) -> &str;
    fn predict(&mut self, x: Point) -> Result<Label>;
    fn observe(&mut self, x: Point, y: Label) -> Result<()>;

    /// Re-asserts the learner's own guarantees after a run.
    fn check(&self) -> Result<()> {
        Ok(())
    }
}

/// Always predicts the same label.
#[derive(Clone, Copy, Debug)]
pub struct Constant(pub Label);

impl OnlineLearner for Constant {
    fn name(&self) -> &str {
        "constant"
    }

    fn predict(&mut self, _x: Point) -> Result<Label> {
        Ok(self.0)
    }

    fn observe(&mut self, _x: Point, _y: Label) -> Result<()> {
        Ok(())
    }
}
