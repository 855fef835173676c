//! Simulation laboratory for universal online learning on finite concept classes.
//!
//! The crate is split by concern:
//!
//! * [`concepts`]: hypotheses, partial hypotheses, concept classes and the
//!   shattering weight used by the partial-concept learner.
//! * [`trees`]: VC / Littlestone / VCL dimensions, the VCL game and its greedy
//!   winning strategy, and the tree witnesses used by the adversaries.
//! * [`learners`]: SOA, the partial-concept weight learner, the VCL-game
//!   learner, the mistake-set expert construction, weighted majority and Squint.
//! * [`processes`]: data processes with conditional rollouts and the two
//!   tree-walk adversaries.
//! * [`harness`]: trial runner, condition checkers, configuration and emitters.

pub mod concepts;
pub mod error;
pub mod harness;
pub mod learners;
pub mod processes;
pub mod trees;

pub use error::{Error, Result};
