//! Data processes, conditional rollouts, and the tree-walk adversaries.

mod adversary;
mod model;
pub mod rng;

pub use adversary::{littlestone_adversary, vcl_adversary, AdversaryRow, AdversaryTrace, LittlestoneWalkOracle};
pub use model::{visited_sets, ProcessKind, ProcessModel, ProcessOracle};
