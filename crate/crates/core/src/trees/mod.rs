//! Dimensions, the VCL game, and witness trees.

mod dims;
mod format;
mod game;
mod littlestone;
mod vcl;

pub use dims::{littlestone_dimension, littlestone_given, vc_dimension, vcl_depth, Depth, LittlestoneSolver};
pub use format::{
    littlestone_tree_file, littlestone_tree_text, parse_tree_file, vcl_tree_file, vcl_tree_text, TreeLine,
};
pub use game::{
    greedy_pattern, induced_partial_class, induced_partial_class_with, winning_strategy, GameRecord, Pattern,
    MAX_INDUCED_DOMAIN,
};
pub use littlestone::{bfs_index, littlestone_witness, LittlestoneTree, MAX_EXPLICIT_DEPTH};
pub use vcl::{
    build_vcl_adversary_tree, build_vcl_tree_nodes, nodes_for_levels, path_version_spaces, VclNode, VclTree,
    VclWalk, MAX_VCL_NODES,
};

