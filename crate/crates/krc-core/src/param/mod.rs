//! Solvers parameterized by vertex cover and by tree-depth.

pub mod td;
pub mod vc;

pub use td::{diameter_bound, solve_td, tree_depth_upper_bound, TdResult};
pub use vc::{
    compute_vertex_cover, compute_vertex_cover_with_limit, solve_vc, VcResult, VcStats, DEFAULT_BRANCH_LIMIT,
};
