//! Exact counting of center sets on unit-weight graphs given by a
//! clique-width expression.

pub mod solver;
pub mod state;
pub mod table;

pub use solver::{
    annotate_liveness, check_cw_input, reconstruct_center_cw, solve_cw_count, solve_cw_count_with, union_naive,
    union_tables, union_transform, CwCountResult, LivenessMap, UnionMode,
};
pub use state::{LabelState, StateSpace};
pub use table::{naive_forward_line, CwTable};
