//! Structural witnesses: tree decompositions, nice decompositions and
//! clique-width expressions, with validators and transformations.

pub mod cw;
pub mod metric;
pub mod nice;
pub mod td;
pub mod transform;

pub use cw::{check_cw_expression, eval_cw_expression, path_expression, CwBuilder, CwExpression, CwNode};
pub use metric::{metric_closure_bags, rescale_positive, MetricClosure, RescaleInfo, Rescaled};
pub use nice::{make_nice, NiceKind, NiceNode, NiceTreeDecomposition};
pub use td::{
    check_tree_decomposition, heuristic_decomposition, rebalance, require_valid, TdReport, TdViolation,
    TreeDecomposition,
};
pub use transform::{cw_to_tw_transform, small_class_decomposition, Insertion, TransformConfig, TransformResult};

/// Height of a rooted decomposition (a leaf bag has height 1).
pub fn decomposition_height(td: &TreeDecomposition) -> usize {
    td.height()
}
