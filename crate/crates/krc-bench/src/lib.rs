//! Shared fixtures for the benchmarks.

use krc_core::generators::{gen_random_cw_expression, gen_random_instance};
use krc_core::witness::{heuristic_decomposition, make_nice, CwExpression, NiceTreeDecomposition, TreeDecomposition};
use krc_core::Graph;

/// A connected random graph together with a heuristic decomposition.
pub struct TwFixture {
    /// The graph.
    pub graph: Graph,
    /// Its decomposition.
    pub td: TreeDecomposition,
    /// The nice form of `td`.
    pub ntd: NiceTreeDecomposition,
}

/// Builds a sparse connected graph with `n` vertices and weights up to `max_weight`.
pub fn tw_fixture(n: usize, max_weight: u64, seed: u64) -> TwFixture {
    let m = (n - 1 + n / 4).min(n * (n - 1) / 2);
    let graph = gen_random_instance(n, m, max_weight, seed).expect("valid generator parameters");
    let td = heuristic_decomposition(&graph);
    let ntd = make_nice(&td);
    TwFixture { graph, td, ntd }
}

/// A random unit-weight expression of width at most `cw` and its graph.
pub fn cw_fixture(n: usize, cw: usize, seed: u64) -> (CwExpression, Graph) {
    let e = gen_random_cw_expression(n, cw, 1, seed).expect("valid generator parameters");
    let g = krc_core::witness::eval_cw_expression(&e).expect("generated expressions evaluate");
    (e, g)
}

/// A path on the cover `0..vc` with one pendant leaf per cover vertex.
pub fn caterpillar(vc: usize) -> (Graph, Vec<usize>) {
    let mut g = Graph::new_undirected(2 * vc);
    for i in 0..vc {
        g.add_edge(i, vc + i, 1).expect("vertices in range");
        if i + 1 < vc {
            g.add_edge(i, i + 1, 1).expect("vertices in range");
        }
    }
    (g, (0..vc).collect())
}
