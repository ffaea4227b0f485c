//! The exact treewidth algorithm.

use super::engine::{run_engine, EngineConfig, EngineOutcome, JoinMode};
use super::labels::ExactLabels;
use crate::error::{KrcError, Result};
use crate::graph::{verify_center, CenterSet, Graph};
use crate::witness::nice::{make_nice, NiceTreeDecomposition};
use crate::witness::td::heuristic_decomposition;

/// Options of [`solve_tw_exact_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ExactOptions {
    /// Join strategy.
    pub join: JoinMode,
}

fn check_input(g: &Graph, ntd: &NiceTreeDecomposition) -> Result<()> {
    if let Some(a) = g.arcs().iter().find(|a| a.weight == 0) {
        return Err(KrcError::ZeroWeight { tail: a.tail, head: a.head });
    }
    ntd.validate(g)
}

/// Runs the exact program with labels `0..=r` and cost cap `cap`.
pub fn run_exact(g: &Graph, ntd: &NiceTreeDecomposition, r: u64, cap: usize, join: JoinMode) -> Result<EngineOutcome> {
    check_input(g, ntd)?;
    let cap = u32::try_from(cap.min(g.n())).unwrap_or(u32::MAX - 1);
    let config = EngineConfig { join, ..EngineConfig::with_cap(cap) };
    run_engine(g, ntd, &ExactLabels::new(r), &config)
}

/// Decides whether a `(k, r)`-center exists and returns one of minimum size.
pub fn solve_tw_exact(g: &Graph, ntd: &NiceTreeDecomposition, k: usize, r: u64) -> Result<Option<CenterSet>> {
    solve_tw_exact_with(g, ntd, k, r, &ExactOptions::default())
}

/// [`solve_tw_exact`] with explicit options.
pub fn solve_tw_exact_with(
    g: &Graph,
    ntd: &NiceTreeDecomposition,
    k: usize,
    r: u64,
    opts: &ExactOptions,
) -> Result<Option<CenterSet>> {
    let out = run_exact(g, ntd, r, k, opts.join)?;
    let Some(zeros) = out.zeros() else {
        return Ok(None);
    };
    let set = CenterSet::new(zeros).with_radius(r);
    let rep = verify_center(g, &set, r)?;
    if !rep.covered || set.len() > k {
        return Err(KrcError::Internal("exact treewidth labeling does not verify".into()));
    }
    Ok(Some(set))
}

/// Minimum number of centers for radius `r`, or `None` when the relevant
/// vertices cannot all be covered.
pub fn tw_min_centers(g: &Graph, ntd: &NiceTreeDecomposition, r: u64) -> Result<Option<usize>> {
    Ok(run_exact(g, ntd, r, g.n(), JoinMode::Naive)?.cost.map(|c| c as usize))
}

/// [`solve_tw_exact`] on a min-degree heuristic decomposition.
pub fn solve_tw_auto(g: &Graph, k: usize, r: u64) -> Result<Option<CenterSet>> {
    let ntd = make_nice(&heuristic_decomposition(g));
    solve_tw_exact(g, &ntd, k, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witness::td::TreeDecomposition;

    fn path(n: usize, w: u64) -> Graph {
        let mut g = Graph::new_undirected(n);
        for i in 0..n - 1 {
            g.add_edge(i, i + 1, w).unwrap();
        }
        g
    }

    fn path_td(n: usize) -> NiceTreeDecomposition {
        let bags: Vec<Vec<usize>> = (0..n - 1).map(|i| vec![i, i + 1]).collect();
        let edges: Vec<(usize, usize)> = (0..n - 2).map(|i| (i, i + 1)).collect();
        make_nice(&TreeDecomposition::from_edges(bags, &edges, 0).unwrap())
    }

    #[test]
    fn p4_radius_two() {
        let g = path(4, 1);
        let c = solve_tw_exact(&g, &path_td(4), 1, 2).unwrap().unwrap();
        assert!(c.vertices == vec![1] || c.vertices == vec![2]);
        assert!(solve_tw_exact(&g, &path_td(4), 1, 1).unwrap().is_none());
    }

    #[test]
    fn weighted_triangle() {
        let mut g = Graph::new_undirected(3);
        g.add_edge(0, 1, 5).unwrap();
        g.add_edge(1, 2, 5).unwrap();
        g.add_edge(0, 2, 5).unwrap();
        let ntd = make_nice(&TreeDecomposition::single_bag(vec![0, 1, 2]));
        assert!(solve_tw_exact(&g, &ntd, 1, 4).unwrap().is_none());
        assert!(solve_tw_exact(&g, &ntd, 1, 5).unwrap().is_some());
        assert_eq!(tw_min_centers(&g, &ntd, 4).unwrap(), Some(3));
    }

    #[test]
    fn irrelevant_vertices_need_no_cover() {
        let mut g = path(5, 1);
        g.set_irrelevant(0).unwrap();
        g.set_irrelevant(4).unwrap();
        let c = solve_tw_exact(&g, &path_td(5), 1, 1).unwrap().unwrap();
        assert_eq!(c.vertices, vec![2]);
        let mut h = path(3, 1);
        h.set_irrelevant(1).unwrap();
        assert!(solve_tw_exact(&h, &path_td(3), 1, 2).unwrap().is_some());
        assert!(solve_tw_exact(&h, &path_td(3), 1, 1).unwrap().is_none());
    }

    #[test]
    fn fast_join_agrees() {
        let mut g = Graph::new_undirected(6);
        for (u, v) in [(0, 1), (0, 2), (0, 3), (3, 4), (3, 5)] {
            g.add_edge(u, v, 1).unwrap();
        }
        let ntd = make_nice(&heuristic_decomposition(&g));
        for k in 1..=3 {
            for r in 0..=3 {
                let a = solve_tw_exact(&g, &ntd, k, r).unwrap();
                let b = solve_tw_exact_with(&g, &ntd, k, r, &ExactOptions { join: JoinMode::Fast }).unwrap();
                assert_eq!(a.is_some(), b.is_some());
            }
        }
    }
}
