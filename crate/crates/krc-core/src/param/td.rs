//! The tree-depth algorithm: a component whose diameter is at most `r` needs
//! a single center, every other component is solved by the exact treewidth
//! program on the given decomposition restricted to it.

use serde::{Deserialize, Serialize};

use crate::error::{KrcError, Result};
use crate::graph::{component_diameters, verify_center, weak_components, CenterSet, Graph};
use crate::tw::{run_exact, JoinMode};
use crate::witness::nice::{make_nice, NiceTreeDecomposition};
use crate::witness::td::TreeDecomposition;

/// Result of [`solve_td`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TdResult {
    /// A center set of size at most `k`, if one exists.
    pub centers: Option<CenterSet>,
    /// Components settled by the diameter rule.
    pub trivial_components: usize,
    /// Components settled by the treewidth program.
    pub dp_components: usize,
    /// Diagnostics about the supplied tree-depth bound.
    pub warnings: Vec<String>,
}

/// Largest diameter of a connected graph of tree-depth `td`: `2^{td+1} − 2`.
pub fn diameter_bound(td: usize) -> u128 {
    if td >= 126 {
        u128::MAX
    } else {
        (1u128 << (td + 1)) - 2
    }
}

/// An upper bound on the tree-depth of `g` (a single vertex has depth 0),
/// by recursive elimination: a tree loses the middle vertex of a longest
/// path, any other component a vertex of maximum degree.
pub fn tree_depth_upper_bound(g: &Graph) -> usize {
    let adj = g.undirected_neighbors();
    let alive = vec![true; g.n()];
    let all: Vec<usize> = (0..g.n()).collect();
    components_within(&adj, &alive, &all).iter().map(|c| eliminate(&adj, &mut alive.clone(), c)).max().unwrap_or(0)
}

fn components_within(adj: &[Vec<usize>], alive: &[bool], vs: &[usize]) -> Vec<Vec<usize>> {
    let mut seen: std::collections::HashSet<usize> = std::collections::HashSet::new();
    let mut out = Vec::new();
    for &s in vs {
        if !alive[s] || !seen.insert(s) {
            continue;
        }
        let mut comp = vec![s];
        let mut i = 0;
        while i < comp.len() {
            let v = comp[i];
            i += 1;
            for &u in &adj[v] {
                if alive[u] && seen.insert(u) {
                    comp.push(u);
                }
            }
        }
        out.push(comp);
    }
    out
}

fn bfs_far(adj: &[Vec<usize>], alive: &[bool], s: usize) -> (usize, Vec<(usize, usize)>) {
    let mut parent = std::collections::HashMap::new();
    parent.insert(s, s);
    let mut queue = std::collections::VecDeque::from([s]);
    let mut last = s;
    while let Some(v) = queue.pop_front() {
        last = v;
        for &u in &adj[v] {
            if alive[u] && !parent.contains_key(&u) {
                parent.insert(u, v);
                queue.push_back(u);
            }
        }
    }
    (last, parent.into_iter().collect())
}

fn eliminate(adj: &[Vec<usize>], alive: &mut Vec<bool>, comp: &[usize]) -> usize {
    if comp.len() == 1 {
        return 0;
    }
    let edges: usize = comp.iter().map(|&v| adj[v].iter().filter(|&&u| alive[u]).count()).sum::<usize>() / 2;
    let pick = if edges + 1 == comp.len() {
        let (x, _) = bfs_far(adj, alive, comp[0]);
        let (y, parents) = bfs_far(adj, alive, x);
        let parent: std::collections::HashMap<usize, usize> = parents.into_iter().collect();
        let mut path = vec![y];
        while *path.last().expect("non-empty") != x {
            path.push(parent[path.last().expect("non-empty")]);
        }
        path[path.len() / 2]
    } else {
        *comp
            .iter()
            .max_by_key(|&&v| (adj[v].iter().filter(|&&u| alive[u]).count(), std::cmp::Reverse(v)))
            .expect("non-empty")
    };
    alive[pick] = false;
    let rest: Vec<usize> = comp.iter().copied().filter(|&v| v != pick).collect();
    let parts = components_within(adj, alive, &rest);
    let depth = parts.iter().map(|c| eliminate(adj, alive, c)).max().unwrap_or(0);
    alive[pick] = true;
    1 + depth
}

/// Restricts `td` to `members` and renames vertices to their positions.
fn restrict(td: &TreeDecomposition, members: &[usize]) -> TreeDecomposition {
    let bags = td.bags.iter().map(|bag| bag.iter().filter_map(|v| members.binary_search(v).ok()).collect()).collect();
    TreeDecomposition { bags, parent: td.parent.clone(), root: td.root }
}

/// Solves unweighted `(k, r)`-center component by component.
///
/// `td_bound` is an optional tree-depth bound of `g`; it is used only to
/// report when `r` exceeds the diameter bound of that tree-depth while some
/// component still needed the dynamic program.
pub fn solve_td(g: &Graph, ntd: &NiceTreeDecomposition, td_bound: Option<usize>, k: usize, r: u64) -> Result<TdResult> {
    if !g.is_unit_weight() {
        return Err(KrcError::Unsupported("the tree-depth algorithm needs a unit-weight graph".into()));
    }
    ntd.validate(g)?;
    let td = ntd.to_tree_decomposition();
    let diameters = component_diameters(g);
    let mut res = TdResult { centers: None, trivial_components: 0, dp_components: 0, warnings: Vec::new() };
    let mut all = Vec::new();
    for (members, diam) in weak_components(g).into_iter().zip(diameters) {
        if diam.is_some_and(|d| r >= d) {
            res.trivial_components += 1;
            all.extend(members.iter().copied().find(|&v| !g.is_irrelevant(v)));
            continue;
        }
        res.dp_components += 1;
        let h = g.induced(&members);
        let local = if td.bags.is_empty() {
            NiceTreeDecomposition { nodes: Vec::new() }
        } else {
            make_nice(&restrict(&td, &members))
        };
        let out = run_exact(&h, &local, r, k, JoinMode::Naive)?;
        let Some(zeros) = out.zeros() else {
            return Ok(res);
        };
        all.extend(zeros.into_iter().map(|i| members[i]));
    }
    if let Some(t) = td_bound {
        if u128::from(r) > diameter_bound(t) && res.dp_components > 0 {
            res.warnings.push(format!(
                "radius {r} exceeds the diameter bound {} of tree-depth {t}, yet {} component(s) have larger diameter",
                diameter_bound(t),
                res.dp_components
            ));
        }
    }
    if all.len() > k {
        return Ok(res);
    }
    let set = CenterSet::new(all).with_radius(r);
    if !verify_center(g, &set, r)?.covered {
        return Err(KrcError::Internal("tree-depth solution does not verify".into()));
    }
    res.centers = Some(set);
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witness::td::heuristic_decomposition;

    fn path(n: usize) -> Graph {
        let mut g = Graph::new_undirected(n);
        for i in 0..n - 1 {
            g.add_edge(i, i + 1, 1).unwrap();
        }
        g
    }

    fn solve(g: &Graph, td: Option<usize>, k: usize, r: u64) -> TdResult {
        let ntd = make_nice(&heuristic_decomposition(g));
        solve_td(g, &ntd, td, k, r).unwrap()
    }

    #[test]
    fn p7_examples() {
        let g = path(7);
        let a = solve(&g, None, 1, 6);
        assert_eq!(a.trivial_components, 1);
        assert_eq!(a.centers.unwrap().len(), 1);
        let b = solve(&g, None, 1, 3);
        assert_eq!(b.dp_components, 1);
        assert_eq!(b.centers.unwrap().vertices, vec![3]);
        assert!(solve(&g, None, 1, 2).centers.is_none());
    }

    #[test]
    fn components_add_up() {
        let mut g = Graph::new_undirected(8);
        for (u, v) in [(0, 1), (1, 2), (3, 4), (4, 5), (5, 6), (6, 7)] {
            g.add_edge(u, v, 1).unwrap();
        }
        let res = solve(&g, None, 2, 2);
        assert_eq!(res.trivial_components, 1);
        assert_eq!(res.dp_components, 1);
        assert_eq!(res.centers.unwrap().len(), 2);
        assert!(solve(&g, None, 1, 2).centers.is_none());
    }

    #[test]
    fn warns_when_bound_is_wrong() {
        let g = path(7);
        assert!(solve(&g, Some(1), 1, 3).warnings.len() == 1);
        assert!(solve(&g, Some(3), 1, 3).warnings.is_empty());
        assert_eq!(diameter_bound(2), 6);
    }

    #[test]
    fn tree_depth_bounds() {
        assert_eq!(tree_depth_upper_bound(&path(1)), 0);
        assert_eq!(tree_depth_upper_bound(&path(3)), 1);
        assert_eq!(tree_depth_upper_bound(&path(7)), 2);
        assert_eq!(tree_depth_upper_bound(&path(8)), 3);
        let mut star = Graph::new_undirected(6);
        for i in 1..6 {
            star.add_edge(0, i, 1).unwrap();
        }
        assert_eq!(tree_depth_upper_bound(&star), 1);
    }

    #[test]
    fn rejects_invalid_decomposition() {
        let g = path(3);
        let ntd = make_nice(&TreeDecomposition::single_bag(vec![0, 1]));
        assert!(matches!(solve_td(&g, &ntd, None, 1, 1), Err(KrcError::InvalidDecomposition(_))));
    }
}
