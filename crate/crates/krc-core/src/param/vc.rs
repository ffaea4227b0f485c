//! The vertex-cover algorithm: guess how the cover splits into centers,
//! vertices at distance `< r` and vertices at distance exactly `r`, then
//! complete with a set cover over the independent side.

use serde::{Deserialize, Serialize};

use crate::error::{KrcError, Result};
use crate::graph::{shortest_paths, split_components, verify_center, CenterSet, Graph, INF};
use crate::oracle::{set_cover_min, SetCoverInstance, DEFAULT_LIMIT};
use crate::tw::solve_tw_auto;

/// Default cap on branching nodes in [`compute_vertex_cover`].
pub const DEFAULT_BRANCH_LIMIT: u64 = 5_000_000;

/// A minimum vertex cover by branching on a vertex of maximum degree
/// (either it is in the cover, or all its neighbours are).
pub fn compute_vertex_cover(g: &Graph) -> Result<Vec<usize>> {
    compute_vertex_cover_with_limit(g, DEFAULT_BRANCH_LIMIT)
}

/// [`compute_vertex_cover`] with an explicit branching limit.
pub fn compute_vertex_cover_with_limit(g: &Graph, limit: u64) -> Result<Vec<usize>> {
    let n = g.n();
    let adj: Vec<Vec<usize>> = g.undirected_neighbors();
    let mut best: Vec<usize> = (0..n).filter(|&v| !adj[v].is_empty()).collect();
    let mut in_cover = vec![false; n];
    let mut removed = vec![false; n];
    let mut nodes = 0u64;
    branch(&adj, &mut in_cover, &mut removed, 0, &mut best, &mut nodes, limit)?;
    best.sort_unstable();
    Ok(best)
}

fn branch(
    adj: &[Vec<usize>],
    in_cover: &mut [bool],
    removed: &mut [bool],
    size: usize,
    best: &mut Vec<usize>,
    nodes: &mut u64,
    limit: u64,
) -> Result<()> {
    *nodes += 1;
    if *nodes > limit {
        return Err(KrcError::LimitExceeded {
            what: "vertex cover branching",
            size: *nodes as u128,
            limit: limit as u128,
        });
    }
    if size >= best.len() {
        return Ok(());
    }
    let degree = |v: usize, removed: &[bool]| adj[v].iter().filter(|&&u| !removed[u]).count();
    let pick = (0..adj.len()).filter(|&v| !removed[v]).max_by_key(|&v| (degree(v, removed), std::cmp::Reverse(v)));
    let Some(v) = pick.filter(|&v| degree(v, removed) > 0) else {
        *best = (0..adj.len()).filter(|&v| in_cover[v]).collect();
        return Ok(());
    };
    removed[v] = true;
    in_cover[v] = true;
    branch(adj, in_cover, removed, size + 1, best, nodes, limit)?;
    in_cover[v] = false;
    let nbrs: Vec<usize> = adj[v].iter().copied().filter(|&u| !removed[u]).collect();
    for &u in &nbrs {
        removed[u] = true;
        in_cover[u] = true;
    }
    branch(adj, in_cover, removed, size + nbrs.len(), best, nodes, limit)?;
    for &u in &nbrs {
        removed[u] = false;
        in_cover[u] = false;
    }
    removed[v] = false;
    Ok(())
}

/// Counters of [`solve_vc`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct VcStats {
    /// Partitions `C = S ∪ R ∪ Q` examined.
    pub partitions: u128,
    /// Nominal work: `Σ 2^{|R ∪ Q|}` over all partitions.
    pub work: u128,
    /// Partitions rejected by the two consistency checks.
    pub rejected: u128,
    /// Components handled by the exact treewidth program (`r = 1`).
    pub fallback_components: usize,
}

/// Result of [`solve_vc`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VcResult {
    /// A center set of size at most `k`, if one exists.
    pub centers: Option<CenterSet>,
    /// Instrumentation.
    pub stats: VcStats,
}

fn check_cover(g: &Graph, cover: &[usize]) -> Result<Vec<bool>> {
    let mut inc = vec![false; g.n()];
    for &c in cover {
        if c >= g.n() {
            return Err(KrcError::VertexOutOfRange { vertex: c, n: g.n() });
        }
        inc[c] = true;
    }
    if let Some(a) = g.arcs().iter().find(|a| !inc[a.tail] && !inc[a.head]) {
        return Err(KrcError::NotAVertexCover(a.tail, a.head));
    }
    Ok(inc)
}

/// Solves unweighted `(k, r)`-center given a vertex cover `cover`.
///
/// Each connected component is solved separately. For `r ≥ 2` all `3^{|C|}`
/// partitions of the component's cover are examined and the smallest
/// `S ∪ Z` is kept; `r = 1` uses the exact treewidth program and `r = 0`
/// needs every vertex as a center.
pub fn solve_vc(g: &Graph, cover: &[usize], k: usize, r: u64) -> Result<VcResult> {
    if !g.is_unit_weight() || !g.is_symmetric() {
        return Err(KrcError::Unsupported("the vertex-cover algorithm needs an undirected unit-weight graph".into()));
    }
    if g.has_irrelevant() {
        return Err(KrcError::Unsupported("the vertex-cover algorithm does not support irrelevant vertices".into()));
    }
    let inc = check_cover(g, cover)?;
    let mut stats = VcStats::default();
    let mut all = Vec::new();
    for (h, members) in split_components(g) {
        let local_cover: Vec<usize> = (0..members.len()).filter(|&i| inc[members[i]]).collect();
        let chosen = if members.len() == 1 {
            Some(vec![0])
        } else if r == 0 {
            Some((0..members.len()).collect())
        } else if r == 1 {
            stats.fallback_components += 1;
            solve_component_min_tw(&h)?
        } else {
            solve_component(&h, &local_cover, r, &mut stats)?
        };
        let Some(c) = chosen else {
            return Ok(VcResult { centers: None, stats });
        };
        all.extend(c.into_iter().map(|i| members[i]));
    }
    if all.len() > k {
        return Ok(VcResult { centers: None, stats });
    }
    let set = CenterSet::new(all).with_radius(r);
    if !verify_center(g, &set, r)?.covered {
        return Err(KrcError::Internal("vertex-cover solution does not verify".into()));
    }
    Ok(VcResult { centers: Some(set), stats })
}

fn solve_component_min_tw(h: &Graph) -> Result<Option<Vec<usize>>> {
    for k in 1..=h.n() {
        if let Some(c) = solve_tw_auto(h, k, 1)? {
            return Ok(Some(c.vertices));
        }
    }
    Ok(None)
}

/// Minimum `S ∪ Z` over all partitions of `cover` on a connected graph.
fn solve_component(h: &Graph, cover: &[usize], r: u64, stats: &mut VcStats) -> Result<Option<Vec<usize>>> {
    let n = h.n();
    let mut in_c = vec![false; n];
    for &c in cover {
        in_c[c] = true;
    }
    let indep: Vec<usize> = (0..n).filter(|&v| !in_c[v]).collect();
    let adj = h.undirected_neighbors();
    let dist: Vec<Vec<u64>> = (0..n).map(|v| shortest_paths(h, v)).collect();
    let c = cover.len();
    let mut best: Option<Vec<usize>> = None;
    let total = 3usize.pow(c as u32);
    let mut role = vec![0u8; c];
    for code in 0..total {
        let mut x = code;
        for slot in role.iter_mut() {
            *slot = (x % 3) as u8;
            x /= 3;
        }
        let s: Vec<usize> = (0..c).filter(|&i| role[i] == 0).map(|i| cover[i]).collect();
        let rs: Vec<usize> = (0..c).filter(|&i| role[i] == 1).map(|i| cover[i]).collect();
        let qs: Vec<usize> = (0..c).filter(|&i| role[i] == 2).map(|i| cover[i]).collect();
        stats.partitions += 1;
        stats.work += 1u128 << (rs.len() + qs.len());
        let ds = |u: usize| s.iter().map(|&x| dist[x][u]).min().unwrap_or(INF);
        let bad_q = qs.iter().any(|&q| ds(q) < r);
        let mut in_q = vec![false; n];
        for &q in &qs {
            in_q[q] = true;
        }
        let bad_i = indep.iter().any(|&v| adj[v].iter().all(|&u| in_q[u]));
        if bad_q || bad_i {
            stats.rejected += 1;
            continue;
        }
        let mut universe: Vec<usize> = rs.iter().copied().filter(|&u| ds(u) >= r).collect();
        universe.extend(qs.iter().copied().filter(|&u| ds(u) > r));
        let sets: Vec<(usize, Vec<usize>)> = indep
            .iter()
            .map(|&v| {
                let mut el: Vec<usize> = rs.iter().copied().filter(|&u| dist[v][u] < r).collect();
                el.extend(qs.iter().copied().filter(|&u| dist[v][u] <= r));
                (v, el)
            })
            .collect();
        let (size, owners) = set_cover_min(&SetCoverInstance { universe, sets }, DEFAULT_LIMIT)?;
        if size.is_none() {
            continue;
        }
        let mut sol = s.clone();
        sol.extend(owners);
        sol.sort_unstable();
        if best.as_ref().is_none_or(|b| sol.len() < b.len()) {
            best = Some(sol);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(leaves: usize) -> Graph {
        let mut g = Graph::new_undirected(leaves + 1);
        for i in 1..=leaves {
            g.add_edge(0, i, 1).unwrap();
        }
        g
    }

    fn path(n: usize) -> Graph {
        let mut g = Graph::new_undirected(n);
        for i in 0..n - 1 {
            g.add_edge(i, i + 1, 1).unwrap();
        }
        g
    }

    #[test]
    fn vertex_cover_examples() {
        assert_eq!(compute_vertex_cover(&star(4)).unwrap(), vec![0]);
        assert_eq!(compute_vertex_cover(&path(5)).unwrap().len(), 2);
        assert!(compute_vertex_cover(&Graph::new_undirected(3)).unwrap().is_empty());
    }

    #[test]
    fn star_and_path() {
        let res = solve_vc(&star(4), &[0], 1, 1).unwrap();
        assert_eq!(res.centers.unwrap().vertices, vec![0]);
        let res = solve_vc(&path(5), &[1, 3], 1, 2).unwrap();
        assert_eq!(res.centers.unwrap().vertices, vec![2]);
        assert_eq!(res.stats.partitions, 9);
        assert_eq!(res.stats.work, 25);
        assert!(solve_vc(&path(5), &[1, 3], 1, 1).unwrap().centers.is_none());
    }

    #[test]
    fn rejects_non_cover() {
        assert!(matches!(solve_vc(&path(4), &[1], 1, 2), Err(KrcError::NotAVertexCover(..))));
    }

    #[test]
    fn radius_one_star_with_leaf_cover() {
        let g = star(3);
        let res = solve_vc(&g, &[1, 2, 3], 1, 1).unwrap();
        assert_eq!(res.centers.unwrap().vertices, vec![0]);
    }
}
