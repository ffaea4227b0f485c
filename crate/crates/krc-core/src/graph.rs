//! Weighted directed graphs, shortest paths and the center/labeling
//! verification layer.
//!
//! A [`Graph`] stores arcs `(tail, head, weight)`. Undirected inputs are
//! stored as pairs of opposite arcs of equal weight. Coverage is always
//! measured from a center towards a vertex.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{KrcError, Result};

/// Distance value used for unreachable vertices.
pub const INF: u64 = u64::MAX;

/// A weighted arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Arc {
    /// Tail vertex.
    pub tail: usize,
    /// Head vertex.
    pub head: usize,
    /// Non-negative integer weight.
    pub weight: u64,
}

/// A weighted directed multigraph with an optional set of irrelevant vertices.
///
/// Irrelevant vertices need not be covered and may not be chosen as centers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    arcs: Vec<Arc>,
    irrelevant: Vec<bool>,
    undirected: bool,
    zero_weights_allowed: bool,
    out: Vec<Vec<(usize, u64)>>,
    inn: Vec<Vec<(usize, u64)>>,
}

impl Graph {
    /// Creates an edgeless directed graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        Graph {
            n,
            arcs: Vec::new(),
            irrelevant: vec![false; n],
            undirected: false,
            zero_weights_allowed: false,
            out: vec![Vec::new(); n],
            inn: vec![Vec::new(); n],
        }
    }

    /// Creates an edgeless undirected graph on `n` vertices.
    ///
    /// Edges added with [`Graph::add_edge`] are stored as two opposite arcs.
    pub fn new_undirected(n: usize) -> Self {
        let mut g = Graph::new(n);
        g.undirected = true;
        g
    }

    /// Marks the graph as admitting zero-weight arcs.
    pub fn allow_zero_weights(&mut self) {
        self.zero_weights_allowed = true;
    }

    /// Clears the zero-weight marker; fails if a zero-weight arc is present.
    pub fn clear_zero_marker(&mut self) -> Result<()> {
        if let Some(a) = self.arcs.iter().find(|a| a.weight == 0) {
            return Err(KrcError::ZeroWeight { tail: a.tail, head: a.head });
        }
        self.zero_weights_allowed = false;
        Ok(())
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            Err(KrcError::VertexOutOfRange { vertex: v, n: self.n })
        } else {
            Ok(())
        }
    }

    fn push_arc(&mut self, tail: usize, head: usize, weight: u64) -> Result<()> {
        self.check_vertex(tail)?;
        self.check_vertex(head)?;
        if weight == 0 && !self.zero_weights_allowed {
            return Err(KrcError::ZeroWeight { tail, head });
        }
        self.arcs.push(Arc { tail, head, weight });
        self.out[tail].push((head, weight));
        self.inn[head].push((tail, weight));
        Ok(())
    }

    /// Adds a directed arc. Fails on undirected graphs.
    pub fn add_arc(&mut self, tail: usize, head: usize, weight: u64) -> Result<()> {
        if self.undirected {
            return Err(KrcError::Unsupported("add_arc on an undirected graph; use add_edge".into()));
        }
        self.push_arc(tail, head, weight)
    }

    /// Adds an undirected edge as two opposite arcs of equal weight.
    pub fn add_edge(&mut self, u: usize, v: usize, weight: u64) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        self.push_arc(u, v, weight)?;
        self.push_arc(v, u, weight)
    }

    /// Marks vertex `v` as irrelevant.
    pub fn set_irrelevant(&mut self, v: usize) -> Result<()> {
        self.check_vertex(v)?;
        self.irrelevant[v] = true;
        Ok(())
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.n
    }

    /// All arcs in insertion order.
    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    /// Number of arcs.
    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    /// Whether the graph was built as undirected.
    pub fn is_undirected(&self) -> bool {
        self.undirected
    }

    /// Whether zero-weight arcs are admitted.
    pub fn zero_weights_allowed(&self) -> bool {
        self.zero_weights_allowed
    }

    /// Out-neighbours of `v` with arc weights.
    pub fn out_arcs(&self, v: usize) -> &[(usize, u64)] {
        &self.out[v]
    }

    /// In-neighbours of `v` with arc weights.
    pub fn in_arcs(&self, v: usize) -> &[(usize, u64)] {
        &self.inn[v]
    }

    /// Whether `v` is irrelevant.
    pub fn is_irrelevant(&self, v: usize) -> bool {
        self.irrelevant[v]
    }

    /// Irrelevant vertices in increasing order.
    pub fn irrelevant_vertices(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.irrelevant[v]).collect()
    }

    /// Relevant vertices in increasing order.
    pub fn relevant_vertices(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| !self.irrelevant[v]).collect()
    }

    /// Whether some vertex is irrelevant.
    pub fn has_irrelevant(&self) -> bool {
        self.irrelevant.iter().any(|&b| b)
    }

    /// Whether every arc has weight 1.
    pub fn is_unit_weight(&self) -> bool {
        self.arcs.iter().all(|a| a.weight == 1)
    }

    /// Whether some arc has weight 0.
    pub fn has_zero_weight(&self) -> bool {
        self.arcs.iter().any(|a| a.weight == 0)
    }

    /// Whether every arc `(u,v,w)` has a reverse arc `(v,u,w)`.
    pub fn is_symmetric(&self) -> bool {
        let mut fwd: Vec<(usize, usize, u64)> = self.arcs.iter().map(|a| (a.tail, a.head, a.weight)).collect();
        let mut bwd: Vec<(usize, usize, u64)> = self.arcs.iter().map(|a| (a.head, a.tail, a.weight)).collect();
        fwd.sort_unstable();
        bwd.sort_unstable();
        fwd == bwd
    }

    /// Minimum weight of an arc `u → v`, if any.
    pub fn min_arc_weight(&self, u: usize, v: usize) -> Option<u64> {
        self.out[u].iter().filter(|&&(h, _)| h == v).map(|&(_, w)| w).min()
    }

    /// Undirected simple adjacency (loops removed, parallel arcs merged).
    pub fn undirected_neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for a in &self.arcs {
            if a.tail != a.head {
                adj[a.tail].push(a.head);
                adj[a.head].push(a.tail);
            }
        }
        for l in &mut adj {
            l.sort_unstable();
            l.dedup();
        }
        adj
    }

    /// Returns a copy with every arc weight replaced by `f(weight)`.
    ///
    /// The copy admits zero weights iff `allow_zero` is set.
    pub fn map_weights(&self, allow_zero: bool, f: impl Fn(u64) -> u64) -> Result<Graph> {
        let mut g = Graph::new(self.n);
        g.zero_weights_allowed = allow_zero;
        for a in &self.arcs {
            g.push_arc(a.tail, a.head, f(a.weight))?;
        }
        g.undirected = self.undirected;
        g.irrelevant = self.irrelevant.clone();
        Ok(g)
    }

    /// A copy that is flagged directed, so that single arcs may be added.
    pub fn to_directed(&self) -> Graph {
        let mut g = self.clone();
        g.undirected = false;
        g
    }

    /// Appends a new isolated relevant vertex and returns its id.
    pub fn add_vertex(&mut self) -> usize {
        self.n += 1;
        self.irrelevant.push(false);
        self.out.push(Vec::new());
        self.inn.push(Vec::new());
        self.n - 1
    }

    /// Subgraph induced by `vertices` (in the given order), with irrelevant
    /// flags and markers preserved. Vertex `i` of the result is `vertices[i]`.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut g = Graph::new(vertices.len());
        g.zero_weights_allowed = self.zero_weights_allowed;
        for a in &self.arcs {
            let (t, h) = (local[a.tail], local[a.head]);
            if t != usize::MAX && h != usize::MAX {
                g.arcs.push(Arc { tail: t, head: h, weight: a.weight });
                g.out[t].push((h, a.weight));
                g.inn[h].push((t, a.weight));
            }
        }
        g.undirected = self.undirected;
        for (i, &v) in vertices.iter().enumerate() {
            g.irrelevant[i] = self.irrelevant[v];
        }
        g
    }
}

/// A set of centers with an optional declared radius.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CenterSet {
    /// Center vertices, sorted and without duplicates.
    pub vertices: Vec<usize>,
    /// Radius the producer claims, if any.
    pub declared_radius: Option<u64>,
}

impl CenterSet {
    /// Builds a center set from arbitrary vertex ids (sorted, deduplicated).
    pub fn new(mut vertices: Vec<usize>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        CenterSet { vertices, declared_radius: None }
    }

    /// Sets the declared radius.
    pub fn with_radius(mut self, r: u64) -> Self {
        self.declared_radius = Some(r);
        self
    }

    /// Number of centers.
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    /// Whether there are no centers.
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// A distance labeling `dl: V → [0, r]`.
///
/// Irrelevant vertices may carry [`DistanceLabeling::TOP`], meaning that the
/// vertex is not certified and certifies nobody.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceLabeling {
    /// Label per vertex.
    pub values: Vec<u64>,
}

impl DistanceLabeling {
    /// Label value reserved for uncertified irrelevant vertices.
    pub const TOP: u64 = u64::MAX;

    /// Vertices labelled 0.
    pub fn zeros(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&v| self.values[v] == 0).collect()
    }
}

/// Outcome of [`verify_center`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageReport {
    /// Whether every relevant vertex is within the radius.
    pub covered: bool,
    /// Largest distance from the centers to a relevant vertex (`None` = ∞).
    pub max_distance: Option<u64>,
    /// Relevant vertices beyond the radius with their distance (`None` = ∞).
    pub uncovered: Vec<(usize, Option<u64>)>,
}

/// Exact single-source shortest-path distances; unreachable vertices get [`INF`].
pub fn shortest_paths(g: &Graph, source: usize) -> Vec<u64> {
    multi_source_distances(g, &[source])
}

/// Distances from the nearest vertex of `sources`; unreachable vertices get [`INF`].
pub fn multi_source_distances(g: &Graph, sources: &[usize]) -> Vec<u64> {
    let mut dist = vec![INF; g.n()];
    let mut heap = BinaryHeap::new();
    for &s in sources {
        if dist[s] != 0 {
            dist[s] = 0;
            heap.push(Reverse((0u64, s)));
        }
    }
    while let Some(Reverse((d, v))) = heap.pop() {
        if d > dist[v] {
            continue;
        }
        for &(h, w) in g.out_arcs(v) {
            let nd = d.saturating_add(w);
            if nd < dist[h] {
                dist[h] = nd;
                heap.push(Reverse((nd, h)));
            }
        }
    }
    dist
}

/// All-pairs distance matrix, `m[u][v] = d(u, v)`.
pub fn all_pairs(g: &Graph) -> Vec<Vec<u64>> {
    (0..g.n()).map(|s| shortest_paths(g, s)).collect()
}

/// Weakly connected components, each sorted, ordered by smallest vertex.
pub fn weak_components(g: &Graph) -> Vec<Vec<usize>> {
    let adj = g.undirected_neighbors();
    let mut comp = vec![usize::MAX; g.n()];
    let mut out = Vec::new();
    for s in 0..g.n() {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = vec![s];
        comp[s] = id;
        let mut i = 0;
        while i < members.len() {
            let v = members[i];
            i += 1;
            for &u in &adj[v] {
                if comp[u] == usize::MAX {
                    comp[u] = id;
                    members.push(u);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

/// Splits `g` into weakly connected components.
///
/// Each entry holds the component graph and the map from its local vertex
/// ids to the ids of `g`.
pub fn split_components(g: &Graph) -> Vec<(Graph, Vec<usize>)> {
    weak_components(g).into_iter().map(|members| (g.induced(&members), members)).collect()
}

/// Diameter of each weakly connected component (`None` = ∞ when some ordered
/// pair inside the component is not connected by a directed path).
pub fn component_diameters(g: &Graph) -> Vec<Option<u64>> {
    weak_components(g)
        .into_iter()
        .map(|members| {
            let mut best = 0u64;
            for &s in &members {
                let d = shortest_paths(g, s);
                for &v in &members {
                    if d[v] == INF {
                        return None;
                    }
                    best = best.max(d[v]);
                }
            }
            Some(best)
        })
        .collect()
}

/// Diameter of the whole graph; `None` (∞) if it is disconnected.
pub fn diameter(g: &Graph) -> Option<u64> {
    let per = component_diameters(g);
    match per.len() {
        0 => Some(0),
        1 => per[0],
        _ => None,
    }
}

fn check_centers(g: &Graph, k: &CenterSet) -> Result<()> {
    for &v in &k.vertices {
        if v >= g.n() {
            return Err(KrcError::VertexOutOfRange { vertex: v, n: g.n() });
        }
        if g.is_irrelevant(v) {
            return Err(KrcError::IrrelevantCenter(v));
        }
    }
    Ok(())
}

/// Checks that every relevant vertex lies within distance `r` of `k`.
pub fn verify_center(g: &Graph, k: &CenterSet, r: u64) -> Result<CoverageReport> {
    check_centers(g, k)?;
    let dist = multi_source_distances(g, &k.vertices);
    let mut max_distance = Some(0u64);
    let mut uncovered = Vec::new();
    for (v, &d) in dist.iter().enumerate() {
        if g.is_irrelevant(v) {
            continue;
        }
        let dv = if d == INF { None } else { Some(d) };
        max_distance = match (max_distance, dv) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
        if d == INF || d > r {
            uncovered.push((v, dv));
        }
    }
    Ok(CoverageReport { covered: uncovered.is_empty(), max_distance, uncovered })
}

/// Radius of a center set: the largest distance to a relevant vertex.
pub fn coverage_radius(g: &Graph, k: &CenterSet) -> Result<Option<u64>> {
    Ok(verify_center(g, k, INF)?.max_distance)
}

/// Labels every vertex with its distance from `k`.
///
/// Relevant vertices must be within `r`; irrelevant vertices beyond `r` or
/// unreachable receive [`DistanceLabeling::TOP`].
pub fn labeling_from_center(g: &Graph, k: &CenterSet, r: u64) -> Result<DistanceLabeling> {
    check_centers(g, k)?;
    let dist = multi_source_distances(g, &k.vertices);
    let mut values = Vec::with_capacity(g.n());
    for (v, &d) in dist.iter().enumerate() {
        if g.is_irrelevant(v) {
            values.push(if d > r { DistanceLabeling::TOP } else { d });
            continue;
        }
        if d == INF {
            return Err(KrcError::Unreachable(v));
        }
        if d > r {
            return Err(KrcError::BeyondRadius { vertex: v, distance: d, radius: r });
        }
        values.push(d);
    }
    Ok(DistanceLabeling { values })
}

/// Whether `dl` is a valid distance labeling with values in `[0, r]`.
///
/// Every vertex with a finite label must be labelled 0 (relevant vertices
/// only) or have an in-neighbour `v` with `dl(u) ≥ dl(v) + w(v,u)`. Only
/// irrelevant vertices may carry [`DistanceLabeling::TOP`].
pub fn is_valid_labeling(g: &Graph, dl: &DistanceLabeling, r: u64) -> bool {
    if dl.values.len() != g.n() {
        return false;
    }
    (0..g.n()).all(|u| {
        let x = dl.values[u];
        if x == DistanceLabeling::TOP {
            return g.is_irrelevant(u);
        }
        if x > r {
            return false;
        }
        if x == 0 {
            return !g.is_irrelevant(u);
        }
        g.in_arcs(u).iter().any(|&(v, w)| {
            let y = dl.values[v];
            y != DistanceLabeling::TOP && x >= y.saturating_add(w)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(weights: &[u64]) -> Graph {
        let mut g = Graph::new_undirected(weights.len() + 1);
        for (i, &w) in weights.iter().enumerate() {
            g.add_edge(i, i + 1, w).unwrap();
        }
        g
    }

    #[test]
    fn shortest_paths_examples() {
        let mut g = Graph::new(3);
        g.add_arc(0, 1, 2).unwrap();
        g.add_arc(1, 2, 3).unwrap();
        assert_eq!(shortest_paths(&g, 0), vec![0, 2, 5]);
        let g = Graph::new(2);
        assert_eq!(shortest_paths(&g, 0), vec![0, INF]);
        let mut c4 = Graph::new_undirected(4);
        for i in 0..4 {
            c4.add_edge(i, (i + 1) % 4, 1).unwrap();
        }
        assert_eq!(shortest_paths(&c4, 0), vec![0, 1, 2, 1]);
    }

    #[test]
    fn diameter_examples() {
        assert_eq!(diameter(&path(&[1; 6])), Some(6));
        assert_eq!(diameter(&Graph::new(1)), Some(0));
        let g = Graph::new(2);
        assert_eq!(component_diameters(&g), vec![Some(0), Some(0)]);
        assert_eq!(diameter(&g), None);
    }

    #[test]
    fn verify_center_examples() {
        let p3 = path(&[1, 1]);
        let rep = verify_center(&p3, &CenterSet::new(vec![1]), 1).unwrap();
        assert!(rep.covered);
        assert_eq!(rep.max_distance, Some(1));
        let rep = verify_center(&p3, &CenterSet::new(vec![0]), 1).unwrap();
        assert_eq!(rep.uncovered, vec![(2, Some(2))]);
        let mut tri = Graph::new_undirected(3);
        tri.add_edge(0, 1, 5).unwrap();
        tri.add_edge(1, 2, 5).unwrap();
        tri.add_edge(0, 2, 5).unwrap();
        let rep = verify_center(&tri, &CenterSet::new(vec![2]), 4).unwrap();
        assert_eq!(rep.uncovered.len(), 2);
        let mut irr = path(&[1, 1]);
        irr.set_irrelevant(1).unwrap();
        assert!(verify_center(&irr, &CenterSet::new(vec![1]), 1).is_err());
        assert!(verify_center(&irr, &CenterSet::new(vec![7]), 1).is_err());
    }

    #[test]
    fn labeling_examples() {
        let p3 = path(&[1, 1]);
        let dl = labeling_from_center(&p3, &CenterSet::new(vec![1]), 1).unwrap();
        assert_eq!(dl.values, vec![1, 0, 1]);
        let mut c4 = Graph::new_undirected(4);
        for i in 0..4 {
            c4.add_edge(i, (i + 1) % 4, 1).unwrap();
        }
        let dl = labeling_from_center(&c4, &CenterSet::new(vec![0]), 2).unwrap();
        assert_eq!(dl.values, vec![0, 1, 2, 1]);
        let mut w = Graph::new(2);
        w.add_arc(0, 1, 3).unwrap();
        let dl = labeling_from_center(&w, &CenterSet::new(vec![0]), 3).unwrap();
        assert_eq!(dl.values, vec![0, 3]);
        assert!(labeling_from_center(&Graph::new(2), &CenterSet::new(vec![0]), 3).is_err());
    }

    #[test]
    fn validity_examples() {
        let p3 = path(&[1, 1]);
        assert!(is_valid_labeling(&p3, &DistanceLabeling { values: vec![1, 0, 1] }, 1));
        assert!(!is_valid_labeling(&p3, &DistanceLabeling { values: vec![0, 1, 1] }, 1));
        assert!(is_valid_labeling(&p3, &DistanceLabeling { values: vec![0, 0, 0] }, 1));
    }

    #[test]
    fn split_examples() {
        let p3 = path(&[1, 1]);
        let parts = split_components(&p3);
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].1, vec![0, 1, 2]);
        let mut two = Graph::new_undirected(4);
        two.add_edge(0, 2, 1).unwrap();
        two.add_edge(1, 3, 1).unwrap();
        let parts = split_components(&two);
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[1].1, vec![1, 3]);
        assert_eq!(parts[1].0.n(), 2);
        assert!(split_components(&Graph::new(0)).is_empty());
    }

    #[test]
    fn zero_weights_need_marker() {
        let mut g = Graph::new(2);
        assert!(g.add_arc(0, 1, 0).is_err());
        g.allow_zero_weights();
        g.add_arc(0, 1, 0).unwrap();
        assert!(g.clear_zero_marker().is_err());
    }
}
