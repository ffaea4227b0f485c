//! Incremental construction of simple undirected graphs.

use std::collections::HashSet;

use crate::graph::Graph;

/// Builds a simple undirected graph; repeated edges and loops are ignored.
#[derive(Debug, Clone)]
pub(crate) struct Builder {
    pub(crate) g: Graph,
    seen: HashSet<(usize, usize)>,
}

impl Builder {
    pub(crate) fn new(n: usize) -> Self {
        Builder { g: Graph::new_undirected(n), seen: HashSet::new() }
    }

    pub(crate) fn vertex(&mut self) -> usize {
        self.g.add_vertex()
    }

    pub(crate) fn vertices(&mut self, count: usize) -> Vec<usize> {
        (0..count).map(|_| self.vertex()).collect()
    }

    pub(crate) fn edge(&mut self, u: usize, v: usize, w: u64) {
        if u == v || !self.seen.insert((u.min(v), u.max(v))) {
            return;
        }
        self.g.add_edge(u, v, w).expect("builder vertices are in range and weights positive");
    }

    /// Joins `u` and `v` by a path of `len ≥ 1` unit edges and returns the
    /// `len − 1` inner vertices in order from `u`.
    pub(crate) fn path(&mut self, u: usize, v: usize, len: u64) -> Vec<usize> {
        assert!(len >= 1, "path length must be positive");
        let inner = self.vertices(len as usize - 1);
        let mut prev = u;
        for &x in &inner {
            self.edge(prev, x, 1);
            prev = x;
        }
        self.edge(prev, v, 1);
        inner
    }

    /// Hangs a path of `len` new vertices off `u` and returns them in order
    /// from `u`; the last one is the far end.
    pub(crate) fn pendant(&mut self, u: usize, len: usize) -> Vec<usize> {
        let vs = self.vertices(len);
        let mut prev = u;
        for &x in &vs {
            self.edge(prev, x, 1);
            prev = x;
        }
        vs
    }

    pub(crate) fn clique(&mut self, vs: &[usize]) {
        for (i, &a) in vs.iter().enumerate() {
            for &b in &vs[i + 1..] {
                self.edge(a, b, 1);
            }
        }
    }

    pub(crate) fn finish(self) -> Graph {
        self.g
    }
}
