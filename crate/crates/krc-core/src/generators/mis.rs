//! The reduction from multicolored independent set: weighted graphs of small
//! vertex cover and unweighted graphs of small feedback vertex set.

use serde::{Deserialize, Serialize};

use super::builder::Builder;
use crate::error::{KrcError, Result};
use crate::graph::Graph;

/// How the weighted edges of the reduction are realised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum MisMode {
    /// Edge weights as in the reduction; `{g, a, b}` is a vertex cover.
    #[default]
    Weighted,
    /// Unit weights. Guards hang off a hub at distance `2n` from every
    /// `p` vertex, and each `u_e` reaches `a_i`, `b_i` through a private
    /// branch vertex adjacent to it, so that every path vertex stays covered.
    Subdivided,
    /// Unit weights, every weighted edge replaced by a path of that length.
    Literal,
}

/// A generated instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MisInstance {
    /// The graph.
    pub graph: Graph,
    /// Center budget (number of parts).
    pub k: usize,
    /// Radius `4n`.
    pub r: u64,
    /// `p[i][l]` is the vertex for the `l`-th vertex of part `i`.
    pub p: Vec<Vec<usize>>,
    /// The two guard vertices of each part.
    pub guards: Vec<[usize; 2]>,
    /// `a_i`.
    pub a: Vec<usize>,
    /// `b_i`.
    pub b: Vec<usize>,
    /// One vertex per cross edge.
    pub edge_vertices: Vec<usize>,
    /// Vertices of the natural small cover: guards (or their hubs), `a_i`, `b_i`.
    pub designated: Vec<usize>,
}

fn connect(bld: &mut Builder, mode: MisMode, u: usize, v: usize, w: u64) {
    match mode {
        MisMode::Weighted => bld.edge(u, v, w),
        _ => {
            bld.path(u, v, w);
        }
    }
}

/// Builds the `(k, 4n)`-center instance of a multicolored independent set
/// instance with `k` parts of `n` vertices each. Edges inside a part are
/// ignored.
pub fn gen_mis_vc_instance(g: &Graph, parts: &[Vec<usize>], mode: MisMode) -> Result<MisInstance> {
    let k = parts.len();
    let n = parts.first().map_or(0, Vec::len);
    if k == 0 || n == 0 || parts.iter().any(|p| p.len() != n) {
        return Err(KrcError::InvalidParameter("parts must be non-empty and of equal size".into()));
    }
    let mut where_ = vec![None; g.n()];
    for (i, part) in parts.iter().enumerate() {
        for (l, &v) in part.iter().enumerate() {
            if v >= g.n() {
                return Err(KrcError::VertexOutOfRange { vertex: v, n: g.n() });
            }
            if where_[v].replace((i, l + 1)).is_some() {
                return Err(KrcError::InvalidParameter(format!("vertex {v} is in two parts")));
            }
        }
    }
    let nn = n as u64;
    let r = 4 * nn;
    let mut b = Builder::new(0);
    let mut inst = MisInstance {
        graph: Graph::new_undirected(0),
        k,
        r,
        p: Vec::new(),
        guards: Vec::new(),
        a: Vec::new(),
        b: Vec::new(),
        edge_vertices: Vec::new(),
        designated: Vec::new(),
    };
    for _ in 0..k {
        let ps = b.vertices(n);
        let mut guards = [0; 2];
        for slot in &mut guards {
            match mode {
                MisMode::Subdivided => {
                    let hub = b.vertex();
                    for &p in &ps {
                        b.path(p, hub, 2 * nn);
                    }
                    *slot = *b.pendant(hub, 2 * n).last().expect("n >= 1");
                    inst.designated.push(hub);
                }
                _ => {
                    let gv = b.vertex();
                    for &p in &ps {
                        connect(&mut b, mode, gv, p, r);
                    }
                    *slot = gv;
                    inst.designated.push(gv);
                }
            }
        }
        let a = b.vertex();
        let bv = b.vertex();
        for (l, &p) in ps.iter().enumerate() {
            let l = l as u64 + 1;
            connect(&mut b, mode, a, p, nn + l);
            connect(&mut b, mode, bv, p, 2 * nn - l + 1);
        }
        inst.designated.extend([a, bv]);
        inst.p.push(ps);
        inst.guards.push(guards);
        inst.a.push(a);
        inst.b.push(bv);
    }
    let mut edges: Vec<(usize, usize)> = g
        .arcs()
        .iter()
        .filter_map(|arc| {
            let (x, y) = (arc.tail.min(arc.head), arc.tail.max(arc.head));
            match (where_[x], where_[y]) {
                (Some((i, _)), Some((j, _))) if i != j => Some((x, y)),
                _ => None,
            }
        })
        .collect();
    edges.sort_unstable();
    edges.dedup();
    for (x, y) in edges {
        let u = b.vertex();
        for v in [x, y] {
            let (i, j) = where_[v].expect("cross edge endpoints lie in parts");
            let j = j as u64;
            let (wa, wb) = (3 * nn - j + 1, 2 * nn + j);
            if mode == MisMode::Subdivided {
                let y = b.vertex();
                b.edge(u, y, 1);
                b.path(y, inst.a[i], wa - 1);
                b.path(y, inst.b[i], wb - 1);
            } else {
                connect(&mut b, mode, u, inst.a[i], wa);
                connect(&mut b, mode, u, inst.b[i], wb);
            }
        }
        inst.edge_vertices.push(u);
    }
    inst.graph = b.finish();
    Ok(inst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weighted_small_instance() {
        let mut g = Graph::new_undirected(4);
        g.add_edge(0, 2, 1).unwrap();
        let inst = gen_mis_vc_instance(&g, &[vec![0, 1], vec![2, 3]], MisMode::Weighted).unwrap();
        assert_eq!(inst.r, 8);
        assert_eq!(inst.graph.n(), 13);
        let w = |x: usize, y: usize| inst.graph.min_arc_weight(x, y).unwrap();
        assert_eq!([w(inst.a[0], inst.p[0][0]), w(inst.a[0], inst.p[0][1])], [3, 4]);
        assert_eq!([w(inst.b[0], inst.p[0][0]), w(inst.b[0], inst.p[0][1])], [4, 3]);
        let u = inst.edge_vertices[0];
        assert_eq!([w(u, inst.a[0]), w(u, inst.b[0])], [6, 5]);
    }

    #[test]
    fn malformed_partition() {
        let g = Graph::new_undirected(3);
        assert!(gen_mis_vc_instance(&g, &[vec![0, 1], vec![2]], MisMode::Weighted).is_err());
        assert!(gen_mis_vc_instance(&g, &[vec![0], vec![0]], MisMode::Weighted).is_err());
    }
}
