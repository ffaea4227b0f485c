//! Metric closure over bags and positive-weight rescaling.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::td::TreeDecomposition;
use crate::error::{KrcError, Result};
use crate::graph::{shortest_paths, Graph, INF};

/// Result of [`metric_closure_bags`].
#[derive(Debug, Clone)]
pub struct MetricClosure {
    /// The closed graph (flagged directed).
    pub graph: Graph,
    /// Number of arcs added.
    pub added: usize,
    /// Ordered co-bag pairs `(u, v)` with `v` unreachable from `u`; no arc is added for them.
    pub unreachable: Vec<(usize, usize)>,
}

/// Adds, for every ordered pair `(u, v)` sharing a bag, an arc `u → v` of
/// weight `d(u, v)` unless an arc of at most that weight already exists.
///
/// Distances are unchanged and `td` stays a valid decomposition.
pub fn metric_closure_bags(g: &Graph, td: &TreeDecomposition) -> MetricClosure {
    let mut out = g.to_directed();
    let n = g.n();
    let mut dist: Vec<Option<Vec<u64>>> = vec![None; n];
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for bag in &td.bags {
        for &u in bag {
            for &v in bag {
                if u != v && u < n && v < n {
                    pairs.push((u, v));
                }
            }
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    let mut added = 0;
    let mut unreachable = Vec::new();
    for (u, v) in pairs {
        let du = dist[u].get_or_insert_with(|| shortest_paths(g, u));
        let d = du[v];
        if d == INF {
            unreachable.push((u, v));
            continue;
        }
        if g.min_arc_weight(u, v).is_none_or(|w| w > d) {
            out.add_arc(u, v, d).expect("closure arc within range");
            added += 1;
        }
    }
    MetricClosure { graph: out, added, unreachable }
}

/// Result of [`rescale_positive`].
#[derive(Debug, Clone)]
pub struct Rescaled {
    /// Graph with weights `B·w + 1` and the zero-weight marker cleared.
    pub graph: Graph,
    /// Rescaled radius `B·r`.
    pub r_prime: u64,
    /// Scaling factor `B = ⌈n/ε⌉`.
    pub b: u64,
}

/// Rescales weights to `B·w + 1` with `B = ⌈n/ε⌉`, removing zero weights.
pub fn rescale_positive(g: &Graph, r: u64, eps: &BigRational) -> Result<Rescaled> {
    if !eps.is_positive() {
        return Err(KrcError::InvalidParameter("epsilon must be positive".into()));
    }
    let n = BigInt::from(g.n().max(1));
    let q = (BigRational::from_integer(n) / eps).ceil().to_integer();
    let b = q.to_u64().ok_or_else(|| KrcError::InvalidParameter("scaling factor overflows u64".into()))?;
    let b = b.max(1);
    let overflow = || KrcError::InvalidParameter("rescaled weight overflows u64".into());
    for a in g.arcs() {
        a.weight.checked_mul(b).and_then(|x| x.checked_add(1)).ok_or_else(overflow)?;
    }
    let graph = g.map_weights(false, |w| w * b + 1)?;
    let r_prime = r.checked_mul(b).ok_or_else(overflow)?;
    Ok(Rescaled { graph, r_prime, b })
}

/// Serializable summary of a rescale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RescaleInfo {
    /// Scaling factor.
    pub b: u64,
    /// Rescaled radius.
    pub r_prime: u64,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn closure_adds_path_sum() {
        let mut g = Graph::new_undirected(3);
        g.add_edge(0, 1, 2).unwrap();
        g.add_edge(1, 2, 3).unwrap();
        let td = TreeDecomposition::single_bag(vec![0, 2]);
        let c = metric_closure_bags(&g, &td);
        assert_eq!(c.added, 2);
        assert_eq!(c.graph.min_arc_weight(0, 2), Some(5));
        let td = TreeDecomposition::from_edges(vec![vec![0, 1], vec![1, 2]], &[(0, 1)], 0).unwrap();
        assert_eq!(metric_closure_bags(&g, &td).added, 0);
    }

    #[test]
    fn rescale_examples() {
        let mut g = Graph::new(4);
        g.allow_zero_weights();
        g.add_arc(0, 1, 0).unwrap();
        g.add_arc(1, 2, 3).unwrap();
        let r = rescale_positive(&g, 2, &rat(1, 2)).unwrap();
        assert_eq!(r.b, 8);
        assert_eq!(r.r_prime, 16);
        assert_eq!(r.graph.min_arc_weight(0, 1), Some(1));
        assert_eq!(r.graph.min_arc_weight(1, 2), Some(25));
        assert!(!r.graph.zero_weights_allowed());
        let mut h = Graph::new(1);
        h.add_arc(0, 0, 4).unwrap();
        let r = rescale_positive(&h, 3, &rat(1, 1)).unwrap();
        assert_eq!(r.b, 1);
        assert_eq!(r.graph.min_arc_weight(0, 0), Some(5));
    }
}
