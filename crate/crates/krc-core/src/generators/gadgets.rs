//! The guard, clique and assignment gadgets of the clique-width lower bound.

use serde::{Deserialize, Serialize};

use super::builder::Builder;
use crate::error::{KrcError, Result};
use crate::graph::Graph;

/// Which gadget a [`GadgetHandle`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GadgetKind {
    /// One input covers the gadget; inputs stay at distance `r + 1`.
    Guard,
    /// Exactly one input is selected; inputs at distance `r`.
    Clique,
    /// Exactly `N − 1` inputs are selected.
    Assignment,
}

/// A gadget built on `N` fresh input vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetHandle {
    /// Gadget kind.
    pub kind: GadgetKind,
    /// Number of inputs `N`.
    pub n_inputs: usize,
    /// Radius the gadget is built for.
    pub r: u64,
    /// The fragment: inputs plus gadget vertices.
    pub graph: Graph,
    /// Input vertices in order.
    pub inputs: Vec<usize>,
    /// Vertices added by the gadget (all but the inputs).
    pub gadget_vertices: Vec<usize>,
}

/// Positions on a path `0..=len` at distance `⌊r/2⌋` from an end: one for
/// even `r`, two for odd `r`.
fn middle_positions(r: u64) -> Vec<u64> {
    if r % 2 == 0 {
        vec![r / 2]
    } else {
        vec![(r - 1) / 2, r.div_ceil(2)]
    }
}

/// Vertex at `pos` on a path whose inner vertices are `inner` between `from`
/// and `to` (positions `0` and `inner.len() + 1`).
fn at(from: usize, inner: &[usize], to: usize, pos: u64) -> usize {
    let pos = pos as usize;
    if pos == 0 {
        from
    } else if pos == inner.len() + 1 {
        to
    } else {
        inner[pos - 1]
    }
}

pub(crate) fn attach_guard(b: &mut Builder, inputs: &[usize], r: u64) -> Vec<usize> {
    let start = b.g.n();
    let half = (r / 2) as usize;
    let mut lasts = Vec::with_capacity(inputs.len());
    for &v in inputs {
        let us = b.pendant(v, half);
        lasts.push(*us.last().unwrap_or(&v));
    }
    let ws = b.vertices(r.div_ceil(2) as usize);
    for pair in ws.windows(2) {
        b.edge(pair[0], pair[1], 1);
    }
    for &l in &lasts {
        b.edge(l, ws[0], 1);
    }
    if r % 2 == 0 {
        b.clique(&lasts);
    }
    (start..b.g.n()).collect()
}

pub(crate) fn attach_clique(b: &mut Builder, inputs: &[usize], r: u64) -> Vec<usize> {
    let start = b.g.n();
    let n = inputs.len();
    let mut input_middles = Vec::new();
    let mut pendant_hosts = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let inner = b.path(inputs[i], inputs[j], r);
            for pos in middle_positions(r) {
                let m = at(inputs[i], &inner, inputs[j], pos);
                input_middles.push(m);
                pendant_hosts.push(m);
            }
        }
    }
    let x = b.vertex();
    let mut x_middles = Vec::new();
    for &v in inputs {
        let inner = b.path(v, x, r);
        for pos in middle_positions(r) {
            x_middles.push(at(v, &inner, x, pos));
        }
    }
    for &m in &pendant_hosts {
        let u = b.pendant(m, 1)[0];
        if r <= 2 {
            for &other in &input_middles {
                b.edge(u, other, 1);
            }
        }
    }
    b.clique(&input_middles);
    b.clique(&x_middles);
    (start..b.g.n()).collect()
}

pub(crate) fn attach_assignment(b: &mut Builder, inputs: &[usize], r: u64) -> Vec<usize> {
    let start = b.g.n();
    let n = inputs.len();
    for i in 0..n {
        for j in i + 1..n {
            for _copy in 0..2 {
                let inner = b.path(inputs[i], inputs[j], r + 1);
                if r % 2 == 1 {
                    let host = inner[(r / 2) as usize];
                    b.pendant(host, (r / 2) as usize);
                } else {
                    let w = b.vertex();
                    b.path(inner[(r / 2 - 1) as usize], w, r / 2);
                    b.path(inner[(r / 2) as usize], w, r / 2);
                }
            }
        }
    }
    (start..b.g.n()).collect()
}

fn standalone(
    kind: GadgetKind,
    n_inputs: usize,
    r: u64,
    min_inputs: usize,
    attach: fn(&mut Builder, &[usize], u64) -> Vec<usize>,
) -> Result<GadgetHandle> {
    if n_inputs < min_inputs || r == 0 {
        return Err(KrcError::InvalidParameter(format!(
            "{kind:?} gadget needs N >= {min_inputs} and r >= 1 (got N = {n_inputs}, r = {r})"
        )));
    }
    let mut b = Builder::new(n_inputs);
    let inputs: Vec<usize> = (0..n_inputs).collect();
    let gadget_vertices = attach(&mut b, &inputs, r);
    Ok(GadgetHandle { kind, n_inputs, r, graph: b.finish(), inputs, gadget_vertices })
}

/// The guard gadget on `n_inputs` inputs: `N·⌊r/2⌋ + ⌈r/2⌉` new vertices.
pub fn gen_guard_gadget(n_inputs: usize, r: u64) -> Result<GadgetHandle> {
    standalone(GadgetKind::Guard, n_inputs, r, 1, attach_guard)
}

/// The clique gadget on `n_inputs ≥ 2` inputs.
///
/// For `r ≤ 2` a pendant vertex hung on one middle vertex would be at
/// distance `⌊r/2⌋ + 2 > r` from the other inputs, so each pendant vertex is
/// made adjacent to every middle vertex of the input paths instead.
pub fn gen_clique_gadget(n_inputs: usize, r: u64) -> Result<GadgetHandle> {
    standalone(GadgetKind::Clique, n_inputs, r, 2, attach_clique)
}

/// The assignment gadget on `n_inputs ≥ 2` inputs.
pub fn gen_assignment_gadget(n_inputs: usize, r: u64) -> Result<GadgetHandle> {
    standalone(GadgetKind::Assignment, n_inputs, r, 2, attach_assignment)
}

/// Closed-form vertex count of a gadget, inputs included.
pub fn gadget_size(kind: GadgetKind, n: usize, r: u64) -> usize {
    let r = r as usize;
    let pairs = n * n.saturating_sub(1) / 2;
    match kind {
        GadgetKind::Guard => n + n * (r / 2) + r.div_ceil(2),
        GadgetKind::Clique if r % 2 == 0 => n + 1 + pairs * r + n * (r - 1),
        GadgetKind::Clique => n + 1 + pairs * (r + 1) + n * (r - 1),
        GadgetKind::Assignment if r % 2 == 1 => n + 2 * pairs * (r + r / 2),
        GadgetKind::Assignment => n + 2 * pairs * (2 * r - 1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::shortest_paths;

    #[test]
    fn sizes_match_closed_forms() {
        assert_eq!(gen_guard_gadget(3, 2).unwrap().gadget_vertices.len(), 4);
        assert_eq!(gen_guard_gadget(1, 1).unwrap().gadget_vertices.len(), 1);
        assert_eq!(gen_clique_gadget(2, 2).unwrap().graph.n(), 7);
        for kind in [GadgetKind::Guard, GadgetKind::Clique, GadgetKind::Assignment] {
            for n in 2..=4 {
                for r in 1..=4 {
                    let h = match kind {
                        GadgetKind::Guard => gen_guard_gadget(n, r),
                        GadgetKind::Clique => gen_clique_gadget(n, r),
                        GadgetKind::Assignment => gen_assignment_gadget(n, r),
                    }
                    .unwrap();
                    assert_eq!(h.graph.n(), gadget_size(kind, n, r), "{kind:?} N={n} r={r}");
                }
            }
        }
    }

    #[test]
    fn guard_distances() {
        for r in 1..=4 {
            let h = gen_guard_gadget(3, r).unwrap();
            for &v in &h.inputs {
                let d = shortest_paths(&h.graph, v);
                for &u in &h.inputs {
                    assert_eq!(d[u], if u == v { 0 } else { r + 1 });
                }
                assert!(h.gadget_vertices.iter().all(|&x| d[x] <= r));
            }
        }
    }

    #[test]
    fn clique_lemma() {
        for r in 1..=4 {
            for n in 2..=4 {
                let h = gen_clique_gadget(n, r).unwrap();
                for &v in &h.inputs {
                    let d = shortest_paths(&h.graph, v);
                    assert!(d.iter().all(|&x| x <= r), "N={n} r={r}");
                    assert!(h.inputs.iter().all(|&u| u == v || d[u] == r));
                }
                for &v in &h.gadget_vertices {
                    let d = shortest_paths(&h.graph, v);
                    let single_pair_long = n == 2 && r >= 4;
                    assert!(single_pair_long || d.iter().any(|&x| x > r), "N={n} r={r} vertex {v}");
                }
            }
        }
    }

    #[test]
    fn rejects_small_parameters() {
        assert!(gen_clique_gadget(1, 2).is_err());
        assert!(gen_guard_gadget(2, 0).is_err());
    }
}
