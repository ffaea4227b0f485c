//! Seeded random graphs, formulas and clique-width expressions.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::builder::Builder;
use super::cnf::Cnf;
use crate::error::{KrcError, Result};
use crate::graph::Graph;
use crate::witness::cw::{CwBuilder, CwExpression};

/// The generator behind every seeded function of this module.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A connected undirected graph with `n` vertices, `m` edges and weights
/// drawn uniformly from `1..=max_weight`. The first `n − 1` edges form a
/// random spanning tree.
pub fn gen_random_instance(n: usize, m: usize, max_weight: u64, seed: u64) -> Result<Graph> {
    let max_edges = n * n.saturating_sub(1) / 2;
    if max_weight == 0 || m > max_edges || (n > 0 && m + 1 < n) {
        return Err(KrcError::InvalidParameter(format!(
            "no connected simple graph with n = {n}, m = {m}, weights 1..={max_weight}"
        )));
    }
    let mut rng = seeded_rng(seed);
    let mut b = Builder::new(n);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut present = vec![false; n * n];
    let mut add = |b: &mut Builder, rng: &mut ChaCha8Rng, u: usize, v: usize| {
        present[u * n + v] = true;
        present[v * n + u] = true;
        b.edge(u, v, rng.gen_range(1..=max_weight));
    };
    for i in 1..n {
        let j = rng.gen_range(0..i);
        add(&mut b, &mut rng, order[i], order[j]);
    }
    let mut rest: Vec<(usize, usize)> =
        (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|&(u, v)| !present[u * n + v]).collect();
    rest.shuffle(&mut rng);
    for &(u, v) in rest.iter().take(m.saturating_sub(n.saturating_sub(1))) {
        b.edge(u, v, rng.gen_range(1..=max_weight));
    }
    Ok(b.finish())
}

/// A uniformly shaped random tree (each vertex attaches to an earlier one).
pub fn gen_random_tree(n: usize, max_weight: u64, seed: u64) -> Result<Graph> {
    gen_random_instance(n, n.saturating_sub(1), max_weight, seed)
}

/// Marks each vertex irrelevant with probability `prob`, keeping at least
/// one relevant vertex.
pub fn mark_random_irrelevant(g: &mut Graph, prob: f64, seed: u64) {
    let mut rng = seeded_rng(seed);
    let n = g.n();
    for v in 0..n {
        if rng.gen_bool(prob.clamp(0.0, 1.0)) && g.relevant_vertices().len() > 1 {
            g.set_irrelevant(v).expect("vertex in range");
        }
    }
}

/// A random CNF formula with clauses of `width` distinct variables.
pub fn gen_random_cnf(num_vars: usize, num_clauses: usize, width: usize, seed: u64) -> Result<Cnf> {
    if width == 0 || width > num_vars {
        return Err(KrcError::InvalidParameter(format!("clause width {width} with {num_vars} variables")));
    }
    let mut rng = seeded_rng(seed);
    let vars: Vec<usize> = (1..=num_vars).collect();
    let clauses = (0..num_clauses)
        .map(|_| {
            let mut c: Vec<i64> = vars
                .choose_multiple(&mut rng, width)
                .map(|&v| if rng.gen_bool(0.5) { v as i64 } else { -(v as i64) })
                .collect();
            c.sort_unstable_by_key(|l| l.unsigned_abs());
            c
        })
        .collect();
    Ok(Cnf::new(num_vars, clauses))
}

/// A random expression on `n ≥ 1` vertices using labels `1..=cw` (`cw ≥ 2`).
///
/// Subexpressions are merged pairwise in random order; after each union a
/// few random symmetric joins of weight `1..=max_weight` and renames are
/// applied.
pub fn gen_random_cw_expression(n: usize, cw: usize, max_weight: u64, seed: u64) -> Result<CwExpression> {
    if n == 0 || cw < 2 || max_weight == 0 {
        return Err(KrcError::InvalidParameter("random expressions need n >= 1, cw >= 2, weights >= 1".into()));
    }
    let mut rng = seeded_rng(seed);
    let mut b = CwBuilder::new();
    let mut pool: Vec<usize> = (0..n).map(|v| b.intro(rng.gen_range(1..=cw), v)).collect();
    while pool.len() > 1 {
        let i = rng.gen_range(0..pool.len());
        let left = pool.swap_remove(i);
        let j = rng.gen_range(0..pool.len());
        let right = pool.swap_remove(j);
        let mut cur = b.union(left, right);
        for _ in 0..rng.gen_range(1..=2) {
            let a = rng.gen_range(1..=cw);
            let c = rng.gen_range(1..cw);
            let c = if c >= a { c + 1 } else { c };
            cur = b.join_both(a, c, rng.gen_range(1..=max_weight), cur);
        }
        if rng.gen_bool(0.5) {
            let a = rng.gen_range(1..=cw);
            let c = rng.gen_range(1..cw);
            let c = if c >= a { c + 1 } else { c };
            cur = b.rename(a, c, cur);
        }
        pool.push(cur);
    }
    b.finish(pool[0], cw, n)
}
