//! Brute-force reference solvers. Every enumeration is guarded by an
//! explicit size limit and fails with [`KrcError::LimitExceeded`] instead of
//! truncating.

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{KrcError, Result};
use crate::generators::cnf::Cnf;
use crate::graph::{all_pairs, CenterSet, Graph, INF};
use crate::witness::cw::{CwExpression, CwNode};

/// Default enumeration limit shared by the oracles.
pub const DEFAULT_LIMIT: u128 = 50_000_000;

fn binom(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

fn guard(what: &'static str, size: u128, limit: u128) -> Result<()> {
    if size > limit {
        Err(KrcError::LimitExceeded { what, size, limit })
    } else {
        Ok(())
    }
}

/// A bitset over the relevant vertices.
type Bits = Vec<u64>;

fn coverage_bitsets(g: &Graph, r: u64) -> (Vec<usize>, Vec<Bits>, Bits) {
    let dist = all_pairs(g);
    let relevant = g.relevant_vertices();
    let words = relevant.len().div_ceil(64).max(1);
    let mut full = vec![0u64; words];
    for i in 0..relevant.len() {
        full[i / 64] |= 1 << (i % 64);
    }
    let covers = relevant
        .iter()
        .map(|&c| {
            let mut b = vec![0u64; words];
            for (i, &v) in relevant.iter().enumerate() {
                if dist[c][v] <= r {
                    b[i / 64] |= 1 << (i % 64);
                }
            }
            b
        })
        .collect();
    (relevant, covers, full)
}

/// Smallest center set of size at most `k` covering every relevant vertex
/// within `r`; among sets of minimum size the lexicographically smallest.
pub fn brute_force_decide(g: &Graph, k: usize, r: u64, limit: u128) -> Result<Option<CenterSet>> {
    let (relevant, covers, full) = coverage_bitsets(g, r);
    let m = relevant.len();
    let total: u128 = (0..=k.min(m)).map(|s| binom(m, s)).fold(0u128, |a, b| a.saturating_add(b));
    guard("center subsets", total, limit)?;
    if m == 0 {
        return Ok(Some(CenterSet::new(Vec::new()).with_radius(r)));
    }
    for size in 1..=k.min(m) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let mut acc = vec![0u64; full.len()];
            for &i in &idx {
                for (a, b) in acc.iter_mut().zip(&covers[i]) {
                    *a |= b;
                }
            }
            if acc == full {
                let set = idx.iter().map(|&i| relevant[i]).collect();
                return Ok(Some(CenterSet::new(set).with_radius(r)));
            }
            if !next_combination(&mut idx, m) {
                break;
            }
        }
    }
    Ok(None)
}

/// Advances `idx` to the next `|idx|`-combination of `0..m` in lexicographic order.
pub(crate) fn next_combination(idx: &mut [usize], m: usize) -> bool {
    let s = idx.len();
    let mut i = s;
    while i > 0 {
        i -= 1;
        if idx[i] < m - s + i {
            idx[i] += 1;
            for j in i + 1..s {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Minimum over center sets of size at most `k` of the largest distance to
/// a relevant vertex. `None` means no finite radius exists.
pub fn brute_force_min_radius(g: &Graph, k: usize, limit: u128) -> Result<Option<u64>> {
    let relevant = g.relevant_vertices();
    if relevant.is_empty() {
        return Ok(Some(0));
    }
    if k == 0 {
        return Ok(None);
    }
    let dist = all_pairs(g);
    let mut radii: Vec<u64> = relevant
        .iter()
        .flat_map(|&c| relevant.iter().map(move |&v| (c, v)))
        .map(|(c, v)| dist[c][v])
        .filter(|&d| d != INF)
        .collect();
    radii.sort_unstable();
    radii.dedup();
    if brute_force_decide(g, k, radii[radii.len() - 1], limit)?.is_none() {
        return Ok(None);
    }
    let (mut lo, mut hi) = (0usize, radii.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if brute_force_decide(g, k, radii[mid], limit)?.is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(Some(radii[lo]))
}

/// Per-join class data used by the labeling oracle.
struct JoinClasses {
    a: Vec<usize>,
    b: Vec<usize>,
}

fn join_classes(e: &CwExpression) -> Vec<JoinClasses> {
    let labels = e.labels_at_nodes();
    let mut out = Vec::new();
    for t in e.post_order() {
        if let CwNode::Join { a, b, child, .. } = e.nodes[t] {
            let of = |l: usize| (0..e.n).filter(|&v| labels[child][v] == l).collect::<Vec<_>>();
            out.push(JoinClasses { a: of(a), b: of(b) });
        }
    }
    out
}

/// Whether `dl` is join-certified for `e`: every vertex with a positive
/// label is, at some join, in one of the two joined classes while the other
/// class is non-empty, and either the other class holds a strictly smaller
/// label or its own class holds a label at least 2 smaller.
pub fn is_join_certified(e: &CwExpression, dl: &[u64]) -> bool {
    let joins = join_classes(e);
    certified_with(&joins, dl)
}

fn certified_with(joins: &[JoinClasses], dl: &[u64]) -> bool {
    let mut ok: Vec<bool> = dl.iter().map(|&x| x == 0).collect();
    for j in joins {
        if j.a.is_empty() || j.b.is_empty() {
            continue;
        }
        let ma = j.a.iter().map(|&v| dl[v]).min().unwrap();
        let mb = j.b.iter().map(|&v| dl[v]).min().unwrap();
        for (side, own, other) in [(&j.a, ma, mb), (&j.b, mb, ma)] {
            for &u in side.iter() {
                if other < dl[u] || own + 2 <= dl[u] {
                    ok[u] = true;
                }
            }
        }
    }
    ok.iter().all(|&x| x)
}

/// Number of join-certified labelings `dl: V → [0, r]` with exactly `κ`
/// zeros, for every `κ` in `0..=n`.
pub fn enumerate_valid_cw_labelings_all(e: &CwExpression, r: u64, limit: u128) -> Result<Vec<BigUint>> {
    e.validate()?;
    let n = e.n;
    let size = (r as u128 + 1).checked_pow(n as u32).unwrap_or(u128::MAX);
    guard("cw labelings", size, limit)?;
    let joins = join_classes(e);
    let mut counts = vec![0u64; n + 1];
    let mut dl = vec![0u64; n];
    loop {
        if certified_with(&joins, &dl) {
            counts[dl.iter().filter(|&&x| x == 0).count()] += 1;
        }
        let mut i = 0;
        while i < n && dl[i] == r {
            dl[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
        dl[i] += 1;
    }
    Ok(counts.into_iter().map(BigUint::from).collect())
}

/// Number of join-certified labelings with exactly `kappa` zeros.
pub fn enumerate_valid_cw_labelings(e: &CwExpression, r: u64, kappa: usize, limit: u128) -> Result<BigUint> {
    let all = enumerate_valid_cw_labelings_all(e, r, limit)?;
    Ok(all.get(kappa).cloned().unwrap_or_else(BigUint::zero))
}

/// A set-cover instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetCoverInstance {
    /// Elements to cover.
    pub universe: Vec<usize>,
    /// `(owner, elements)` pairs.
    pub sets: Vec<(usize, Vec<usize>)>,
}

/// Exact minimum set cover by dynamic programming over subsets of the
/// universe. Returns `(None, [])` when some element is in no set.
pub fn set_cover_min(inst: &SetCoverInstance, limit: u128) -> Result<(Option<usize>, Vec<usize>)> {
    let mut universe = inst.universe.clone();
    universe.sort_unstable();
    universe.dedup();
    let u = universe.len();
    if u >= 64 {
        return Err(KrcError::LimitExceeded { what: "set cover universe", size: u as u128, limit: 63 });
    }
    let full: u64 = if u == 0 { 0 } else { (1u64 << u) - 1 };
    guard("set cover states", (1u128 << u).saturating_mul(inst.sets.len().max(1) as u128), limit)?;
    let masks: Vec<u64> = inst
        .sets
        .iter()
        .map(|(_, el)| el.iter().filter_map(|x| universe.binary_search(x).ok()).fold(0u64, |m, i| m | (1 << i)))
        .collect();
    let all = masks.iter().fold(0u64, |m, x| m | x);
    if all & full != full {
        return Ok((None, Vec::new()));
    }
    let states = 1usize << u;
    let mut best = vec![u32::MAX; states];
    let mut pick = vec![(usize::MAX, 0u64); states];
    best[0] = 0;
    for mask in 1..states {
        let low = (mask as u64).trailing_zeros();
        for (i, &m) in masks.iter().enumerate() {
            if m >> low & 1 == 0 {
                continue;
            }
            let rest = (mask as u64) & !m;
            let c = best[rest as usize];
            if c != u32::MAX && c + 1 < best[mask] {
                best[mask] = c + 1;
                pick[mask] = (i, rest);
            }
        }
    }
    let mut chosen = Vec::new();
    let mut cur = full;
    while cur != 0 {
        let (i, rest) = pick[cur as usize];
        chosen.push(inst.sets[i].0);
        cur = rest;
    }
    chosen.sort_unstable();
    Ok((Some(best[full as usize] as usize), chosen))
}

/// One vertex per part, pairwise non-adjacent; the lexicographically first
/// such selection in part order.
pub fn mis_brute(g: &Graph, parts: &[Vec<usize>], limit: u128) -> Result<Option<Vec<usize>>> {
    let size = parts.iter().fold(1u128, |a, p| a.saturating_mul(p.len() as u128));
    guard("multicolored selections", size, limit)?;
    if parts.iter().any(Vec::is_empty) {
        return Ok(None);
    }
    let n = g.n();
    let mut adj = vec![false; n * n];
    for a in g.arcs() {
        adj[a.tail * n + a.head] = true;
        adj[a.head * n + a.tail] = true;
    }
    let mut idx = vec![0usize; parts.len()];
    loop {
        let sel: Vec<usize> = idx.iter().zip(parts).map(|(&i, p)| p[i]).collect();
        let independent = sel.iter().enumerate().all(|(i, &x)| sel[i + 1..].iter().all(|&y| !adj[x * n + y] && x != y));
        if independent {
            return Ok(Some(sel));
        }
        let mut j = parts.len();
        loop {
            if j == 0 {
                return Ok(None);
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < parts[j].len() {
                break;
            }
            idx[j] = 0;
        }
    }
}

/// A satisfying assignment (variables `1..=num_vars` at indices `0..num_vars`)
/// found by exhaustive search in binary counting order, or `None`.
pub fn sat_brute(formula: &Cnf, limit: u128) -> Result<Option<Vec<bool>>> {
    let nv = formula.num_vars;
    let size = if nv >= 127 { u128::MAX } else { 1u128 << nv };
    guard("assignments", size, limit)?;
    let mut assign = vec![false; nv];
    loop {
        if formula.is_satisfied_by(&assign) {
            return Ok(Some(assign));
        }
        let mut i = 0;
        while i < nv && assign[i] {
            assign[i] = false;
            i += 1;
        }
        if i == nv {
            return Ok(None);
        }
        assign[i] = true;
    }
}
