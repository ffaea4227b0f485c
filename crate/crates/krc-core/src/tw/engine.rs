//! The distance-labeling dynamic program over a nice tree decomposition,
//! generic in the label alphabet.

use serde::{Deserialize, Serialize};

use super::labels::LabelSpace;
use crate::error::{KrcError, Result};
use crate::graph::Graph;
use crate::witness::nice::{NiceKind, NiceTreeDecomposition};

/// Infinite cost.
pub const INF_COST: u32 = u32::MAX;
const NO_PTR: u32 = u32::MAX;

/// How Join nodes combine their children.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum JoinMode {
    /// Minimum over all pairs `S₁ ∪ S₂ = S`.
    #[default]
    Naive,
    /// Union product through subset zeta/Möbius transforms of cost
    /// polynomials.
    Fast,
}

/// Engine parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineConfig {
    /// Entries with a larger cost are dropped.
    pub cap: u32,
    /// Join strategy.
    pub join: JoinMode,
    /// Largest table allowed at a single node.
    pub max_entries: usize,
}

impl EngineConfig {
    /// Default limits with the given cost cap.
    pub fn with_cap(cap: u32) -> Self {
        EngineConfig { cap, join: JoinMode::Naive, max_entries: 1 << 27 }
    }
}

/// Statistics of one run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct EngineStats {
    /// Labels in the alphabet including 0 and top.
    pub labels: usize,
    /// Nodes processed.
    pub nodes: usize,
    /// Largest table size.
    pub max_table: usize,
    /// Total entries over all tables.
    pub total_entries: usize,
}

/// Result of one run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EngineOutcome {
    /// Minimum cost of a valid labeling within the cap, if any.
    pub cost: Option<u32>,
    /// Label index per vertex of an optimal labeling.
    pub labels: Option<Vec<usize>>,
    /// Run statistics.
    pub stats: EngineStats,
}

impl EngineOutcome {
    /// Vertices labelled 0.
    pub fn zeros(&self) -> Option<Vec<usize>> {
        self.labels.as_ref().map(|l| l.iter().enumerate().filter(|&(_, &x)| x == 0).map(|(v, _)| v).collect())
    }
}

struct NodeTable {
    cost: Vec<u32>,
    ptr: Vec<u32>,
}

fn insert_digit(idx: usize, pos: usize, digit: usize, pw: &[usize]) -> usize {
    let lo = idx % pw[pos];
    let hi = idx / pw[pos];
    lo + digit * pw[pos] + hi * pw[pos + 1]
}

fn remove_digit(idx: usize, pos: usize, pw: &[usize]) -> usize {
    let lo = idx % pw[pos];
    let hi = idx / pw[pos + 1];
    lo + hi * pw[pos]
}

fn insert_bit(mask: usize, pos: usize, bit: usize) -> usize {
    let lo = mask & ((1 << pos) - 1);
    let hi = mask >> pos;
    lo | (bit << pos) | (hi << (pos + 1))
}

fn remove_bit(mask: usize, pos: usize) -> usize {
    let lo = mask & ((1 << pos) - 1);
    let hi = mask >> (pos + 1);
    lo | (hi << pos)
}

fn digits(mut idx: usize, l: usize, b: usize) -> Vec<usize> {
    (0..b)
        .map(|_| {
            let d = idx % l;
            idx /= l;
            d
        })
        .collect()
}

/// Runs the program. The graph must have positive weights; irrelevant
/// vertices take positive labels or top and are never labelled 0.
pub fn run_engine<L: LabelSpace>(
    g: &Graph,
    ntd: &NiceTreeDecomposition,
    space: &L,
    config: &EngineConfig,
) -> Result<EngineOutcome> {
    let l = space.len();
    let top = space.top();
    let mut stats = EngineStats { labels: l, ..Default::default() };
    let Some(root) = ntd.root() else {
        let empty = g.n() == 0;
        return Ok(EngineOutcome { cost: empty.then_some(0), labels: empty.then(Vec::new), stats });
    };
    let maxb = ntd.nodes.iter().map(|x| x.bag.len()).max().unwrap_or(0);
    if maxb > 16 {
        return Err(KrcError::LimitExceeded { what: "bag size", size: maxb as u128, limit: 16 });
    }
    let mut pw = vec![1usize; maxb + 2];
    for i in 1..pw.len() {
        pw[i] = pw[i - 1].saturating_mul(l);
    }
    for node in &ntd.nodes {
        let size = pw[node.bag.len()].saturating_mul(1 << node.bag.len());
        if size > config.max_entries {
            return Err(KrcError::LimitExceeded {
                what: "table entries",
                size: size as u128,
                limit: config.max_entries as u128,
            });
        }
    }
    let allowed = |v: usize| -> Vec<usize> {
        if g.is_irrelevant(v) {
            (1..=top).collect()
        } else {
            (0..top).collect()
        }
    };
    let parent_is_join: Vec<bool> = {
        let mut p = vec![false; ntd.nodes.len()];
        for node in &ntd.nodes {
            if node.kind == NiceKind::Join {
                for &c in &node.children {
                    p[c] = true;
                }
            }
        }
        p
    };
    let keep_costs = config.join == JoinMode::Fast;
    let mut tables: Vec<Option<NodeTable>> = Vec::with_capacity(ntd.nodes.len());
    let mut kept: Vec<Option<Vec<u32>>> = vec![None; ntd.nodes.len()];
    for (t, node) in ntd.nodes.iter().enumerate() {
        let b = node.bag.len();
        let size = pw[b] << b;
        let mut cost = vec![INF_COST; size];
        let mut ptr = vec![NO_PTR; size];
        match node.kind {
            NiceKind::Leaf(u) => {
                for a in allowed(u) {
                    let (mask, c) = if a == 0 {
                        (1, 1)
                    } else if a == top {
                        (1, 0)
                    } else {
                        (0, 0)
                    };
                    if c <= config.cap {
                        cost[(a << 1) | mask] = c;
                    }
                }
            }
            NiceKind::Introduce(u) => {
                let ch = node.children[0];
                let child = tables[ch].as_ref().expect("child table");
                let cbag = &ntd.nodes[ch].bag;
                let p = node.bag.iter().position(|&x| x == u).expect("introduced vertex in bag");
                let w_out: Vec<Option<u64>> = cbag.iter().map(|&v| g.min_arc_weight(u, v)).collect();
                let w_in: Vec<Option<u64>> = cbag.iter().map(|&v| g.min_arc_weight(v, u)).collect();
                let cb = b - 1;
                let choices = allowed(u);
                for cl in 0..pw[cb] {
                    let base = cl << cb;
                    if child.cost[base..base + (1 << cb)].iter().all(|&c| c == INF_COST) {
                        continue;
                    }
                    let d = digits(cl, l, cb);
                    for &a in &choices {
                        let mut extra = 0usize;
                        let mut u_sat = a == 0 || a == top;
                        for j in 0..cb {
                            let dj = d[j];
                            if dj == top {
                                continue;
                            }
                            if a != top && dj != 0 {
                                if let Some(w) = w_out[j] {
                                    if space.satisfies(a, dj, w) {
                                        extra |= 1 << (if j < p { j } else { j + 1 });
                                    }
                                }
                            }
                            if !u_sat {
                                if let Some(w) = w_in[j] {
                                    if space.satisfies(dj, a, w) {
                                        u_sat = true;
                                    }
                                }
                            }
                        }
                        let nl = insert_digit(cl, p, a, &pw);
                        let add = u32::from(a == 0);
                        for m in 0..(1usize << cb) {
                            let c = child.cost[base + m];
                            if c == INF_COST {
                                continue;
                            }
                            let nc = c + add;
                            if nc > config.cap {
                                continue;
                            }
                            let nm = insert_bit(m, p, usize::from(u_sat)) | extra;
                            let idx = (nl << b) | nm;
                            if nc < cost[idx] {
                                cost[idx] = nc;
                                ptr[idx] = (base + m) as u32;
                            }
                        }
                    }
                }
            }
            NiceKind::Forget(u) => {
                let ch = node.children[0];
                let child = tables[ch].as_ref().expect("child table");
                let cbag = &ntd.nodes[ch].bag;
                let p = cbag.iter().position(|&x| x == u).expect("forgotten vertex in child bag");
                let cb = b + 1;
                for ci in 0..child.cost.len() {
                    let c = child.cost[ci];
                    if c == INF_COST {
                        continue;
                    }
                    let m = ci & ((1 << cb) - 1);
                    if m & (1 << p) == 0 {
                        continue;
                    }
                    let cl = ci >> cb;
                    let idx = (remove_digit(cl, p, &pw) << b) | remove_bit(m, p);
                    if c < cost[idx] {
                        cost[idx] = c;
                        ptr[idx] = ci as u32;
                    }
                }
            }
            NiceKind::Join => {
                let (c1, c2) = (node.children[0], node.children[1]);
                let t1 = tables[c1].as_ref().expect("child table");
                let t2 = tables[c2].as_ref().expect("child table");
                for lab in 0..pw[b] {
                    let base = lab << b;
                    let zeros = digits(lab, l, b).iter().filter(|&&x| x == 0).count() as u32;
                    let a = &t1.cost[base..base + (1 << b)];
                    let bb = &t2.cost[base..base + (1 << b)];
                    let out = &mut cost[base..base + (1 << b)];
                    let optr = &mut ptr[base..base + (1 << b)];
                    match config.join {
                        JoinMode::Naive => join_naive(a, bb, zeros, config.cap, out, optr),
                        JoinMode::Fast => join_fast(a, bb, zeros, config.cap, out),
                    }
                }
            }
        }
        stats.nodes += 1;
        stats.max_table = stats.max_table.max(size);
        stats.total_entries += size;
        for &c in &node.children {
            if let Some(tab) = tables[c].as_mut() {
                if keep_costs && parent_is_join[c] {
                    kept[c] = Some(std::mem::take(&mut tab.cost));
                } else {
                    tab.cost = Vec::new();
                }
            }
        }
        tables.push(Some(NodeTable { cost, ptr }));
        debug_assert_eq!(tables.len(), t + 1);
    }
    let rb = ntd.nodes[root].bag.len();
    let full = (1usize << rb) - 1;
    let rt = tables[root].as_ref().expect("root table");
    let mut best: Option<(u32, usize)> = None;
    for lab in 0..pw[rb] {
        let idx = (lab << rb) | full;
        let c = rt.cost[idx];
        if c != INF_COST && best.is_none_or(|(bc, _)| c < bc) {
            best = Some((c, idx));
        }
    }
    let Some((best_cost, best_idx)) = best else {
        return Ok(EngineOutcome { cost: None, labels: None, stats });
    };
    let labels = reconstruct(g, ntd, &tables, &kept, l, best_idx)?;
    Ok(EngineOutcome { cost: Some(best_cost), labels: Some(labels), stats })
}

fn join_naive(a: &[u32], b: &[u32], zeros: u32, cap: u32, out: &mut [u32], ptr: &mut [u32]) {
    let fa: Vec<usize> = (0..a.len()).filter(|&m| a[m] != INF_COST).collect();
    let fb: Vec<usize> = (0..b.len()).filter(|&m| b[m] != INF_COST).collect();
    for &m1 in &fa {
        for &m2 in &fb {
            let c = a[m1] + b[m2] - zeros;
            if c > cap {
                continue;
            }
            let m = m1 | m2;
            if c < out[m] {
                out[m] = c;
                ptr[m] = ((m1 << 16) | m2) as u32;
            }
        }
    }
}

/// Union product over cost polynomials `Σ z^cost`: after zeta transforms
/// the pointwise product counts pairs `(S₁, S₂)` with `S₁ ∪ S₂ ⊆ T` by total
/// cost, and the Möbius transform recovers exact unions. Counts are exact
/// modulo `2^64`, and true counts stay below `4^16`.
fn join_fast(a: &[u32], b: &[u32], zeros: u32, cap: u32, out: &mut [u32]) {
    let size = a.len();
    let deg = cap as usize + 1;
    let lift = |x: &[u32]| -> Vec<u64> {
        let mut p = vec![0u64; size * deg];
        for (m, &c) in x.iter().enumerate() {
            if c != INF_COST && (c as usize) < deg {
                p[m * deg + c as usize] = 1;
            }
        }
        p
    };
    let (mut pa, mut pb) = (lift(a), lift(b));
    let bits = size.trailing_zeros() as usize;
    let zeta = |p: &mut [u64], sign: bool| {
        for i in 0..bits {
            for m in 0..size {
                if m & (1 << i) != 0 {
                    let src = m ^ (1 << i);
                    for d in 0..deg {
                        let y = p[src * deg + d];
                        let x = &mut p[m * deg + d];
                        *x = if sign { x.wrapping_sub(y) } else { x.wrapping_add(y) };
                    }
                }
            }
        }
    };
    zeta(&mut pa, false);
    zeta(&mut pb, false);
    let pdeg = 2 * deg - 1;
    let mut prod = vec![0u64; size * pdeg];
    for m in 0..size {
        for i in 0..deg {
            let x = pa[m * deg + i];
            if x == 0 {
                continue;
            }
            for j in 0..deg {
                let y = pb[m * deg + j];
                if y != 0 {
                    let s = &mut prod[m * pdeg + i + j];
                    *s = s.wrapping_add(x.wrapping_mul(y));
                }
            }
        }
    }
    for i in 0..bits {
        for m in 0..size {
            if m & (1 << i) != 0 {
                let src = m ^ (1 << i);
                for d in 0..pdeg {
                    let y = prod[src * pdeg + d];
                    let x = &mut prod[m * pdeg + d];
                    *x = x.wrapping_sub(y);
                }
            }
        }
    }
    for m in 0..size {
        for d in 0..pdeg {
            if prod[m * pdeg + d] != 0 {
                let c = d as u32 - zeros.min(d as u32);
                if c <= cap {
                    out[m] = c;
                }
                break;
            }
        }
    }
}

fn reconstruct(
    g: &Graph,
    ntd: &NiceTreeDecomposition,
    tables: &[Option<NodeTable>],
    kept: &[Option<Vec<u32>>],
    l: usize,
    root_idx: usize,
) -> Result<Vec<usize>> {
    let mut labels = vec![usize::MAX; g.n()];
    let root = ntd.root().expect("non-empty decomposition");
    let mut stack = vec![(root, root_idx)];
    let broken = || KrcError::Internal("broken back-pointer during reconstruction".into());
    while let Some((t, idx)) = stack.pop() {
        let node = &ntd.nodes[t];
        let b = node.bag.len();
        let lab = idx >> b;
        for (j, &d) in digits(lab, l, b).iter().enumerate() {
            let v = node.bag[j];
            if labels[v] != usize::MAX && labels[v] != d {
                return Err(KrcError::Internal(format!("inconsistent label for vertex {v}")));
            }
            labels[v] = d;
        }
        let ptr = tables[t].as_ref().ok_or_else(broken)?.ptr[idx];
        match node.kind {
            NiceKind::Leaf(_) => {}
            NiceKind::Introduce(_) | NiceKind::Forget(_) => {
                if ptr == NO_PTR {
                    return Err(broken());
                }
                stack.push((node.children[0], ptr as usize));
            }
            NiceKind::Join => {
                let (m1, m2) = if ptr != NO_PTR {
                    ((ptr as usize) >> 16, (ptr as usize) & 0xffff)
                } else {
                    find_join_pair(kept, node.children[0], node.children[1], idx, b).ok_or_else(broken)?
                };
                stack.push((node.children[0], (lab << b) | m1));
                stack.push((node.children[1], (lab << b) | m2));
            }
        }
    }
    if labels.contains(&usize::MAX) {
        return Err(KrcError::Internal("vertex missing from every bag".into()));
    }
    Ok(labels)
}

fn find_join_pair(kept: &[Option<Vec<u32>>], c1: usize, c2: usize, idx: usize, b: usize) -> Option<(usize, usize)> {
    let t1 = kept[c1].as_ref()?;
    let t2 = kept[c2].as_ref()?;
    let lab = idx >> b;
    let s = idx & ((1 << b) - 1);
    let base = lab << b;
    let mut best: Option<(u32, usize, usize)> = None;
    let mut m1 = s;
    loop {
        let x = t1[base | m1];
        if x != INF_COST {
            let rest = s & !m1;
            let mut extra = m1;
            loop {
                let m2 = rest | extra;
                let y = t2[base | m2];
                if y != INF_COST && best.is_none_or(|(c, _, _)| x + y < c) {
                    best = Some((x + y, m1, m2));
                }
                if extra == 0 {
                    break;
                }
                extra = (extra - 1) & m1;
            }
        }
        if m1 == 0 {
            break;
        }
        m1 = (m1 - 1) & s;
    }
    best.map(|(_, a, c)| (a, c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digit_and_bit_helpers() {
        let pw = [1, 5, 25, 125, 625];
        let idx = 3 + 4 * 5 + 2 * 25;
        assert_eq!(insert_digit(idx, 1, 1, &pw), 3 + 5 + 4 * 25 + 2 * 125);
        assert_eq!(remove_digit(insert_digit(idx, 1, 1, &pw), 1, &pw), idx);
        assert_eq!(insert_bit(0b101, 1, 1), 0b1011);
        assert_eq!(remove_bit(0b1011, 1), 0b101);
    }

    #[test]
    fn fast_join_equals_naive() {
        let mut seed = 12345u64;
        let mut next = || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed
        };
        for b in 0..=4 {
            for _ in 0..50 {
                let size = 1 << b;
                let cap = 6;
                let gen = |r: u64| if r % 3 == 0 { INF_COST } else { (r % 5) as u32 };
                let a: Vec<u32> = (0..size).map(|_| gen(next())).collect();
                let c: Vec<u32> = (0..size).map(|_| gen(next())).collect();
                let zeros = (next() % 2) as u32;
                let a: Vec<u32> = a.iter().map(|&x| if x == INF_COST { x } else { x.max(zeros) }).collect();
                let c: Vec<u32> = c.iter().map(|&x| if x == INF_COST { x } else { x.max(zeros) }).collect();
                let mut o1 = vec![INF_COST; size];
                let mut p1 = vec![NO_PTR; size];
                join_naive(&a, &c, zeros, cap, &mut o1, &mut p1);
                let mut o2 = vec![INF_COST; size];
                join_fast(&a, &c, zeros, cap, &mut o2);
                assert_eq!(o1, o2);
            }
        }
    }
}
