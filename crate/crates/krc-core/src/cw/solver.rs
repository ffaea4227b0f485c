//! The counting dynamic program over clique-width expressions.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::state::{LabelState, StateSpace};
use super::table::CwTable;
use crate::error::{KrcError, Result};
use crate::graph::{verify_center, CenterSet, Graph};
use crate::witness::cw::{check_cw_expression, CwExpression, CwNode};

/// Per node and label: whether a strictly higher join with a non-empty
/// partner class will reach the vertices carrying the label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LivenessMap {
    /// Indexed `[node][label]`, labels `0..=cw` (label 0 unused).
    pub live: Vec<Vec<bool>>,
}

impl LivenessMap {
    /// Whether `label` is live at `node`.
    pub fn is_live(&self, node: usize, label: usize) -> bool {
        self.live[node].get(label).copied().unwrap_or(false)
    }
}

/// Computes label liveness by following renames upward to later joins.
pub fn annotate_liveness(e: &CwExpression) -> LivenessMap {
    let flags = e.future_join_flags();
    LivenessMap { live: flags.into_iter().map(|row| row.into_iter().map(|(a, b)| a || b).collect()).collect() }
}

/// Output of [`solve_cw_count`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CwCountResult {
    /// Whether some count with `κ ≤ k` is positive.
    pub decision: bool,
    /// `counts[κ]` for `κ` in `0..=min(k, n)`.
    pub counts: Vec<BigUint>,
}

/// Checks the inputs accepted by the counting program.
pub fn check_cw_input(g: &Graph, e: &CwExpression) -> Result<()> {
    e.validate()?;
    if !g.is_unit_weight() {
        return Err(KrcError::Unsupported("the clique-width counting program needs unit weights".into()));
    }
    if !g.is_symmetric() {
        return Err(KrcError::Unsupported("the clique-width counting program needs a symmetric graph".into()));
    }
    if g.has_irrelevant() {
        return Err(KrcError::Unsupported(
            "the clique-width counting program does not support irrelevant vertices".into(),
        ));
    }
    if !check_cw_expression(e, g) {
        return Err(KrcError::InvalidExpression("expression does not evaluate to the graph".into()));
    }
    Ok(())
}

/// How union nodes combine their children.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum UnionMode {
    /// State changes, pointwise product, inverse state change.
    #[default]
    Transform,
    /// Direct summation over state pairs.
    Naive,
}

/// Counts join-certified labelings `dl: V → [0, r]` by number of zeros and
/// decides whether one with at most `k` zeros exists, which holds exactly
/// when a `(k, r)`-center exists.
pub fn solve_cw_count(g: &Graph, e: &CwExpression, k: usize, r: u64) -> Result<CwCountResult> {
    check_cw_input(g, e)?;
    let counts = count_tables(e, r, k.min(e.n), &[], UnionMode::Transform)?;
    let decision = counts.iter().any(|c| !c.is_zero());
    Ok(CwCountResult { decision, counts })
}

/// Like [`solve_cw_count`] with an explicit union mode.
pub fn solve_cw_count_with(g: &Graph, e: &CwExpression, k: usize, r: u64, mode: UnionMode) -> Result<CwCountResult> {
    check_cw_input(g, e)?;
    let counts = count_tables(e, r, k.min(e.n), &[], mode)?;
    let decision = counts.iter().any(|c| !c.is_zero());
    Ok(CwCountResult { decision, counts })
}

/// Combines two child tables at a union node.
pub fn union_tables(
    space: &StateSpace,
    left: &CwTable,
    right: &CwTable,
    live: &dyn Fn(usize) -> bool,
    mode: UnionMode,
) -> CwTable {
    match mode {
        UnionMode::Transform => union_transform(space, left, right, live),
        UnionMode::Naive => union_naive(space, left, right, live),
    }
}

fn merged_labels(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut l: Vec<usize> = a.iter().chain(b).copied().collect();
    l.sort_unstable();
    l.dedup();
    l
}

fn live_flags(labels: &[usize], live: &dyn Fn(usize) -> bool) -> Vec<bool> {
    labels.iter().map(|&l| live(l)).collect()
}

/// Union via state changes. Labels present on both sides are combined in
/// the transformed domain by a pointwise product with a `κ`-convolution.
pub fn union_transform(space: &StateSpace, left: &CwTable, right: &CwTable, live: &dyn Fn(usize) -> bool) -> CwTable {
    let labels = merged_labels(&left.labels, &right.labels);
    let kmax = left.kmax.min(right.kmax);
    let common: Vec<usize> = left.labels.iter().copied().filter(|l| right.labels.contains(l)).collect();
    let skip: Vec<bool> = common.iter().map(|&l| !live(l)).collect();
    let mut lt = left.clone();
    let mut rt = right.clone();
    let lpos: Vec<usize> = common.iter().map(|&l| lt.position(l).unwrap()).collect();
    let rpos: Vec<usize> = common.iter().map(|&l| rt.position(l).unwrap()).collect();
    lt.forward_transform(space, &lpos, &skip);
    rt.forward_transform(space, &rpos, &skip);
    let mut out = CwTable::zeros(space, labels.clone(), kmax);
    let tuples = out.tuples();
    let (lt_n, rt_n) = (lt.tuples(), rt.tuples());
    let lmap: Vec<usize> = lt.labels.iter().map(|&l| out.position(l).unwrap()).collect();
    let rmap: Vec<usize> = rt.labels.iter().map(|&l| out.position(l).unwrap()).collect();
    for t in 0..tuples {
        let st = out.decode(space, t);
        let li = CwTable::encode(space, &lmap.iter().map(|&p| st[p]).collect::<Vec<_>>());
        let ri = CwTable::encode(space, &rmap.iter().map(|&p| st[p]).collect::<Vec<_>>());
        for kappa in 0..=kmax {
            let mut acc = BigInt::zero();
            for k1 in 0..=kappa {
                let a = &lt.data[k1 * lt_n + li];
                if a.is_zero() {
                    continue;
                }
                let b = &rt.data[(kappa - k1) * rt_n + ri];
                if !b.is_zero() {
                    acc += a * b;
                }
            }
            out.data[kappa * tuples + t] = acc;
        }
    }
    let opos: Vec<usize> = common.iter().map(|&l| out.position(l).unwrap()).collect();
    out.backward_transform(space, &opos, &skip);
    let flags = live_flags(&out.labels, live);
    out.prune(space, &flags);
    out
}

/// Union by direct summation over all pairs of entries; merges that mix a
/// `u < 2` state into `u = 2` are dropped for labels that are not live.
pub fn union_naive(space: &StateSpace, left: &CwTable, right: &CwTable, live: &dyn Fn(usize) -> bool) -> CwTable {
    let labels = merged_labels(&left.labels, &right.labels);
    let kmax = left.kmax.min(right.kmax);
    let mut out = CwTable::zeros(space, labels.clone(), kmax);
    let tuples = out.tuples();
    let (ln, rn) = (left.tuples(), right.tuples());
    let lmap: Vec<usize> = left.labels.iter().map(|&l| out.position(l).unwrap()).collect();
    let rmap: Vec<usize> = right.labels.iter().map(|&l| out.position(l).unwrap()).collect();
    let flags = live_flags(&labels, live);
    for lt in 0..ln {
        let ls = left.decode(space, lt);
        for rt in 0..rn {
            let rs = right.decode(space, rt);
            let mut st: Vec<Option<usize>> = vec![None; labels.len()];
            let mut ok = true;
            for (i, &p) in lmap.iter().enumerate() {
                st[p] = Some(ls[i]);
            }
            for (i, &p) in rmap.iter().enumerate() {
                st[p] = Some(match st[p] {
                    None => rs[i],
                    Some(x) => {
                        let (a, b) = (space.state(x), space.state(rs[i]));
                        if !flags[p] && space.is_mixing(a, b) {
                            ok = false;
                        }
                        space.index(space.combine(a, b)).expect("admissible merge")
                    }
                });
            }
            if !ok {
                continue;
            }
            let st: Vec<usize> = st.into_iter().map(|x| x.unwrap()).collect();
            let t = CwTable::encode(space, &st);
            for k1 in 0..=left.kmax {
                let a = &left.data[k1 * ln + lt];
                if a.is_zero() {
                    continue;
                }
                for k2 in 0..=right.kmax.min(kmax.saturating_sub(k1)) {
                    if k1 + k2 > kmax {
                        break;
                    }
                    let b = &right.data[k2 * rn + rt];
                    if !b.is_zero() {
                        out.data[(k1 + k2) * tuples + t] += a * b;
                    }
                }
            }
        }
    }
    out.prune(space, &flags);
    out
}

fn intro_table(space: &StateSpace, label: usize, kmax: usize, forced: bool) -> CwTable {
    let mut t = CwTable::zeros(space, vec![label], kmax);
    let tuples = t.tuples();
    if kmax >= 1 {
        let i = space.index(LabelState::new(0, 2)).unwrap();
        t.data[tuples + i] = BigInt::one();
    }
    if !forced {
        for v in 1..=space.r() {
            let i = space.index(LabelState::new(v, 0)).unwrap();
            t.data[i] = BigInt::one();
        }
    }
    t
}

fn join_table(space: &StateSpace, t: CwTable, a: usize, b: usize) -> CwTable {
    let (Some(pa), Some(pb)) = (t.position(a), t.position(b)) else {
        return t;
    };
    let mut out = CwTable::zeros(space, t.labels.clone(), t.kmax);
    let tuples = t.tuples();
    for tu in 0..tuples {
        let mut st = t.decode(space, tu);
        let (sa, sb) = (space.state(st[pa]), space.state(st[pb]));
        st[pa] = space.index(space.join_update(sa, sb.v)).unwrap();
        st[pb] = space.index(space.join_update(sb, sa.v)).unwrap();
        let nt = CwTable::encode(space, &st);
        for k in 0..=t.kmax {
            let x = &t.data[k * tuples + tu];
            if !x.is_zero() {
                out.data[k * tuples + nt] += x;
            }
        }
    }
    out
}

fn rename_table(space: &StateSpace, t: CwTable, a: usize, b: usize, live_b: bool) -> CwTable {
    if a == b {
        return t;
    }
    let Some(pa) = t.position(a) else {
        return t;
    };
    let mut labels: Vec<usize> = t.labels.iter().copied().filter(|&l| l != a).collect();
    if !labels.contains(&b) {
        labels.push(b);
        labels.sort_unstable();
    }
    let mut out = CwTable::zeros(space, labels, t.kmax);
    let pb_old = t.position(b);
    let tuples = t.tuples();
    let out_tuples = out.tuples();
    for tu in 0..tuples {
        let st = t.decode(space, tu);
        let sa = space.state(st[pa]);
        let merged = match pb_old {
            None => sa,
            Some(pb) => {
                let sb = space.state(st[pb]);
                if !live_b && space.is_mixing(sa, sb) {
                    continue;
                }
                space.combine(sa, sb)
            }
        };
        let mut nst = Vec::with_capacity(out.labels.len());
        for &l in &out.labels {
            if l == b {
                nst.push(space.index(merged).unwrap());
            } else {
                nst.push(st[t.position(l).unwrap()]);
            }
        }
        let nt = CwTable::encode(space, &nst);
        for k in 0..=t.kmax {
            let x = &t.data[k * tuples + tu];
            if !x.is_zero() {
                out.data[k * out_tuples + nt] += x;
            }
        }
    }
    out
}

/// Runs the program and returns the root counts for `κ` in `0..=kmax`.
/// Vertices listed in `forced` must receive label 0.
pub(crate) fn count_tables(
    e: &CwExpression,
    r: u64,
    kmax: usize,
    forced: &[usize],
    mode: UnionMode,
) -> Result<Vec<BigUint>> {
    if e.n == 0 {
        let mut c = vec![BigUint::zero(); kmax + 1];
        c[0] = BigUint::one();
        return Ok(c);
    }
    let space = StateSpace::new(r);
    let live = annotate_liveness(e);
    let mut is_forced = vec![false; e.n];
    for &v in forced {
        is_forced[v] = true;
    }
    let mut tables: Vec<Option<CwTable>> = vec![None; e.nodes.len()];
    for t in e.post_order() {
        let mut table = match e.nodes[t] {
            CwNode::Intro { label, vertex } => intro_table(&space, label, kmax, is_forced[vertex]),
            CwNode::Join { a, b, child, .. } => join_table(&space, tables[child].take().unwrap(), a, b),
            CwNode::Rename { a, b, child } => {
                rename_table(&space, tables[child].take().unwrap(), a, b, live.is_live(t, b))
            }
            CwNode::Union { left, right } => {
                let l = tables[left].take().unwrap();
                let rt = tables[right].take().unwrap();
                union_tables(&space, &l, &rt, &|lab| live.is_live(t, lab), mode)
            }
        };
        let flags: Vec<bool> = table.labels.iter().map(|&l| live.is_live(t, l)).collect();
        table.prune(&space, &flags);
        tables[t] = Some(table);
    }
    let root = tables[e.root].take().unwrap();
    let tuples = root.tuples();
    let mut counts = vec![BigInt::zero(); kmax + 1];
    for tu in 0..tuples {
        let st = root.decode(&space, tu);
        if st.iter().all(|&s| space.state(s).u == 2) {
            for (k, c) in counts.iter_mut().enumerate() {
                *c += &root.data[k * tuples + tu];
            }
        }
    }
    counts
        .into_iter()
        .map(|c| c.to_biguint().ok_or_else(|| KrcError::Internal("negative count at the root".into())))
        .collect()
}

/// Finds a center set by self-reduction: vertices are tried in increasing
/// order and kept as forced centers while a solution with at most `k`
/// centers still exists.
pub fn reconstruct_center_cw(g: &Graph, e: &CwExpression, k: usize, r: u64) -> Result<Option<CenterSet>> {
    check_cw_input(g, e)?;
    let kmax = k.min(e.n);
    let positive = |c: &[BigUint]| c.iter().any(|x| !x.is_zero());
    if !positive(&count_tables(e, r, kmax, &[], UnionMode::Transform)?) {
        return Ok(None);
    }
    let mut forced = Vec::new();
    for v in 0..e.n {
        forced.push(v);
        if !positive(&count_tables(e, r, kmax, &forced, UnionMode::Transform)?) {
            forced.pop();
        }
    }
    let set = CenterSet::new(forced).with_radius(r);
    let rep = verify_center(g, &set, r)?;
    if !rep.covered || set.len() > k {
        return Err(KrcError::Internal("reconstructed center set does not verify".into()));
    }
    Ok(Some(set))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{brute_force_decide, enumerate_valid_cw_labelings_all, DEFAULT_LIMIT};
    use crate::witness::cw::{eval_cw_expression, path_expression, CwBuilder};

    fn edge() -> CwExpression {
        let mut b = CwBuilder::new();
        let x = b.intro(1, 0);
        let y = b.intro(2, 1);
        let u = b.union(x, y);
        let j = b.join_both(1, 2, 1, u);
        b.finish(j, 2, 2).unwrap()
    }

    #[test]
    fn single_edge_counts() {
        let e = edge();
        let g = eval_cw_expression(&e).unwrap();
        let res = solve_cw_count(&g, &e, 1, 1).unwrap();
        assert!(res.decision);
        assert_eq!(res.counts[1], BigUint::from(2u32));
    }

    #[test]
    fn p3_counts_match_oracle() {
        let e = path_expression(&[1, 1]);
        let g = eval_cw_expression(&e).unwrap();
        for r in 1..=2 {
            let res = solve_cw_count(&g, &e, 3, r).unwrap();
            let oracle = enumerate_valid_cw_labelings_all(&e, r, DEFAULT_LIMIT).unwrap();
            assert_eq!(res.counts, oracle, "r={r}");
        }
        let c = reconstruct_center_cw(&g, &e, 1, 1).unwrap().unwrap();
        assert_eq!(c.vertices, vec![1]);
    }

    #[test]
    fn c4_reconstruct() {
        let mut b = CwBuilder::new();
        let v0 = b.intro(1, 0);
        let v2 = b.intro(1, 2);
        let u = b.union(v0, v2);
        let v1 = b.intro(2, 1);
        let v3 = b.intro(2, 3);
        let u2 = b.union(v1, v3);
        let uu = b.union(u, u2);
        let j = b.join_both(1, 2, 1, uu);
        let e = b.finish(j, 2, 4).unwrap();
        let g = eval_cw_expression(&e).unwrap();
        let c = reconstruct_center_cw(&g, &e, 1, 2).unwrap().unwrap();
        assert_eq!(c.vertices, vec![0]);
        assert_eq!(
            brute_force_decide(&g, 1, 2, DEFAULT_LIMIT).unwrap().is_some(),
            solve_cw_count(&g, &e, 1, 2).unwrap().decision
        );
        assert!(reconstruct_center_cw(&g, &e, 1, 0).unwrap().is_none());
    }

    #[test]
    fn rejects_weighted() {
        let e = path_expression(&[2]);
        let g = eval_cw_expression(&e).unwrap();
        assert!(solve_cw_count(&g, &e, 1, 1).is_err());
    }
}
