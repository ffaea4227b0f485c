//! Replacement of large label classes by irrelevant representatives, giving
//! a graph with the same distances among original vertices and a tree
//! decomposition of width `O(cw)`.

use serde::{Deserialize, Serialize};

use super::cw::{eval_cw_expression, CwExpression, CwNode};
use super::td::{check_tree_decomposition, TreeDecomposition};
use crate::error::{KrcError, Result};
use crate::graph::Graph;

/// Parameters of [`cw_to_tw_transform`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformConfig {
    /// Size threshold from which a label class counts as big. At least 3.
    pub c: usize,
}

impl Default for TransformConfig {
    fn default() -> Self {
        TransformConfig { c: 10 }
    }
}

/// Representatives inserted above one expression node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Insertion {
    /// Node of the original (or partially transformed) expression.
    pub node: usize,
    /// Label that became big there.
    pub label: usize,
    /// Source representative, if arcs will enter the class later.
    pub s: Option<usize>,
    /// Sink representative, if arcs will leave the class later.
    pub t: Option<usize>,
}

/// Output of [`cw_to_tw_transform`].
#[derive(Debug, Clone)]
pub struct TransformResult {
    /// The transformed graph; inserted vertices are irrelevant.
    pub graph: Graph,
    /// The transformed expression on `cw + 3` labels.
    pub expression: CwExpression,
    /// One bag per node of the transformed expression.
    pub decomposition: TreeDecomposition,
    /// Every insertion in the order performed.
    pub added: Vec<Insertion>,
    /// The threshold used.
    pub c: usize,
}

/// Transforms a clique-width expression so that no join touches a label
/// class with more than `2c` vertices, then builds the small-class tree
/// decomposition.
///
/// Nodes are scanned in post-order. At the first node where a label is
/// newly big (its class reaches `c` vertices while every class merged into
/// it was smaller) and a higher join will add arcs into or out of the class,
/// a source `s` and/or sink `t` joined to the class by weight-0 arcs take
/// over its label and the old members move to a junk label.
///
/// `irrelevant` lists original vertices to keep irrelevant in the output.
pub fn cw_to_tw_transform(e: &CwExpression, irrelevant: &[usize], config: &TransformConfig) -> Result<TransformResult> {
    e.validate()?;
    let c = config.c;
    if c < 3 {
        return Err(KrcError::InvalidParameter(format!("big-class threshold {c} is below 3")));
    }
    let cw = e.cw;
    let (src, snk, junk) = (cw + 1, cw + 2, cw + 3);
    let mut x = CwExpression { nodes: e.nodes.clone(), root: e.root, cw: cw + 3, n: e.n };
    let mut processed = vec![vec![false; cw + 1]; x.nodes.len()];
    let mut added = Vec::new();
    while let Some((node, label, inside, outside)) = next_active(&x, &processed, c, cw) {
        processed[node][label] = true;
        let parent = x.parents()[node];
        let push = |x: &mut CwExpression, n: CwNode| {
            x.nodes.push(n);
            x.nodes.len() - 1
        };
        let mut cur = node;
        let mut ins = Insertion { node, label, s: None, t: None };
        if inside {
            let s = x.n;
            x.n += 1;
            let i = push(&mut x, CwNode::Intro { label: src, vertex: s });
            cur = push(&mut x, CwNode::Union { left: cur, right: i });
            cur = push(&mut x, CwNode::Join { a: src, b: label, w: 0, child: cur });
            ins.s = Some(s);
        }
        if outside {
            let t = x.n;
            x.n += 1;
            let i = push(&mut x, CwNode::Intro { label: snk, vertex: t });
            cur = push(&mut x, CwNode::Union { left: cur, right: i });
            cur = push(&mut x, CwNode::Join { a: label, b: snk, w: 0, child: cur });
            ins.t = Some(t);
        }
        cur = push(&mut x, CwNode::Rename { a: label, b: junk, child: cur });
        cur = push(&mut x, CwNode::Rename { a: src, b: label, child: cur });
        cur = push(&mut x, CwNode::Rename { a: snk, b: label, child: cur });
        match parent {
            None => x.root = cur,
            Some(p) => match &mut x.nodes[p] {
                CwNode::Join { child, .. } | CwNode::Rename { child, .. } => *child = cur,
                CwNode::Union { left, right } => {
                    if *left == node {
                        *left = cur;
                    } else {
                        *right = cur;
                    }
                }
                CwNode::Intro { .. } => unreachable!("intro nodes have no children"),
            },
        }
        processed.resize(x.nodes.len(), vec![false; cw + 1]);
        added.push(ins);
    }
    x.validate()?;
    let mut graph = eval_cw_expression(&x)?;
    graph.allow_zero_weights();
    for &v in irrelevant {
        graph.set_irrelevant(v)?;
    }
    for ins in &added {
        for v in ins.s.into_iter().chain(ins.t) {
            graph.set_irrelevant(v)?;
        }
    }
    let decomposition = small_class_decomposition(&x, 2 * c);
    let rep = check_tree_decomposition(&graph, &decomposition);
    if !rep.valid {
        return Err(KrcError::Internal(format!("transformed decomposition invalid: {:?}", rep.violations)));
    }
    Ok(TransformResult { graph, expression: x, decomposition, added, c })
}

fn next_active(x: &CwExpression, processed: &[Vec<bool>], c: usize, cw: usize) -> Option<(usize, usize, bool, bool)> {
    let counts = x.label_counts();
    let flags = x.future_join_flags();
    for t in x.post_order() {
        for l in 1..=cw {
            if processed[t][l] || counts[t][l] < c {
                continue;
            }
            let fresh = match x.nodes[t] {
                CwNode::Intro { .. } => false,
                CwNode::Join { child, .. } => counts[child][l] < c,
                CwNode::Rename { a, b, child } => {
                    if l == b && a != b {
                        counts[child][a] < c && counts[child][b] < c
                    } else {
                        counts[child][l] < c
                    }
                }
                CwNode::Union { left, right } => counts[left][l] < c && counts[right][l] < c,
            };
            let (inside, outside) = flags[t][l];
            if fresh && (inside || outside) {
                return Some((t, l, inside, outside));
            }
        }
    }
    None
}

/// One bag per expression node holding every vertex whose label class at
/// that node has at most `limit` members.
pub fn small_class_decomposition(x: &CwExpression, limit: usize) -> TreeDecomposition {
    let order = x.post_order();
    if order.is_empty() {
        return TreeDecomposition::single_bag(Vec::new());
    }
    let mut classes: Vec<Vec<Vec<usize>>> = vec![Vec::new(); x.nodes.len()];
    let mut bags = vec![Vec::new(); x.nodes.len()];
    let parents = x.parents();
    for &t in &order {
        let cls = match x.nodes[t] {
            CwNode::Intro { label, vertex } => {
                let mut cl = vec![Vec::new(); x.cw + 1];
                cl[label].push(vertex);
                cl
            }
            CwNode::Join { child, .. } => classes[child].clone(),
            CwNode::Rename { a, b, child } => {
                let mut cl = classes[child].clone();
                if a != b {
                    let moved = std::mem::take(&mut cl[a]);
                    cl[b].extend(moved);
                }
                cl
            }
            CwNode::Union { left, right } => {
                let mut cl = classes[left].clone();
                for (dst, src) in cl.iter_mut().zip(&classes[right]) {
                    dst.extend(src.iter().copied());
                }
                cl
            }
        };
        let mut bag: Vec<usize> = cls.iter().filter(|k| k.len() <= limit).flat_map(|k| k.iter().copied()).collect();
        bag.sort_unstable();
        bags[t] = bag;
        for ch in x.nodes[t].children() {
            if parents[ch] == Some(t) {
                classes[ch] = Vec::new();
            }
        }
        classes[t] = cls;
    }
    let mut index = vec![usize::MAX; x.nodes.len()];
    for (i, &t) in order.iter().enumerate() {
        index[t] = i;
    }
    let out_bags: Vec<Vec<usize>> = order.iter().map(|&t| std::mem::take(&mut bags[t])).collect();
    let parent: Vec<Option<usize>> = order.iter().map(|&t| parents[t].map(|p| index[p])).collect();
    TreeDecomposition { bags: out_bags, parent, root: index[x.root] }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::all_pairs;
    use crate::witness::cw::CwBuilder;

    fn star_expression(leaves: usize) -> CwExpression {
        let mut b = CwBuilder::new();
        let mut cur = b.intro(1, 1);
        for v in 2..=leaves {
            let i = b.intro(1, v);
            cur = b.union(cur, i);
        }
        let hub = b.intro(2, 0);
        let u = b.union(cur, hub);
        let j = b.join_both(1, 2, 1, u);
        b.finish(j, 2, leaves + 1).unwrap()
    }

    #[test]
    fn small_expression_unchanged() {
        let e = star_expression(5);
        let res = cw_to_tw_transform(&e, &[], &TransformConfig::default()).unwrap();
        assert!(res.added.is_empty());
        assert_eq!(res.graph.n(), 6);
        assert!(!res.graph.has_irrelevant());
    }

    #[test]
    fn star_gets_one_source_and_sink() {
        let e = star_expression(12);
        let res = cw_to_tw_transform(&e, &[], &TransformConfig::default()).unwrap();
        assert_eq!(res.added.len(), 1);
        assert!(res.added[0].s.is_some() && res.added[0].t.is_some());
        assert_eq!(res.graph.n(), 15);
        assert_eq!(res.graph.irrelevant_vertices(), vec![13, 14]);
        let before = all_pairs(&eval_cw_expression(&e).unwrap());
        let after = all_pairs(&res.graph);
        for u in 0..13 {
            for v in 0..13 {
                assert_eq!(before[u][v], after[u][v]);
            }
        }
        assert!(res.decomposition.bags.iter().all(|b| b.len() <= 2 * 10 * (2 + 3)));
    }

    #[test]
    fn threshold_floor() {
        let e = star_expression(3);
        assert!(cw_to_tw_transform(&e, &[], &TransformConfig { c: 2 }).is_err());
        let res = cw_to_tw_transform(&e, &[], &TransformConfig { c: 3 }).unwrap();
        assert_eq!(res.added.len(), 1);
    }
}
