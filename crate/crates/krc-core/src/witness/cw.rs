//! Clique-width expressions with weighted joins.

use serde::{Deserialize, Serialize};

use crate::error::{KrcError, Result};
use crate::graph::Graph;

/// One operation of a clique-width expression. Labels are `1..=cw`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CwNode {
    /// Creates `vertex` with `label`.
    Intro {
        /// Label of the new vertex.
        label: usize,
        /// Vertex id.
        vertex: usize,
    },
    /// Adds arcs of weight `w` from every label-`a` vertex to every label-`b` vertex.
    Join {
        /// Tail label.
        a: usize,
        /// Head label.
        b: usize,
        /// Arc weight.
        w: u64,
        /// Operand.
        child: usize,
    },
    /// Relabels every label-`a` vertex to `b`.
    Rename {
        /// Old label.
        a: usize,
        /// New label.
        b: usize,
        /// Operand.
        child: usize,
    },
    /// Disjoint union.
    Union {
        /// Left operand.
        left: usize,
        /// Right operand.
        right: usize,
    },
}

impl CwNode {
    /// Operand node ids.
    pub fn children(&self) -> Vec<usize> {
        match *self {
            CwNode::Intro { .. } => Vec::new(),
            CwNode::Join { child, .. } | CwNode::Rename { child, .. } => vec![child],
            CwNode::Union { left, right } => vec![left, right],
        }
    }
}

/// A clique-width expression over vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CwExpression {
    /// Operations by node id.
    pub nodes: Vec<CwNode>,
    /// Root node id.
    pub root: usize,
    /// Number of labels.
    pub cw: usize,
    /// Number of vertices.
    pub n: usize,
}

impl CwExpression {
    /// Checks that the nodes form a rooted binary tree, labels are in range,
    /// joins connect distinct labels and each vertex is introduced once.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(KrcError::InvalidExpression(m));
        if self.nodes.is_empty() {
            if self.n == 0 {
                return Ok(());
            }
            return bad("no nodes".into());
        }
        if self.root >= self.nodes.len() {
            return bad(format!("root {} out of range", self.root));
        }
        let mut parents = vec![0usize; self.nodes.len()];
        let mut introduced = vec![false; self.n];
        let label_ok = |l: usize| l >= 1 && l <= self.cw;
        for (i, node) in self.nodes.iter().enumerate() {
            for c in node.children() {
                if c >= self.nodes.len() {
                    return bad(format!("node {i} references missing node {c}"));
                }
                parents[c] += 1;
            }
            match *node {
                CwNode::Intro { label, vertex } => {
                    if !label_ok(label) {
                        return bad(format!("node {i}: label {label} out of range"));
                    }
                    if vertex >= self.n {
                        return bad(format!("node {i}: vertex {vertex} out of range"));
                    }
                    if introduced[vertex] {
                        return bad(format!("vertex {vertex} introduced twice"));
                    }
                    introduced[vertex] = true;
                }
                CwNode::Join { a, b, .. } => {
                    if !label_ok(a) || !label_ok(b) || a == b {
                        return bad(format!("node {i}: bad join labels ({a},{b})"));
                    }
                }
                CwNode::Rename { a, b, .. } => {
                    if !label_ok(a) || !label_ok(b) {
                        return bad(format!("node {i}: bad rename labels ({a},{b})"));
                    }
                }
                CwNode::Union { left, right } => {
                    if left == right {
                        return bad(format!("node {i}: union of a node with itself"));
                    }
                }
            }
        }
        if parents[self.root] != 0 {
            return bad("root has a parent".into());
        }
        for (i, &p) in parents.iter().enumerate() {
            if i != self.root && p != 1 {
                return bad(format!("node {i} has {p} parents"));
            }
        }
        if self.post_order().len() != self.nodes.len() {
            return bad("node references contain a cycle or unreachable nodes".into());
        }
        if let Some(v) = introduced.iter().position(|&x| !x) {
            return bad(format!("vertex {v} never introduced"));
        }
        Ok(())
    }

    /// Children-first order of the nodes reachable from the root.
    pub fn post_order(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        if self.nodes.is_empty() {
            return out;
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![(self.root, false)];
        while let Some((v, expanded)) = stack.pop() {
            if expanded {
                out.push(v);
                continue;
            }
            if seen[v] {
                return Vec::new();
            }
            seen[v] = true;
            stack.push((v, true));
            for c in self.nodes[v].children().into_iter().rev() {
                stack.push((c, false));
            }
        }
        out
    }

    /// Parent of every node (`None` for the root).
    pub fn parents(&self) -> Vec<Option<usize>> {
        let mut p = vec![None; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            for c in node.children() {
                p[c] = Some(i);
            }
        }
        p
    }

    /// Label of every vertex at every node (`0` when the vertex is not in
    /// the node's subexpression). Indexed `[node][vertex]`.
    pub fn labels_at_nodes(&self) -> Vec<Vec<usize>> {
        let mut lab = vec![Vec::new(); self.nodes.len()];
        for t in self.post_order() {
            lab[t] = match self.nodes[t] {
                CwNode::Intro { label, vertex } => {
                    let mut l = vec![0; self.n];
                    l[vertex] = label;
                    l
                }
                CwNode::Join { child, .. } => lab[child].clone(),
                CwNode::Rename { a, b, child } => lab[child].iter().map(|&x| if x == a { b } else { x }).collect(),
                CwNode::Union { left, right } => lab[left].iter().zip(&lab[right]).map(|(&x, &y)| x.max(y)).collect(),
            };
        }
        lab
    }

    /// Number of vertices of each label at each node, indexed `[node][label]`
    /// with labels `0..=cw` (label 0 unused).
    pub fn label_counts(&self) -> Vec<Vec<usize>> {
        let mut cnt = vec![Vec::new(); self.nodes.len()];
        for t in self.post_order() {
            cnt[t] = match self.nodes[t] {
                CwNode::Intro { label, .. } => {
                    let mut c = vec![0; self.cw + 1];
                    c[label] = 1;
                    c
                }
                CwNode::Join { child, .. } => cnt[child].clone(),
                CwNode::Rename { a, b, child } => {
                    let mut c = cnt[child].clone();
                    if a != b {
                        c[b] += c[a];
                        c[a] = 0;
                    }
                    c
                }
                CwNode::Union { left, right } => cnt[left].iter().zip(&cnt[right]).map(|(x, y)| x + y).collect(),
            };
        }
        cnt
    }

    /// For every node and label, whether a strictly higher join will add arcs
    /// into (first flag) or out of (second flag) the vertices carrying that
    /// label at the node, following renames upward. A join only counts when
    /// its other class is non-empty. Indexed `[node][label]`.
    pub fn future_join_flags(&self) -> Vec<Vec<(bool, bool)>> {
        let counts = self.label_counts();
        let mut flags = vec![vec![(false, false); self.cw + 1]; self.nodes.len()];
        let mut order = self.post_order();
        order.reverse();
        for p in order {
            for x in self.nodes[p].children() {
                let mut f = vec![(false, false); self.cw + 1];
                for (l, slot) in f.iter_mut().enumerate().skip(1) {
                    let lp = match self.nodes[p] {
                        CwNode::Rename { a, b, .. } if a == l => b,
                        _ => l,
                    };
                    let (mut inside, mut outside) = flags[p][lp];
                    if let CwNode::Join { a, b, .. } = self.nodes[p] {
                        if b == lp && counts[p][a] > 0 {
                            inside = true;
                        }
                        if a == lp && counts[p][b] > 0 {
                            outside = true;
                        }
                    }
                    *slot = (inside, outside);
                }
                flags[x] = f;
            }
        }
        flags
    }

    /// Largest join weight (0 without joins).
    pub fn max_weight(&self) -> u64 {
        self.nodes
            .iter()
            .filter_map(|x| match x {
                CwNode::Join { w, .. } => Some(*w),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }
}

/// Evaluates the expression into a directed graph. Arcs appear in
/// post-order of the joins, each join emitting arcs by increasing tail then head.
pub fn eval_cw_expression(e: &CwExpression) -> Result<Graph> {
    e.validate()?;
    let mut g = Graph::new(e.n);
    if e.nodes.iter().any(|x| matches!(x, CwNode::Join { w: 0, .. })) {
        g.allow_zero_weights();
    }
    let mut classes: Vec<Vec<Vec<usize>>> = vec![Vec::new(); e.nodes.len()];
    for t in e.post_order() {
        let cls = match e.nodes[t] {
            CwNode::Intro { label, vertex } => {
                let mut c = vec![Vec::new(); e.cw + 1];
                c[label].push(vertex);
                c
            }
            CwNode::Join { a, b, w, child } => {
                let c = std::mem::take(&mut classes[child]);
                let mut tails = c[a].clone();
                let mut heads = c[b].clone();
                tails.sort_unstable();
                heads.sort_unstable();
                for &x in &tails {
                    for &y in &heads {
                        g.add_arc(x, y, w)?;
                    }
                }
                c
            }
            CwNode::Rename { a, b, child } => {
                let mut c = std::mem::take(&mut classes[child]);
                if a != b {
                    let moved = std::mem::take(&mut c[a]);
                    c[b].extend(moved);
                }
                c
            }
            CwNode::Union { left, right } => {
                let mut c = std::mem::take(&mut classes[left]);
                let r = std::mem::take(&mut classes[right]);
                for (x, y) in c.iter_mut().zip(r) {
                    x.extend(y);
                }
                c
            }
        };
        classes[t] = cls;
    }
    Ok(g)
}

/// Whether `e` evaluates to exactly the arc multiset of `g` (ids and weights).
pub fn check_cw_expression(e: &CwExpression, g: &Graph) -> bool {
    let Ok(h) = eval_cw_expression(e) else {
        return false;
    };
    if h.n() != g.n() {
        return false;
    }
    let key = |gr: &Graph| {
        let mut v: Vec<(usize, usize, u64)> = gr.arcs().iter().map(|a| (a.tail, a.head, a.weight)).collect();
        v.sort_unstable();
        v
    };
    key(&h) == key(g)
}

/// Incremental builder for expressions.
#[derive(Debug, Clone, Default)]
pub struct CwBuilder {
    nodes: Vec<CwNode>,
}

impl CwBuilder {
    /// An empty builder.
    pub fn new() -> Self {
        Self::default()
    }

    fn push(&mut self, node: CwNode) -> usize {
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    /// Introduces `vertex` with `label`.
    pub fn intro(&mut self, label: usize, vertex: usize) -> usize {
        self.push(CwNode::Intro { label, vertex })
    }

    /// Directed join `a → b` of weight `w`.
    pub fn join(&mut self, a: usize, b: usize, w: u64, child: usize) -> usize {
        self.push(CwNode::Join { a, b, w, child })
    }

    /// Joins in both directions with weight `w`.
    pub fn join_both(&mut self, a: usize, b: usize, w: u64, child: usize) -> usize {
        let x = self.join(a, b, w, child);
        self.join(b, a, w, x)
    }

    /// Renames `a` to `b`.
    pub fn rename(&mut self, a: usize, b: usize, child: usize) -> usize {
        self.push(CwNode::Rename { a, b, child })
    }

    /// Disjoint union.
    pub fn union(&mut self, left: usize, right: usize) -> usize {
        self.push(CwNode::Union { left, right })
    }

    /// Finishes with `root`, validating the result.
    pub fn finish(self, root: usize, cw: usize, n: usize) -> Result<CwExpression> {
        let e = CwExpression { nodes: self.nodes, root, cw, n };
        e.validate()?;
        Ok(e)
    }
}

/// A two-label expression for the path `0 - 1 - ... - (n-1)` with weights
/// `weights[i]` on edge `(i, i+1)`.
pub fn path_expression(weights: &[u64]) -> CwExpression {
    let n = weights.len() + 1;
    let mut b = CwBuilder::new();
    let mut cur = b.intro(1, 0);
    for (i, &w) in weights.iter().enumerate() {
        let x = b.intro(2, i + 1);
        let u = b.union(cur, x);
        let j = b.join_both(1, 2, w, u);
        let r1 = b.rename(1, 3, j);
        let r2 = b.rename(2, 1, r1);
        cur = r2;
    }
    b.finish(cur, 3, n).expect("path expression")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge_expression() -> CwExpression {
        let mut b = CwBuilder::new();
        let x = b.intro(1, 0);
        let y = b.intro(2, 1);
        let u = b.union(x, y);
        let j = b.join_both(1, 2, 1, u);
        b.finish(j, 2, 2).unwrap()
    }

    #[test]
    fn single_edge() {
        let e = edge_expression();
        let g = eval_cw_expression(&e).unwrap();
        assert!(g.is_symmetric());
        assert_eq!(g.arc_count(), 2);
        let mut h = Graph::new(2);
        h.add_arc(1, 0, 1).unwrap();
        h.add_arc(0, 1, 1).unwrap();
        assert!(check_cw_expression(&e, &h));
        let mut wrong = Graph::new(2);
        wrong.add_arc(0, 1, 1).unwrap();
        assert!(!check_cw_expression(&e, &wrong));
    }

    #[test]
    fn edgeless() {
        let mut b = CwBuilder::new();
        let x = b.intro(1, 0);
        let y = b.intro(1, 1);
        let u = b.union(x, y);
        let e = b.finish(u, 1, 2).unwrap();
        assert_eq!(eval_cw_expression(&e).unwrap().arc_count(), 0);
    }

    #[test]
    fn triangle_with_two_labels() {
        let mut b = CwBuilder::new();
        let x = b.intro(1, 0);
        let y = b.intro(2, 1);
        let u = b.union(x, y);
        let j = b.join_both(1, 2, 1, u);
        let r = b.rename(2, 1, j);
        let z = b.intro(2, 2);
        let u2 = b.union(r, z);
        let j2 = b.join_both(1, 2, 1, u2);
        let e = b.finish(j2, 2, 3).unwrap();
        let g = eval_cw_expression(&e).unwrap();
        assert_eq!(g.arc_count(), 6);
        assert!(g.is_symmetric());
    }

    #[test]
    fn malformed_expressions_rejected() {
        let e = CwExpression { nodes: vec![CwNode::Intro { label: 3, vertex: 0 }], root: 0, cw: 2, n: 1 };
        assert!(e.validate().is_err());
        let e = CwExpression {
            nodes: vec![
                CwNode::Intro { label: 1, vertex: 0 },
                CwNode::Intro { label: 1, vertex: 0 },
                CwNode::Union { left: 0, right: 1 },
            ],
            root: 2,
            cw: 1,
            n: 1,
        };
        assert!(e.validate().is_err());
        let e = CwExpression {
            nodes: vec![CwNode::Rename { a: 1, b: 2, child: 1 }, CwNode::Rename { a: 1, b: 2, child: 0 }],
            root: 0,
            cw: 2,
            n: 0,
        };
        assert!(e.validate().is_err());
    }

    #[test]
    fn path_expression_matches() {
        let e = path_expression(&[2, 3]);
        let g = eval_cw_expression(&e).unwrap();
        assert_eq!(g.arc_count(), 4);
        assert_eq!(crate::graph::shortest_paths(&g, 0), vec![0, 2, 5]);
    }
}
