//! Nice tree decompositions.

use serde::{Deserialize, Serialize};

use super::td::{check_tree_decomposition, TreeDecomposition};
use crate::error::{KrcError, Result};
use crate::graph::Graph;

/// Kind of a nice decomposition node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NiceKind {
    /// A single-vertex bag without children.
    Leaf(usize),
    /// The bag of the single child plus this vertex.
    Introduce(usize),
    /// The bag of the single child minus this vertex.
    Forget(usize),
    /// Two children with bags equal to this bag.
    Join,
}

/// A node of a nice tree decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NiceNode {
    /// Sorted bag.
    pub bag: Vec<usize>,
    /// Node kind.
    pub kind: NiceKind,
    /// Child node ids (0, 1 or 2 of them).
    pub children: Vec<usize>,
}

/// A nice tree decomposition whose node ids are a post-order: every child
/// has a smaller id than its parent, and the root is the last node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NiceTreeDecomposition {
    /// Nodes, children before parents.
    pub nodes: Vec<NiceNode>,
}

impl NiceTreeDecomposition {
    /// Root node id, if any node exists.
    pub fn root(&self) -> Option<usize> {
        self.nodes.len().checked_sub(1)
    }

    /// Largest bag size minus one.
    pub fn width(&self) -> usize {
        self.nodes.iter().map(|x| x.bag.len()).max().unwrap_or(0).saturating_sub(1)
    }

    /// Height under the leaf-is-1 convention.
    pub fn height(&self) -> usize {
        let mut h = vec![0usize; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            h[i] = 1 + node.children.iter().map(|&c| h[c]).max().unwrap_or(0);
        }
        h.last().copied().unwrap_or(0)
    }

    /// Per-node heights.
    pub fn heights(&self) -> Vec<usize> {
        let mut h = vec![0usize; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            h[i] = 1 + node.children.iter().map(|&c| h[c]).max().unwrap_or(0);
        }
        h
    }

    /// The underlying plain tree decomposition.
    pub fn to_tree_decomposition(&self) -> TreeDecomposition {
        if self.nodes.is_empty() {
            return TreeDecomposition::single_bag(Vec::new());
        }
        let mut parent = vec![None; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            for &c in &node.children {
                parent[c] = Some(i);
            }
        }
        TreeDecomposition {
            bags: self.nodes.iter().map(|x| x.bag.clone()).collect(),
            parent,
            root: self.nodes.len() - 1,
        }
    }

    /// Checks the node-kind invariants (not the decomposition properties).
    pub fn check_shape(&self) -> Result<()> {
        let bad = |i: usize, what: &str| Err(KrcError::InvalidDecomposition(format!("nice node {i}: {what}")));
        let mut has_parent = vec![false; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            if node.bag.windows(2).any(|w| w[0] >= w[1]) {
                return bad(i, "bag not sorted");
            }
            for &c in &node.children {
                if c >= i || has_parent[c] {
                    return bad(i, "children must precede the parent and be unique");
                }
                has_parent[c] = true;
            }
            let child_bag = |j: usize| &self.nodes[node.children[j]].bag;
            match node.kind {
                NiceKind::Leaf(v) => {
                    if !node.children.is_empty() || node.bag != [v] {
                        return bad(i, "leaf must be a single-vertex bag without children");
                    }
                }
                NiceKind::Introduce(v) | NiceKind::Forget(v) => {
                    if node.children.len() != 1 {
                        return bad(i, "introduce/forget needs one child");
                    }
                    let (big, small) = match node.kind {
                        NiceKind::Introduce(_) => (&node.bag, child_bag(0)),
                        _ => (child_bag(0), &node.bag),
                    };
                    let mut expect = small.clone();
                    if expect.binary_search(&v).is_ok() {
                        return bad(i, "vertex already present");
                    }
                    expect.push(v);
                    expect.sort_unstable();
                    if &expect != big {
                        return bad(i, "bags differ by more than the named vertex");
                    }
                }
                NiceKind::Join => {
                    if node.children.len() != 2 || child_bag(0) != &node.bag || child_bag(1) != &node.bag {
                        return bad(i, "join needs two children with equal bags");
                    }
                }
            }
        }
        if self.nodes.len() > 1 && has_parent.iter().filter(|&&p| !p).count() != 1 {
            return Err(KrcError::InvalidDecomposition("nice decomposition is not a tree".into()));
        }
        Ok(())
    }

    /// Checks shape and decomposition validity for `g`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        self.check_shape()?;
        if g.n() == 0 {
            return Ok(());
        }
        let rep = check_tree_decomposition(g, &self.to_tree_decomposition());
        if rep.valid {
            Ok(())
        } else {
            Err(KrcError::InvalidDecomposition(format!("{:?}", rep.violations)))
        }
    }
}

/// Converts a decomposition into nice form of the same width.
///
/// The root bag is kept. Empty leaf bags are dropped, so a decomposition
/// whose bags are all empty yields a nice decomposition without nodes.
pub fn make_nice(td: &TreeDecomposition) -> NiceTreeDecomposition {
    let mut out = NiceTreeDecomposition { nodes: Vec::new() };
    if td.bags.is_empty() {
        return out;
    }
    let ch = td.children();
    let order = super::td::post_order(&ch, td.root);
    let mut built: Vec<Option<usize>> = vec![None; td.bags.len()];
    for &t in &order {
        let target = &td.bags[t];
        let mut kids: Vec<usize> =
            ch[t].iter().filter_map(|&c| built[c]).map(|id| adapt(&mut out, id, target)).collect();
        built[t] = match kids.len() {
            0 => leaf_chain(&mut out, target),
            1 => Some(kids[0]),
            _ => {
                while kids.len() > 1 {
                    let mut next = Vec::with_capacity(kids.len().div_ceil(2));
                    for pair in kids.chunks(2) {
                        if pair.len() == 2 {
                            next.push(push(&mut out, target.clone(), NiceKind::Join, vec![pair[0], pair[1]]));
                        } else {
                            next.push(pair[0]);
                        }
                    }
                    kids = next;
                }
                Some(kids[0])
            }
        };
    }
    out
}

fn push(out: &mut NiceTreeDecomposition, bag: Vec<usize>, kind: NiceKind, children: Vec<usize>) -> usize {
    out.nodes.push(NiceNode { bag, kind, children });
    out.nodes.len() - 1
}

fn leaf_chain(out: &mut NiceTreeDecomposition, bag: &[usize]) -> Option<usize> {
    let (&first, rest) = bag.split_first()?;
    let mut id = push(out, vec![first], NiceKind::Leaf(first), Vec::new());
    let mut cur = vec![first];
    for &v in rest {
        cur.push(v);
        id = push(out, cur.clone(), NiceKind::Introduce(v), vec![id]);
    }
    Some(id)
}

fn adapt(out: &mut NiceTreeDecomposition, mut id: usize, target: &[usize]) -> usize {
    let mut cur = out.nodes[id].bag.clone();
    let forget: Vec<usize> = cur.iter().copied().filter(|v| target.binary_search(v).is_err()).collect();
    for v in forget {
        cur.retain(|&x| x != v);
        id = push(out, cur.clone(), NiceKind::Forget(v), vec![id]);
    }
    let intro: Vec<usize> = target.iter().copied().filter(|v| cur.binary_search(v).is_err()).collect();
    for v in intro {
        cur.push(v);
        cur.sort_unstable();
        id = push(out, cur.clone(), NiceKind::Introduce(v), vec![id]);
    }
    id
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_bag_becomes_leaf_introduce() {
        let nice = make_nice(&TreeDecomposition::single_bag(vec![0, 1]));
        assert_eq!(nice.nodes.len(), 2);
        assert_eq!(nice.nodes[0].kind, NiceKind::Leaf(0));
        assert_eq!(nice.nodes[1].kind, NiceKind::Introduce(1));
        nice.check_shape().unwrap();
    }

    #[test]
    fn p3_two_bags() {
        let mut g = Graph::new_undirected(3);
        g.add_edge(0, 1, 1).unwrap();
        g.add_edge(1, 2, 1).unwrap();
        let td = TreeDecomposition::from_edges(vec![vec![0, 1], vec![1, 2]], &[(0, 1)], 0).unwrap();
        let nice = make_nice(&td);
        nice.validate(&g).unwrap();
        let kinds: Vec<NiceKind> = nice.nodes.iter().map(|x| x.kind).collect();
        assert_eq!(kinds, vec![NiceKind::Leaf(1), NiceKind::Introduce(2), NiceKind::Forget(2), NiceKind::Introduce(0)]);
        assert_eq!(nice.width(), 1);
    }

    #[test]
    fn star_of_bags_uses_joins() {
        let bags = vec![vec![0], vec![0, 1], vec![0, 2], vec![0, 3]];
        let td = TreeDecomposition::from_edges(bags, &[(0, 1), (0, 2), (0, 3)], 0).unwrap();
        let nice = make_nice(&td);
        nice.check_shape().unwrap();
        assert_eq!(nice.nodes.iter().filter(|x| x.kind == NiceKind::Join).count(), 2);
    }
}
