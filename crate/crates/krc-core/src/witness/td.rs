//! Rooted tree decompositions: validation, height, heuristic construction
//! and rebalancing.

use serde::{Deserialize, Serialize};

use crate::error::{KrcError, Result};
use crate::graph::Graph;

/// A rooted tree decomposition.
///
/// `bags[i]` is sorted; `parent[i]` is `None` exactly for the root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDecomposition {
    /// Bag contents, each sorted without duplicates.
    pub bags: Vec<Vec<usize>>,
    /// Parent of each bag in the rooted tree.
    pub parent: Vec<Option<usize>>,
    /// Root bag id.
    pub root: usize,
}

/// A single violated decomposition property.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum TdViolation {
    /// A bag mentions a vertex id outside the graph.
    VertexOutOfRange(usize),
    /// A vertex occurs in no bag.
    VertexUncovered(usize),
    /// An arc's endpoints never share a bag.
    EdgeUncovered(usize, usize),
    /// The bags containing a vertex do not form a connected subtree.
    Disconnected(usize),
    /// The bag structure is not a rooted tree.
    NotATree(String),
}

/// Outcome of [`check_tree_decomposition`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TdReport {
    /// Whether no violation was found.
    pub valid: bool,
    /// Width (largest bag size minus one).
    pub width: usize,
    /// All violations found.
    pub violations: Vec<TdViolation>,
}

impl TreeDecomposition {
    /// Builds a decomposition from bags and undirected tree edges, rooted at `root`.
    pub fn from_edges(bags: Vec<Vec<usize>>, edges: &[(usize, usize)], root: usize) -> Result<Self> {
        let nb = bags.len();
        if nb == 0 {
            return Err(KrcError::InvalidDecomposition("no bags".into()));
        }
        if root >= nb {
            return Err(KrcError::InvalidDecomposition(format!("root {root} out of range")));
        }
        if edges.len() + 1 != nb {
            return Err(KrcError::InvalidDecomposition(format!(
                "{} bags need {} tree edges, got {}",
                nb,
                nb - 1,
                edges.len()
            )));
        }
        let mut adj = vec![Vec::new(); nb];
        for &(a, b) in edges {
            if a >= nb || b >= nb || a == b {
                return Err(KrcError::InvalidDecomposition(format!("bad tree edge ({a},{b})")));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let parent = orient(&adj, root)?;
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        Ok(TreeDecomposition { bags, parent, root })
    }

    /// A decomposition with a single bag.
    pub fn single_bag(mut bag: Vec<usize>) -> Self {
        bag.sort_unstable();
        bag.dedup();
        TreeDecomposition { bags: vec![bag], parent: vec![None], root: 0 }
    }

    /// Number of bags.
    pub fn len(&self) -> usize {
        self.bags.len()
    }

    /// Whether there are no bags.
    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    /// Largest bag size minus one (0 for decompositions of empty bags).
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    /// Children lists in increasing id order.
    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut ch = vec![Vec::new(); self.bags.len()];
        for (i, p) in self.parent.iter().enumerate() {
            if let Some(p) = *p {
                ch[p].push(i);
            }
        }
        ch
    }

    /// Undirected tree edges `(child, parent)`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.parent.iter().enumerate().filter_map(|(i, p)| p.map(|p| (i, p))).collect()
    }

    /// Height: a leaf bag has height 1, any other bag 1 plus the largest
    /// height of its children. Returns the root's height.
    pub fn height(&self) -> usize {
        if self.bags.is_empty() {
            return 0;
        }
        let ch = self.children();
        let order = post_order(&ch, self.root);
        let mut h = vec![0usize; self.bags.len()];
        for &t in &order {
            h[t] = 1 + ch[t].iter().map(|&c| h[c]).max().unwrap_or(0);
        }
        h[self.root]
    }

    /// Returns the same decomposition rooted at `root`.
    pub fn rerooted(&self, root: usize) -> Result<Self> {
        TreeDecomposition::from_edges(self.bags.clone(), &self.edges(), root)
    }

    /// Re-roots at a center of the bag tree, which minimises the height.
    pub fn rerooted_at_center(&self) -> Self {
        if self.bags.len() <= 2 {
            return self.clone();
        }
        let nb = self.bags.len();
        let mut adj = vec![Vec::new(); nb];
        for (a, b) in self.edges() {
            adj[a].push(b);
            adj[b].push(a);
        }
        let far = |s: usize| -> (usize, Vec<usize>) {
            let mut dist = vec![usize::MAX; nb];
            let mut prev = vec![usize::MAX; nb];
            let mut queue = std::collections::VecDeque::from([s]);
            dist[s] = 0;
            let mut last = s;
            while let Some(v) = queue.pop_front() {
                last = v;
                for &u in &adj[v] {
                    if dist[u] == usize::MAX {
                        dist[u] = dist[v] + 1;
                        prev[u] = v;
                        queue.push_back(u);
                    }
                }
            }
            (last, prev)
        };
        let (a, _) = far(self.root);
        let (b, prev) = far(a);
        let mut path = vec![b];
        while *path.last().unwrap() != a {
            path.push(prev[*path.last().unwrap()]);
        }
        let center = path[path.len() / 2];
        self.rerooted(center).unwrap_or_else(|_| self.clone())
    }
}

fn orient(adj: &[Vec<usize>], root: usize) -> Result<Vec<Option<usize>>> {
    let nb = adj.len();
    let mut parent = vec![None; nb];
    let mut seen = vec![false; nb];
    seen[root] = true;
    let mut stack = vec![root];
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &u in &adj[v] {
            if !seen[u] {
                seen[u] = true;
                parent[u] = Some(v);
                count += 1;
                stack.push(u);
            }
        }
    }
    if count != nb {
        return Err(KrcError::InvalidDecomposition("bag tree is disconnected".into()));
    }
    Ok(parent)
}

/// Post-order (children first) of the subtree rooted at `root`.
pub(crate) fn post_order(children: &[Vec<usize>], root: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(children.len());
    let mut stack = vec![(root, 0usize)];
    while let Some((v, i)) = stack.pop() {
        if i < children[v].len() {
            stack.push((v, i + 1));
            stack.push((children[v][i], 0));
        } else {
            out.push(v);
        }
    }
    out
}

/// Checks vertex coverage, edge coverage and connectivity of `td` for `g`.
pub fn check_tree_decomposition(g: &Graph, td: &TreeDecomposition) -> TdReport {
    let mut violations = Vec::new();
    let nb = td.bags.len();
    let mut tree_ok = nb > 0 && td.parent.len() == nb && td.root < nb;
    if !tree_ok {
        violations.push(TdViolation::NotATree("empty or malformed bag tree".into()));
    } else if td.parent[td.root].is_some() {
        tree_ok = false;
        violations.push(TdViolation::NotATree("root has a parent".into()));
    } else {
        let ch = td.children();
        let reach = post_order(&ch, td.root);
        if reach.len() != nb || td.parent.iter().filter(|p| p.is_none()).count() != 1 {
            tree_ok = false;
            violations.push(TdViolation::NotATree("parent pointers do not form a tree".into()));
        }
    }
    let n = g.n();
    let mut occurs = vec![Vec::new(); n];
    for (i, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            if v >= n {
                violations.push(TdViolation::VertexOutOfRange(v));
            } else {
                occurs[v].push(i);
            }
        }
    }
    for (v, occ) in occurs.iter().enumerate() {
        if occ.is_empty() {
            violations.push(TdViolation::VertexUncovered(v));
        }
    }
    let mut pairs: Vec<(usize, usize)> =
        g.arcs().iter().filter(|a| a.tail != a.head).map(|a| (a.tail.min(a.head), a.tail.max(a.head))).collect();
    pairs.sort_unstable();
    pairs.dedup();
    for (u, v) in pairs {
        let shared = occurs[u].iter().any(|&b| td.bags[b].binary_search(&v).is_ok());
        if !shared {
            violations.push(TdViolation::EdgeUncovered(u, v));
        }
    }
    if tree_ok {
        for (v, occ) in occurs.iter().enumerate() {
            if occ.is_empty() {
                continue;
            }
            let tops = occ
                .iter()
                .filter(|&&b| match td.parent[b] {
                    None => true,
                    Some(p) => td.bags[p].binary_search(&v).is_err(),
                })
                .count();
            if tops != 1 {
                violations.push(TdViolation::Disconnected(v));
            }
        }
    }
    TdReport { valid: violations.is_empty(), width: td.width(), violations }
}

/// Checks `td` and converts violations into an error.
pub fn require_valid(g: &Graph, td: &TreeDecomposition) -> Result<()> {
    let rep = check_tree_decomposition(g, td);
    if rep.valid {
        Ok(())
    } else {
        Err(KrcError::InvalidDecomposition(format!("{:?}", rep.violations)))
    }
}

/// Builds a tree decomposition by greedy minimum-degree elimination, rooted
/// at a center of the bag tree.
pub fn heuristic_decomposition(g: &Graph) -> TreeDecomposition {
    let n = g.n();
    if n == 0 {
        return TreeDecomposition::single_bag(Vec::new());
    }
    let mut adj: Vec<std::collections::BTreeSet<usize>> =
        g.undirected_neighbors().into_iter().map(|l| l.into_iter().collect()).collect();
    let mut eliminated = vec![false; n];
    let mut position = vec![0usize; n];
    let mut order = Vec::with_capacity(n);
    let mut later: Vec<Vec<usize>> = vec![Vec::new(); n];
    for step in 0..n {
        let v = (0..n).filter(|&v| !eliminated[v]).min_by_key(|&v| (adj[v].len(), v)).expect("vertex left");
        eliminated[v] = true;
        position[v] = step;
        order.push(v);
        let nbrs: Vec<usize> = adj[v].iter().copied().collect();
        for &a in &nbrs {
            adj[a].remove(&v);
            for &b in &nbrs {
                if a != b {
                    adj[a].insert(b);
                }
            }
        }
        later[v] = nbrs;
    }
    let bags: Vec<Vec<usize>> = order
        .iter()
        .map(|&v| {
            let mut b = later[v].clone();
            b.push(v);
            b.sort_unstable();
            b
        })
        .collect();
    let mut edges = Vec::new();
    let mut roots = Vec::new();
    for (i, &v) in order.iter().enumerate() {
        match later[v].iter().min_by_key(|&&u| position[u]) {
            Some(&u) => edges.push((i, position[u])),
            None => roots.push(i),
        }
    }
    for w in roots.windows(2) {
        edges.push((w[0], w[1]));
    }
    let td = TreeDecomposition::from_edges(bags, &edges, roots[0]).expect("elimination tree");
    td.rerooted_at_center()
}

/// Rebalances a decomposition of width `w` into one of width at most
/// `3w + 2`, aiming at logarithmic height.
///
/// Inputs whose height is already at most `⌈log₂ #bags⌉ + 1` are returned
/// unchanged. Otherwise bags are split recursively at a centroid of the
/// remaining bag subtree; when the inherited boundary grows beyond `w + 1`
/// vertices the split point balances the boundary instead of the size.
pub fn rebalance(td: &TreeDecomposition) -> TreeDecomposition {
    let nb = td.bags.len();
    if nb <= 1 {
        return td.clone();
    }
    let log = usize::BITS as usize - (nb - 1).leading_zeros() as usize;
    if td.height() <= log + 1 {
        return td.clone();
    }
    let w1 = td.width() + 1;
    let mut adj = vec![Vec::new(); nb];
    for (a, b) in td.edges() {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut builder = Rebalancer { td, adj, w1, bags: Vec::new(), parent: Vec::new(), active: vec![false; nb] };
    let all: Vec<usize> = (0..nb).collect();
    builder.build(all, Vec::new(), None);
    TreeDecomposition { bags: builder.bags, parent: builder.parent, root: 0 }
}

struct Rebalancer<'a> {
    td: &'a TreeDecomposition,
    adj: Vec<Vec<usize>>,
    w1: usize,
    bags: Vec<Vec<usize>>,
    parent: Vec<Option<usize>>,
    active: Vec<bool>,
}

impl Rebalancer<'_> {
    fn components_without(&mut self, comp: &[usize], c: usize) -> Vec<Vec<usize>> {
        for &b in comp {
            self.active[b] = true;
        }
        self.active[c] = false;
        let mut out = Vec::new();
        for &s in comp {
            if !self.active[s] {
                continue;
            }
            self.active[s] = false;
            let mut part = vec![s];
            let mut i = 0;
            while i < part.len() {
                let v = part[i];
                i += 1;
                for &u in &self.adj[v] {
                    if self.active[u] {
                        self.active[u] = false;
                        part.push(u);
                    }
                }
            }
            out.push(part);
        }
        out
    }

    fn build(&mut self, comp: Vec<usize>, boundary: Vec<usize>, parent: Option<usize>) {
        let weights: Vec<usize> = if boundary.len() <= self.w1 {
            vec![1; comp.len()]
        } else {
            let mut w = vec![0; comp.len()];
            for &x in &boundary {
                if let Some(i) = comp.iter().position(|&b| self.td.bags[b].binary_search(&x).is_ok()) {
                    w[i] += 1;
                }
            }
            w
        };
        let mut best = (usize::MAX, usize::MAX, 0usize);
        for (i, &c) in comp.iter().enumerate() {
            let parts = self.components_without(&comp, c);
            let mut worst_w = 0;
            let mut worst_s = 0;
            for p in &parts {
                let pw: usize = p.iter().map(|b| weights[comp.iter().position(|x| x == b).unwrap()]).sum();
                worst_w = worst_w.max(pw);
                worst_s = worst_s.max(p.len());
            }
            if (worst_w, worst_s) < (best.0, best.1) {
                best = (worst_w, worst_s, i);
            }
        }
        let c = comp[best.2];
        let mut bag: Vec<usize> = self.td.bags[c].iter().chain(boundary.iter()).copied().collect();
        bag.sort_unstable();
        bag.dedup();
        let id = self.bags.len();
        self.bags.push(bag.clone());
        self.parent.push(parent);
        for part in self.components_without(&comp, c) {
            let mut inside: Vec<usize> = part.iter().flat_map(|&b| self.td.bags[b].iter().copied()).collect();
            inside.sort_unstable();
            inside.dedup();
            let next: Vec<usize> = bag.iter().copied().filter(|x| inside.binary_search(x).is_ok()).collect();
            self.build(part, next, Some(id));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_graph(n: usize) -> Graph {
        let mut g = Graph::new_undirected(n);
        for i in 0..n.saturating_sub(1) {
            g.add_edge(i, i + 1, 1).unwrap();
        }
        g
    }

    fn path_decomposition(n: usize) -> TreeDecomposition {
        let bags: Vec<Vec<usize>> = (0..n - 1).map(|i| vec![i, i + 1]).collect();
        let edges: Vec<(usize, usize)> = (0..n - 2).map(|i| (i, i + 1)).collect();
        TreeDecomposition::from_edges(bags, &edges, 0).unwrap()
    }

    #[test]
    fn check_examples() {
        let g = path_graph(3);
        let td = TreeDecomposition::from_edges(vec![vec![0, 1], vec![1, 2]], &[(0, 1)], 0).unwrap();
        let rep = check_tree_decomposition(&g, &td);
        assert!(rep.valid);
        assert_eq!(rep.width, 1);
        let td = TreeDecomposition::from_edges(vec![vec![0, 1], vec![2]], &[(0, 1)], 0).unwrap();
        let rep = check_tree_decomposition(&g, &td);
        assert_eq!(rep.violations, vec![TdViolation::EdgeUncovered(1, 2)]);
        let mut g2 = Graph::new_undirected(2);
        g2.add_edge(0, 1, 1).unwrap();
        let td = TreeDecomposition::from_edges(vec![vec![0, 1], vec![1], vec![0, 1]], &[(0, 1), (1, 2)], 0).unwrap();
        let rep = check_tree_decomposition(&g2, &td);
        assert_eq!(rep.violations, vec![TdViolation::Disconnected(0)]);
    }

    #[test]
    fn height_examples() {
        assert_eq!(TreeDecomposition::single_bag(vec![0]).height(), 1);
        let bags = vec![vec![0]; 5];
        let td = TreeDecomposition::from_edges(bags, &[(0, 1), (1, 2), (2, 3), (3, 4)], 0).unwrap();
        assert_eq!(td.height(), 5);
        let bags = vec![vec![0]; 7];
        let td = TreeDecomposition::from_edges(bags, &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)], 0).unwrap();
        assert_eq!(td.height(), 3);
    }

    #[test]
    fn rebalance_paths() {
        for n in [16usize, 64, 256] {
            let g = path_graph(n);
            let td = path_decomposition(n);
            let rb = rebalance(&td);
            let rep = check_tree_decomposition(&g, &rb);
            assert!(rep.valid, "{:?}", rep.violations);
            assert!(rb.width() <= 3 * td.width() + 2);
            let log = (n as f64).log2().ceil() as usize;
            assert!(rb.height() <= 2 * log, "n={n} height={}", rb.height());
        }
    }

    #[test]
    fn rebalance_idempotent_on_balanced_and_single() {
        let td = TreeDecomposition::single_bag(vec![0, 1]);
        assert_eq!(rebalance(&td), td);
        let bags = vec![vec![0]; 7];
        let td = TreeDecomposition::from_edges(bags, &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)], 0).unwrap();
        assert!(rebalance(&td).height() <= td.height());
    }

    #[test]
    fn heuristic_is_valid() {
        let mut g = Graph::new_undirected(6);
        for (u, v) in [(0, 1), (1, 2), (2, 3), (3, 0), (3, 4), (4, 5)] {
            g.add_edge(u, v, 1).unwrap();
        }
        let td = heuristic_decomposition(&g);
        let rep = check_tree_decomposition(&g, &td);
        assert!(rep.valid, "{:?}", rep.violations);
        assert_eq!(rep.width, 2);
        let td = heuristic_decomposition(&path_graph(9));
        assert_eq!(td.width(), 1);
        assert!(check_tree_decomposition(&path_graph(9), &td).valid);
    }
}
