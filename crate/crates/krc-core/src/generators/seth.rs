//! The clique-width lower-bound construction from CNF-SAT, with its forward
//! witness.

use serde::{Deserialize, Serialize};

use super::builder::Builder;
use super::cnf::Cnf;
use super::gadgets::{attach_assignment, attach_clique, attach_guard};
use crate::error::{KrcError, Result};
use crate::graph::{CenterSet, Graph};

/// Largest number of `x_S` vertices per block accepted by the generator.
pub const MAX_SETS_PER_BLOCK: u128 = 4096;

/// The `3r + 1` canonical pairs `(α_y, β_y)`, ordered by `y = 1..=3r+1`.
pub fn canonical_pairs(r: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::with_capacity(3 * r as usize + 1);
    for y in 1..=3 * r + 1 {
        let pair = if y <= 2 * r {
            if y % 2 == 1 {
                (y / 2, y / 2)
            } else {
                (y / 2 - 1, 2 * r - y / 2 + 1)
            }
        } else {
            (y - r - 1, y - r - 1)
        };
        out.push(pair);
    }
    out
}

/// Vertex ids of one block gadget.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockIds {
    /// `a[i][j]` is `a_i^j` for `i < p`, `j ≤ 2r`.
    pub a: Vec<Vec<usize>>,
    /// `b[i][j]` is `b_i^j`.
    pub b: Vec<Vec<usize>>,
    /// `u[i][y - 1]` is `u_i^y`.
    pub u: Vec<Vec<usize>>,
    /// `q[i]` is `q_i`.
    pub q: Vec<usize>,
    /// `x[s]` is `x_S` for the set with index `s`.
    pub x: Vec<usize>,
}

/// A generated lower-bound instance.
///
/// The set with index `s` picks `u_i^{y_i}` with `y_i − 1` the `i`-th base
/// `3r + 1` digit of `s` (least significant first). The assignment of group
/// `τ` whose bits, read as a binary number with the group's first variable
/// least significant, equal `s` is associated with that set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SethInstance {
    /// The graph.
    pub graph: Graph,
    /// Center budget `((3r+3)p+1)·(#blocks)+1`.
    pub k: usize,
    /// Radius.
    pub r: u64,
    /// Path pairs per block.
    pub p: usize,
    /// Number of variable groups.
    pub t: usize,
    /// Largest group size `⌊log₂ (3r+1)^p⌋`.
    pub gamma: usize,
    /// Number of block columns.
    pub columns: usize,
    /// Whether the column count is the faithful `m(3rpt+1)`.
    pub faithful: bool,
    /// Variables (1-based) of each group.
    pub groups: Vec<Vec<usize>>,
    /// `blocks[τ][μ]` for group `τ` and column `μ` (both 0-based).
    pub blocks: Vec<Vec<BlockIds>>,
    /// The hub vertex `h`.
    pub h: usize,
    /// Clause vertices `ĉ_π^o` as `(π, o, vertex)`, `π` 0-based.
    pub clause_vertices: Vec<(usize, usize, usize)>,
}

impl SethInstance {
    /// Index of the set associated with `assign` restricted to group `tau`.
    pub fn set_index(&self, tau: usize, assign: &[bool]) -> usize {
        self.groups[tau].iter().enumerate().fold(0, |acc, (j, &v)| acc | (usize::from(assign[v - 1]) << j))
    }

    /// `y_i` (1-based) of the set with index `s`.
    pub fn set_digits(&self, s: usize) -> Vec<usize> {
        let base = 3 * self.r as usize + 1;
        let mut x = s;
        (0..self.p)
            .map(|_| {
                let d = x % base;
                x /= base;
                d + 1
            })
            .collect()
    }
}

fn pow_checked(base: u128, exp: usize) -> Result<u128> {
    (0..exp).try_fold(1u128, |acc, _| acc.checked_mul(base)).ok_or(KrcError::LimitExceeded {
        what: "sets per block",
        size: u128::MAX,
        limit: MAX_SETS_PER_BLOCK,
    })
}

fn build_block(b: &mut Builder, r: u64, p: usize, sets: usize, pairs: &[(u64, u64)]) -> BlockIds {
    let len = 2 * r as usize + 1;
    let base = 3 * r as usize + 1;
    let mut ids = BlockIds { a: Vec::new(), b: Vec::new(), u: Vec::new(), q: Vec::new(), x: Vec::new() };
    for _ in 0..p {
        let a = b.vertices(len);
        let bb = b.vertices(len);
        for path in [&a, &bb] {
            for pair in path.windows(2) {
                b.edge(pair[0], pair[1], 1);
            }
            attach_guard(b, path, r);
            attach_guard(b, path, r);
        }
        let u = b.vertices(base);
        for (y, &(alpha, beta)) in pairs.iter().enumerate() {
            b.path(a[alpha as usize], u[y], r + 1);
            b.path(bb[beta as usize], u[y], r + 1);
        }
        let q = b.vertex();
        for &uy in &u {
            b.path(q, uy, r);
        }
        for _ in 0..base {
            b.pendant(q, r as usize);
        }
        attach_assignment(b, &u, r);
        ids.a.push(a);
        ids.b.push(bb);
        ids.u.push(u);
        ids.q.push(q);
    }
    ids.x = b.vertices(sets);
    attach_clique(b, &ids.x, r);
    for s in 0..sets {
        let mut inputs = vec![ids.x[s]];
        let mut rest = s;
        for i in 0..p {
            inputs.push(ids.u[i][rest % base]);
            rest /= base;
        }
        attach_guard(b, &inputs, r);
    }
    ids
}

/// Builds the lower-bound graph for `formula` with radius `r` and `p` path
/// pairs per block. `column_override` replaces the faithful column count
/// `m(3rpt+1)`; `k` is recomputed for the chosen count.
pub fn gen_seth_cw_instance(formula: &Cnf, r: u64, p: usize, column_override: Option<usize>) -> Result<SethInstance> {
    formula.validate()?;
    if r == 0 || p == 0 {
        return Err(KrcError::InvalidParameter("the construction needs r >= 1 and p >= 1".into()));
    }
    let base = 3 * r as usize + 1;
    let sets128 = pow_checked(base as u128, p)?;
    if sets128 > MAX_SETS_PER_BLOCK {
        return Err(KrcError::LimitExceeded { what: "sets per block", size: sets128, limit: MAX_SETS_PER_BLOCK });
    }
    let sets = sets128 as usize;
    let gamma = (127 - sets128.leading_zeros()) as usize;
    let n = formula.num_vars;
    let t = n.div_ceil(gamma).max(1);
    let groups: Vec<Vec<usize>> =
        (0..t).map(|tau| ((tau * gamma + 1)..=((tau + 1) * gamma).min(n)).collect()).collect();
    for (tau, g) in groups.iter().enumerate() {
        let count = 1usize << g.len();
        if count > sets {
            return Err(KrcError::GroupOverflow { group: tau, count, slots: sets });
        }
    }
    let m = formula.clauses.len();
    let faithful_columns = m * (3 * r as usize * p * t + 1);
    let columns = column_override.unwrap_or(faithful_columns).max(1);
    let k = ((3 * r as usize + 3) * p + 1) * columns * t + 1;
    let pairs = canonical_pairs(r);

    let mut b = Builder::new(0);
    let mut blocks: Vec<Vec<BlockIds>> = Vec::with_capacity(t);
    for _ in 0..t {
        let row: Vec<BlockIds> = (0..columns).map(|_| build_block(&mut b, r, p, sets, &pairs)).collect();
        for mu in 0..columns.saturating_sub(1) {
            for i in 0..p {
                let last = [row[mu].a[i][2 * r as usize], row[mu].b[i][2 * r as usize]];
                let first = [row[mu + 1].a[i][0], row[mu + 1].b[i][0]];
                for &l in &last {
                    for &f in &first {
                        b.edge(l, f, 1);
                    }
                }
            }
        }
        blocks.push(row);
    }
    let h = b.vertex();
    for row in &blocks {
        for i in 0..p {
            b.edge(h, row[0].a[i][0], 1);
            b.edge(h, row[0].b[i][0], 1);
            b.edge(h, row[columns - 1].a[i][2 * r as usize], 1);
            b.edge(h, row[columns - 1].b[i][2 * r as usize], 1);
        }
    }
    b.pendant(h, r as usize);

    let mut clause_vertices = Vec::new();
    for (pi, clause) in formula.clauses.iter().enumerate() {
        let mut o = 0;
        while m * o + pi < columns {
            let mu = m * o + pi;
            let c = b.vertex();
            let tail = b.pendant(c, r as usize - 1);
            let end = *tail.last().unwrap_or(&c);
            for (tau, vars) in groups.iter().enumerate() {
                for assignment in 0..(1usize << vars.len()) {
                    let satisfied = clause.iter().any(|&lit| {
                        vars.iter().position(|&v| v == lit.unsigned_abs() as usize).is_some_and(|j| {
                            let bit = assignment >> j & 1 == 1;
                            bit == (lit > 0)
                        })
                    });
                    if satisfied {
                        b.edge(blocks[tau][mu].x[assignment], end, 1);
                    }
                }
            }
            clause_vertices.push((pi, o, c));
            o += 1;
        }
    }

    Ok(SethInstance {
        graph: b.finish(),
        k,
        r,
        p,
        t,
        gamma,
        columns,
        faithful: columns == faithful_columns,
        groups,
        blocks,
        h,
        clause_vertices,
    })
}

/// The center set of size `inst.k` induced by a satisfying assignment
/// (`assign[x − 1]` is the value of variable `x`).
pub fn seth_witness_from_assignment(inst: &SethInstance, formula: &Cnf, assign: &[bool]) -> Result<CenterSet> {
    if assign.len() != formula.num_vars {
        return Err(KrcError::InvalidParameter(format!(
            "assignment has {} values for {} variables",
            assign.len(),
            formula.num_vars
        )));
    }
    if let Some(c) = formula.first_unsatisfied(assign) {
        return Err(KrcError::Unsatisfying(c));
    }
    let pairs = canonical_pairs(inst.r);
    let mut k = vec![inst.h];
    for (tau, row) in inst.blocks.iter().enumerate() {
        let s = inst.set_index(tau, assign);
        let digits = inst.set_digits(s);
        for block in row {
            k.push(block.x[s]);
            for (i, &y) in digits.iter().enumerate() {
                k.push(block.q[i]);
                k.extend(block.u[i].iter().enumerate().filter(|&(z, _)| z + 1 != y).map(|(_, &v)| v));
                let (alpha, beta) = pairs[y - 1];
                k.push(block.a[i][alpha as usize]);
                k.push(block.b[i][beta as usize]);
            }
        }
    }
    Ok(CenterSet::new(k).with_radius(inst.r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::verify_center;

    #[test]
    fn canonical_pair_lists() {
        assert_eq!(canonical_pairs(2), vec![(0, 0), (0, 4), (1, 1), (1, 3), (2, 2), (3, 3), (4, 4)]);
        assert_eq!(canonical_pairs(1), vec![(0, 0), (0, 2), (1, 1), (2, 2)]);
        for r in 1..=6 {
            let ps = canonical_pairs(r);
            assert_eq!(ps.len() as u64, 3 * r + 1);
            assert!(ps.iter().all(|&(a, b)| a <= 2 * r && b <= 2 * r));
        }
    }

    #[test]
    fn small_instance_parameters_and_witness() {
        let f = Cnf::new(2, vec![vec![1, -2]]);
        let inst = gen_seth_cw_instance(&f, 1, 1, None).unwrap();
        assert_eq!((inst.gamma, inst.t, inst.columns, inst.k), (2, 1, 4, 29));
        assert_eq!(inst.blocks[0][0].x.len(), 4);
        let w = seth_witness_from_assignment(&inst, &f, &[true, false]).unwrap();
        assert_eq!(w.len(), 29);
        assert!(verify_center(&inst.graph, &w, 1).unwrap().covered);
        assert!(matches!(seth_witness_from_assignment(&inst, &f, &[false, true]), Err(KrcError::Unsatisfying(0))));
    }

    #[test]
    fn radius_two_witness() {
        let f = Cnf::new(3, vec![vec![1, 2], vec![-1, 3], vec![-3]]);
        let inst = gen_seth_cw_instance(&f, 2, 1, None).unwrap();
        let w = seth_witness_from_assignment(&inst, &f, &[false, true, false]).unwrap();
        assert_eq!(w.len(), inst.k);
        let rep = verify_center(&inst.graph, &w, 2).unwrap();
        assert!(rep.covered, "{:?}", &rep.uncovered[..rep.uncovered.len().min(5)]);
    }
}
