//! The reduction from CNF-SAT to unweighted `(k, r)`-center on graphs of
//! tree-depth `O(√n)`.

use serde::{Deserialize, Serialize};

use super::builder::Builder;
use super::cnf::Cnf;
use crate::error::{KrcError, Result};
use crate::graph::Graph;

/// Largest number of variables in one clause group.
pub const MAX_GROUP_VARS: usize = 20;

/// How guards and conflict vertices are attached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SatTdMode {
    /// Guards hang off hubs at distance `2L` from every `p` vertex, and each
    /// conflict vertex reaches `a_i`, `b_i` through a private branch vertex,
    /// so that every path vertex of the intended solution stays covered.
    #[default]
    Repaired,
    /// Guards joined to every `p` vertex by paths of length `r`, conflict
    /// vertices joined directly to `a_i`, `b_i` by paths.
    Literal,
}

/// A generated instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatTdInstance {
    /// The graph.
    pub graph: Graph,
    /// Center budget `√n`.
    pub k: usize,
    /// Radius `4L`.
    pub r: u64,
    /// Largest number of satisfying partial assignments over all groups.
    pub l: usize,
    /// Clause indices of each group.
    pub clause_groups: Vec<Vec<usize>>,
    /// Variables (1-based, sorted) of each group.
    pub group_vars: Vec<Vec<usize>>,
    /// Satisfying partial assignments of each group, aligned with `group_vars`.
    pub assignments: Vec<Vec<Vec<bool>>>,
    /// `p[i][l]` represents `assignments[i][l]`.
    pub p: Vec<Vec<usize>>,
    /// The two guard vertices of each group.
    pub guards: Vec<[usize; 2]>,
    /// Removal set: guards (hubs in repaired mode), `a_i`, `b_i`.
    pub designated: Vec<usize>,
    /// Conflict vertices.
    pub conflict_vertices: Vec<usize>,
    /// Some group has no satisfying partial assignment, so the formula is
    /// unsatisfiable and the instance has no `(k, r)`-center.
    pub trivially_no: bool,
}

impl SatTdInstance {
    /// The full assignment described by choosing `choice[i]` in group `i`,
    /// or `None` when two choices conflict. Unconstrained variables are false.
    pub fn assignment_from_choices(&self, num_vars: usize, choice: &[usize]) -> Option<Vec<bool>> {
        let mut out: Vec<Option<bool>> = vec![None; num_vars];
        for (i, &c) in choice.iter().enumerate() {
            for (&v, &val) in self.group_vars[i].iter().zip(&self.assignments[i][c]) {
                match out[v - 1] {
                    Some(prev) if prev != val => return None,
                    _ => out[v - 1] = Some(val),
                }
            }
        }
        Some(out.into_iter().map(|x| x.unwrap_or(false)).collect())
    }
}

fn conflicting(vars_a: &[usize], a: &[bool], vars_b: &[usize], b: &[bool]) -> bool {
    vars_a.iter().zip(a).any(|(v, x)| vars_b.iter().position(|w| w == v).is_some_and(|j| b[j] != *x))
}

/// Builds the instance for `formula`, whose number of variables must be a
/// perfect square. The constant `c^{√n}` of the construction is replaced by
/// `L`, the largest number of satisfying partial assignments of a group.
pub fn gen_sat_td_instance(formula: &Cnf, mode: SatTdMode) -> Result<SatTdInstance> {
    formula.validate()?;
    let n = formula.num_vars;
    let s = n.isqrt();
    if s * s != n || n == 0 {
        return Err(KrcError::InvalidParameter(format!("number of variables {n} is not a positive square")));
    }
    let m = formula.clauses.len();
    let per = m.div_ceil(s).max(1);
    let clause_groups: Vec<Vec<usize>> = (0..s).map(|i| (i * per..((i + 1) * per).min(m)).collect()).collect();
    let mut group_vars = Vec::with_capacity(s);
    let mut assignments = Vec::with_capacity(s);
    for cg in &clause_groups {
        let mut vars: Vec<usize> =
            cg.iter().flat_map(|&c| formula.clauses[c].iter().map(|l| l.unsigned_abs() as usize)).collect();
        vars.sort_unstable();
        vars.dedup();
        if vars.len() > MAX_GROUP_VARS {
            return Err(KrcError::LimitExceeded {
                what: "variables per clause group",
                size: vars.len() as u128,
                limit: MAX_GROUP_VARS as u128,
            });
        }
        let mut sat = Vec::new();
        for bits in 0..(1usize << vars.len()) {
            let vals: Vec<bool> = (0..vars.len()).map(|j| bits >> j & 1 == 1).collect();
            let ok = cg.iter().all(|&c| {
                formula.clauses[c].iter().any(|&lit| {
                    let j = vars.binary_search(&(lit.unsigned_abs() as usize)).expect("variable of the group");
                    vals[j] == (lit > 0)
                })
            });
            if ok {
                sat.push(vals);
            }
        }
        group_vars.push(vars);
        assignments.push(sat);
    }
    let l = assignments.iter().map(Vec::len).max().unwrap_or(0).max(1);
    let big = l as u64;
    let r = 4 * big;
    let mut b = Builder::new(0);
    let mut p = Vec::with_capacity(s);
    let mut guards = Vec::with_capacity(s);
    let mut designated = Vec::new();
    let mut ab = Vec::with_capacity(s);
    for sat in &assignments {
        let ps = b.vertices(sat.len());
        let mut gs = [0; 2];
        for slot in &mut gs {
            match mode {
                SatTdMode::Repaired => {
                    let hub = b.vertex();
                    for &x in &ps {
                        b.path(x, hub, 2 * big);
                    }
                    *slot = *b.pendant(hub, 2 * l).last().expect("L >= 1");
                    designated.push(hub);
                }
                SatTdMode::Literal => {
                    let gv = b.vertex();
                    for &x in &ps {
                        b.path(gv, x, r);
                    }
                    *slot = gv;
                    designated.push(gv);
                }
            }
        }
        let a = b.vertex();
        let bv = b.vertex();
        for (idx, &x) in ps.iter().enumerate() {
            let li = idx as u64 + 1;
            b.path(a, x, big + li);
            b.path(bv, x, 2 * big - li + 1);
        }
        designated.extend([a, bv]);
        ab.push((a, bv));
        p.push(ps);
        guards.push(gs);
    }
    let mut conflict_vertices = Vec::new();
    for i in 0..s {
        for j in i + 1..s {
            for (li, ai) in assignments[i].iter().enumerate() {
                for (oj, aj) in assignments[j].iter().enumerate() {
                    if !conflicting(&group_vars[i], ai, &group_vars[j], aj) {
                        continue;
                    }
                    let u = b.vertex();
                    for (g, idx) in [(i, li), (j, oj)] {
                        let x = idx as u64 + 1;
                        let (la, lb) = (3 * big - x + 1, 2 * big + x);
                        match mode {
                            SatTdMode::Repaired => {
                                let y = b.vertex();
                                b.edge(u, y, 1);
                                b.path(y, ab[g].0, la - 1);
                                b.path(y, ab[g].1, lb - 1);
                            }
                            SatTdMode::Literal => {
                                b.path(u, ab[g].0, la);
                                b.path(u, ab[g].1, lb);
                            }
                        }
                    }
                    conflict_vertices.push(u);
                }
            }
        }
    }
    let trivially_no = assignments.iter().any(Vec::is_empty);
    Ok(SatTdInstance {
        graph: b.finish(),
        k: s,
        r,
        l,
        clause_groups,
        group_vars,
        assignments,
        p,
        guards,
        designated,
        conflict_vertices,
        trivially_no,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{verify_center, CenterSet};

    #[test]
    fn single_variable() {
        let f = Cnf::new(1, vec![vec![1]]);
        for mode in [SatTdMode::Repaired, SatTdMode::Literal] {
            let inst = gen_sat_td_instance(&f, mode).unwrap();
            assert_eq!((inst.l, inst.r, inst.k), (1, 4, 1));
            let k = CenterSet::new(vec![inst.p[0][0]]);
            assert!(verify_center(&inst.graph, &k, 4).unwrap().covered);
        }
    }

    #[test]
    fn non_square_rejected() {
        assert!(gen_sat_td_instance(&Cnf::new(2, vec![vec![1]]), SatTdMode::Repaired).is_err());
    }

    #[test]
    fn unsatisfiable_group_is_marked() {
        let f = Cnf::new(1, vec![vec![1], vec![-1]]);
        assert!(gen_sat_td_instance(&f, SatTdMode::Repaired).unwrap().trivially_no);
    }
}
