//! CNF formulas with DIMACS-style literals.

use serde::{Deserialize, Serialize};

use crate::error::{KrcError, Result};

/// A CNF formula over variables `1..=num_vars`. A literal `+x` is the
/// variable `x`, `-x` its negation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cnf {
    /// Number of variables.
    pub num_vars: usize,
    /// Clauses as literal lists.
    pub clauses: Vec<Vec<i64>>,
}

impl Cnf {
    /// Builds a formula.
    pub fn new(num_vars: usize, clauses: Vec<Vec<i64>>) -> Self {
        Cnf { num_vars, clauses }
    }

    /// Checks that every literal names a variable in range.
    pub fn validate(&self) -> Result<()> {
        for (i, c) in self.clauses.iter().enumerate() {
            for &l in c {
                if l == 0 || l.unsigned_abs() as usize > self.num_vars {
                    return Err(KrcError::InvalidParameter(format!("clause {i}: literal {l} out of range")));
                }
            }
        }
        Ok(())
    }

    /// Value of literal `l` under `assign` (index `x - 1` holds variable `x`).
    pub fn literal_value(l: i64, assign: &[bool]) -> bool {
        let v = assign[l.unsigned_abs() as usize - 1];
        if l > 0 {
            v
        } else {
            !v
        }
    }

    /// Index of the first clause falsified by `assign`.
    pub fn first_unsatisfied(&self, assign: &[bool]) -> Option<usize> {
        self.clauses.iter().position(|c| !c.iter().any(|&l| Self::literal_value(l, assign)))
    }

    /// Whether `assign` satisfies every clause.
    pub fn is_satisfied_by(&self, assign: &[bool]) -> bool {
        self.first_unsatisfied(assign).is_none()
    }

    /// Whether clause `c` is already falsified by the variables fixed in
    /// `partial` (`None` = unfixed).
    pub fn clause_falsified(clause: &[i64], partial: &[Option<bool>]) -> bool {
        clause.iter().all(|&l| match partial[l.unsigned_abs() as usize - 1] {
            Some(v) => v != (l > 0),
            None => false,
        })
    }
}
