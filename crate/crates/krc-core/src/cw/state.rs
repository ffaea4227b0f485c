//! Label states `(v, u)` and their combination rules.

use serde::{Deserialize, Serialize};

/// State of one label class: `v` is the smallest label value in the class,
/// `u ∈ {0, 1, 2}` the gap between `v` and the smallest value of a not yet
/// satisfied vertex (2 also covering "no unsatisfied vertex").
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LabelState {
    /// Minimum value in the class.
    pub v: u64,
    /// Gap class of the minimum unsatisfied value.
    pub u: u8,
}

impl LabelState {
    /// Builds a state.
    pub fn new(v: u64, u: u8) -> Self {
        LabelState { v, u }
    }

    /// Capped minimum unsatisfied value `v + u`.
    fn top(self) -> u64 {
        self.v + self.u as u64
    }
}

/// The `3r + 1` admissible states for a radius `r`, with a dense index.
///
/// Order: `(1,0)..(r,0)`, then `(0,1)..(r-1,1)`, then `(0,2)..(r,2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSpace {
    r: u64,
    states: Vec<LabelState>,
    offsets: [usize; 3],
}

impl StateSpace {
    /// The state space for radius `r`.
    pub fn new(r: u64) -> Self {
        let mut states = Vec::new();
        let mut offsets = [0; 3];
        for u in 0..3u8 {
            offsets[u as usize] = states.len();
            for v in 0..=r {
                let s = LabelState::new(v, u);
                if Self::admissible_for(r, s) {
                    states.push(s);
                }
            }
        }
        StateSpace { r, states, offsets }
    }

    fn admissible_for(r: u64, s: LabelState) -> bool {
        s.v <= r && s.u <= 2 && !(s.v == 0 && s.u == 0) && !(s.v == r && s.u == 1)
    }

    /// Radius.
    pub fn r(&self) -> u64 {
        self.r
    }

    /// Number of states (`3r + 1`).
    pub fn len(&self) -> usize {
        self.states.len()
    }

    /// Always false: `(0, 2)` is admissible for every `r`.
    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// All states in index order.
    pub fn states(&self) -> &[LabelState] {
        &self.states
    }

    /// State at index `i`.
    pub fn state(&self, i: usize) -> LabelState {
        self.states[i]
    }

    /// Index of an admissible state.
    pub fn index(&self, s: LabelState) -> Option<usize> {
        if !Self::admissible_for(self.r, s) {
            return None;
        }
        let base = self.offsets[s.u as usize];
        Some(match s.u {
            0 => base + s.v as usize - 1,
            _ => base + s.v as usize,
        })
    }

    /// State of a merged class (rename or union).
    pub fn combine(&self, a: LabelState, b: LabelState) -> LabelState {
        let v = a.v.min(b.v);
        let top = a.top().min(b.top()).min(v + 2);
        LabelState::new(v, (top - v) as u8)
    }

    /// Whether merging produces `u = 2` from a part with `u < 2`; such
    /// merges are only admissible when a later join will reach the class.
    pub fn is_mixing(&self, a: LabelState, b: LabelState) -> bool {
        self.combine(a, b).u == 2 && (a.u < 2 || b.u < 2)
    }

    /// State of a class after being joined to a non-empty class whose
    /// minimum value is `other_v`.
    pub fn join_update(&self, s: LabelState, other_v: u64) -> LabelState {
        if s.u == 2 || s.top() > other_v {
            LabelState::new(s.v, 2)
        } else {
            s
        }
    }

    /// The set `M(s)` written out clause by clause: all ordered pairs that
    /// merge into `s`. Clause (f) requires `u_a = 0`, mirroring clause (e).
    pub fn m_set(&self, s: LabelState) -> Vec<(LabelState, LabelState)> {
        let mut out = Vec::new();
        let v = s.v;
        for &a in &self.states {
            for &b in &self.states {
                if v != a.v.min(b.v) {
                    continue;
                }
                let ok = match s.u {
                    0 => (a.v == v && a.u == 0) || (b.v == v && b.u == 0),
                    1 => {
                        (a.v == v && a.u == 1 && b.v == v && b.u >= 1)
                            || (a.v == v && a.u >= 1 && b.v == v && b.u == 1)
                            || (a.v == v && a.u == 1 && b.v > v)
                            || (b.v == v && b.u == 1 && a.v > v)
                            || (a.v == v && a.u == 2 && b.v == v + 1 && b.u == 0)
                            || (b.v == v && b.u == 2 && a.v == v + 1 && a.u == 0)
                    }
                    _ => {
                        (a.u == 2 && b.u == 2)
                            || (v < a.v && b.u == 2 && ((a.v - v >= 2 && a.u == 0) || (a.v - v >= 1 && a.u == 1)))
                            || (v < b.v && a.u == 2 && ((b.v - v >= 2 && b.u == 0) || (b.v - v >= 1 && b.u == 1)))
                    }
                };
                if ok {
                    out.push((a, b));
                }
            }
        }
        out
    }
}
