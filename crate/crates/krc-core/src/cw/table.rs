//! Counting tables over `(κ, label-state tuple)` and their state-change
//! transforms.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::state::{LabelState, StateSpace};

/// A table `D_t[κ, s_1, …, s_w]` of exact counts.
///
/// `labels` are the labels with a non-empty class, sorted; the tuple is
/// indexed in mixed radix `S = 3r+1` with the first label least significant,
/// and `κ` is the most significant coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CwTable {
    /// Involved labels, sorted.
    pub labels: Vec<usize>,
    /// Largest center count tracked.
    pub kmax: usize,
    /// Entries, `(kmax + 1) · S^w` of them.
    pub data: Vec<BigInt>,
}

impl CwTable {
    /// An all-zero table.
    pub fn zeros(space: &StateSpace, labels: Vec<usize>, kmax: usize) -> Self {
        let size = (kmax + 1) * space.len().pow(labels.len() as u32);
        CwTable { labels, kmax, data: vec![BigInt::zero(); size] }
    }

    /// Number of state tuples per `κ`.
    pub fn tuples(&self) -> usize {
        self.data.len() / (self.kmax + 1)
    }

    /// Position of `label` in the tuple.
    pub fn position(&self, label: usize) -> Option<usize> {
        self.labels.binary_search(&label).ok()
    }

    /// Decodes a tuple index into per-position state indices.
    pub fn decode(&self, space: &StateSpace, mut tuple: usize) -> Vec<usize> {
        let s = space.len();
        (0..self.labels.len())
            .map(|_| {
                let x = tuple % s;
                tuple /= s;
                x
            })
            .collect()
    }

    /// Encodes per-position state indices.
    pub fn encode(space: &StateSpace, states: &[usize]) -> usize {
        states.iter().rev().fold(0, |acc, &x| acc * space.len() + x)
    }

    /// Entry for `κ` and a tuple of states.
    pub fn get(&self, space: &StateSpace, kappa: usize, states: &[LabelState]) -> BigInt {
        let idx: Option<Vec<usize>> = states.iter().map(|&s| space.index(s)).collect();
        match idx {
            Some(idx) if kappa <= self.kmax && idx.len() == self.labels.len() => {
                self.data[kappa * self.tuples() + Self::encode(space, &idx)].clone()
            }
            _ => BigInt::zero(),
        }
    }

    /// Whether every entry is non-negative.
    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|x| !x.is_negative())
    }

    /// Zeroes every entry in which a label whose `live` flag is false has a
    /// state with `u < 2`.
    pub fn prune(&mut self, space: &StateSpace, live: &[bool]) {
        if live.iter().all(|&l| l) {
            return;
        }
        let tuples = self.tuples();
        for t in 0..tuples {
            let st = self.decode(space, t);
            let dead = st.iter().zip(live).any(|(&s, &l)| !l && space.state(s).u < 2);
            if dead {
                for k in 0..=self.kmax {
                    self.data[k * tuples + t] = BigInt::zero();
                }
            }
        }
    }

    fn for_each_line(&mut self, space: &StateSpace, pos: usize, mut f: impl FnMut(&mut [BigInt])) {
        let s = space.len();
        let stride = s.pow(pos as u32);
        let block = stride * s;
        let mut line: Vec<BigInt> = vec![BigInt::zero(); s];
        let total = self.data.len();
        let mut base = 0;
        while base < total {
            for off in 0..stride {
                for (i, slot) in line.iter_mut().enumerate() {
                    *slot = std::mem::take(&mut self.data[base + off + i * stride]);
                }
                f(&mut line);
                for (i, slot) in line.iter_mut().enumerate() {
                    self.data[base + off + i * stride] = std::mem::take(slot);
                }
            }
            base += block;
        }
    }

    /// Forward state change `D → D′ → D*` along every label position listed
    /// in `positions`. For positions whose `skip` flag is set the additions
    /// into `(v, 2)` from `(v+1, 1)` and `(v+2, 0)` are omitted.
    pub fn forward_transform(&mut self, space: &StateSpace, positions: &[usize], skip: &[bool]) {
        for (&pos, &sk) in positions.iter().zip(skip) {
            self.for_each_line(space, pos, |line| forward_line(space, line, sk));
        }
    }

    /// Inverse of [`CwTable::forward_transform`] with the same arguments.
    pub fn backward_transform(&mut self, space: &StateSpace, positions: &[usize], skip: &[bool]) {
        for (&pos, &sk) in positions.iter().zip(skip).rev() {
            self.for_each_line(space, pos, |line| backward_line(space, line, sk));
        }
    }
}

fn at(space: &StateSpace, v: u64, u: u8) -> Option<usize> {
    space.index(LabelState::new(v, u))
}

/// Stage 1 (suffix sums over `v` within each `u` row) then stage 2.
pub(crate) fn forward_line(space: &StateSpace, x: &mut [BigInt], skip: bool) {
    let r = space.r();
    for u in 0..3u8 {
        for v in (0..r).rev() {
            if let (Some(i), Some(j)) = (at(space, v, u), at(space, v + 1, u)) {
                let add = x[j].clone();
                x[i] += add;
            }
        }
    }
    let prime = x.to_vec();
    let get = |v: u64, u: u8| at(space, v, u).map(|i| &prime[i]);
    for v in 0..=r {
        if let Some(i) = at(space, v, 0) {
            for u in 1..3 {
                if let Some(y) = get(v, u) {
                    x[i] += y;
                }
            }
        }
        if let Some(i) = at(space, v, 1) {
            if let Some(y) = get(v + 1, 0) {
                x[i] += y;
            }
            if let Some(y) = get(v, 2) {
                x[i] += y;
            }
        }
        if !skip {
            if let Some(i) = at(space, v, 2) {
                if let Some(y) = get(v + 1, 1) {
                    x[i] += y;
                }
                if let Some(y) = get(v + 2, 0) {
                    x[i] += y;
                }
            }
        }
    }
}

/// Exact inverse of [`forward_line`].
pub(crate) fn backward_line(space: &StateSpace, x: &mut [BigInt], skip: bool) {
    let r = space.r();
    // Undo stage 2, from the largest v downwards: row 2 at v needs D′ at
    // (v+1,1) and (v+2,0); row 1 at v needs D′ at (v+1,0) and (v,2);
    // row 0 at v needs D′ at (v,1) and (v,2).
    for v in (0..=r).rev() {
        if !skip {
            if let Some(i) = at(space, v, 2) {
                if let Some(j) = at(space, v + 1, 1) {
                    let y = x[j].clone();
                    x[i] -= y;
                }
                if let Some(j) = at(space, v + 2, 0) {
                    let y = x[j].clone();
                    x[i] -= y;
                }
            }
        }
        if let Some(i) = at(space, v, 1) {
            if let Some(j) = at(space, v + 1, 0) {
                let y = x[j].clone();
                x[i] -= y;
            }
            if let Some(j) = at(space, v, 2) {
                let y = x[j].clone();
                x[i] -= y;
            }
        }
        if let Some(i) = at(space, v, 0) {
            for u in 1..3 {
                if let Some(j) = at(space, v, u) {
                    let y = x[j].clone();
                    x[i] -= y;
                }
            }
        }
    }
    for u in 0..3u8 {
        for v in 0..r {
            if let (Some(i), Some(j)) = (at(space, v, u), at(space, v + 1, u)) {
                let y = x[j].clone();
                x[i] -= y;
            }
        }
    }
}

/// Reference transform computed by direct summation over the order
/// `(v, u) ⪰ (v*, u*)` iff `v ≥ v*` and `v + u ≥ v* + u*`.
pub fn naive_forward_line(space: &StateSpace, x: &[BigInt], skip: bool) -> Vec<BigInt> {
    space
        .states()
        .iter()
        .map(|&t| {
            space
                .states()
                .iter()
                .zip(x)
                .filter(|(s, _)| {
                    if skip && t.u == 2 {
                        s.u == 2 && s.v >= t.v
                    } else {
                        s.v >= t.v && s.v + s.u as u64 >= t.v + t.u as u64
                    }
                })
                .map(|(_, y)| y.clone())
                .sum()
        })
        .collect()
}
