//! Label alphabets for the treewidth programs.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{KrcError, Result};

/// A finite, ordered label alphabet. Index 0 is the label 0 (a center),
/// indices `1..top()` are positive labels in increasing order, and `top()`
/// is the extra label of irrelevant vertices that are left unlabelled.
pub trait LabelSpace {
    /// Number of labels including 0 and the top label.
    fn len(&self) -> usize;

    /// Whether the alphabet is empty.
    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Index of the top label.
    fn top(&self) -> usize {
        self.len() - 1
    }

    /// Whether a vertex labelled `to` is satisfied through an arc of weight
    /// `w` from a vertex labelled `from`. Neither index is the top label.
    fn satisfies(&self, from: usize, to: usize, w: u64) -> bool;
}

/// Integer labels `0..=r` plus top.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactLabels {
    r: u64,
}

impl ExactLabels {
    /// Labels for radius `r`.
    pub fn new(r: u64) -> Self {
        ExactLabels { r }
    }

    /// Radius.
    pub fn r(&self) -> u64 {
        self.r
    }
}

impl LabelSpace for ExactLabels {
    fn len(&self) -> usize {
        self.r as usize + 2
    }

    fn satisfies(&self, from: usize, to: usize, w: u64) -> bool {
        (to as u64).checked_sub(from as u64).is_some_and(|d| d >= w)
    }
}

/// The label values `{0} ∪ {(1+δ)^i}` used by the approximation scheme.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaLabelSet {
    /// Step `δ`.
    pub delta: BigRational,
    /// Error parameter `ε` of the satisfaction test.
    pub eps: BigRational,
    /// Exponents `i` of the positive labels, strictly increasing.
    pub exponents: Vec<i64>,
    /// Exact values `(1+δ)^i`, one per exponent.
    pub values: Vec<BigRational>,
}

/// `δ = ε/(2H)` and labels `{0} ∪ {(1+δ)^i : i ≥ 0, (1+δ)^i ≤ (1+ε)r}`.
pub fn build_delta_labels(r: u64, eps: &BigRational, h: usize) -> Result<DeltaLabelSet> {
    let delta = delta_for_height(eps, h)?;
    delta_labels(r, eps, &delta, false)
}

/// Like [`build_delta_labels`] with additional negative exponents down to
/// the smallest power that is still at least `1/(1+ε)`.
pub fn build_delta_labels_with_floor(r: u64, eps: &BigRational, h: usize) -> Result<DeltaLabelSet> {
    let delta = delta_for_height(eps, h)?;
    delta_labels(r, eps, &delta, true)
}

/// `ε/(2H)`.
pub fn delta_for_height(eps: &BigRational, h: usize) -> Result<BigRational> {
    if !eps.is_positive() {
        return Err(KrcError::InvalidParameter("epsilon must be positive".into()));
    }
    if h == 0 {
        return Err(KrcError::InvalidParameter("height must be at least 1".into()));
    }
    Ok(eps / BigRational::from_integer(BigInt::from(2 * h)))
}

/// Labels for an explicit step `δ`, optionally with the negative floor.
pub fn delta_labels(r: u64, eps: &BigRational, delta: &BigRational, floor: bool) -> Result<DeltaLabelSet> {
    if !eps.is_positive() || !delta.is_positive() {
        return Err(KrcError::InvalidParameter("epsilon and delta must be positive".into()));
    }
    if r == 0 {
        return Err(KrcError::InvalidParameter("radius must be at least 1".into()));
    }
    let one = BigRational::one();
    let base = &one + delta;
    let cap = (&one + eps) * BigRational::from_integer(BigInt::from(r));
    let mut exponents = Vec::new();
    let mut values = Vec::new();
    if floor {
        let low = &one / (&one + eps);
        let inv = &one / &base;
        let mut x = inv.clone();
        let mut i = -1i64;
        let mut neg = Vec::new();
        while x >= low {
            neg.push((i, x.clone()));
            x = &x * &inv;
            i -= 1;
        }
        for (i, x) in neg.into_iter().rev() {
            exponents.push(i);
            values.push(x);
        }
    }
    let mut x = one.clone();
    let mut i = 0i64;
    while x <= cap {
        exponents.push(i);
        values.push(x.clone());
        x = &x * &base;
        i += 1;
    }
    Ok(DeltaLabelSet { delta: delta.clone(), eps: eps.clone(), exponents, values })
}

/// Number of labels `delta_labels` would produce, computed in floating
/// point with a safety margin. Used only to choose between runs.
pub fn estimate_delta_label_count(r: u64, eps: f64, delta: f64, floor: bool) -> f64 {
    let step = (1.0 + delta).ln();
    let up = ((1.0 + eps) * r as f64).ln() / step;
    let down = if floor { (1.0 + eps).ln() / step } else { 0.0 };
    up + down + 3.0
}

impl DeltaLabelSet {
    /// Number of labels including 0 (top not counted).
    pub fn len(&self) -> usize {
        self.values.len() + 1
    }

    /// Never empty: the 0 label is always present.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Value of label index `i` (0 is the label 0).
    pub fn value(&self, i: usize) -> BigRational {
        if i == 0 {
            BigRational::zero()
        } else {
            self.values[i - 1].clone()
        }
    }

    /// The largest label value.
    pub fn max_value(&self) -> BigRational {
        self.values.last().cloned().unwrap_or_else(BigRational::zero)
    }

    /// For every label index `i < len()`, the smallest positive label index
    /// `j` with `value(j) ≥ value(i) + w/(1+ε)`, or `len()` when none exists.
    pub fn thresholds(&self, w: u64) -> Vec<u32> {
        let c = BigRational::from_integer(BigInt::from(w)) / (BigRational::one() + &self.eps);
        let n = self.len();
        let mut out = Vec::with_capacity(n);
        let mut j = 1usize;
        for i in 0..n {
            let need = self.value(i) + &c;
            while j < n && self.values[j - 1] < need {
                j += 1;
            }
            out.push(j as u32);
        }
        out
    }
}

/// A [`DeltaLabelSet`] with satisfaction thresholds precomputed for a fixed
/// set of arc weights.
#[derive(Debug, Clone)]
pub struct DeltaSpace {
    labels: DeltaLabelSet,
    thresholds: HashMap<u64, Vec<u32>>,
}

impl DeltaSpace {
    /// Precomputes thresholds for every weight in `weights`.
    pub fn new(labels: DeltaLabelSet, weights: impl IntoIterator<Item = u64>) -> Self {
        let mut thresholds = HashMap::new();
        for w in weights {
            thresholds.entry(w).or_insert_with(|| labels.thresholds(w));
        }
        DeltaSpace { labels, thresholds }
    }

    /// The underlying labels.
    pub fn labels(&self) -> &DeltaLabelSet {
        &self.labels
    }
}

impl LabelSpace for DeltaSpace {
    fn len(&self) -> usize {
        self.labels.len() + 1
    }

    fn satisfies(&self, from: usize, to: usize, w: u64) -> bool {
        let thr = self.thresholds.get(&w).unwrap_or_else(|| panic!("no threshold precomputed for weight {w}"));
        to != 0 && to as u32 >= thr[from]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn delta_from_height() {
        assert_eq!(delta_for_height(&q(1, 5), 5).unwrap(), q(1, 50));
    }

    #[test]
    fn r10_eps1_quarter() {
        let l = delta_labels(10, &q(1, 1), &q(1, 4), false).unwrap();
        assert_eq!(l.exponents, (0..=13).collect::<Vec<_>>());
        assert_eq!(l.len(), 15);
        let via_h = build_delta_labels(10, &q(1, 1), 2).unwrap();
        assert_eq!(via_h, l);
    }

    #[test]
    fn r1_contains_one() {
        let l = build_delta_labels(1, &q(1, 3), 7).unwrap();
        assert_eq!(l.value(1), q(1, 1));
        assert!(l.values.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn floor_extends_below_one() {
        let l = build_delta_labels_with_floor(4, &q(1, 2), 2).unwrap();
        assert!(l.exponents[0] < 0);
        let low = q(2, 3);
        assert!(l.values[0] >= low);
        assert!(&l.values[0] / (q(1, 1) + q(1, 8)) < low);
        assert!(l.values.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn thresholds_match_direct_comparison() {
        let l = delta_labels(6, &q(1, 2), &q(1, 3), true).unwrap();
        for w in 1..=5 {
            let thr = l.thresholds(w);
            let c = q(w as i64, 1) / q(3, 2);
            for (i, &t) in thr.iter().enumerate().take(l.len()) {
                for j in 1..l.len() {
                    assert_eq!(j as u32 >= t, l.value(j) >= l.value(i) + &c);
                }
            }
        }
    }

    #[test]
    fn estimate_is_an_upper_bound() {
        let l = delta_labels(50, &q(1, 4), &q(1, 20), true).unwrap();
        assert!(estimate_delta_label_count(50, 0.25, 0.05, true) >= l.len() as f64);
    }
}
