//! Multi-indices in three dimensions.
//!
//! Two orders are in play. [`MultiIndex::cmp_prec`] is the linear order used by
//! the construction loops and the polynomial seeds: first by length, then by the
//! first component, then by the second. [`MultiIndex::numbering`] is the global
//! zero-based row index of Taylor matrices; within a layer it sorts by
//! `i2 + i3` and then by `i3`, so the two orders agree across layers but not
//! inside one.

use std::cmp::Ordering;
use std::fmt;

/// A triple of exponents `(i1, i2, i3)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct MultiIndex([u8; 3]);

/// Number of multi-indices of length exactly `len`.
pub const fn layer_size(len: usize) -> usize {
    (len + 1) * (len + 2) / 2
}

/// Number of multi-indices of length at most `order`.
pub const fn count_up_to(order: usize) -> usize {
    (order + 1) * (order + 2) * (order + 3) / 6
}

impl MultiIndex {
    pub const ZERO: MultiIndex = MultiIndex([0, 0, 0]);

    pub const fn new(i1: u8, i2: u8, i3: u8) -> Self {
        MultiIndex([i1, i2, i3])
    }

    /// Unit multi-index `e_k` for `k` in `0..3`.
    pub const fn unit(k: usize) -> Self {
        let mut a = [0u8; 3];
        a[k] = 1;
        MultiIndex(a)
    }

    pub fn from_array(a: [u8; 3]) -> Self {
        MultiIndex(a)
    }

    pub fn as_array(&self) -> [u8; 3] {
        self.0
    }

    #[inline]
    pub fn get(&self, k: usize) -> usize {
        self.0[k] as usize
    }

    /// Length `|i| = i1 + i2 + i3`.
    #[inline]
    pub fn degree(&self) -> usize {
        self.0.iter().map(|&c| c as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [0, 0, 0]
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &MultiIndex) -> bool {
        (0..3).all(|k| self.0[k] <= other.0[k])
    }

    /// Componentwise `self <= other` and `self != other`.
    pub fn lt(&self, other: &MultiIndex) -> bool {
        self != other && self.le(other)
    }

    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        Some(MultiIndex([
            self.0[0].checked_sub(other.0[0])?,
            self.0[1].checked_sub(other.0[1])?,
            self.0[2].checked_sub(other.0[2])?,
        ]))
    }

    /// `i!` = `i1! i2! i3!` as a float.
    pub fn factorial(&self) -> f64 {
        self.0.iter().map(|&c| factorial(c as usize)).product()
    }

    /// Zero-based global numbering, `N(i) - 1`, with
    /// `N(i) = |i|(|i|+1)(|i|+2)/6 + (i2+i3)(i2+i3+1)/2 + i3 + 1`.
    #[inline]
    pub fn numbering(&self) -> usize {
        let m = self.degree();
        let s = self.get(1) + self.get(2);
        m * (m + 1) * (m + 2) / 6 + s * (s + 1) / 2 + self.get(2)
    }

    /// Position inside its own layer under the numbering, in `0..layer_size(|i|)`.
    #[inline]
    pub fn layer_position(&self) -> usize {
        let s = self.get(1) + self.get(2);
        s * (s + 1) / 2 + self.get(2)
    }

    /// Inverse of [`MultiIndex::numbering`].
    pub fn from_numbering(idx: usize) -> MultiIndex {
        let mut m = 0;
        while count_up_to(m) <= idx {
            m += 1;
        }
        let mut rest = idx - if m == 0 { 0 } else { count_up_to(m - 1) };
        let mut s = 0;
        while rest > s {
            rest -= s + 1;
            s += 1;
        }
        let i3 = rest;
        let i2 = s - i3;
        let i1 = m - s;
        MultiIndex([i1 as u8, i2 as u8, i3 as u8])
    }

    /// The linear order `≺`: by length, then first component, then second.
    pub fn cmp_prec(&self, other: &MultiIndex) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then(self.0[0].cmp(&other.0[0]))
            .then(self.0[1].cmp(&other.0[1]))
    }

    /// All multi-indices of length `len`, sorted by `≺`.
    pub fn layer(len: usize) -> Vec<MultiIndex> {
        let mut out = Vec::with_capacity(layer_size(len));
        for i1 in 0..=len {
            for i2 in 0..=(len - i1) {
                out.push(MultiIndex::new(i1 as u8, i2 as u8, (len - i1 - i2) as u8));
            }
        }
        out
    }

    /// All multi-indices of length exactly `len` in numbering order.
    pub fn layer_in_numbering(len: usize) -> Vec<MultiIndex> {
        let mut out = Vec::with_capacity(layer_size(len));
        for s in 0..=len {
            for i3 in 0..=s {
                out.push(MultiIndex::new((len - s) as u8, (s - i3) as u8, i3 as u8));
            }
        }
        out
    }

    /// All multi-indices with `|i| <= order`, in numbering order.
    pub fn all_up_to(order: usize) -> Vec<MultiIndex> {
        (0..=order).flat_map(MultiIndex::layer_in_numbering).collect()
    }

    /// Every `γ` with `γ <= self` componentwise.
    pub fn lower_set(&self) -> impl Iterator<Item = MultiIndex> + '_ {
        let [a, b, c] = self.0;
        (0..=a).flat_map(move |g1| {
            (0..=b).flat_map(move |g2| (0..=c).map(move |g3| MultiIndex([g1, g2, g3])))
        })
    }
}

impl std::ops::Add for MultiIndex {
    type Output = MultiIndex;
    fn add(self, rhs: MultiIndex) -> MultiIndex {
        MultiIndex([self.0[0] + rhs.0[0], self.0[1] + rhs.0[1], self.0[2] + rhs.0[2]])
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.0[0], self.0[1], self.0[2])
    }
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}
