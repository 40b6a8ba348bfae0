//! Compensated (Neumaier) summation.

use std::ops::AddAssign;

use crate::scalar::Scalar;

/// Running sum with a second-order error term.
///
/// Neumaier's variant of Kahan summation, which also handles addends larger
/// than the running total.
#[derive(Debug, Clone, Copy)]
pub struct CompensatedSum<S> {
    sum: S,
    comp: S,
}

impl<S: Scalar> Default for CompensatedSum<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Scalar> CompensatedSum<S> {
    pub fn new() -> Self {
        Self {
            sum: S::zero(),
            comp: S::zero(),
        }
    }

    pub fn add(&mut self, x: S) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp = self.comp + ((self.sum - t) + x);
        } else {
            self.comp = self.comp + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    pub fn value(&self) -> S {
        self.sum + self.comp
    }
}

impl<S: Scalar> AddAssign<S> for CompensatedSum<S> {
    fn add_assign(&mut self, rhs: S) {
        self.add(rhs);
    }
}

impl<S: Scalar> FromIterator<S> for CompensatedSum<S> {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        let mut acc = Self::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Compensated sum of an iterator.
pub fn compensated_sum<S: Scalar, I: IntoIterator<Item = S>>(iter: I) -> S {
    iter.into_iter().collect::<CompensatedSum<S>>().value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_small_terms() {
        let xs = [1.0f64, 1e100, 1.0, -1e100];
        let naive: f64 = xs.iter().sum();
        assert_eq!(naive, 0.0);
        assert_eq!(compensated_sum(xs), 2.0);
    }

    #[test]
    fn harmonic_tail_matches_reverse_order() {
        let forward = compensated_sum((1..=1_000_000u64).map(|k| 1.0f32 / k as f32));
        let reverse: f64 = (1..=1_000_000u64).rev().map(|k| 1.0 / k as f64).sum();
        assert!((forward as f64 - reverse).abs() < 1e-5);
    }
}
