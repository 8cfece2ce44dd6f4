//! Compensated (Neumaier) accumulators.
//!
//! All block sums in [`crate::state`] run in a fixed order (n₁ ascending, then
//! n₂ ascending) through these accumulators, so results are reproducible
//! bit-for-bit independent of platform vectorisation choices.

use num_complex::Complex64;
use std::ops::AddAssign;

#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl AddAssign<f64> for NeumaierSum {
    fn add_assign(&mut self, rhs: f64) {
        self.add(rhs);
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Componentwise compensated sum of complex values.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexNeumaierSum {
    re: NeumaierSum,
    im: NeumaierSum,
}

impl ComplexNeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: Complex64) {
        self.re.add(value.re);
        self.im.add(value.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

impl AddAssign<Complex64> for ComplexNeumaierSum {
    fn add_assign(&mut self, rhs: Complex64) {
        self.add(rhs);
    }
}

/// Compensated sum of a slice in index order.
pub fn compensated_sum(values: &[f64]) -> f64 {
    values.iter().copied().collect::<NeumaierSum>().value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_small_terms() {
        // naive summation loses the 1.0 entirely
        let values = [1e100, 1.0, -1e100];
        assert_eq!(values.iter().sum::<f64>(), 0.0);
        assert_eq!(compensated_sum(&values), 1.0);
    }

    #[test]
    fn many_tenths() {
        let mut acc = NeumaierSum::new();
        for _ in 0..1_000_000 {
            acc += 0.1;
        }
        assert!((acc.value() - 100_000.0).abs() < 1e-9);
    }

    #[test]
    fn complex_components_independent() {
        let mut acc = ComplexNeumaierSum::new();
        acc += Complex64::new(1e100, -1.0);
        acc += Complex64::new(1.0, 1e100);
        acc += Complex64::new(-1e100, -1e100);
        assert_eq!(acc.value(), Complex64::new(1.0, -1.0));
    }
}
