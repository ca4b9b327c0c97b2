//! Neumaier compensated summation.
//!
//! Norms in this crate accumulate up to ~10^6 terms of mixed magnitude;
//! plain summation loses about three digits there.

/// Running Neumaier (improved Kahan-Babuska) sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl Extend<f64> for NeumaierSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for v in iter {
            self.add(v);
        }
    }
}

/// Compensated sum of an iterator.
pub fn sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut acc = NeumaierSum::new();
    acc.extend(values);
    acc.value()
}

/// Compensated dot product of two equal-length slices.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    sum(a.iter().zip(b).map(|(x, y)| x * y))
}

/// Compensated weighted dot product `sum w_i a_i b_i`.
pub fn weighted_dot(a: &[f64], b: &[f64], w: impl Fn(usize) -> f64) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    sum(a.iter().zip(b).enumerate().map(|(i, (x, y))| w(i) * x * y))
}

/// `sum_{m >= m0} 1/m^2`, upper bound `1/m0 + 1/m0^2` (`m0 >= 1`).
pub fn inverse_square_tail_bound(m0: usize) -> f64 {
    let m = m0.max(1) as f64;
    1.0 / m + 1.0 / (m * m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_small_terms() {
        let vals = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(sum(vals), 2.0);
        let naive: f64 = vals.iter().sum();
        assert_ne!(naive, 2.0);
    }

    #[test]
    fn harmonic_sum_matches_reverse_order() {
        let n = 1_000_000;
        let fwd = sum((1..=n).map(|k| 1.0 / k as f64));
        let mut rev = 0.0;
        for k in (1..=n).rev() {
            rev += 1.0 / k as f64;
        }
        assert!((fwd - rev).abs() < 1e-13);
    }

    #[test]
    fn inverse_square_tail_is_an_upper_bound() {
        for m0 in [1usize, 2, 10, 1000] {
            let brute = sum((m0..m0 + 2_000_000).map(|m| 1.0 / (m as f64).powi(2)));
            assert!(brute <= inverse_square_tail_bound(m0));
        }
    }
}
