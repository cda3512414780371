//! Deterministic low-discrepancy sampling of coordinate boxes.

use serde::{Deserialize, Serialize};

use crate::scalar::{lit, Real};

const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

/// Radical inverse of `i` in base `b`.
pub fn radical_inverse(mut i: u64, b: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    let inv = 1.0 / b as f64;
    while i > 0 {
        f *= inv;
        r += f * (i % b) as f64;
        i /= b;
    }
    r
}

/// `n` Halton points in `[0, 1)^d`, skipping the first `skip` indices.
pub fn halton(n: usize, d: usize, skip: u64) -> Vec<Vec<f64>> {
    assert!(d <= PRIMES.len());
    (0..n as u64)
        .map(|i| (0..d).map(|k| radical_inverse(i + 1 + skip, PRIMES[k])).collect())
        .collect()
}

/// Closed coordinate box used for sampling and integration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleBox<T> {
    pub lo: Vec<T>,
    pub hi: Vec<T>,
}

impl<T: Real> SampleBox<T> {
    pub fn new(lo: Vec<T>, hi: Vec<T>) -> Self {
        assert_eq!(lo.len(), hi.len());
        Self { lo, hi }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn halton(&self, n: usize, skip: u64) -> Vec<Vec<T>> {
        halton(n, self.dim(), skip)
            .into_iter()
            .map(|u| {
                u.iter()
                    .enumerate()
                    .map(|(k, &x)| self.lo[k] + (self.hi[k] - self.lo[k]) * lit(x))
                    .collect()
            })
            .collect()
    }

    pub fn contains(&self, p: &[T]) -> bool {
        p.iter().enumerate().all(|(k, &x)| x >= self.lo[k] && x <= self.hi[k])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halton_is_deterministic_and_in_range() {
        let a = halton(100, 3, 7);
        let b = halton(100, 3, 7);
        assert_eq!(a, b);
        assert!(a.iter().flatten().all(|&x| (0.0..1.0).contains(&x)));
        assert!((radical_inverse(1, 2) - 0.5).abs() < 1e-15);
        assert!((radical_inverse(3, 3) - 1.0 / 9.0).abs() < 1e-15);
    }
}
