//! Gauss-Legendre and periodic trapezoid rules, tensor products over boxes.

use crate::kernel::chart::Axis;
use crate::scalar::{compensated_sum, lit, Real};

/// Gauss-Legendre nodes and weights on `[-1, 1]`, computed in `f64` by Newton
/// iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, 0.0);
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j as f64 + 1.0) * z * p1 - j as f64 * p2) / (j as f64 + 1.0);
            }
            dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// One-dimensional rule: `(node, weight)` pairs.
#[derive(Clone, Debug)]
pub struct Rule1<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> Rule1<T> {
    pub fn gauss(lo: T, hi: T, n: usize) -> Self {
        let (x, w) = gauss_legendre(n);
        let half = (hi - lo) * lit(0.5);
        let mid = (hi + lo) * lit(0.5);
        Self {
            nodes: x.iter().map(|&xi| mid + half * lit(xi)).collect(),
            weights: w.iter().map(|&wi| half * lit(wi)).collect(),
        }
    }

    pub fn periodic(lo: T, hi: T, n: usize) -> Self {
        let h = (hi - lo) / lit(n as f64);
        Self {
            nodes: (0..n).map(|i| lo + h * lit(i as f64)).collect(),
            weights: vec![h; n],
        }
    }

    /// Gauss rule for ordinary axes, trapezoid for periodic ones.
    pub fn for_axis(axis: &Axis<T>, lo: T, hi: T, n: usize) -> Self {
        if axis.periodic {
            Self::periodic(lo, hi, n)
        } else {
            Self::gauss(lo, hi, n)
        }
    }
}

/// Tensor-product rule; returns `(point, weight)` pairs in a fixed order.
pub fn tensor_nodes<T: Real>(rules: &[Rule1<T>]) -> Vec<(Vec<T>, T)> {
    let mut out: Vec<(Vec<T>, T)> = vec![(Vec::new(), T::one())];
    for r in rules {
        let mut next = Vec::with_capacity(out.len() * r.nodes.len());
        for (p, w) in &out {
            for (&x, &wx) in r.nodes.iter().zip(&r.weights) {
                let mut q = p.clone();
                q.push(x);
                next.push((q, *w * wx));
            }
        }
        out = next;
    }
    out
}

/// Compensated weighted sum of precomputed node values.
pub fn weighted_sum<T: Real>(values: &[T], weights: &[T]) -> T {
    compensated_sum(values.iter().zip(weights).map(|(&v, &w)| v * w))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_integrates_polynomials_exactly() {
        let r = Rule1::<f64>::gauss(0.0, 2.0, 5);
        let s: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.powi(9)).sum();
        assert!((s - 2f64.powi(10) / 10.0).abs() < 1e-11);
    }

    #[test]
    fn trapezoid_is_spectral_for_periodic() {
        let r = Rule1::<f64>::periodic(0.0, 2.0 * std::f64::consts::PI, 16);
        let s: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * (x.cos()).powi(2)).sum();
        assert!((s - std::f64::consts::PI).abs() < 1e-14);
    }
}
