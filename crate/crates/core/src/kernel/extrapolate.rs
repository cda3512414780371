//! Polynomial extrapolation of interior samples to a boundary point.

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Weights of the cubic through `t = d, 2d, 3d, 4d` evaluated at `t = 0`.
const W: [f64; 4] = [4.0, -6.0, 4.0, -1.0];

/// Cubic extrapolation to `t = 0` of `f(t)` sampled at `t = k d`, `k = 1..4`.
pub fn extrapolate<T: Real>(f: &dyn Fn(T) -> Result<Vec<T>>, d: T) -> Result<Vec<T>> {
    let mut acc: Option<Vec<T>> = None;
    for (k, &w) in W.iter().enumerate() {
        let v = f(d * lit((k + 1) as f64))?;
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::ExtrapolationFailed(format!("non-finite sample at t = {}", (k + 1) as f64 * d.to_f64().unwrap_or(f64::NAN))));
        }
        let a = acc.get_or_insert_with(|| vec![T::zero(); v.len()]);
        for (ai, &vi) in a.iter_mut().zip(&v) {
            *ai = *ai + lit::<T>(w) * vi;
        }
    }
    acc.ok_or_else(|| Error::ExtrapolationFailed("empty".into()))
}

pub fn extrapolate_scalar<T: Real>(f: &dyn Fn(T) -> Result<T>, d: T) -> Result<T> {
    Ok(extrapolate(&|t| Ok(vec![f(t)?]), d)?[0])
}

/// Extrapolated value with an observed convergence order from the sequence
/// `E(d), E(d/2), E(d/4)`. A smooth limit gives order close to 4.
#[derive(Clone, Debug)]
pub struct Regularity<T> {
    pub value: T,
    pub order: Option<T>,
    pub increments: [T; 2],
}

pub fn extrapolate_with_order<T: Real>(f: &dyn Fn(T) -> Result<T>, d: T) -> Result<Regularity<T>> {
    let e0 = extrapolate_scalar(f, d)?;
    let e1 = extrapolate_scalar(f, d * lit(0.5))?;
    let e2 = extrapolate_scalar(f, d * lit(0.25))?;
    let (a, b) = ((e0 - e1).abs(), (e1 - e2).abs());
    let order = if a > T::zero() && b > T::zero() { Some((a / b).log2()) } else { None };
    Ok(Regularity { value: e2, order, increments: [a, b] })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_is_exact() {
        let f = |t: f64| Ok(1.0 + 2.0 * t - 3.0 * t * t + 0.5 * t * t * t);
        assert!((extrapolate_scalar(&f, 0.1).unwrap() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn smooth_function_has_order_four() {
        let f = |t: f64| Ok((0.5 + t).sin() + t.exp());
        let r = extrapolate_with_order(&f, 0.1).unwrap();
        let o = r.order.unwrap();
        assert!((o - 4.0).abs() < 0.5, "order {o}");
        assert!((r.value - 0.5f64.sin() - 1.0).abs() < 1e-6);
    }
}
