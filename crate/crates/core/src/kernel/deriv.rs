//! Finite-difference stencils for vector-valued functions of chart points.
//!
//! Every operator is built from a one-dimensional stencil at step `h` and
//! `h/2`, combined by one Richardson step when [`Scheme::Richardson`] is
//! selected. Near a hard domain edge the stencil can be switched to a
//! one-sided variant.

use crate::scalar::{lit, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Scheme {
    /// Second-order central differences.
    Central,
    /// Central differences with one Richardson extrapolation step.
    Richardson,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Central,
    Forward,
    Backward,
}

/// `(offset in units of h, weight)` pairs for the first derivative.
fn first_stencil(side: Side) -> &'static [(f64, f64)] {
    match side {
        Side::Central => &[(-1.0, -0.5), (1.0, 0.5)],
        Side::Forward => &[(0.0, -1.5), (1.0, 2.0), (2.0, -0.5)],
        Side::Backward => &[(0.0, 1.5), (-1.0, -2.0), (-2.0, 0.5)],
    }
}

fn second_stencil(side: Side) -> &'static [(f64, f64)] {
    match side {
        Side::Central => &[(-1.0, 1.0), (0.0, -2.0), (1.0, 1.0)],
        Side::Forward => &[(0.0, 2.0), (1.0, -5.0), (2.0, 4.0), (3.0, -1.0)],
        Side::Backward => &[(0.0, 2.0), (-1.0, -5.0), (-2.0, 4.0), (-3.0, -1.0)],
    }
}

fn shifted<T: Real>(p: &[T], k: usize, dk: T) -> Vec<T> {
    let mut q = p.to_vec();
    q[k] = q[k] + dk;
    q
}

fn axpy<T: Real>(acc: &mut [T], a: T, x: &[T]) {
    for (y, &xi) in acc.iter_mut().zip(x) {
        *y = *y + a * xi;
    }
}

fn richardson<T: Real>(coarse: Vec<T>, fine: Vec<T>, scheme: Scheme) -> Vec<T> {
    match scheme {
        Scheme::Central => fine,
        Scheme::Richardson => {
            let third = lit::<T>(1.0 / 3.0);
            fine.iter().zip(&coarse).map(|(&f, &c)| (f * lit(4.0) - c) * third).collect()
        }
    }
}

/// First derivative of `f` along axis `k`.
pub fn d1<T: Real, F>(f: &F, p: &[T], k: usize, h: T, side: Side, scheme: Scheme) -> Vec<T>
where
    F: Fn(&[T]) -> Vec<T> + ?Sized,
{
    let level = |h: T| {
        let mut acc: Option<Vec<T>> = None;
        for &(o, w) in first_stencil(side) {
            let v = f(&shifted(p, k, h * lit(o)));
            let acc = acc.get_or_insert_with(|| vec![T::zero(); v.len()]);
            axpy(acc, lit::<T>(w) / h, &v);
        }
        acc.unwrap_or_default()
    };
    match scheme {
        Scheme::Central => level(h),
        Scheme::Richardson => richardson(level(h), level(h * lit(0.5)), scheme),
    }
}

/// Pure second derivative along axis `k`.
pub fn d2_pure<T: Real, F>(f: &F, p: &[T], k: usize, h: T, side: Side, scheme: Scheme) -> Vec<T>
where
    F: Fn(&[T]) -> Vec<T> + ?Sized,
{
    let level = |h: T| {
        let mut acc: Option<Vec<T>> = None;
        for &(o, w) in second_stencil(side) {
            let v = f(&shifted(p, k, h * lit(o)));
            let acc = acc.get_or_insert_with(|| vec![T::zero(); v.len()]);
            axpy(acc, lit::<T>(w) / (h * h), &v);
        }
        acc.unwrap_or_default()
    };
    match scheme {
        Scheme::Central => level(h),
        Scheme::Richardson => richardson(level(h), level(h * lit(0.5)), scheme),
    }
}

/// Mixed second derivative along axes `k != l` (tensor product of first
/// derivative stencils).
#[allow(clippy::too_many_arguments)]
pub fn d2_mixed<T: Real, F>(
    f: &F,
    p: &[T],
    (k, l): (usize, usize),
    (hk, hl): (T, T),
    (sk, sl): (Side, Side),
    scheme: Scheme,
) -> Vec<T>
where
    F: Fn(&[T]) -> Vec<T> + ?Sized,
{
    let level = |hk: T, hl: T| {
        let mut acc: Option<Vec<T>> = None;
        for &(ok, wk) in first_stencil(sk) {
            for &(ol, wl) in first_stencil(sl) {
                let q = shifted(&shifted(p, k, hk * lit(ok)), l, hl * lit(ol));
                let v = f(&q);
                let acc = acc.get_or_insert_with(|| vec![T::zero(); v.len()]);
                axpy(acc, lit::<T>(wk * wl) / (hk * hl), &v);
            }
        }
        acc.unwrap_or_default()
    };
    let half = lit::<T>(0.5);
    match scheme {
        Scheme::Central => level(hk, hl),
        Scheme::Richardson => richardson(level(hk, hl), level(hk * half, hl * half), scheme),
    }
}

/// Value, gradient and Hessian of a vector-valued function in coordinates.
#[derive(Clone, Debug)]
pub struct Jet<T> {
    pub value: Vec<T>,
    /// `d1[k][c]` = derivative of component `c` along axis `k`.
    pub d1: Vec<Vec<T>>,
    /// `d2[k][l][c]`, symmetric in `k, l`.
    pub d2: Vec<Vec<Vec<T>>>,
}

/// Full second-order jet of `f` at `p` with per-axis steps and sides.
pub fn jet2<T: Real, F>(f: &F, p: &[T], steps: &[T], sides: &[Side], scheme: Scheme) -> Jet<T>
where
    F: Fn(&[T]) -> Vec<T> + ?Sized,
{
    let m = p.len();
    let value = f(p);
    let n = value.len();
    let mut d1v = Vec::with_capacity(m);
    let mut d2v = vec![vec![vec![T::zero(); n]; m]; m];
    for k in 0..m {
        if sides[k] == Side::Central {
            // share evaluations between the first and pure second derivative
            let levels: Vec<(Vec<T>, Vec<T>)> = [steps[k], steps[k] * lit(0.5)]
                .iter()
                .map(|&h| {
                    let fp = f(&shifted(p, k, h));
                    let fm = f(&shifted(p, k, -h));
                    let first: Vec<T> = fp.iter().zip(&fm).map(|(&a, &b)| (a - b) / (h + h)).collect();
                    let second: Vec<T> = (0..n)
                        .map(|c| (fp[c] - value[c] - value[c] + fm[c]) / (h * h))
                        .collect();
                    (first, second)
                })
                .collect();
            let (c1, c2) = levels[0].clone();
            let (f1, f2) = levels[1].clone();
            match scheme {
                Scheme::Central => {
                    d1v.push(c1);
                    d2v[k][k] = c2;
                }
                Scheme::Richardson => {
                    d1v.push(richardson(c1, f1, scheme));
                    d2v[k][k] = richardson(c2, f2, scheme);
                }
            }
        } else {
            d1v.push(d1(f, p, k, steps[k], sides[k], scheme));
            d2v[k][k] = d2_pure(f, p, k, steps[k], sides[k], scheme);
        }
    }
    for k in 0..m {
        for l in k + 1..m {
            let v = d2_mixed(f, p, (k, l), (steps[k], steps[l]), (sides[k], sides[l]), scheme);
            d2v[l][k] = v.clone();
            d2v[k][l] = v;
        }
    }
    Jet { value, d1: d1v, d2: d2v }
}

/// Value and gradient only.
pub fn jet1<T: Real, F>(f: &F, p: &[T], steps: &[T], sides: &[Side], scheme: Scheme) -> (Vec<T>, Vec<Vec<T>>)
where
    F: Fn(&[T]) -> Vec<T> + ?Sized,
{
    let value = f(p);
    let d = (0..p.len()).map(|k| d1(f, p, k, steps[k], sides[k], scheme)).collect();
    (value, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: &[f64]) -> Vec<f64> {
        vec![(p[0] * 1.3).sin() * (p[1] * 0.7).exp(), p[0] * p[0] * p[1]]
    }

    #[test]
    fn richardson_jet_matches_closed_form() {
        let p = [0.4, -0.3];
        let j = jet2(&f, &p, &[1e-2, 1e-2], &[Side::Central; 2], Scheme::Richardson);
        let (s, c, e) = ((1.3 * p[0]).sin(), (1.3 * p[0]).cos(), (0.7 * p[1]).exp());
        assert!((j.d1[0][0] - 1.3 * c * e).abs() < 1e-9);
        assert!((j.d1[1][0] - 0.7 * s * e).abs() < 1e-9);
        assert!((j.d2[0][0][0] + 1.69 * s * e).abs() < 1e-8);
        assert!((j.d2[0][1][0] - 0.91 * c * e).abs() < 1e-8);
        assert!((j.d2[0][1][1] - 2.0 * p[0]).abs() < 1e-9);
    }

    #[test]
    fn one_sided_stencils_converge() {
        let p = [0.4, -0.3];
        for side in [Side::Forward, Side::Backward] {
            let g = d1(&f, &p, 0, 1e-3, side, Scheme::Richardson);
            let s2 = d2_pure(&f, &p, 0, 1e-3, side, Scheme::Richardson);
            let (s, c, e) = ((1.3 * p[0]).sin(), (1.3 * p[0]).cos(), (0.7 * p[1]).exp());
            assert!((g[0] - 1.3 * c * e).abs() < 1e-7);
            assert!((s2[0] + 1.69 * s * e).abs() < 1e-5);
        }
    }
}
