//! Covariant calculus on a chart: gradients, Hessians, Laplacians and
//! divergences of fields given as closures.

use std::sync::Arc;

use crate::error::Result;
use crate::kernel::chart::{Chart, Level, PointFn};
use crate::kernel::curvature::Christoffel;
use crate::kernel::deriv::{d1, jet1, jet2};
use crate::linalg::Mat;
use crate::scalar::Real;

pub type ScalarField<T> = PointFn<T, T>;
pub type VectorField<T> = PointFn<T, Vec<T>>;
pub type TensorField<T> = PointFn<T, Mat<T>>;

pub fn scalar_field<T: Real>(f: impl Fn(&[T]) -> T + Send + Sync + 'static) -> ScalarField<T> {
    Arc::new(f)
}

/// Coordinate jet of a scalar: value, partials, second partials.
#[derive(Clone, Debug)]
pub struct ScalarJet<T> {
    pub value: T,
    pub d: Vec<T>,
    pub dd: Mat<T>,
}

impl<T: Real> ScalarJet<T> {
    pub fn gradient(&self, ginv: &Mat<T>) -> Vec<T> {
        ginv.mul_vec(&self.d)
    }

    /// Covariant Hessian `d_i d_j f - Gamma^k_ij d_k f`.
    pub fn hessian(&self, gamma: &Christoffel<T>) -> Mat<T> {
        let m = self.d.len();
        Mat::from_fn(m, m, |i, j| {
            let mut s = self.dd[(i, j)];
            for k in 0..m {
                s = s - gamma.get(k, i, j) * self.d[k];
            }
            s
        })
    }
}

impl<T: Real> Chart<T> {
    /// Second-order coordinate jet of `f` at the given nesting level.
    pub fn scalar_jet(&self, f: &(dyn Fn(&[T]) -> T + Send + Sync), p: &[T], level: Level) -> ScalarJet<T> {
        let m = self.dim();
        let (h, sides) = self.stencil(p, level);
        let wrapped = |q: &[T]| vec![f(q)];
        let j = jet2(&wrapped, p, &h, &sides, self.steps.scheme);
        ScalarJet {
            value: j.value[0],
            d: j.d1.iter().map(|v| v[0]).collect(),
            dd: Mat::from_fn(m, m, |k, l| j.d2[k][l][0]).symmetrize(),
        }
    }

    /// Coordinate partials of `f`.
    pub fn scalar_d(&self, f: &(dyn Fn(&[T]) -> T + Send + Sync), p: &[T], level: Level) -> Vec<T> {
        let (h, sides) = self.stencil(p, level);
        let wrapped = |q: &[T]| vec![f(q)];
        let (_, d) = jet1(&wrapped, p, &h, &sides, self.steps.scheme);
        d.into_iter().map(|v| v[0]).collect()
    }

    /// Gradient vector `g^{ij} d_j f`.
    pub fn gradient(&self, f: &(dyn Fn(&[T]) -> T + Send + Sync), p: &[T], level: Level) -> Result<Vec<T>> {
        let g = self.metric(p)?;
        let ginv = g.inverse().ok_or_else(|| crate::Error::SingularMetric { point: super::chart::point_vec(p) })?;
        Ok(ginv.mul_vec(&self.scalar_d(f, p, level)))
    }

    pub fn hessian(&self, f: &(dyn Fn(&[T]) -> T + Send + Sync), p: &[T]) -> Result<Mat<T>> {
        let gamma = self.christoffel(p)?;
        Ok(self.scalar_jet(f, p, Level::Inner).hessian(&gamma))
    }

    pub fn laplacian(&self, f: &(dyn Fn(&[T]) -> T + Send + Sync), p: &[T]) -> Result<T> {
        let jet = self.metric_jet1(p)?;
        let gamma = Christoffel::from_jet(&jet);
        let hess = self.scalar_jet(f, p, Level::Inner).hessian(&gamma);
        Ok(trace_with(&jet.ginv, &hess))
    }

    /// `div X = d_i X^i + Gamma^i_ik X^k` for a vector field `X`.
    pub fn divergence(&self, x: &(dyn Fn(&[T]) -> Vec<T> + Send + Sync), p: &[T], level: Level) -> Result<T> {
        let gamma = self.christoffel(p)?;
        let m = self.dim();
        let (h, sides) = self.stencil(p, level);
        let xv = x(p);
        let mut s = T::zero();
        for i in 0..m {
            s = s + d1(x, p, i, h[i], sides[i], self.steps.scheme)[i];
            for k in 0..m {
                s = s + gamma.get(i, i, k) * xv[k];
            }
        }
        Ok(s)
    }

    /// Divergence of a covariant symmetric 2-tensor, `(div T)_j = g^{ik} nabla_k T_ij`.
    pub fn divergence_sym2(&self, t: &(dyn Fn(&[T]) -> Mat<T> + Send + Sync), p: &[T], level: Level) -> Result<Vec<T>> {
        let jet = self.metric_jet1(p)?;
        let gamma = Christoffel::from_jet(&jet);
        let m = self.dim();
        let (h, sides) = self.stencil(p, level);
        let flat = |q: &[T]| t(q).into_vec();
        let tv = t(p);
        let dt: Vec<Mat<T>> = (0..m)
            .map(|k| Mat::from_vec(m, m, d1(&flat, p, k, h[k], sides[k], self.steps.scheme)))
            .collect();
        let mut out = vec![T::zero(); m];
        for (j, o) in out.iter_mut().enumerate() {
            let mut s = T::zero();
            for i in 0..m {
                for k in 0..m {
                    let gik = jet.ginv[(i, k)];
                    if gik == T::zero() {
                        continue;
                    }
                    let mut nab = dt[k][(i, j)];
                    for l in 0..m {
                        nab = nab - gamma.get(l, k, i) * tv[(l, j)] - gamma.get(l, k, j) * tv[(i, l)];
                    }
                    s = s + gik * nab;
                }
            }
            *o = s;
        }
        Ok(out)
    }
}

/// `g^{ij} A_ij`.
pub fn trace_with<T: Real>(ginv: &Mat<T>, a: &Mat<T>) -> T {
    let m = a.rows();
    let mut s = T::zero();
    for i in 0..m {
        for j in 0..m {
            s = s + ginv[(i, j)] * a[(i, j)];
        }
    }
    s
}

/// `g^{ik} g^{jl} A_ij B_kl`.
pub fn inner2<T: Real>(ginv: &Mat<T>, a: &Mat<T>, b: &Mat<T>) -> T {
    let ra = ginv.matmul(a);
    let rb = ginv.matmul(b);
    // tr(g^-1 A g^-1 B)
    let m = a.rows();
    let mut s = T::zero();
    for i in 0..m {
        for k in 0..m {
            s = s + ra[(i, k)] * rb[(k, i)];
        }
    }
    s
}

/// Index lowering `g_ij v^j`.
pub fn lower<T: Real>(g: &Mat<T>, v: &[T]) -> Vec<T> {
    g.mul_vec(v)
}

/// `|v|_g` for a vector.
pub fn vec_norm<T: Real>(g: &Mat<T>, v: &[T]) -> T {
    g.bilinear(v, v).max(T::zero()).sqrt()
}
