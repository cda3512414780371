//! Parametrised hypersurfaces in a chart and their induced geometry.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kernel::chart::{point_vec, Chart, Domain, PointFn};
use crate::kernel::deriv::{d1, Scheme, Side};
use crate::kernel::quadrature::{tensor_nodes, Rule1};
use crate::linalg::Mat;
use crate::scalar::{compensated_sum, lit, Real};

#[derive(Clone)]
pub struct Surface<T> {
    pub name: String,
    /// Parameter box, dimension `m - 1`.
    pub param: Domain<T>,
    embed: PointFn<T, Vec<T>>,
    tangents: PointFn<T, Mat<T>>,
    /// Coordinate direction pointing from the surface into the region of
    /// interest (used for normals and boundary extrapolation).
    inward: PointFn<T, Vec<T>>,
    /// `(axis, value)` when the surface is a coordinate face.
    pub face: Option<(usize, T)>,
}

impl<T: Real> std::fmt::Debug for Surface<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Surface").field("name", &self.name).field("face", &self.face).finish()
    }
}

impl<T: Real> Surface<T> {
    /// The face `x^axis = value`, parametrised by the remaining coordinates.
    /// `inward_sign` is `+1` if the region lies at larger `x^axis`.
    pub fn coordinate_face(name: &str, param: Domain<T>, axis: usize, value: T, inward_sign: T) -> Self {
        let m = param.dim() + 1;
        let embed: PointFn<T, Vec<T>> = Arc::new(move |y: &[T]| {
            let mut x = Vec::with_capacity(m);
            x.extend_from_slice(&y[..axis]);
            x.push(value);
            x.extend_from_slice(&y[axis..]);
            x
        });
        let tangents: PointFn<T, Mat<T>> = Arc::new(move |_y: &[T]| {
            Mat::from_fn(m, m - 1, |i, a| {
                let target = if a < axis { a } else { a + 1 };
                if i == target {
                    T::one()
                } else {
                    T::zero()
                }
            })
        });
        let inward: PointFn<T, Vec<T>> = Arc::new(move |_y: &[T]| {
            let mut v = vec![T::zero(); m];
            v[axis] = inward_sign;
            v
        });
        Self { name: name.to_string(), param, embed, tangents, inward, face: Some((axis, value)) }
    }

    /// General embedding; tangents are obtained by finite differences.
    pub fn embedded(name: &str, param: Domain<T>, embed: PointFn<T, Vec<T>>, inward: PointFn<T, Vec<T>>) -> Self {
        let e2 = embed.clone();
        let tangents: PointFn<T, Mat<T>> = Arc::new(move |y: &[T]| {
            let n = y.len();
            let cols: Vec<Vec<T>> = (0..n)
                .map(|a| d1(&|q: &[T]| e2(q), y, a, lit(1e-3), Side::Central, Scheme::Richardson))
                .collect();
            let m = cols[0].len();
            Mat::from_fn(m, n, |i, a| cols[a][i])
        });
        Self { name: name.to_string(), param, embed, tangents, inward, face: None }
    }

    pub fn point(&self, y: &[T]) -> Vec<T> {
        (self.embed)(y)
    }

    pub fn tangents(&self, y: &[T]) -> Mat<T> {
        (self.tangents)(y)
    }

    pub fn inward_direction(&self, y: &[T]) -> Vec<T> {
        (self.inward)(y)
    }

    /// Point at coordinate distance `t` inward from `X(y)`.
    pub fn inward_point(&self, y: &[T], t: T) -> Vec<T> {
        let x = self.point(y);
        let w = self.inward_direction(y);
        x.iter().zip(&w).map(|(&a, &b)| a + t * b).collect()
    }

    pub fn induced_metric(&self, ambient: &Chart<T>, y: &[T]) -> Result<Mat<T>> {
        let g = ambient.metric_raw(&self.point(y));
        let e = self.tangents(y);
        let h = e.transpose().matmul(&g).matmul(&e).symmetrize();
        if !h.is_finite() || h.cholesky().is_none() {
            return Err(Error::DegenerateInducedMetric { param: point_vec(y) });
        }
        Ok(h)
    }

    /// Parameter chart carrying the induced metric.
    pub fn induced_chart(&self, ambient: &Chart<T>) -> Chart<T> {
        let g = ambient.metric_fn();
        let embed = self.embed.clone();
        let tangents = self.tangents.clone();
        let metric: PointFn<T, Mat<T>> = Arc::new(move |y: &[T]| {
            let e = tangents(y);
            e.transpose().matmul(&g(&embed(y))).matmul(&e).symmetrize()
        });
        Chart::new(&format!("{}:induced", self.name), self.param.clone(), metric).with_steps(ambient.steps.clone())
    }

    /// Inward unit normal vector (coordinate components) at `X(y)`.
    pub fn unit_normal(&self, ambient: &Chart<T>, y: &[T]) -> Result<Vec<T>> {
        let g = ambient.metric_raw(&self.point(y));
        let e = self.tangents(y);
        let h = e.transpose().matmul(&g).matmul(&e);
        let hinv = h.inverse().ok_or_else(|| Error::DegenerateInducedMetric { param: point_vec(y) })?;
        let w = self.inward_direction(y);
        // remove the tangential part: w - E h^-1 E^T g w
        let coeff = hinv.mul_vec(&e.transpose().mul_vec(&g.mul_vec(&w)));
        let tang = e.mul_vec(&coeff);
        let nu: Vec<T> = w.iter().zip(&tang).map(|(&a, &b)| a - b).collect();
        let len = g.bilinear(&nu, &nu).sqrt();
        if !(len > T::zero()) {
            return Err(Error::DegenerateInducedMetric { param: point_vec(y) });
        }
        Ok(nu.iter().map(|&x| x / len).collect())
    }

    /// Quadrature nodes over the parameter box with parameter weights.
    pub fn param_nodes(&self, n: &[usize]) -> Vec<(Vec<T>, T)> {
        let rules: Vec<Rule1<T>> = self
            .param
            .axes
            .iter()
            .zip(n)
            .map(|(a, &k)| Rule1::for_axis(a, a.lo, a.hi, k))
            .collect();
        tensor_nodes(&rules)
    }

    /// `(parameter, dsigma weight)` pairs, i.e. parameter weight times area element.
    pub fn area_nodes(&self, ambient: &Chart<T>, n: &[usize]) -> Result<Vec<(Vec<T>, T)>> {
        self.param_nodes(n)
            .into_iter()
            .map(|(y, w)| {
                let h = self.induced_metric(ambient, &y)?;
                Ok((y, w * h.det().sqrt()))
            })
            .collect()
    }

    pub fn area(&self, ambient: &Chart<T>, n: &[usize]) -> Result<T> {
        Ok(compensated_sum(self.area_nodes(ambient, n)?.into_iter().map(|(_, w)| w)))
    }

    /// `int_Sigma f dsigma`; `f` receives the parameter.
    pub fn integrate(&self, ambient: &Chart<T>, n: &[usize], f: &dyn Fn(&[T]) -> Result<T>) -> Result<T> {
        let nodes = self.area_nodes(ambient, n)?;
        let vals: Result<Vec<T>> = nodes.iter().map(|(y, w)| Ok(f(y)? * *w)).collect();
        Ok(compensated_sum(vals?))
    }
}
