//! Targets, maps and potentials.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::calculus::ScalarField;
use crate::kernel::chart::{point_vec, Axis, Chart, Domain, Level, PointFn};
use crate::kernel::curvature::Curvature;
use crate::kernel::deriv::{jet1, jet2};
use crate::linalg::{generalized_eigenvalues, Mat};

/// Riemannian target `(N, h)` given on a single chart.
#[derive(Clone)]
pub struct TargetManifold {
    pub name: String,
    pub chart: Chart<f64>,
    /// `Some(k)` when `h` has constant sectional curvature `k`.
    pub constant_curvature: Option<f64>,
    /// Declared upper bound for the sectional curvature of `h`.
    pub sec_bound: f64,
}

impl std::fmt::Debug for TargetManifold {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TargetManifold").field("name", &self.name).field("sec_bound", &self.sec_bound).finish()
    }
}

fn target_axes(n: usize, half: f64) -> Vec<Axis<f64>> {
    (0..n).map(|a| Axis::new(&format!("y{}", a + 1), -half, half)).collect()
}

impl TargetManifold {
    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn euclidean(n: usize) -> Self {
        let chart = Chart::new(&format!("R{n}"), Domain::new(target_axes(n, 1.0e3)), Arc::new(move |_y: &[f64]| Mat::identity(n)));
        Self { name: format!("euclidean-{n}"), chart, constant_curvature: Some(0.0), sec_bound: 0.0 }
    }

    /// `h = 4 |dy|^2 / (1 + k |y|^2)^2`, of constant curvature `k`. For
    /// `k < 0` the coordinate box is kept inside the ball `|y|^2 < 1/|k|`.
    pub fn space_form(n: usize, k: f64) -> Self {
        let half = if k < 0.0 { 0.9 / (n as f64 * -k).sqrt() } else { 1.0e3 };
        let metric = Arc::new(move |y: &[f64]| {
            let r2: f64 = y.iter().map(|v| v * v).sum();
            let c = 2.0 / (1.0 + k * r2);
            Mat::identity(n).scale(c * c)
        });
        let chart = Chart::new(&format!("space-form-{n}({k})"), Domain::new(target_axes(n, half)), metric);
        Self { name: format!("space-form-{n}({k})"), chart, constant_curvature: Some(k), sec_bound: k }
    }

    /// Fully covariant curvature tensor at `y`.
    pub fn riemann(&self, y: &[f64]) -> Result<RiemannTensor> {
        match self.constant_curvature {
            Some(k) => Ok(RiemannTensor::constant(&self.chart.metric(y)?, k)),
            None => Ok(RiemannTensor::from_curvature(&self.chart.curvature(y)?)),
        }
    }
}

/// `R_abcd` stored densely, with the sign convention `R(X, Y, X, Y) = sec |X ^ Y|^2`.
#[derive(Clone, Debug)]
pub struct RiemannTensor {
    n: usize,
    data: Vec<f64>,
}

impl RiemannTensor {
    fn at(n: usize, a: usize, b: usize, c: usize, d: usize) -> usize {
        ((a * n + b) * n + c) * n + d
    }

    /// `k (h_ac h_bd - h_ad h_bc)`.
    pub fn constant(h: &Mat<f64>, k: f64) -> Self {
        let n = h.rows();
        let mut data = vec![0.0; n * n * n * n];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        data[Self::at(n, a, b, c, d)] = k * (h[(a, c)] * h[(b, d)] - h[(a, d)] * h[(b, c)]);
                    }
                }
            }
        }
        Self { n, data }
    }

    /// Lowers `R^e_bcd` of a chart curvature with its metric.
    pub fn from_curvature(curv: &Curvature<f64>) -> Self {
        let n = curv.g.rows();
        let mut data = vec![0.0; n * n * n * n];
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let up: Vec<f64> = (0..n).map(|e| curv.riemann(e, b, c, d)).collect();
                    for a in 0..n {
                        data[Self::at(n, a, b, c, d)] = (0..n).map(|e| curv.g[(a, e)] * up[e]).sum();
                    }
                }
            }
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        self.data[Self::at(self.n, a, b, c, d)]
    }

    /// `sum_{i,j} R(X_i, X_j, X_i, X_j)` over the columns `X_i` of `x`.
    pub fn contract(&self, x: &Mat<f64>) -> f64 {
        let n = self.n;
        assert_eq!(x.rows(), n, "contract shape");
        // G^ac = sum_i X_i^a X_i^c
        let gram = x.matmul(&x.transpose());
        let mut s = 0.0;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let r = self.data[Self::at(n, a, b, c, d)];
                        if r != 0.0 {
                            s += r * gram[(a, c)] * gram[(b, d)];
                        }
                    }
                }
            }
        }
        s
    }

    /// Sectional curvature of the plane spanned by `x, y` with respect to `h`.
    pub fn sectional(&self, h: &Mat<f64>, x: &[f64], y: &[f64]) -> f64 {
        let n = self.n;
        let mut s = 0.0;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        s += self.get(a, b, c, d) * x[a] * y[b] * x[c] * y[d];
                    }
                }
            }
        }
        let area = h.bilinear(x, x) * h.bilinear(y, y) - h.bilinear(x, y).powi(2);
        s / area
    }
}

/// `Q0 = |X^T h X|^2 - sum R(X_i, X_j, X_i, X_j)` for the columns of `x`.
pub fn q0_value(h: &Mat<f64>, r: &RiemannTensor, x: &Mat<f64>) -> f64 {
    let pull = x.transpose().matmul(h).matmul(x);
    let p2 = pull.as_slice().iter().map(|v| v * v).sum::<f64>();
    p2 - r.contract(x)
}

/// How an orthonormal frame is extracted from a metric.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FrameKind {
    /// `g = L L^T`, frame `L^-T`.
    Cholesky,
    /// Frame `g^-1/2`.
    Symmetric,
}

/// Columns form a `g`-orthonormal frame.
pub fn orthonormal_frame(g: &Mat<f64>, kind: FrameKind) -> Option<Mat<f64>> {
    match kind {
        FrameKind::Cholesky => Some(g.cholesky()?.lower_inverse().transpose()),
        FrameKind::Symmetric => {
            let (w, v) = g.sym_eigen();
            if w.iter().any(|&x| !(x > 0.0)) {
                return None;
            }
            let d = Mat::diag(&w.iter().map(|x| 1.0 / x.sqrt()).collect::<Vec<_>>());
            Some(v.matmul(&d).matmul(&v.transpose()))
        }
    }
}

/// Inverse of [`orthonormal_frame`]: maps coordinate components to frame components.
pub fn orthonormal_coframe(h: &Mat<f64>, kind: FrameKind) -> Option<Mat<f64>> {
    match kind {
        FrameKind::Cholesky => Some(h.cholesky()?.transpose()),
        FrameKind::Symmetric => {
            let (w, v) = h.sym_eigen();
            if w.iter().any(|&x| !(x > 0.0)) {
                return None;
            }
            let d = Mat::diag(&w.iter().map(|x| x.sqrt()).collect::<Vec<_>>());
            Some(v.matmul(&d).matmul(&v.transpose()))
        }
    }
}

/// Coordinate jet of a map: value, Jacobian `J[(a, k)] = d_k phi^a` and second
/// partials `second[a][(k, l)]`.
#[derive(Clone, Debug)]
pub struct MapJet {
    pub value: Vec<f64>,
    pub jac: Mat<f64>,
    pub second: Vec<Mat<f64>>,
}

/// A smooth map from the chart of a triple into a target.
#[derive(Clone)]
pub struct SmoothMap {
    pub name: String,
    pub target: TargetManifold,
    pub eval: PointFn<f64, Vec<f64>>,
}

impl std::fmt::Debug for SmoothMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SmoothMap").field("name", &self.name).field("target", &self.target).finish()
    }
}

impl SmoothMap {
    pub fn new(name: &str, target: TargetManifold, eval: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static) -> Self {
        Self { name: name.to_string(), target, eval: Arc::new(eval) }
    }

    /// The constant map onto `point`.
    pub fn constant(target: TargetManifold, point: Vec<f64>) -> Self {
        Self::new(&format!("constant-{}", target.name), target, move |_| point.clone())
    }

    pub fn value(&self, p: &[f64]) -> Result<Vec<f64>> {
        let y = (self.eval)(p);
        if y.len() != self.target.dim() {
            return Err(Error::WrongDimension { expected: self.target.dim(), got: y.len() });
        }
        self.target.chart.check_point(&y)?;
        Ok(y)
    }

    pub fn jacobian(&self, source: &Chart<f64>, p: &[f64], level: Level) -> Result<(Vec<f64>, Mat<f64>)> {
        let y = self.value(p)?;
        let (h, sides) = source.stencil(p, level);
        let (_, d) = jet1(self.eval.as_ref(), p, &h, &sides, source.steps.scheme);
        let jac = Mat::from_fn(y.len(), p.len(), |a, k| d[k][a]);
        if !jac.is_finite() {
            return Err(Error::OutOfDomain { point: point_vec(p) });
        }
        Ok((y, jac))
    }

    pub fn jet(&self, source: &Chart<f64>, p: &[f64], level: Level) -> Result<MapJet> {
        let value = self.value(p)?;
        let (h, sides) = source.stencil(p, level);
        let j = jet2(self.eval.as_ref(), p, &h, &sides, source.steps.scheme);
        let (n, m) = (value.len(), p.len());
        let jac = Mat::from_fn(n, m, |a, k| j.d1[k][a]);
        let second: Vec<Mat<f64>> = (0..n).map(|a| Mat::from_fn(m, m, |k, l| j.d2[k][l][a]).symmetrize()).collect();
        if !jac.is_finite() || second.iter().any(|s| !s.is_finite()) {
            return Err(Error::OutOfDomain { point: point_vec(p) });
        }
        Ok(MapJet { value, jac, second })
    }

    /// `dphi` as an `n x m` matrix in a `g`-orthonormal source frame and an
    /// `h`-orthonormal target frame.
    pub fn differential(&self, source: &Chart<f64>, p: &[f64], kind: FrameKind) -> Result<Mat<f64>> {
        let (y, jac) = self.jacobian(source, p, Level::Inner)?;
        let g = source.metric(p)?;
        let h = self.target.chart.metric(&y)?;
        let e = orthonormal_frame(&g, kind).ok_or_else(|| Error::SingularMetric { point: point_vec(p) })?;
        let c = orthonormal_coframe(&h, kind).ok_or_else(|| Error::SingularMetric { point: y.clone() })?;
        Ok(c.matmul(&jac).matmul(&e))
    }

    /// `|dphi|^2 = g^ij h_ab d_i phi^a d_j phi^b`.
    pub fn energy_density(&self, source: &Chart<f64>, p: &[f64], level: Level) -> Result<f64> {
        let (y, jac) = self.jacobian(source, p, level)?;
        let ginv = source.metric(p)?.inverse().ok_or_else(|| Error::SingularMetric { point: point_vec(p) })?;
        let h = self.target.chart.metric(&y)?;
        let pull = jac.transpose().matmul(&h).matmul(&jac);
        Ok(crate::kernel::calculus::trace_with(&ginv, &pull))
    }
}

/// Potential `V` on the target.
#[derive(Clone)]
pub struct Potential {
    pub name: String,
    pub value: ScalarField<f64>,
}

impl std::fmt::Debug for Potential {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Potential").field("name", &self.name).finish()
    }
}

impl Potential {
    pub fn new(name: &str, v: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Self { name: name.to_string(), value: Arc::new(v) }
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn constant(c: f64) -> Self {
        Self::new(&format!("V = {c}"), move |_| c)
    }

    /// `V = base + (curv / 2) |y|^2` in target coordinates.
    pub fn quadratic(base: f64, curv: f64) -> Self {
        Self::new(&format!("V = {base} + {curv}/2 |y|^2"), move |y| base + 0.5 * curv * y.iter().map(|v| v * v).sum::<f64>())
    }

    pub fn eval(&self, y: &[f64]) -> f64 {
        (self.value)(y)
    }

    /// `DV = h^ab d_b V`.
    pub fn gradient(&self, target: &TargetManifold, y: &[f64]) -> Result<Vec<f64>> {
        target.chart.gradient(self.value.as_ref(), y, Level::Inner)
    }

    pub fn hessian(&self, target: &TargetManifold, y: &[f64]) -> Result<Mat<f64>> {
        target.chart.hessian(self.value.as_ref(), y)
    }

    /// `(m - 1)/2 Hess V + V h`, the tensor contracted with `dphi` in the
    /// lower bound for the weighted Laplacian of `|dphi|^2`.
    pub fn bochner_tensor(&self, target: &TargetManifold, y: &[f64], m: usize) -> Result<Mat<f64>> {
        let h = target.chart.metric(y)?;
        Ok(self.hessian(target, y)?.scale(0.5 * (m - 1) as f64).add(&h.scale(self.eval(y))))
    }

    /// Smallest eigenvalue of `(m - 1) Hess V + 2 V h` relative to `h`.
    pub fn curvature_floor(&self, target: &TargetManifold, y: &[f64], m: usize) -> Result<f64> {
        let h = target.chart.metric(y)?;
        let t = self.bochner_tensor(target, y, m)?.scale(2.0);
        let ev = generalized_eigenvalues(&t, &h).ok_or_else(|| Error::SingularMetric { point: y.to_vec() })?;
        Ok(ev[0])
    }
}

/// Bounds of `V` over a sample of the image of a map.
#[derive(Clone, Debug, Serialize)]
pub struct PotentialBounds {
    pub samples: usize,
    pub inf_v: f64,
    /// Smallest `a >= 0` with `(m - 1) Hess V + 2 V h >= -a h` on the sample.
    pub a: f64,
    pub worst_image_point: Vec<f64>,
}

pub fn potential_bounds(map: &SmoothMap, potential: &Potential, m: usize, points: &[Vec<f64>]) -> Result<PotentialBounds> {
    if points.is_empty() {
        return Err(Error::Invalid("no sample points".into()));
    }
    let mut inf_v = f64::INFINITY;
    let mut floor = f64::INFINITY;
    let mut worst = Vec::new();
    for p in points {
        let y = map.value(p)?;
        inf_v = inf_v.min(potential.eval(&y));
        let f = potential.curvature_floor(&map.target, &y, m)?;
        if f < floor {
            floor = f;
            worst = y;
        }
    }
    Ok(PotentialBounds { samples: points.len(), inf_v, a: (-floor).max(0.0), worst_image_point: worst })
}
