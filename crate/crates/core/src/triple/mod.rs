//! Sub-static triples `(M, g, u)` and their pointwise structure: `Q`, `Lambda`,
//! `F`, the optical view and hypersurface quantities.

mod forms;
mod nec;
mod optical;

use std::sync::Arc;

use rayon::prelude::*;

pub use forms::{FundamentalForms, GravityReport, SurfaceSite};
pub use nec::{NecReport, QSelect};
pub use optical::OpticalView;

use crate::error::{Error, Result};
use crate::kernel::calculus::{inner2, trace_with, ScalarField, TensorField};
use crate::kernel::chart::{point_vec, Chart, Level};
use crate::kernel::curvature::{Christoffel, Curvature};
use crate::kernel::sampling::SampleBox;
use crate::kernel::surface::Surface;
use crate::linalg::{generalized_eigenvalues, Mat};
use crate::scalar::{idx, lit, to_f64, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceKind {
    Vacuum,
    Electrostatic,
    PerfectFluid,
    MapSource,
    Unspecified,
}

/// Declared matter content. `declared_q` is the tensor the source formula
/// predicts; `exact` says whether `(g, u)` actually solve the equations with it.
#[derive(Clone)]
pub struct MatterSource<T> {
    pub kind: SourceKind,
    pub declared_q: Option<TensorField<T>>,
    pub exact: bool,
}

impl<T: Real> MatterSource<T> {
    pub fn vacuum() -> Self {
        let q: TensorField<T> = Arc::new(|p: &[T]| Mat::zeros(p.len(), p.len()));
        Self { kind: SourceKind::Vacuum, declared_q: Some(q), exact: true }
    }

    pub fn unspecified() -> Self {
        Self { kind: SourceKind::Unspecified, declared_q: None, exact: false }
    }
}

/// One connected component of `{u = 0}`.
#[derive(Clone)]
pub struct BoundarySurface<T> {
    pub label: String,
    pub surface: Surface<T>,
    /// Quadrature order per parameter axis.
    pub nodes: Vec<usize>,
}

#[derive(Clone)]
pub struct SubstaticTriple<T> {
    pub name: String,
    pub chart: Chart<T>,
    pub u: ScalarField<T>,
    pub boundary: Vec<BoundarySurface<T>>,
    pub source: MatterSource<T>,
    /// Interior box used for pointwise sampling.
    pub sample_box: SampleBox<T>,
    /// Box covering all of `M` (compact triples) for volume integrals.
    pub volume_box: Option<SampleBox<T>>,
    pub volume_nodes: Vec<usize>,
    /// Spacing of the transversal samples used for boundary extrapolation.
    pub extrap_d: T,
}

impl<T: Real> std::fmt::Debug for BoundarySurface<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BoundarySurface").field("label", &self.label).field("nodes", &self.nodes).finish()
    }
}

impl<T: Real> std::fmt::Debug for SubstaticTriple<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SubstaticTriple")
            .field("name", &self.name)
            .field("chart", &self.chart)
            .field("boundary", &self.boundary)
            .finish()
    }
}

/// Everything second-order about `(g, u)` at one point.
#[derive(Clone, Debug)]
pub struct PointData<T> {
    pub p: Vec<T>,
    pub g: Mat<T>,
    pub ginv: Mat<T>,
    pub gamma: Christoffel<T>,
    pub ricci: Mat<T>,
    pub scalar: T,
    pub u: T,
    pub du: Vec<T>,
    pub grad_u: Vec<T>,
    pub hess_u: Mat<T>,
    pub lap_u: T,
    pub q: Mat<T>,
}

impl<T: Real> PointData<T> {
    pub fn dim(&self) -> usize {
        self.g.rows()
    }

    pub fn tr_q(&self) -> T {
        trace_with(&self.ginv, &self.q)
    }

    pub fn grad_u_norm(&self) -> T {
        self.g.bilinear(&self.grad_u, &self.grad_u).max(T::zero()).sqrt()
    }

    /// `(S - tr Q)/(m - 1)`.
    pub fn lambda(&self) -> T {
        (self.scalar - self.tr_q()) / idx::<T>(self.dim() - 1)
    }

    /// Traceless Hessian `Hess u - (Delta u / m) g`.
    pub fn hess_traceless(&self) -> Mat<T> {
        self.hess_u.sub(&self.g.scale(self.lap_u / idx(self.dim())))
    }

    /// `|Delta u - (u/(m-1))(tr Q - S)|`.
    pub fn trace_identity_residual(&self) -> T {
        let m1 = idx::<T>(self.dim() - 1);
        (self.lap_u - self.u / m1 * (self.tr_q() - self.scalar)).abs()
    }

    pub fn norm2(&self, a: &Mat<T>) -> T {
        inner2(&self.ginv, a, a)
    }
}

impl<T: Real> SubstaticTriple<T> {
    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn lapse(&self, p: &[T]) -> T {
        (self.u)(p)
    }

    pub fn point_data(&self, p: &[T]) -> Result<PointData<T>> {
        let curv = self.chart.curvature(p)?;
        self.point_data_from(p, curv)
    }

    fn point_data_from(&self, p: &[T], curv: Curvature<T>) -> Result<PointData<T>> {
        let jet = self.chart.scalar_jet(self.u.as_ref(), p, Level::Inner);
        let u = jet.value;
        if !(u > T::zero()) {
            return Err(Error::LapseNonPositive { point: point_vec(p), value: to_f64(u) });
        }
        let hess_u = jet.hessian(&curv.gamma);
        let lap_u = trace_with(&curv.ginv, &hess_u);
        let grad_u = curv.ginv.mul_vec(&jet.d);
        let q = curv.ricci.sub(&hess_u.scale(T::one() / u)).add(&curv.g.scale(lap_u / u)).symmetrize();
        Ok(PointData {
            p: p.to_vec(),
            g: curv.g,
            ginv: curv.ginv,
            gamma: curv.gamma,
            ricci: curv.ricci,
            scalar: curv.scalar,
            u,
            du: jet.d,
            grad_u,
            hess_u,
            lap_u,
            q,
        })
    }

    /// `Q = Ric - Hess u/u + (Delta u/u) g`.
    pub fn q_tensor(&self, p: &[T]) -> Result<Mat<T>> {
        Ok(self.point_data(p)?.q)
    }

    /// Generalised eigenvalues of `(Q, g)` at `p`, ascending.
    pub fn q_eigenvalues(&self, p: &[T]) -> Result<Vec<T>> {
        let d = self.point_data(p)?;
        generalized_eigenvalues(&d.q, &d.g).ok_or_else(|| Error::SingularMetric { point: point_vec(p) })
    }

    /// Low-discrepancy interior samples.
    pub fn samples(&self, n: usize, seed: u64) -> Vec<Vec<T>> {
        self.sample_box.halton(n, seed)
    }

    /// `F = |grad u|^2 / 2 + (Lambda / 2m) u^2` as a field, for a given constant `Lambda`.
    pub fn f_field(&self, lambda: T) -> ScalarField<T> {
        let chart = self.chart.clone();
        let u = self.u.clone();
        let m = idx::<T>(self.dim());
        Arc::new(move |p: &[T]| {
            let du = chart.scalar_d(u.as_ref(), p, Level::Inner);
            let g = chart.metric_raw(p);
            let n2 = match g.inverse() {
                Some(gi) => gi.bilinear(&du, &du),
                None => T::nan(),
            };
            let uv = u(p);
            n2 * lit(0.5) + lambda / (m + m) * uv * uv
        })
    }

    /// Replaces `u` by `c u` (leaves `Q` unchanged, scales every surface gravity by `c`).
    pub fn rescale_lapse(&self, c: T) -> Self {
        let u = self.u.clone();
        Self { u: Arc::new(move |p: &[T]| c * u(p)), ..self.clone() }
    }
}

/// Result of the `Lambda` constancy scan.
#[derive(Clone, Debug, serde::Serialize)]
pub struct LambdaReport {
    pub lambda: f64,
    pub is_constant: bool,
    pub spread: f64,
    pub max_deviation: f64,
    pub samples: usize,
    pub max_trace_residual: f64,
}

impl SubstaticTriple<f64> {
    /// Pointwise data at many samples, in parallel, order preserved.
    pub fn sample_data(&self, pts: &[Vec<f64>]) -> Vec<Result<PointData<f64>>> {
        pts.par_iter().map(|p| self.point_data(p)).collect()
    }

    /// Mean and spread of `(S - tr Q)/(m - 1)` over `n` interior samples.
    pub fn lambda_constant(&self, n: usize, seed: u64, constancy_tol: f64) -> Result<LambdaReport> {
        let pts = self.samples(n, seed);
        let data: Result<Vec<PointData<f64>>> = self.sample_data(&pts).into_iter().collect();
        let data = data?;
        let vals: Vec<f64> = data.iter().map(|d| d.lambda()).collect();
        let mean = crate::scalar::compensated_sum(vals.iter().copied()) / vals.len() as f64;
        let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
        let dev = vals.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max);
        let tr = data.iter().map(|d| d.trace_identity_residual()).fold(0.0, f64::max);
        Ok(LambdaReport {
            lambda: mean,
            is_constant: dev < constancy_tol,
            spread: max - min,
            max_deviation: dev,
            samples: vals.len(),
            max_trace_residual: tr,
        })
    }

    /// Like [`Self::lambda_constant`] but errors when `Lambda` varies.
    pub fn require_constant_lambda(&self, n: usize, seed: u64, constancy_tol: f64) -> Result<f64> {
        let r = self.lambda_constant(n, seed, constancy_tol)?;
        if !r.is_constant {
            return Err(Error::LambdaNotConstant { spread: r.spread, tol: constancy_tol });
        }
        Ok(r.lambda)
    }
}

#[cfg(test)]
mod tests;
