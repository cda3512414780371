use std::sync::Arc;

use crate::error::Result;
use crate::kernel::calculus::ScalarField;
use crate::kernel::chart::{Chart, Level};
use crate::kernel::curvature::Curvature;
use crate::linalg::Mat;
use crate::scalar::{idx, Real};
use crate::triple::SubstaticTriple;

/// Optical metric `u^-2 g` with weight `f = -(m-1) ln u`.
#[derive(Clone)]
pub struct OpticalView<T> {
    pub chart: Chart<T>,
    pub f: ScalarField<T>,
    pub u: ScalarField<T>,
}

impl<T: Real> OpticalView<T> {
    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    /// `Ric + Hess f + df (x) df / (m-1)` computed on the conformal chart.
    pub fn weighted_ricci(&self, p: &[T]) -> Result<Mat<T>> {
        let curv: Curvature<T> = self.chart.curvature(p)?;
        let jet = self.chart.scalar_jet(self.f.as_ref(), p, Level::Inner);
        let hess = jet.hessian(&curv.gamma);
        let m1 = idx::<T>(self.dim() - 1);
        let dfdf = Mat::from_fn(self.dim(), self.dim(), |i, j| jet.d[i] * jet.d[j] / m1);
        Ok(curv.ricci.add(&hess).add(&dfdf).symmetrize())
    }
}

impl<T: Real> SubstaticTriple<T> {
    pub fn optical_view(&self) -> OpticalView<T> {
        let u = self.u.clone();
        let inv: ScalarField<T> = {
            let u = u.clone();
            Arc::new(move |p: &[T]| T::one() / u(p))
        };
        let m1 = idx::<T>(self.dim() - 1);
        let f: ScalarField<T> = {
            let u = u.clone();
            Arc::new(move |p: &[T]| -m1 * u(p).ln())
        };
        OpticalView { chart: self.chart.conformal(&format!("{}:optical", self.chart.name), inv), f, u }
    }
}
