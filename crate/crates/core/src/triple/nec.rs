use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::chart::point_vec;
use crate::kernel::sampling::halton;
use crate::linalg::generalized_eigenvalues;
use crate::scalar::{lit, to_f64, Real};
use crate::triple::SubstaticTriple;

/// Which `Q` the null energy condition is evaluated on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QSelect {
    /// `Q` computed from `(g, u)`.
    Geometric,
    /// `Q` predicted by the declared matter source.
    Declared,
}

#[derive(Clone, Debug, Serialize)]
pub struct NecReport {
    pub point: Vec<f64>,
    pub select: QSelect,
    pub eigenvalues: Vec<f64>,
    pub min_eigenvalue: f64,
    pub pass: bool,
    /// Largest `|T(Y, Y) - Q(X, X)|` over the sampled null vectors, with `T`
    /// assembled from the static spacetime curvature.
    pub energy_residual: f64,
    pub energy_pass: bool,
}

impl<T: Real> SubstaticTriple<T> {
    pub fn nec_check(&self, p: &[T], samples: usize, select: QSelect, psd_slack: f64, cert_tol: f64) -> Result<NecReport> {
        let d = self.point_data(p)?;
        let m = d.dim();
        let q = match select {
            QSelect::Geometric => d.q.clone(),
            QSelect::Declared => {
                let f = self
                    .source
                    .declared_q
                    .as_ref()
                    .ok_or_else(|| Error::Invalid(format!("{} declares no matter source", self.name)))?;
                f(p)
            }
        };
        let ev = generalized_eigenvalues(&q, &d.g).ok_or_else(|| Error::SingularMetric { point: point_vec(p) })?;
        let min = ev.iter().copied().fold(T::infinity(), T::min);

        // T from the static block: R00 = Lap u / u, Rij = R_ij - u_ij / u,
        // S_hat = S - 2 Lap u / u, T = Ric_hat + (Lambda_cc - S_hat / 2) g_hat.
        let lambda_cc = lit::<T>(0.75);
        let r00 = d.lap_u / d.u;
        let s_hat = d.scalar - lit::<T>(2.0) * d.lap_u / d.u;
        let c = lambda_cc - s_hat * lit(0.5);
        let t00 = r00 - c;
        let tij = d.ricci.sub(&d.hess_u.scale(T::one() / d.u)).add(&d.g.scale(c));
        let mut worst = T::zero();
        for (k, h) in halton(samples, m, 17).into_iter().enumerate() {
            let mut x: Vec<T> = h.iter().map(|&v| lit::<T>(2.0 * v - 1.0)).collect();
            if k == 0 {
                x = vec![T::zero(); m];
                x[0] = T::one();
            }
            let n = d.g.bilinear(&x, &x).sqrt();
            if !(n > T::zero()) {
                continue;
            }
            x.iter_mut().for_each(|v| *v = *v / n);
            let tyy = t00 + tij.bilinear(&x, &x);
            let qxx = d.q.bilinear(&x, &x);
            let scale = T::one().max(tyy.abs()).max(qxx.abs());
            worst = worst.max((tyy - qxx).abs() / scale);
        }
        Ok(NecReport {
            point: point_vec(p),
            select,
            eigenvalues: ev.iter().map(|&v| to_f64(v)).collect(),
            min_eigenvalue: to_f64(min),
            pass: to_f64(min) >= -psd_slack,
            energy_residual: to_f64(worst),
            energy_pass: to_f64(worst) < cert_tol,
        })
    }
}
