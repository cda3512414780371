//! Residuals of the coupled lapse / map-source system.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::calculus::trace_with;
use crate::kernel::chart::{point_vec, Level};
use crate::kernel::curvature::Christoffel;
use crate::linalg::{generalized_eigenvalues, Mat};
use crate::tolerance::Tolerances;
use crate::triple::{PointData, SubstaticTriple};
use crate::verdict::Verdict;
use crate::wavemap::map::{MapJet, Potential, SmoothMap};

/// Source geometry and map jet at one point.
pub(crate) struct MapPoint {
    pub data: PointData<f64>,
    pub jet: MapJet,
    pub h: Mat<f64>,
    pub target_gamma: Christoffel<f64>,
    /// Covariant second derivative `(nabla dphi)^a_ij`.
    pub hess_map: Vec<Mat<f64>>,
    pub tension: Vec<f64>,
}

impl MapPoint {
    /// `phi^* h` in source coordinates.
    pub fn pullback(&self) -> Mat<f64> {
        self.jet.jac.transpose().matmul(&self.h).matmul(&self.jet.jac)
    }

    pub fn energy_density(&self) -> f64 {
        trace_with(&self.data.ginv, &self.pullback())
    }
}

pub(crate) fn covariant_second(jet: &MapJet, gamma: &Christoffel<f64>, target_gamma: &Christoffel<f64>) -> Vec<Mat<f64>> {
    let n = jet.value.len();
    let m = jet.jac.cols();
    (0..n)
        .map(|a| {
            Mat::from_fn(m, m, |i, j| {
                let mut s = jet.second[a][(i, j)];
                for k in 0..m {
                    s -= gamma.get(k, i, j) * jet.jac[(a, k)];
                }
                for b in 0..n {
                    for c in 0..n {
                        s += target_gamma.get(a, b, c) * jet.jac[(b, i)] * jet.jac[(c, j)];
                    }
                }
                s
            })
        })
        .collect()
}

pub(crate) fn map_point(triple: &SubstaticTriple<f64>, map: &SmoothMap, p: &[f64]) -> Result<MapPoint> {
    if map.target.dim() == 0 {
        return Err(Error::Invalid("target has dimension 0".into()));
    }
    let data = triple.point_data(p)?;
    let jet = map.jet(&triple.chart, p, Level::Inner)?;
    let h = map.target.chart.metric(&jet.value)?;
    let target_gamma = map.target.chart.christoffel(&jet.value)?;
    let hess_map = covariant_second(&jet, &data.gamma, &target_gamma);
    let tension = hess_map.iter().map(|b| trace_with(&data.ginv, b)).collect();
    Ok(MapPoint { data, jet, h, target_gamma, hess_map, tension })
}

#[derive(Clone, Debug, Serialize)]
pub struct SystemResiduals {
    pub point: Vec<f64>,
    /// Smallest eigenvalue of `u Ric - Hess u + (Delta u) g - u phi^* h` relative to `g`.
    pub r1: f64,
    /// `|Delta u + V(phi) u|`.
    pub r2: f64,
    /// `|u tau(phi) + dphi(grad u) - (m - 1)/2 DV(phi) u|_h`.
    pub r3: f64,
    pub verdict: Verdict,
}

impl SystemResiduals {
    /// The two equations hold within `cert`.
    pub fn equations_hold(&self, tol: &Tolerances) -> bool {
        self.r2 <= tol.cert && self.r3 <= tol.cert
    }
}

pub(crate) fn residuals_at(mp: &MapPoint, map: &SmoothMap, potential: &Potential, tol: &Tolerances) -> Result<SystemResiduals> {
    let d = &mp.data;
    let m = d.dim();
    let u = d.u;
    let lhs = d.ricci.scale(u).sub(&d.hess_u).add(&d.g.scale(d.lap_u)).sub(&mp.pullback().scale(u));
    let r1 = generalized_eigenvalues(&lhs.symmetrize(), &d.g).ok_or_else(|| Error::SingularMetric { point: point_vec(&d.p) })?[0];
    let y = &mp.jet.value;
    let v = potential.eval(y);
    let r2 = (d.lap_u + v * u).abs();
    let dv = potential.gradient(&map.target, y)?;
    let push_grad = mp.jet.jac.mul_vec(&d.grad_u);
    let w: Vec<f64> = (0..y.len()).map(|a| u * mp.tension[a] + push_grad[a] - 0.5 * (m - 1) as f64 * dv[a] * u).collect();
    let r3 = mp.h.bilinear(&w, &w).max(0.0).sqrt();
    let verdict = Verdict::from_bool(r1 >= -tol.psd_slack && r2 <= tol.cert && r3 <= tol.cert);
    Ok(SystemResiduals { point: d.p.clone(), r1, r2, r3, verdict })
}

/// Residuals of the map-source system at an interior point `p`.
pub fn map_system_residuals(
    triple: &SubstaticTriple<f64>,
    map: &SmoothMap,
    potential: &Potential,
    p: &[f64],
    tol: &Tolerances,
) -> Result<SystemResiduals> {
    let mp = map_point(triple, map, p)?;
    residuals_at(&mp, map, potential, tol)
}

#[derive(Clone, Debug, Serialize)]
pub struct SystemSurvey {
    pub samples: usize,
    pub min_r1: f64,
    pub max_r2: f64,
    pub max_r3: f64,
    pub failures: usize,
    pub verdict: Verdict,
}

pub fn system_survey(
    triple: &SubstaticTriple<f64>,
    map: &SmoothMap,
    potential: &Potential,
    points: &[Vec<f64>],
    tol: &Tolerances,
) -> Result<(SystemSurvey, Vec<SystemResiduals>)> {
    let rows: Vec<SystemResiduals> =
        points.par_iter().map(|p| map_system_residuals(triple, map, potential, p, tol)).collect::<Result<_>>()?;
    let failures = rows.iter().filter(|r| r.verdict.is_fail()).count();
    let survey = SystemSurvey {
        samples: rows.len(),
        min_r1: rows.iter().map(|r| r.r1).fold(f64::INFINITY, f64::min),
        max_r2: rows.iter().map(|r| r.r2).fold(0.0, f64::max),
        max_r3: rows.iter().map(|r| r.r3).fold(0.0, f64::max),
        failures,
        verdict: Verdict::from_bool(failures == 0),
    };
    Ok((survey, rows))
}
