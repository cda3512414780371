//! Weighted Bochner formula for `|dphi|^2` with weight `f = -ln u`.
//!
//! The left side `1/2 Delta_f |dphi|^2` is obtained by differencing the
//! scalar `|dphi|^2` at the outer step. The right side of the identity uses
//! the covariant Hessian of the map, the derivative of the weighted tension
//! field (again an outer difference) and the weighted Ricci curvature.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::calculus::trace_with;
use crate::kernel::chart::{point_vec, Level};
use crate::kernel::deriv::d1;
use crate::linalg::Mat;
use crate::tolerance::Tolerances;
use crate::triple::SubstaticTriple;
use crate::verdict::Verdict;
use crate::wavemap::map::{orthonormal_frame, FrameKind, Potential, SmoothMap};
use crate::wavemap::system::{covariant_second, map_point, residuals_at, SystemResiduals};

#[derive(Clone, Debug, Serialize)]
pub struct BochnerTerms {
    /// `|nabla dphi|^2`
    pub hessian_norm2: f64,
    /// `<nabla tau_f(phi), dphi>`
    pub tension_term: f64,
    /// `Ric_f(dphi, dphi) - R^N(dphi, dphi, dphi, dphi)`
    pub curvature_term: f64,
    /// Left side minus the sum of the three terms.
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BochnerReport {
    pub point: Vec<f64>,
    pub energy_density: f64,
    /// `1/2 Delta_f |dphi|^2`
    pub lhs: f64,
    /// `[(m-1)/2 Hess V + V h](dphi, dphi) + (1 - (m-1) k)/m |dphi|^4`
    pub rhs_floor: f64,
    pub slack: f64,
    pub identity: BochnerTerms,
    pub system: SystemResiduals,
    /// The two field equations hold, so the lower bound is expected.
    pub system_ok: bool,
    pub verdict: Verdict,
}

/// Weighted tension `tau(phi) - dphi(grad f) = tau(phi) + dphi(grad u)/u`.
fn weighted_tension(triple: &SubstaticTriple<f64>, map: &SmoothMap, q: &[f64]) -> Result<Vec<f64>> {
    let chart = &triple.chart;
    let jet1 = chart.metric_jet1(q)?;
    let gamma = crate::kernel::curvature::Christoffel::from_jet(&jet1);
    let jet = map.jet(chart, q, Level::Inner)?;
    let tg = map.target.chart.christoffel(&jet.value)?;
    let b = covariant_second(&jet, &gamma, &tg);
    let u = (triple.u)(q);
    if !(u > 0.0) {
        return Err(Error::LapseNonPositive { point: point_vec(q), value: u });
    }
    let du = chart.scalar_d(triple.u.as_ref(), q, Level::Inner);
    let grad_u = jet1.ginv.mul_vec(&du);
    let push = jet.jac.mul_vec(&grad_u);
    Ok(b.iter().zip(push).map(|(bi, pu)| trace_with(&jet1.ginv, bi) + pu / u).collect())
}

pub fn bochner_residual(
    triple: &SubstaticTriple<f64>,
    map: &SmoothMap,
    potential: &Potential,
    p: &[f64],
    tol: &Tolerances,
) -> Result<BochnerReport> {
    let chart = &triple.chart;
    let mp = map_point(triple, map, p)?;
    let system = residuals_at(&mp, map, potential, tol)?;
    let d = &mp.data;
    let (m, n) = (d.dim(), map.target.dim());
    let jac = &mp.jet.jac;

    // left side
    let energy = |q: &[f64]| map.energy_density(chart, q, Level::Inner).unwrap_or(f64::NAN);
    let wj = chart.scalar_jet(&energy, p, Level::Outer);
    let lap_w = trace_with(&d.ginv, &wj.hessian(&d.gamma));
    let drift = d.grad_u.iter().zip(&wj.d).map(|(a, b)| a * b).sum::<f64>() / d.u;
    let lhs = 0.5 * (lap_w + drift);
    if !lhs.is_finite() {
        return Err(Error::OutOfDomain { point: point_vec(p) });
    }

    // |nabla dphi|^2
    let mut hessian_norm2 = 0.0;
    for a in 0..n {
        for b in 0..n {
            let hab = mp.h[(a, b)];
            if hab == 0.0 {
                continue;
            }
            let x = d.ginv.matmul(&mp.hess_map[a]).matmul(&d.ginv);
            hessian_norm2 += hab * x.as_slice().iter().zip(mp.hess_map[b].as_slice()).map(|(s, t)| s * t).sum::<f64>();
        }
    }

    // <nabla tau_f, dphi>
    let (steps, sides) = chart.stencil(p, Level::Outer);
    let tau = |q: &[f64]| weighted_tension(triple, map, q).unwrap_or_else(|_| vec![f64::NAN; n]);
    let tau_p = weighted_tension(triple, map, p)?;
    let dtau: Vec<Vec<f64>> = (0..m).map(|k| d1(&tau, p, k, steps[k], sides[k], chart.steps.scheme)).collect();
    let nabla_tau = Mat::from_fn(n, m, |a, i| {
        let mut s = dtau[i][a];
        for b in 0..n {
            for c in 0..n {
                s += mp.target_gamma.get(a, b, c) * jac[(b, i)] * tau_p[c];
            }
        }
        s
    });
    let tension_term = trace_with(&d.ginv, &nabla_tau.transpose().matmul(&mp.h).matmul(jac));

    // Ric_f = Ric + Hess f with f = -ln u
    let du_du = Mat::from_fn(m, m, |i, j| d.du[i] * d.du[j]);
    let ric_f = d.ricci.sub(&d.hess_u.scale(1.0 / d.u)).add(&du_du.scale(1.0 / (d.u * d.u)));
    let pull = mp.pullback();
    let ric_term = trace_with(&d.ginv, &ric_f.matmul(&d.ginv).matmul(&pull));
    let frame = orthonormal_frame(&d.g, FrameKind::Cholesky).ok_or_else(|| Error::SingularMetric { point: point_vec(p) })?;
    let pushed = jac.matmul(&frame);
    let rn = map.target.riemann(&mp.jet.value)?;
    let curvature_term = ric_term - rn.contract(&pushed);
    let residual = lhs - hessian_norm2 - tension_term - curvature_term;

    let w = mp.energy_density();
    let kappa = map.target.sec_bound;
    let k_tensor = potential.bochner_tensor(&map.target, &mp.jet.value, m)?;
    let rhs_floor = trace_with(&d.ginv, &jac.transpose().matmul(&k_tensor).matmul(jac))
        + (1.0 - (m - 1) as f64 * kappa) / m as f64 * w * w;
    let slack = lhs - rhs_floor;
    let system_ok = system.equations_hold(tol);
    let verdict = if system_ok { Verdict::from_bool(slack >= -tol.cert) } else { Verdict::NotApplicable };
    Ok(BochnerReport {
        point: p.to_vec(),
        energy_density: w,
        lhs,
        rhs_floor,
        slack,
        identity: BochnerTerms { hessian_norm2, tension_term, curvature_term, residual },
        system,
        system_ok,
        verdict,
    })
}
