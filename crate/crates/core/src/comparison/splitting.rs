//! Warped-product form of the optical normal flow of a hypersurface.
//!
//! Each node of the surface is flowed along its optical unit normal together
//! with the Jacobi fields of the surface tangents. The pulled-back metric
//! `hb(t)` is then tested for
//! (a) umbilicity `-hb'/2 = d ln u(gamma') hb`, with `hb'` taken by finite
//!     differences on the `t` grid,
//! (b) the conformal law `hb(t) = (u(t, y)/u(0, y))^-2 hb(0)`,
//! (c) separability `u(t, y) = r(y) xi(t)` through the best rank-1
//!     approximation of the lapse samples.

use rayon::prelude::*;
use serde::Serialize;

use crate::comparison::geodesic::acceleration;
use crate::comparison::ode::{dopri5, Flow, OdeConfig, Outcome};
use crate::error::{Error, Result};
use crate::kernel::chart::{point_vec, Level};
use crate::kernel::deriv::{d1, Scheme, Side};
use crate::kernel::surface::Surface;
use crate::linalg::{rank1_approx, Mat};
use crate::tolerance::Tolerances;
use crate::triple::{SubstaticTriple, SurfaceSite};
use crate::verdict::Verdict;

/// Samples of one flowed node.
struct Ray {
    y: Vec<f64>,
    /// `(t, hb, u, d ln u(gamma'))`
    rows: Vec<(f64, Mat<f64>, f64, f64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SplittingLevel {
    pub intervals: usize,
    pub dt: f64,
    pub umbilicity: f64,
    pub metric_fit: f64,
    pub separability: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SplittingReport {
    pub triple: String,
    pub surface: String,
    pub t_range: (f64, f64),
    pub nodes: usize,
    /// `max |A|` of the initial surface in `g` (should vanish).
    pub initial_second_form: f64,
    pub levels: Vec<SplittingLevel>,
    /// Observed orders `[umbilicity, metric_fit, separability]` between the
    /// two levels; `None` when the coarse residual is already at the floor.
    pub observed_order: [Option<f64>; 3],
    pub floor: f64,
    /// Rank-1 factors: `r(y)` normalised to mean 1 and `xi(t)`.
    pub r_profile: Vec<(Vec<f64>, f64)>,
    pub xi: Vec<(f64, f64)>,
    pub verdict: Verdict,
}

fn flow_node(
    triple: &SubstaticTriple<f64>,
    chart: &crate::kernel::Chart<f64>,
    surface: &Surface<f64>,
    y: &[f64],
    outputs: &[f64],
    t_len: f64,
    cfg: &OdeConfig,
) -> Result<Ray> {
    let m = triple.dim();
    let k = m - 1;
    let x0 = surface.point(y);
    let nu = surface.unit_normal(chart, y)?;
    let tang = surface.tangents(y);
    let normal_at = |q: &[f64]| surface.unit_normal(chart, q).unwrap_or_else(|_| vec![f64::NAN; m]);
    let mut y0 = x0.clone();
    y0.extend(&nu);
    for a in 0..k {
        y0.extend((0..m).map(|i| tang[(i, a)]));
        let dnu = d1(&normal_at, y, a, 1e-3, Side::Central, Scheme::Richardson);
        if dnu.iter().any(|v| !v.is_finite()) {
            return Err(Error::DegenerateInducedMetric { param: point_vec(y) });
        }
        y0.extend(dnu);
    }

    let rhs = |_t: f64, s: &[f64]| -> Result<Vec<f64>> {
        let x = &s[..m];
        let v = &s[m..2 * m];
        let curv = chart.curvature(x)?;
        let mut out = v.to_vec();
        out.extend(acceleration(&curv.gamma, v));
        for a in 0..k {
            let base = 2 * m + a * 2 * m;
            let dx = &s[base..base + m];
            let dv = &s[base + m..base + 2 * m];
            out.extend_from_slice(dv);
            for c in 0..m {
                let mut acc = 0.0;
                for i in 0..m {
                    for j in 0..m {
                        let vv = v[i] * v[j];
                        for l in 0..m {
                            acc -= curv.dgamma[l].get(c, i, j) * dx[l] * vv;
                        }
                        acc -= 2.0 * curv.gamma.get(c, i, j) * v[i] * dv[j];
                    }
                }
                out.push(acc);
            }
        }
        Ok(out)
    };
    let sol = dopri5(&rhs, 0.0, &y0, t_len, outputs, cfg, |_, s| {
        chart.domain.wrap(&mut s[..m]);
        Flow::Continue
    })?;
    if let Outcome::EdgeReached { t } = sol.outcome {
        return Err(Error::LeftDomain { t, point: sol.last().1[..m].to_vec() });
    }
    let u = triple.u.as_ref();
    let mut rows = Vec::with_capacity(sol.samples.len());
    for (t, s) in &sol.samples {
        let x = &s[..m];
        let v = &s[m..2 * m];
        let gb = chart.metric_raw(x);
        let hb = Mat::from_fn(k, k, |a, b| {
            let ja = &s[2 * m + a * 2 * m..2 * m + a * 2 * m + m];
            let jb = &s[2 * m + b * 2 * m..2 * m + b * 2 * m + m];
            gb.bilinear(ja, jb)
        });
        if hb.cholesky().is_none() {
            return Err(Error::FocalPoint { t: *t });
        }
        let uu = u(x);
        let du = triple.chart.scalar_d(u, x, Level::Inner);
        let dlnu = du.iter().zip(v).map(|(a, b)| a * b).sum::<f64>() / uu;
        rows.push((*t, hb, uu, dlnu));
    }
    Ok(Ray { y: y.to_vec(), rows })
}

/// `max |L^-1 r L^-T|` with `h = L L^T`.
fn frame_norm(h: &Mat<f64>, r: &Mat<f64>) -> f64 {
    match h.cholesky() {
        Some(l) => {
            let li = l.lower_inverse();
            li.matmul(r).matmul(&li.transpose()).max_abs()
        }
        None => f64::INFINITY,
    }
}

fn level_residuals(rays: &[Ray], stride: usize) -> SplittingLevel {
    let mut umb = 0.0f64;
    let mut fit = 0.0f64;
    for ray in rays {
        let rows: Vec<_> = ray.rows.iter().step_by(stride).collect();
        let dt = rows[1].0 - rows[0].0;
        let h0 = &rows[0].1;
        let u0 = rows[0].2;
        for (i, (_, h, uu, dlnu)) in rows.iter().enumerate() {
            let ratio = u0 / uu;
            let pred = h0.scale(ratio * ratio);
            fit = fit.max(frame_norm(h, &h.sub(&pred)));
            if i >= 2 && i + 2 < rows.len() {
                let dh = rows[i - 2]
                    .1
                    .sub(&rows[i - 1].1.scale(8.0))
                    .add(&rows[i + 1].1.scale(8.0))
                    .sub(&rows[i + 2].1)
                    .scale(1.0 / (12.0 * dt));
                let a_bar = dh.scale(-0.5);
                umb = umb.max(frame_norm(h, &a_bar.sub(&h.scale(*dlnu))));
            }
        }
    }
    let n_t = rays[0].rows.iter().step_by(stride).count();
    let lap = Mat::from_fn(n_t, rays.len(), |i, j| rays[j].rows[i * stride].2);
    let (sigma, a, b, _) = rank1_approx(&lap);
    let mut sep = 0.0f64;
    for i in 0..n_t {
        for j in 0..rays.len() {
            let model = (sigma * a[i] * b[j]).abs();
            sep = sep.max((lap[(i, j)].ln() - model.ln()).abs());
        }
    }
    let dt = rays[0].rows[stride].0 - rays[0].rows[0].0;
    SplittingLevel { intervals: n_t - 1, dt, umbilicity: umb, metric_fit: fit, separability: sep }
}

/// Flows `surface` (a coordinate face of `triple`) along the optical normal
/// over `[0, t_len]`, sampling at `intervals` and `2 intervals` equal steps.
pub fn splitting_form_check(
    triple: &SubstaticTriple<f64>,
    surface: &Surface<f64>,
    t_len: f64,
    intervals: usize,
    nodes: &[usize],
    tol: &Tolerances,
) -> Result<SplittingReport> {
    let m = triple.dim();
    if surface.param.dim() != m - 1 {
        return Err(Error::WrongDimension { expected: m - 1, got: surface.param.dim() });
    }
    if intervals < 4 {
        return Err(Error::Invalid("at least 4 intervals are needed".into()));
    }
    let chart = triple.optical_view().chart;
    let fine = 2 * intervals;
    let outputs: Vec<f64> = (1..fine).map(|i| t_len * i as f64 / fine as f64).collect();
    let cfg = OdeConfig { h_max: t_len / fine as f64, ..OdeConfig::with_tol(tol.ode * 1e-3) };

    let params: Vec<Vec<f64>> = surface.param_nodes(nodes).into_iter().map(|(y, _)| y).collect();
    let initial_second_form = params
        .iter()
        .map(|y| {
            triple
                .second_fundamental_forms(&SurfaceSite::Param { surface, y: y.clone() })
                .map(|ff| ff.a.max_abs())
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);

    let rays: Vec<Ray> = params
        .par_iter()
        .map(|y| flow_node(triple, &chart, surface, y, &outputs, t_len, &cfg))
        .collect::<Result<_>>()?;

    let coarse = level_residuals(&rays, 2);
    let finer = level_residuals(&rays, 1);
    let floor = 10.0 * tol.ode;
    let order = |c: f64, f: f64| if c > floor && f > 0.0 { Some((c / f).log2()) } else { None };
    let observed_order = [
        order(coarse.umbilicity, finer.umbilicity),
        order(coarse.metric_fit, finer.metric_fit),
        order(coarse.separability, finer.separability),
    ];
    let converged = [coarse.umbilicity, coarse.metric_fit, coarse.separability]
        .iter()
        .zip(&observed_order)
        .all(|(&c, o)| c <= floor || o.map_or(false, |p| p >= 2.0));
    let small = finer.umbilicity < tol.cert && finer.metric_fit < tol.cert && finer.separability < tol.cert;

    let n_t = rays[0].rows.len();
    let lap = Mat::from_fn(n_t, rays.len(), |i, j| rays[j].rows[i].2);
    let (sigma, a, b, _) = rank1_approx(&lap);
    let mean_b = b.iter().map(|x| x.abs()).sum::<f64>() / b.len() as f64;
    let r_profile = rays.iter().zip(&b).map(|(r, bj)| (r.y.clone(), bj.abs() / mean_b)).collect();
    let xi = (0..n_t).map(|i| (rays[0].rows[i].0, (sigma * a[i]).abs() * mean_b)).collect();

    Ok(SplittingReport {
        triple: triple.name.clone(),
        surface: surface.name.clone(),
        t_range: (0.0, t_len),
        nodes: rays.len(),
        initial_second_form,
        levels: vec![coarse, finer],
        observed_order,
        floor,
        r_profile,
        xi,
        verdict: Verdict::from_bool(small && converged),
    })
}
