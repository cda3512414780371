//! Mean curvature of distance spheres along optical rays.
//!
//! Along a unit optical geodesic the mean curvature `Hb` of the level sets of
//! the distance solves `Hb' + Hb^2/(m-1) + Ric_opt(v, v) = 0`. With
//! `f = -(m-1) ln u`, `Hb_f = Hb - (f o gamma)'`, `lambda = u^-2 Hb_f` and
//! `s = int u^2 dt`, sub-staticity gives `d lambda/ds <= -lambda^2/(m-1)`.

use serde::Serialize;

use crate::comparison::geodesic::{acceleration, GeodesicTrace, MetricTag};
use crate::comparison::ode::{dopri5, Flow, OdeConfig, OdeStats};
use crate::error::{Error, Result};
use crate::kernel::chart::Level;
use crate::kernel::surface::Surface;
use crate::triple::{SubstaticTriple, SurfaceSite};
use crate::verdict::Verdict;

/// Blow-up threshold for `|Hb|` (a focal point of the origin).
pub const FOCAL_LIMIT: f64 = 1e6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Origin {
    /// The trace starts at optical distance `offset > 0` from a point.
    Point { offset: f64 },
    /// The trace starts on a hypersurface with the given `Hb_f`, measured
    /// with respect to the normal `-gamma'(0)`.
    Hypersurface { h_bar_f: f64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct RiccatiRow {
    pub t: f64,
    pub s: f64,
    pub u: f64,
    pub h_bar: f64,
    pub h_bar_f: f64,
    pub lambda: f64,
    /// `(m-1)/s` for a point origin, `lambda(0)` for a hypersurface.
    pub bound: f64,
    /// `lambda(0) / (1 + lambda(0) s/(m-1))` for a hypersurface origin.
    pub sharp_bound: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FocalEvent {
    pub t: f64,
    pub s: f64,
    pub h_bar: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RiccatiTrace {
    pub origin: Origin,
    pub rows: Vec<RiccatiRow>,
    pub focal: Option<FocalEvent>,
    /// `max (lambda - bound)` over the rows.
    pub max_excess: f64,
    /// Point origin: `max |lambda s - (m-1)|`.
    pub lambda_s_deviation: Option<f64>,
    /// `max |Hb' + Hb^2/(m-1) + Ric(v, v)|` with `Hb'` re-differentiated
    /// from the recorded samples (interior samples only).
    pub riccati_residual: Option<f64>,
    /// `s` increases strictly along the rows.
    pub s_monotone: bool,
    /// Largest coordinate distance between the supplied and the re-integrated ray.
    pub trace_deviation: f64,
    pub stats: OdeStats,
    pub verdict: Verdict,
}

/// `Hb_f` of `surface` at `y` with respect to the normal opposite to `dir`.
pub fn hypersurface_origin(triple: &SubstaticTriple<f64>, surface: &Surface<f64>, y: &[f64], dir: &[f64]) -> Result<Origin> {
    let ff = triple.second_fundamental_forms(&SurfaceSite::Param { surface, y: y.to_vec() })?;
    let w = surface.inward_direction(y);
    let g = triple.chart.metric(&surface.point(y))?;
    let sign = if g.bilinear(&w, dir) > 0.0 { -1.0 } else { 1.0 };
    Ok(Origin::Hypersurface { h_bar_f: sign * ff.h_bar_f })
}

/// Integrates the Riccati equation along the optical ray `trace` and checks
/// the comparison bound. The ray is re-integrated together with `Hb` and `s`
/// from its first sample; its deviation from `trace` is reported.
pub fn riccati_compare(
    triple: &SubstaticTriple<f64>,
    trace: &GeodesicTrace,
    origin: Origin,
    ode_tol: f64,
) -> Result<RiccatiTrace> {
    if trace.tag != MetricTag::Optical {
        return Err(Error::Invalid("Riccati comparison needs an optical-metric trace".into()));
    }
    let view = triple.optical_view();
    let chart = &view.chart;
    let m = triple.dim();
    let m1 = (m - 1) as f64;
    let u = triple.u.clone();
    let p0 = trace.first().point.clone();
    let v0 = trace.first().velocity.clone();
    let u0 = u(&p0);
    if !(u0 > 0.0) {
        return Err(Error::LapseNonPositive { point: p0, value: u0 });
    }

    let ric_vv = |x: &[f64], v: &[f64]| -> Result<f64> { Ok(chart.curvature(x)?.ricci.bilinear(v, v)) };
    // (f o gamma)' = -(m-1) du(v)/u
    let df_v = |x: &[f64], v: &[f64]| -> f64 {
        let du = triple.chart.scalar_d(u.as_ref(), x, Level::Inner);
        let duv: f64 = du.iter().zip(v).map(|(a, b)| a * b).sum();
        -m1 * duv / u(x)
    };

    let (h0, s0) = match origin {
        Origin::Point { offset } => {
            if !(offset > 0.0) {
                return Err(Error::Invalid("point origin needs a positive offset".into()));
            }
            // Hb(t) = (m-1)/t - Ric(v, v) t/3 + O(t^3)
            (m1 / offset - ric_vv(&p0, &v0)? * offset / 3.0, u0 * u0 * offset)
        }
        Origin::Hypersurface { h_bar_f } => (h_bar_f + df_v(&p0, &v0), 0.0),
    };
    let t_shift = match origin {
        Origin::Point { offset } => offset,
        Origin::Hypersurface { .. } => 0.0,
    };

    let rhs = |_t: f64, y: &[f64]| -> Result<Vec<f64>> {
        let x = &y[..m];
        let v = &y[m..2 * m];
        let curv = chart.curvature(x)?;
        let uu = u(x);
        let mut out = v.to_vec();
        out.extend(acceleration(&curv.gamma, v));
        out.push(-y[2 * m] * y[2 * m] / m1 - curv.ricci.bilinear(v, v));
        out.push(uu * uu);
        Ok(out)
    };
    let mut y0 = p0.clone();
    y0.extend(&v0);
    y0.push(h0);
    y0.push(s0);
    let outs: Vec<f64> = trace.samples.iter().skip(1).map(|s| s.t).filter(|&t| t < trace.last().t).collect();
    let length = trace.last().t;
    let mut focal = None;
    let cfg = OdeConfig { h_max: 0.25, ..OdeConfig::with_tol(ode_tol * 1e-2) };
    let sol = dopri5(&rhs, 0.0, &y0, length, &outs, &cfg, |t, y| {
        chart.domain.wrap(&mut y[..m]);
        if y[2 * m].abs() > FOCAL_LIMIT || !y[2 * m].is_finite() {
            focal = Some(FocalEvent { t: t + t_shift, s: y[2 * m + 1], h_bar: y[2 * m] });
            Flow::Stop
        } else {
            Flow::Continue
        }
    })?;

    let lambda0 = match origin {
        Origin::Hypersurface { h_bar_f } => Some(h_bar_f / (u0 * u0)),
        Origin::Point { .. } => None,
    };
    let mut rows = Vec::with_capacity(sol.samples.len());
    let mut deviation = 0.0f64;
    for (t, y) in &sol.samples {
        let x = &y[..m];
        let v = &y[m..2 * m];
        if let Some(ts) = trace.samples.iter().find(|s| (s.t - t).abs() < 1e-12) {
            for (a, b) in ts.point.iter().zip(x) {
                deviation = deviation.max((a - b).abs());
            }
        }
        let uu = u(x);
        let h_bar = y[2 * m];
        let s = y[2 * m + 1];
        let h_bar_f = h_bar - df_v(x, v);
        let lambda = h_bar_f / (uu * uu);
        let (bound, sharp) = match lambda0 {
            None => (m1 / s, None),
            Some(l0) => (l0, Some(l0 / (1.0 + l0 * s / m1))),
        };
        rows.push(RiccatiRow { t: t + t_shift, s, u: uu, h_bar, h_bar_f, lambda, bound, sharp_bound: sharp });
    }

    let mut max_excess = f64::NEG_INFINITY;
    let mut ok = true;
    for r in &rows {
        let excess = r.lambda - r.bound;
        max_excess = max_excess.max(excess);
        if excess > ode_tol * r.bound.abs().max(1.0) {
            ok = false;
        }
    }
    let lambda_s_deviation = match origin {
        Origin::Point { .. } => Some(rows.iter().map(|r| (r.lambda * r.s - m1).abs()).fold(0.0, f64::max)),
        Origin::Hypersurface { .. } => None,
    };
    let s_monotone = rows.windows(2).all(|w| w[1].s > w[0].s);
    let riccati_residual = redifferentiate(&rows, &sol.samples, m, &|x, v| ric_vv(x, v))?;

    Ok(RiccatiTrace {
        origin,
        rows,
        focal,
        max_excess,
        lambda_s_deviation,
        riccati_residual,
        s_monotone,
        trace_deviation: deviation,
        stats: sol.stats,
        verdict: Verdict::from_bool(ok && s_monotone),
    })
}

/// Fourth-order central differences of `Hb` on runs of equally spaced rows.
fn redifferentiate(
    rows: &[RiccatiRow],
    samples: &[(f64, Vec<f64>)],
    m: usize,
    ric: &dyn Fn(&[f64], &[f64]) -> Result<f64>,
) -> Result<Option<f64>> {
    let m1 = (m - 1) as f64;
    let mut worst: Option<f64> = None;
    for i in 2..rows.len().saturating_sub(2) {
        let dt = rows[i + 1].t - rows[i].t;
        let uniform = (-2..2).all(|k: isize| {
            let a = (i as isize + k) as usize;
            ((rows[a + 1].t - rows[a].t) - dt).abs() < 1e-9 * dt.max(1e-12)
        });
        if !uniform || dt <= 0.0 {
            continue;
        }
        let h = |k: isize| rows[(i as isize + k) as usize].h_bar;
        let dh = (h(-2) - 8.0 * h(-1) + 8.0 * h(1) - h(2)) / (12.0 * dt);
        let y = &samples[i].1;
        let r = ric(&y[..m], &y[m..2 * m])?;
        let res = (dh + rows[i].h_bar * rows[i].h_bar / m1 + r).abs();
        worst = Some(worst.map_or(res, |w: f64| w.max(res)));
    }
    Ok(worst)
}
