//! Weighted volume growth of metric balls and its comparison curve.

use serde::Serialize;

use crate::comparison::ode::{dopri5, Flow, OdeConfig};
use crate::error::{Error, Result};
use crate::kernel::chart::{point_vec, Level};
use crate::kernel::quadrature::{tensor_nodes, Rule1};
use crate::linalg::generalized_eigenvalues;
use crate::scalar::compensated_sum;
use crate::triple::SubstaticTriple;
use crate::verdict::Verdict;

/// Which weight `f` defines `vol_f = int e^-f dV`. Both conventions occur, so
/// the caller always names one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Weight {
    /// `f = -(m-1) ln u`, the optical-metric weight.
    Optical,
    /// `f = -ln u`, the weight of the map-source system.
    Map,
}

impl Weight {
    /// Coefficient `c` in `f = -c ln u`.
    pub fn coefficient(self, m: usize) -> f64 {
        match self {
            Weight::Optical => (m - 1) as f64,
            Weight::Map => 1.0,
        }
    }

    pub fn density(self, u: f64, m: usize) -> f64 {
        u.powf(self.coefficient(m))
    }
}

/// Balls around the level set `x^axis = value` of a chart in which the
/// distance from that set depends on `x^axis` only.
#[derive(Clone, Copy, Debug, Serialize, serde::Deserialize)]
pub struct RadialOrigin {
    pub axis: usize,
    pub value: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VolumeRow {
    pub r: f64,
    /// Coordinate value of the sphere of radius `r`.
    pub x: f64,
    pub vol_f: f64,
    /// `ln vol_f(B_r) / r^2`.
    pub log_ratio: f64,
    /// `vol_f(B_r \ B_r0)`.
    pub shell: f64,
    /// `C int_r0^r h^m` and `C' int_r0^r h^(m-1)` with the constants fitted on the first shell.
    pub comparison_m: f64,
    pub comparison_m1: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VolumeGrowth {
    pub triple: String,
    pub weight: Weight,
    /// `radial-exact` (unit radial coefficient) or `radial-profile` (integrated).
    pub distance: String,
    pub rows: Vec<VolumeRow>,
    /// Smallest `ln vol_f/r^2` over the upper half of the radii.
    pub liminf_estimate: f64,
    /// `ln vol_f/r^2` does not increase along the upper half of the radii.
    pub growth_bounded: bool,
    pub kappa_bar: f64,
    pub lambda_bar: f64,
    /// Shells stay below `C int h^m` within 5%.
    pub bound_m: Verdict,
    /// Shells stay below `C int h^(m-1)` within 5%.
    pub bound_m1: Verdict,
    pub verdict: Verdict,
}

const PANEL: f64 = 0.25;
const GAUSS: usize = 16;

struct Profile<'a> {
    triple: &'a SubstaticTriple<f64>,
    axis: usize,
    reference: Vec<f64>,
}

impl Profile<'_> {
    fn at(&self, x: f64) -> Vec<f64> {
        let mut p = self.reference.clone();
        p[self.axis] = x;
        p
    }

    fn speed(&self, x: f64) -> f64 {
        self.triple.chart.metric_raw(&self.at(x))[(self.axis, self.axis)].sqrt()
    }

    /// `int_a^b sqrt(g_aa) dx` by composite Gauss-Legendre.
    fn length(&self, a: f64, b: f64) -> f64 {
        let n = ((b - a).abs() / PANEL).ceil().max(1.0) as usize;
        let h = (b - a) / n as f64;
        let mut parts = Vec::with_capacity(n * GAUSS);
        for k in 0..n {
            let r = Rule1::gauss(a + h * k as f64, a + h * (k + 1) as f64, GAUSS);
            parts.extend(r.nodes.iter().zip(&r.weights).map(|(&x, &w)| w * self.speed(x)));
        }
        compensated_sum(parts)
    }

    /// Coordinate `x` with distance `r` from the origin set.
    fn invert(&self, origin: f64, r: f64, hi: f64) -> Result<f64> {
        let mut lo_x = origin;
        let mut acc = 0.0;
        let mut step = PANEL;
        loop {
            let next = (lo_x + step).min(hi);
            let seg = self.length(lo_x, next);
            if acc + seg >= r {
                let (mut a, mut b) = (lo_x, next);
                for _ in 0..200 {
                    let mid = 0.5 * (a + b);
                    if acc + self.length(lo_x, mid) < r {
                        a = mid;
                    } else {
                        b = mid;
                    }
                    if b - a < 1e-14 * b.abs().max(1.0) {
                        break;
                    }
                }
                return Ok(0.5 * (a + b));
            }
            if next >= hi {
                return Err(Error::DistanceEstimationFailed(format!("radius {r} lies outside the chart")));
            }
            acc += seg;
            lo_x = next;
            step = (step * 1.5).min(8.0);
        }
    }
}

/// Checks that `g` is block diagonal along `axis` with `g_aa` a function of
/// `x^axis` alone; returns whether `g_aa == 1`.
fn check_radial(triple: &SubstaticTriple<f64>, axis: usize) -> Result<bool> {
    let m = triple.dim();
    let reference = triple.sample_box.halton(1, 5).remove(0);
    let mut unit = true;
    for p in triple.samples(64, 19) {
        let g = triple.chart.metric(&p)?;
        let gaa = g[(axis, axis)];
        for i in 0..m {
            if i != axis && g[(axis, i)].abs() > 1e-12 * (gaa * g[(i, i)]).sqrt() {
                return Err(Error::DistanceEstimationFailed(format!("g_{axis}{i} does not vanish at {:?}", point_vec(&p))));
            }
        }
        let mut q = reference.clone();
        q[axis] = p[axis];
        let gref = triple.chart.metric_raw(&q)[(axis, axis)];
        if (gref - gaa).abs() > 1e-12 * gaa {
            return Err(Error::DistanceEstimationFailed(format!(
                "g_{axis}{axis} varies across the level sets at {:?}",
                point_vec(&p)
            )));
        }
        unit &= (gaa - 1.0).abs() < 1e-14;
    }
    Ok(unit)
}

/// Solves `h'' = k^2 h`, `h(0) = 1`, `h'(0) = l` and returns
/// `(int_0^t h^m, int_0^t h^(m-1))` at each `t`.
pub fn comparison_integrals(kappa: f64, lambda: f64, m: usize, ts: &[f64]) -> Result<Vec<(f64, f64)>> {
    let mm = m as f64;
    let f = |_t: f64, y: &[f64]| Ok(vec![y[1], kappa * kappa * y[0], y[0].powf(mm), y[0].powf(mm - 1.0)]);
    let end = ts.iter().copied().fold(0.0, f64::max);
    if end <= 0.0 {
        return Ok(ts.iter().map(|_| (0.0, 0.0)).collect());
    }
    let outs: Vec<f64> = ts.iter().copied().filter(|&t| t > 0.0 && t < end).collect();
    let sol = dopri5(&f, 0.0, &[1.0, lambda, 0.0, 0.0], end, &outs, &OdeConfig::with_tol(1e-12), |_, _| Flow::Continue)?;
    Ok(ts
        .iter()
        .map(|&t| {
            sol.samples
                .iter()
                .find(|(s, _)| (s - t).abs() < 1e-12 * t.max(1.0))
                .map(|(_, y)| (y[2], y[3]))
                .unwrap_or((0.0, 0.0))
        })
        .collect())
}

/// `vol_f(B_r)` for each radius in `r_list` (increasing), the quantity
/// `ln vol_f / r^2` and the comparison with `int h^m` and `int h^(m-1)`
/// relative to the inner radius `r_list[0]`. `kappa_lambda` overrides the
/// estimated `(kappa_bar, lambda_bar)`.
pub fn f_volume_growth(
    triple: &SubstaticTriple<f64>,
    origin: RadialOrigin,
    r_list: &[f64],
    weight: Weight,
    kappa_lambda: Option<(f64, f64)>,
) -> Result<VolumeGrowth> {
    let m = triple.dim();
    if origin.axis >= m {
        return Err(Error::Invalid(format!("axis {} out of range", origin.axis)));
    }
    if r_list.len() < 3 || r_list.windows(2).any(|w| w[1] <= w[0]) || r_list[0] <= 0.0 {
        return Err(Error::Invalid("radii must be positive, increasing, at least three".into()));
    }
    let unit = check_radial(triple, origin.axis)?;
    let profile = Profile { triple, axis: origin.axis, reference: triple.sample_box.halton(1, 5).remove(0) };
    let hi = triple.chart.domain.axes[origin.axis].hi;
    let xs: Vec<f64> = r_list
        .iter()
        .map(|&r| if unit { Ok(origin.value + r) } else { profile.invert(origin.value, r, hi) })
        .collect::<Result<_>>()?;
    if xs.iter().any(|&x| x > hi) {
        return Err(Error::DistanceEstimationFailed("radius exceeds the chart".into()));
    }

    // cross-section integral of e^-f sqrt(det g)
    let axes = &triple.chart.domain.axes;
    let rules: Vec<Rule1<f64>> = (0..m)
        .filter(|&k| k != origin.axis)
        .map(|k| Rule1::for_axis(&axes[k], axes[k].lo, axes[k].hi, triple.volume_nodes[k].max(8)))
        .collect();
    let cross = tensor_nodes(&rules);
    let u = triple.u.as_ref();
    let section = |x: f64| -> f64 {
        compensated_sum(cross.iter().map(|(q, w)| {
            let mut p = q.clone();
            p.insert(origin.axis, x);
            let det = triple.chart.metric_raw(&p).det();
            w * det.max(0.0).sqrt() * weight.density(u(&p), m)
        }))
    };
    let mut vols = Vec::with_capacity(xs.len());
    let mut acc = 0.0;
    let mut from = origin.value;
    for &x in &xs {
        let n = ((x - from) / PANEL).ceil().max(1.0) as usize;
        let h = (x - from) / n as f64;
        let mut parts = Vec::new();
        for k in 0..n {
            let r = Rule1::gauss(from + h * k as f64, from + h * (k + 1) as f64, GAUSS);
            parts.extend(r.nodes.iter().zip(&r.weights).map(|(&xx, &w)| w * section(xx)));
        }
        acc += compensated_sum(parts);
        vols.push(acc);
        from = x;
    }

    let (kappa_bar, lambda_bar) = match kappa_lambda {
        Some(kl) => kl,
        None => estimate_comparison(triple, origin, xs[0], weight, &profile)?,
    };
    let ts: Vec<f64> = r_list.iter().map(|r| r - r_list[0]).collect();
    let ints = comparison_integrals(kappa_bar, lambda_bar, m, &ts)?;
    let shell = |i: usize| vols[i] - vols[0];
    let c_m = shell(1) / ints[1].0;
    let c_m1 = shell(1) / ints[1].1;
    let mut ok_m = true;
    let mut ok_m1 = true;
    let mut rows = Vec::with_capacity(r_list.len());
    for i in 0..r_list.len() {
        let (im, im1) = ints[i];
        ok_m &= shell(i) <= 1.05 * c_m * im + 1e-12;
        ok_m1 &= shell(i) <= 1.05 * c_m1 * im1 + 1e-12;
        rows.push(VolumeRow {
            r: r_list[i],
            x: xs[i],
            vol_f: vols[i],
            log_ratio: vols[i].ln() / (r_list[i] * r_list[i]),
            shell: shell(i),
            comparison_m: c_m * im,
            comparison_m1: c_m1 * im1,
        });
    }
    let half = rows.len() / 2;
    let liminf_estimate = rows[half..].iter().map(|r| r.log_ratio).fold(f64::INFINITY, f64::min);
    let q_mid = rows[half].log_ratio;
    let q_last = rows.last().map(|r| r.log_ratio).unwrap_or(q_mid);
    let growth_bounded = q_last.is_finite() && q_last <= q_mid.max(0.0) * 1.05 + 1e-9;
    let bound_m = Verdict::from_bool(ok_m);
    Ok(VolumeGrowth {
        triple: triple.name.clone(),
        weight,
        distance: if unit { "radial-exact" } else { "radial-profile" }.to_string(),
        rows,
        liminf_estimate,
        growth_bounded,
        kappa_bar,
        lambda_bar,
        bound_m,
        bound_m1: Verdict::from_bool(ok_m1),
        verdict: bound_m.and(Verdict::from_bool(growth_bounded)),
    })
}

/// `kappa_bar^2 = max(0, -min eig(Ric_f^(m+1))/m)` over samples outside the
/// inner ball and `lambda_bar = max Delta_f rho` on its boundary.
fn estimate_comparison(
    triple: &SubstaticTriple<f64>,
    origin: RadialOrigin,
    x0: f64,
    weight: Weight,
    profile: &Profile<'_>,
) -> Result<(f64, f64)> {
    let m = triple.dim();
    let c = weight.coefficient(m);
    let a = origin.axis;
    let mut worst = 0.0f64;
    for p in triple.samples(128, 23) {
        if p[a] < x0 {
            continue;
        }
        let d = triple.point_data(&p)?;
        // Ric + Hess f - df (x) df with f = -c ln u
        let t = crate::linalg::Mat::from_fn(m, m, |i, j| {
            d.ricci[(i, j)] - c * d.hess_u[(i, j)] / d.u + (c - c * c) * d.du[i] * d.du[j] / (d.u * d.u)
        });
        let ev = generalized_eigenvalues(&t, &d.g).ok_or_else(|| Error::SingularMetric { point: p.clone() })?;
        let lo = ev.iter().copied().fold(f64::INFINITY, f64::min);
        worst = worst.max(-lo / m as f64);
    }
    let kappa = worst.sqrt();

    let chart = &triple.chart;
    let u = triple.u.clone();
    let mut lambda = f64::NEG_INFINITY;
    for mut p in triple.samples(32, 29) {
        p[a] = x0;
        // Delta rho = d_a(sqrt(det g)/sqrt(g_aa)) / sqrt(det g)
        let w = |q: &[f64]| {
            let g = chart.metric_raw(q);
            g.det().sqrt() / g[(a, a)].sqrt()
        };
        let dw = chart.scalar_d(&w, &p, Level::Inner)[a];
        let g = chart.metric(&p)?;
        let lap = dw / g.det().sqrt();
        let f = |q: &[f64]| -c * u(q).ln();
        let df = chart.scalar_d(&f, &p, Level::Inner)[a];
        let hf = lap - df / profile.speed(p[a]);
        lambda = lambda.max(hf);
    }
    Ok((kappa, lambda))
}
