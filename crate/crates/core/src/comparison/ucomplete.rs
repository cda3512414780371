//! Divergence of `int u` and `int u^-1` along unit-speed rays of an end.

use rayon::prelude::*;
use serde::Serialize;

use crate::comparison::geodesic::{exit_record, unit_vector, ExitRecord};
use crate::comparison::ode::{dopri5, Flow, OdeConfig, Outcome};
use crate::error::{Error, Result};
use crate::kernel::sampling::halton;
use crate::triple::SubstaticTriple;
use crate::verdict::Verdict;

/// Rays start on `x^axis = start` and move towards increasing `x^axis` when
/// `outward > 0`. `r0` is the distance of the start section from the chosen
/// origin, used for the sandwich bound `C^-1 (1+r)^-1 <= u <= C (1+r)`.
#[derive(Clone, Debug, Serialize, serde::Deserialize)]
pub struct EndSpec {
    pub axis: usize,
    pub start: f64,
    pub outward: f64,
    pub r0: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum Growth {
    Converges,
    Logarithmic { rate: f64 },
    Power { exponent: f64 },
    /// The fitted exponent keeps increasing.
    Faster { exponent: f64 },
}

impl Growth {
    pub fn divergent(&self) -> bool {
        !matches!(self, Growth::Converges)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Functional {
    /// `(T, int_0^T)` at doubling checkpoints.
    pub checkpoints: Vec<(f64, f64)>,
    /// `log2 (I(T)/I(T/2))` at the last checkpoint.
    pub exponent: f64,
    pub growth: Growth,
}

#[derive(Clone, Debug, Serialize)]
pub struct RayProbe {
    pub start: Vec<f64>,
    pub int_u: Functional,
    pub int_u_inv: Functional,
    /// Smallest `C` for which the sandwich holds on the sampled ray.
    pub sandwich_c: f64,
    /// Same on the first and on the second half of the ray.
    pub sandwich_c_head: f64,
    pub sandwich_c_tail: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct UCompleteness {
    pub triple: String,
    pub end: EndSpec,
    pub t_max: f64,
    pub rays: Vec<RayProbe>,
    pub int_u_exponent: f64,
    pub int_u_inv_exponent: f64,
    pub divergent: bool,
    pub sandwich_c: f64,
    /// The sandwich constant does not grow along the rays.
    pub sandwich_bounded: bool,
    pub label: String,
    pub verdict: Verdict,
}

fn classify(cp: &[(f64, f64)]) -> (f64, Growth) {
    let n = cp.len();
    if n < 3 {
        return (f64::NAN, Growth::Converges);
    }
    let (i1, i2, i3) = (cp[n - 3].1, cp[n - 2].1, cp[n - 1].1);
    let d1 = i2 - i1;
    let d2 = i3 - i2;
    let p = (i3 / i2).log2();
    let p_prev = (i2 / i1).log2();
    let q = d2 / d1;
    let growth = if !(q.is_finite()) || d2 <= 0.0 || q < 0.95 {
        Growth::Converges
    } else if q <= 1.05 {
        Growth::Logarithmic { rate: d2 / std::f64::consts::LN_2 }
    } else if p > 1.1 * p_prev && p > 1.5 {
        Growth::Faster { exponent: p }
    } else {
        Growth::Power { exponent: p }
    };
    (p, growth)
}

fn probe_ray(triple: &SubstaticTriple<f64>, end: &EndSpec, p0: Vec<f64>, t_max: f64, checkpoints: &[f64], cfg: &OdeConfig) -> Result<RayProbe> {
    let chart = &triple.chart;
    let m = triple.dim();
    let mut dir = vec![0.0; m];
    dir[end.axis] = end.outward.signum();
    let v0 = unit_vector(chart, &p0, &dir)?;
    let u = triple.u.clone();
    let rhs = |_t: f64, y: &[f64]| -> Result<Vec<f64>> {
        let x = &y[..m];
        let gamma = chart.christoffel(x)?;
        let uu = u(x);
        if !(uu > 0.0) {
            return Err(Error::LapseNonPositive { point: x.to_vec(), value: uu });
        }
        let mut out = y[m..2 * m].to_vec();
        out.extend(crate::comparison::geodesic::acceleration(&gamma, &y[m..2 * m]));
        out.push(uu);
        out.push(1.0 / uu);
        Ok(out)
    };
    let mut y0 = p0.clone();
    y0.extend(&v0);
    y0.extend([0.0, 0.0]);
    let (mut c_all, mut c_head, mut c_tail) = (0.0f64, 0.0f64, 0.0f64);
    let mut sandwich = |t: f64, x: &[f64]| {
        let uu = u(x);
        let r = end.r0 + t;
        let c = (uu / (1.0 + r)).max(1.0 / (uu * (1.0 + r)));
        c_all = c_all.max(c);
        if t >= 0.5 * t_max {
            c_tail = c_tail.max(c);
        } else {
            c_head = c_head.max(c);
        }
    };
    sandwich(0.0, &p0);
    let sol = dopri5(&rhs, 0.0, &y0, t_max, checkpoints, cfg, |t, y| {
        chart.domain.wrap(&mut y[..m]);
        sandwich(t, &y[..m]);
        Flow::Continue
    })?;
    if let Outcome::EdgeReached { t } = sol.outcome {
        let ExitRecord { point, .. } = exit_record(chart, t, &sol.last().1[..m]);
        return Err(Error::LeftDomain { t, point });
    }
    let pick = |k: usize| -> Vec<(f64, f64)> {
        sol.samples.iter().filter(|(t, _)| checkpoints.iter().any(|c| (c - t).abs() < 1e-9)).map(|(t, y)| (*t, y[2 * m + k])).collect()
    };
    let cu = pick(0);
    let ci = pick(1);
    let (pu, gu) = classify(&cu);
    let (pi, gi) = classify(&ci);
    Ok(RayProbe {
        start: p0,
        int_u: Functional { checkpoints: cu, exponent: pu, growth: gu },
        int_u_inv: Functional { checkpoints: ci, exponent: pi, growth: gi },
        sandwich_c: c_all,
        sandwich_c_head: c_head,
        sandwich_c_tail: c_tail,
    })
}

/// Probes `rays` unit-speed rays of the end described by `end` up to
/// arclength `t_max`, with checkpoints at `t_max / 2^k >= 1`.
pub fn u_completeness_probe(triple: &SubstaticTriple<f64>, end: &EndSpec, rays: usize, t_max: f64, ode_tol: f64) -> Result<UCompleteness> {
    let m = triple.dim();
    if end.axis >= m || triple.chart.domain.axes[end.axis].periodic {
        return Err(Error::Invalid(format!("axis {} does not describe an end", end.axis)));
    }
    let mut checkpoints = Vec::new();
    let mut t = t_max;
    while t >= 1.0 - 1e-12 {
        checkpoints.push(t);
        t *= 0.5;
    }
    checkpoints.reverse();
    if checkpoints.len() < 3 {
        return Err(Error::Invalid("t_max must be at least 4".into()));
    }
    let bx = &triple.sample_box;
    let starts: Vec<Vec<f64>> = halton(rays.max(1), m, 11)
        .into_iter()
        .map(|h| {
            (0..m)
                .map(|i| if i == end.axis { end.start } else { bx.lo[i] + (bx.hi[i] - bx.lo[i]) * h[i] })
                .collect()
        })
        .collect();
    let cfg = OdeConfig { h_max: 64.0, ..OdeConfig::with_tol(ode_tol * 1e-2) };
    let probes: Vec<RayProbe> =
        starts.into_par_iter().map(|p| probe_ray(triple, end, p, t_max, &checkpoints, &cfg)).collect::<Result<_>>()?;

    let n = probes.len() as f64;
    let int_u_exponent = probes.iter().map(|r| r.int_u.exponent).sum::<f64>() / n;
    let int_u_inv_exponent = probes.iter().map(|r| r.int_u_inv.exponent).sum::<f64>() / n;
    let divergent = probes.iter().all(|r| r.int_u.growth.divergent() && r.int_u_inv.growth.divergent());
    let sandwich_c = probes.iter().map(|r| r.sandwich_c).fold(0.0, f64::max);
    let sandwich_bounded =
        probes.iter().all(|r| r.sandwich_c_tail.is_finite() && r.sandwich_c_tail <= 1.05 * r.sandwich_c_head.max(1.0));
    let label = if divergent { "divergent (numeric)" } else { "NOT u-complete" };
    Ok(UCompleteness {
        triple: triple.name.clone(),
        end: end.clone(),
        t_max,
        rays: probes,
        int_u_exponent,
        int_u_inv_exponent,
        divergent,
        sandwich_c,
        sandwich_bounded,
        label: label.to_string(),
        verdict: Verdict::from_bool(divergent),
    })
}
