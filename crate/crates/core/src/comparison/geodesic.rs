//! Geodesics of `g` or of the optical metric `u^-2 g`.

use serde::Serialize;

use crate::comparison::ode::{dopri5, rk4, Flow, OdeConfig, OdeStats, Outcome};
use crate::error::{Error, Result};
use crate::kernel::chart::Chart;
use crate::kernel::curvature::Christoffel;
use crate::triple::SubstaticTriple;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricTag {
    G,
    Optical,
}

impl MetricTag {
    pub fn chart(self, triple: &SubstaticTriple<f64>) -> Chart<f64> {
        match self {
            MetricTag::G => triple.chart.clone(),
            MetricTag::Optical => triple.optical_view().chart,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceSample {
    pub t: f64,
    pub point: Vec<f64>,
    pub velocity: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExitRecord {
    pub t: f64,
    pub point: Vec<f64>,
    /// Non-periodic axis whose bound is nearest to the exit point.
    pub axis: Option<usize>,
    pub upper: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GeodesicTrace {
    pub tag: MetricTag,
    /// Requested arclength.
    pub length: f64,
    pub samples: Vec<TraceSample>,
    /// `max |g(v, v) - 1|` over accepted steps.
    pub energy_drift: f64,
    pub exit: Option<ExitRecord>,
    pub stats: OdeStats,
}

impl GeodesicTrace {
    pub fn first(&self) -> &TraceSample {
        &self.samples[0]
    }

    pub fn last(&self) -> &TraceSample {
        self.samples.last().expect("trace holds its start")
    }

    /// Fails with `LeftDomain` unless the full length was traced.
    pub fn require_complete(&self) -> Result<&Self> {
        match &self.exit {
            Some(e) => Err(Error::LeftDomain { t: e.t, point: e.point.clone() }),
            None => Ok(self),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GeodesicConfig {
    pub ode: OdeConfig,
    /// Spacing of recorded samples (a final sample is always recorded).
    pub output_dt: Option<f64>,
    /// Use fixed-step RK4 with this many steps instead of adaptive control.
    pub fixed_steps: Option<usize>,
}

impl GeodesicConfig {
    pub fn new(ode_tol: f64) -> Self {
        Self { ode: OdeConfig::with_tol(ode_tol * 1e-2), output_dt: None, fixed_steps: None }
    }

    pub fn every(mut self, dt: f64) -> Self {
        self.output_dt = Some(dt);
        self
    }

    pub fn output_times(&self, t_end: f64) -> Vec<f64> {
        match self.output_dt {
            Some(dt) if dt > 0.0 => {
                let n = (t_end / dt - 1e-9).floor() as usize;
                (1..=n).map(|i| i as f64 * dt).collect()
            }
            _ => Vec::new(),
        }
    }
}

/// `-Gamma(v, v)`.
pub fn acceleration(gamma: &Christoffel<f64>, v: &[f64]) -> Vec<f64> {
    gamma.contract(v, v).into_iter().map(|x| -x).collect()
}

/// `dir` rescaled to unit length in `chart` at `p`.
pub fn unit_vector(chart: &Chart<f64>, p: &[f64], dir: &[f64]) -> Result<Vec<f64>> {
    let g = chart.metric(p)?;
    let n = g.bilinear(dir, dir).sqrt();
    if !(n > 0.0) {
        return Err(Error::Invalid("zero initial direction".into()));
    }
    Ok(dir.iter().map(|x| x / n).collect())
}

pub(crate) fn exit_record(chart: &Chart<f64>, t: f64, point: &[f64]) -> ExitRecord {
    let mut best: Option<(f64, usize, bool)> = None;
    for (i, a) in chart.domain.axes.iter().enumerate() {
        if a.periodic {
            continue;
        }
        for (d, upper) in [((point[i] - a.lo).abs(), false), ((a.hi - point[i]).abs(), true)] {
            if best.map_or(true, |b| d < b.0) {
                best = Some((d, i, upper));
            }
        }
    }
    ExitRecord { t, point: point.to_vec(), axis: best.map(|b| b.1), upper: best.map_or(false, |b| b.2) }
}

/// Integrates the geodesic equation in `chart` from `p0` with unit initial
/// velocity `v0` for arclength `length`. Leaving the chart ends the trace with
/// an exit record rather than an error.
pub fn integrate_geodesic(
    chart: &Chart<f64>,
    tag: MetricTag,
    p0: &[f64],
    v0: &[f64],
    length: f64,
    cfg: &GeodesicConfig,
) -> Result<GeodesicTrace> {
    let m = chart.dim();
    if p0.len() != m || v0.len() != m {
        return Err(Error::WrongDimension { expected: m, got: p0.len().min(v0.len()) });
    }
    let g0 = chart.metric(p0)?;
    let speed = g0.bilinear(v0, v0);
    if (speed - 1.0).abs() > 1e-10 {
        return Err(Error::Invalid(format!("initial velocity has g(v, v) = {speed}, expected 1")));
    }
    let rhs = |_t: f64, y: &[f64]| -> Result<Vec<f64>> {
        let gamma = chart.christoffel(&y[..m])?;
        let mut out = y[m..].to_vec();
        out.extend(acceleration(&gamma, &y[m..]));
        Ok(out)
    };
    let y0: Vec<f64> = p0.iter().chain(v0).copied().collect();
    let mut drift = 0.0f64;
    let mut wrap = |y: &mut [f64]| {
        chart.domain.wrap(&mut y[..m]);
        let g = chart.metric_raw(&y[..m]);
        drift = drift.max((g.bilinear(&y[m..], &y[m..]) - 1.0).abs());
    };

    let (raw, exit, stats) = match cfg.fixed_steps {
        Some(n) => {
            let s = rk4(&rhs, 0.0, &y0, length, n, |_, y| wrap(y))?;
            (s, None, OdeStats { accepted: n, rejected: 0, evaluations: 4 * n })
        }
        None => {
            let outs = cfg.output_times(length);
            let sol = dopri5(&rhs, 0.0, &y0, length, &outs, &cfg.ode, |_, y| {
                wrap(y);
                Flow::Continue
            })?;
            let exit = match sol.outcome {
                Outcome::EdgeReached { t } => Some(exit_record(chart, t, &sol.last().1[..m])),
                _ => None,
            };
            (sol.samples, exit, sol.stats)
        }
    };
    let samples = raw
        .into_iter()
        .map(|(t, y)| TraceSample { t, point: y[..m].to_vec(), velocity: y[m..].to_vec() })
        .collect();
    Ok(GeodesicTrace { tag, length, samples, energy_drift: drift, exit, stats })
}

/// Geodesic of `triple` in the metric selected by `tag`.
pub fn trace(
    triple: &SubstaticTriple<f64>,
    tag: MetricTag,
    p0: &[f64],
    dir: &[f64],
    length: f64,
    cfg: &GeodesicConfig,
) -> Result<GeodesicTrace> {
    let chart = tag.chart(triple);
    let v0 = unit_vector(&chart, p0, dir)?;
    integrate_geodesic(&chart, tag, p0, &v0, length, cfg)
}
