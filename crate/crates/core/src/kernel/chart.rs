use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kernel::deriv::{jet1, jet2, Scheme, Side};
use crate::linalg::Mat;
use crate::scalar::{lit, to_f64, Real};

/// Shared closure from chart points to `R`.
pub type PointFn<T, R> = Arc<dyn Fn(&[T]) -> R + Send + Sync>;

pub fn point_vec<T: Real>(p: &[T]) -> Vec<f64> {
    p.iter().map(|&x| to_f64(x)).collect()
}

/// One coordinate axis of a chart.
#[derive(Clone, Debug)]
pub struct Axis<T> {
    pub name: String,
    pub lo: T,
    pub hi: T,
    pub periodic: bool,
    /// Coordinate value of a nearby singular locus (coordinate singularity,
    /// curvature blow-up or zero of the lapse). Finite-difference steps
    /// shrink when approaching it.
    pub sing_lo: Option<T>,
    pub sing_hi: Option<T>,
    /// The singular locus is only a zero of the lapse: the metric continues
    /// smoothly across it, so stencils switch to one-sided instead of shrinking.
    pub wall_lo: bool,
    pub wall_hi: bool,
}

impl<T: Real> Axis<T> {
    pub fn new(name: &str, lo: T, hi: T) -> Self {
        Self { name: name.to_string(), lo, hi, periodic: false, sing_lo: None, sing_hi: None, wall_lo: false, wall_hi: false }
    }

    pub fn periodic(name: &str, lo: T, hi: T) -> Self {
        Self { periodic: true, ..Self::new(name, lo, hi) }
    }

    pub fn singular_at(mut self, lo: Option<T>, hi: Option<T>) -> Self {
        self.sing_lo = lo;
        self.sing_hi = hi;
        self
    }

    /// Marks `value` (one of the bounds) as a lapse wall.
    pub fn wall_at(mut self, value: T) -> Self {
        if value == self.lo {
            self.sing_lo = Some(value);
            self.wall_lo = true;
        } else {
            self.sing_hi = Some(value);
            self.wall_hi = true;
        }
        self
    }

    pub fn len(&self) -> T {
        self.hi - self.lo
    }

    /// Distance to the nearest singular locus that is not a wall.
    fn clearance(&self, x: T) -> Option<T> {
        let a = self.sing_lo.filter(|_| !self.wall_lo).map(|s| (x - s).abs());
        let b = self.sing_hi.filter(|_| !self.wall_hi).map(|s| (s - x).abs());
        match (a, b) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }
}

/// Coordinate box, possibly with periodic axes.
#[derive(Clone, Debug)]
pub struct Domain<T> {
    pub axes: Vec<Axis<T>>,
}

impl<T: Real> Domain<T> {
    pub fn new(axes: Vec<Axis<T>>) -> Self {
        Self { axes }
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    /// True if `p` lies in the closed box (periodic axes are unrestricted).
    pub fn contains(&self, p: &[T]) -> bool {
        p.len() == self.axes.len()
            && self.axes.iter().zip(p).all(|(a, &x)| x.is_finite() && (a.periodic || (x >= a.lo && x <= a.hi)))
    }

    /// Maps periodic coordinates back into their fundamental interval.
    pub fn wrap(&self, p: &mut [T]) {
        for (a, x) in self.axes.iter().zip(p.iter_mut()) {
            if a.periodic {
                let l = a.len();
                let mut y = (*x - a.lo) % l;
                if y < T::zero() {
                    y = y + l;
                }
                *x = a.lo + y;
            }
        }
    }

    pub fn centre(&self) -> Vec<T> {
        self.axes.iter().map(|a| (a.lo + a.hi) * lit(0.5)).collect()
    }
}

/// Which nesting level a derivative is taken at. Outer derivatives act on
/// quantities that already contain inner finite differences and therefore use
/// a larger step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Inner,
    Outer,
}

/// Finite-difference step policy.
#[derive(Clone, Debug)]
pub struct StepConfig<T> {
    pub scheme: Scheme,
    pub inner: T,
    pub outer: T,
    /// Inner step is capped at this fraction of the distance to the nearest
    /// singular locus.
    pub inner_frac: T,
    pub outer_frac: T,
    /// Within this distance of a hard domain edge, stencils become
    /// one-sided. Zero disables one-sided stencils.
    pub min_clearance: T,
}

impl<T: Real> Default for StepConfig<T> {
    fn default() -> Self {
        // single precision needs wider stencils to keep roundoff below truncation
        let single = T::epsilon() > lit(1e-10);
        Self {
            scheme: Scheme::Richardson,
            inner: lit(if single { 3e-2 } else { 2e-3 }),
            outer: lit(if single { 6e-2 } else { 1e-2 }),
            inner_frac: lit(0.01),
            outer_frac: lit(0.025),
            min_clearance: T::zero(),
        }
    }
}

/// Second-order jet of the metric at a point.
#[derive(Clone, Debug)]
pub struct MetricJet<T> {
    pub g: Mat<T>,
    pub ginv: Mat<T>,
    /// `dg[k]` = partial derivative of the metric along axis `k`.
    pub dg: Vec<Mat<T>>,
    /// `ddg[k][l]`, empty when only the first-order jet was requested.
    pub ddg: Vec<Vec<Mat<T>>>,
}

/// A coordinate patch with a metric given as a closure.
#[derive(Clone)]
pub struct Chart<T> {
    pub name: String,
    pub domain: Domain<T>,
    metric: PointFn<T, Mat<T>>,
    partials: Option<PointFn<T, Vec<Mat<T>>>>,
    pub steps: StepConfig<T>,
}

impl<T: Real> fmt::Debug for Chart<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Chart").field("name", &self.name).field("domain", &self.domain).finish()
    }
}

impl<T: Real> Chart<T> {
    pub fn new(name: &str, domain: Domain<T>, metric: PointFn<T, Mat<T>>) -> Self {
        Self { name: name.to_string(), domain, metric, partials: None, steps: StepConfig::default() }
    }

    /// Supplies analytic first partial derivatives of the metric.
    pub fn with_partials(mut self, partials: PointFn<T, Vec<Mat<T>>>) -> Self {
        self.partials = Some(partials);
        self
    }

    pub fn with_steps(mut self, steps: StepConfig<T>) -> Self {
        self.steps = steps;
        self
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn metric_fn(&self) -> PointFn<T, Mat<T>> {
        self.metric.clone()
    }

    /// Raw metric without checks.
    pub fn metric_raw(&self, p: &[T]) -> Mat<T> {
        (self.metric)(p)
    }

    pub fn check_point(&self, p: &[T]) -> Result<()> {
        if p.len() != self.dim() {
            return Err(Error::WrongDimension { expected: self.dim(), got: p.len() });
        }
        if !self.domain.contains(p) {
            return Err(Error::OutOfDomain { point: point_vec(p) });
        }
        Ok(())
    }

    /// Metric at `p`, checked for symmetry-compatible positive definiteness.
    pub fn metric(&self, p: &[T]) -> Result<Mat<T>> {
        self.check_point(p)?;
        let g = (self.metric)(p);
        if !g.is_finite() || g.cholesky().is_none() {
            return Err(Error::SingularMetric { point: point_vec(p) });
        }
        Ok(g)
    }

    /// Steps and stencil sides for derivatives at `p`.
    pub fn stencil(&self, p: &[T], level: Level) -> (Vec<T>, Vec<Side>) {
        let (base, frac) = match level {
            Level::Inner => (self.steps.inner, self.steps.inner_frac),
            Level::Outer => (self.steps.outer, self.steps.outer_frac),
        };
        let mut h = Vec::with_capacity(p.len());
        let mut sides = Vec::with_capacity(p.len());
        for (a, &x) in self.domain.axes.iter().zip(p) {
            let mut hk = base;
            if !a.periodic {
                if let Some(c) = a.clearance(x) {
                    hk = hk.min(frac * c);
                }
            }
            let mut side = Side::Central;
            let mc = self.steps.min_clearance;
            let reach = base * lit(4.0);
            if a.wall_lo && x - a.lo < reach {
                side = Side::Forward;
            } else if a.wall_hi && a.hi - x < reach {
                side = Side::Backward;
            } else if !a.periodic && mc > T::zero() {
                if x - a.lo < mc {
                    side = Side::Forward;
                } else if a.hi - x < mc {
                    side = Side::Backward;
                }
            }
            h.push(hk);
            sides.push(side);
        }
        (h, sides)
    }

    fn flat_metric(&self) -> impl Fn(&[T]) -> Vec<T> + '_ {
        move |q: &[T]| (self.metric)(q).into_vec()
    }

    /// Metric, inverse and first partials.
    pub fn metric_jet1(&self, p: &[T]) -> Result<MetricJet<T>> {
        let g = self.metric(p)?;
        let ginv = g.inverse().ok_or_else(|| Error::SingularMetric { point: point_vec(p) })?;
        let m = self.dim();
        let dg = match &self.partials {
            Some(d) => d(p),
            None => {
                let (h, sides) = self.stencil(p, Level::Inner);
                let (_, d) = jet1(&self.flat_metric(), p, &h, &sides, self.steps.scheme);
                d.into_iter().map(|v| Mat::from_vec(m, m, v).symmetrize()).collect()
            }
        };
        Ok(MetricJet { g, ginv, dg, ddg: Vec::new() })
    }

    /// Metric with first and second partials.
    pub fn metric_jet(&self, p: &[T]) -> Result<MetricJet<T>> {
        let m = self.dim();
        let (h, sides) = self.stencil(p, Level::Inner);
        match &self.partials {
            Some(d) => {
                let mut jet = self.metric_jet1(p)?;
                let flat = |q: &[T]| d(q).into_iter().flat_map(|x| x.into_vec()).collect::<Vec<T>>();
                let (_, dd) = jet1(&flat, p, &h, &sides, self.steps.scheme);
                // dd[k] holds d/dx^k of all partials d_l g
                let mut ddg = vec![vec![Mat::zeros(m, m); m]; m];
                for k in 0..m {
                    for l in 0..m {
                        let blk = Mat::from_vec(m, m, dd[k][l * m * m..(l + 1) * m * m].to_vec());
                        ddg[k][l] = blk;
                    }
                }
                for k in 0..m {
                    for l in k..m {
                        let s = ddg[k][l].add(&ddg[l][k]).scale(lit(0.5)).symmetrize();
                        ddg[k][l] = s.clone();
                        ddg[l][k] = s;
                    }
                }
                jet.ddg = ddg;
                Ok(jet)
            }
            None => {
                let g = self.metric(p)?;
                let ginv = g.inverse().ok_or_else(|| Error::SingularMetric { point: point_vec(p) })?;
                let j = jet2(&self.flat_metric(), p, &h, &sides, self.steps.scheme);
                let dg = j.d1.into_iter().map(|v| Mat::from_vec(m, m, v).symmetrize()).collect();
                let ddg = j
                    .d2
                    .into_iter()
                    .map(|row| row.into_iter().map(|v| Mat::from_vec(m, m, v).symmetrize()).collect())
                    .collect();
                Ok(MetricJet { g, ginv, dg, ddg })
            }
        }
    }

    /// Chart with the conformally rescaled metric `w(p)^2 g`.
    pub fn conformal(&self, name: &str, w: PointFn<T, T>) -> Chart<T> {
        let metric = self.metric.clone();
        Chart {
            name: name.to_string(),
            domain: self.domain.clone(),
            metric: Arc::new(move |p: &[T]| {
                let s = w(p);
                metric(p).scale(s * s)
            }),
            partials: None,
            steps: self.steps.clone(),
        }
    }

    /// Chart whose metric is `g + delta(p)`.
    pub fn with_metric_added(&self, name: &str, delta: PointFn<T, Mat<T>>) -> Chart<T> {
        let metric = self.metric.clone();
        Chart {
            name: name.to_string(),
            domain: self.domain.clone(),
            metric: Arc::new(move |p: &[T]| metric(p).add(&delta(p))),
            partials: None,
            steps: self.steps.clone(),
        }
    }
}
