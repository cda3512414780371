//! Compactly supported random deformations of a triple.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::kernel::chart::point_vec;
use crate::kernel::sampling::SampleBox;
use crate::linalg::Mat;
use crate::triple::{MatterSource, SubstaticTriple};

/// A smooth bump `psi(x) = exp(1 - 1/(1 - |x - c|^2 / w^2))` (zero outside the
/// coordinate ball) modulating a symmetric metric direction and a lapse factor.
#[derive(Clone, Debug)]
pub struct Bump {
    pub centre: Vec<f64>,
    pub width: f64,
    pub amplitude: f64,
    /// Coordinate components of the metric direction.
    pub metric_dir: Mat<f64>,
    /// `u -> u (1 + amplitude psi lapse_coeff)`.
    pub lapse_coeff: f64,
}

impl Bump {
    /// Profile at `p`; periodic axes use the nearest image.
    pub fn profile(&self, p: &[f64], periods: &[Option<f64>]) -> f64 {
        let mut r2 = 0.0;
        for (i, (&x, &c)) in p.iter().zip(&self.centre).enumerate() {
            let mut d = x - c;
            if let Some(per) = periods[i] {
                d -= per * (d / per).round();
            }
            r2 += d * d;
        }
        let s = r2 / (self.width * self.width);
        if s >= 1.0 {
            0.0
        } else {
            (1.0 - 1.0 / (1.0 - s)).exp()
        }
    }
}

/// Draws a bump inside `bx` from `seed`: centre in the middle half of the box,
/// width a quarter of the smallest side, entries of the metric direction scaled
/// by the local metric.
pub fn random_bump(triple: &SubstaticTriple<f64>, bx: &SampleBox<f64>, amplitude: f64, seed: u64) -> Bump {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = triple.dim();
    let centre: Vec<f64> =
        bx.lo.iter().zip(&bx.hi).map(|(&l, &h)| l + (h - l) * (0.25 + 0.5 * rng.gen::<f64>())).collect();
    let width = bx.lo.iter().zip(&bx.hi).map(|(&l, &h)| h - l).fold(f64::INFINITY, f64::min) / 4.0;
    let g = triple.chart.metric_raw(&centre);
    let mut dir = Mat::zeros(m, m);
    for i in 0..m {
        for j in i..m {
            let v = rng.gen_range(-1.0..1.0) * (g[(i, i)] * g[(j, j)]).sqrt();
            dir[(i, j)] = v;
            dir[(j, i)] = v;
        }
    }
    let lapse_coeff = rng.gen_range(-1.0..1.0);
    Bump { centre, width, amplitude, metric_dir: dir, lapse_coeff }
}

/// Applies `bump` to `(g, u)`. The declared source is dropped because the
/// deformed pair no longer solves it.
pub fn apply_bump(triple: &SubstaticTriple<f64>, bump: &Bump) -> Result<SubstaticTriple<f64>> {
    let periods: Vec<Option<f64>> =
        triple.chart.domain.axes.iter().map(|a| if a.periodic { Some(a.hi - a.lo) } else { None }).collect();
    let b1 = bump.clone();
    let per1 = periods.clone();
    let delta = Arc::new(move |p: &[f64]| b1.metric_dir.scale(b1.amplitude * b1.profile(p, &per1)));
    let chart = triple.chart.with_metric_added(&format!("{}~", triple.chart.name), delta);

    // positivity on the support
    let support = SampleBox::new(
        bump.centre.iter().map(|c| c - bump.width).collect(),
        bump.centre.iter().map(|c| c + bump.width).collect(),
    );
    for p in support.halton(512, 3) {
        if !chart.domain.contains(&p) {
            continue;
        }
        let g = chart.metric_raw(&p);
        if g.cholesky().is_none() {
            return Err(Error::MetricDegenerate { point: point_vec(&p) });
        }
    }

    let u0 = triple.u.clone();
    let b2 = bump.clone();
    let u = Arc::new(move |p: &[f64]| u0(p) * (1.0 + b2.amplitude * b2.lapse_coeff * b2.profile(p, &periods)));
    Ok(SubstaticTriple {
        name: format!("{}+bump", triple.name),
        chart,
        u,
        source: MatterSource::unspecified(),
        ..triple.clone()
    })
}

/// Random smooth deformation supported inside the sample box. Amplitude zero
/// returns the triple unchanged.
pub fn perturb(triple: &SubstaticTriple<f64>, amplitude: f64, seed: u64) -> Result<SubstaticTriple<f64>> {
    if amplitude == 0.0 {
        return Ok(triple.clone());
    }
    let bump = random_bump(triple, &triple.sample_box, amplitude, seed);
    apply_bump(triple, &bump)
}
