//! Sup bounds for `|dphi|^2` through the Keller-Osserman inequality
//! `Delta_f v >= b v^sigma - a v`.

use rayon::prelude::*;
use serde::Serialize;

use crate::comparison::ode::{dopri5, Flow, OdeConfig, Outcome};
use crate::comparison::VolumeGrowth;
use crate::error::{Error, Result};
use crate::kernel::chart::Level;
use crate::tolerance::Tolerances;
use crate::triple::SubstaticTriple;
use crate::verdict::Verdict;
use crate::wavemap::map::{potential_bounds, Potential, PotentialBounds, SmoothMap};
use crate::wavemap::system::{system_survey, SystemSurvey};

/// Sub-solutions of `Delta_f v >= b v^sigma - a v` on a weighted manifold with
/// at most quadratic-exponential volume growth satisfy `sup v <= (a/b)^(1/(sigma-1))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KellerOsserman {
    pub a: f64,
    pub b: f64,
    pub sigma: f64,
}

impl KellerOsserman {
    pub fn new(a: f64, b: f64, sigma: f64) -> Result<Self> {
        if !(a >= 0.0) || !(b > 0.0) || !(sigma > 1.0) {
            return Err(Error::Invalid(format!("need a >= 0, b > 0, sigma > 1 (got a = {a}, b = {b}, sigma = {sigma})")));
        }
        Ok(Self { a, b, sigma })
    }

    /// Instance satisfied by `v = |dphi|^2`: `b = 2(1 - (m-1) k)/m`, `sigma = 2`.
    pub fn for_energy_density(a: f64, m: usize, kappa: f64) -> Result<Self> {
        let limit = 1.0 / (m - 1) as f64;
        if kappa >= limit {
            return Err(Error::KappaTooLarge { kappa, limit });
        }
        Self::new(a, 2.0 * (1.0 - (m - 1) as f64 * kappa) / m as f64, 2.0)
    }

    pub fn bound(&self) -> f64 {
        (self.a / self.b).powf(1.0 / (self.sigma - 1.0))
    }

    /// `b v^sigma - a v`
    pub fn forcing(&self, v: f64) -> f64 {
        self.b * v.max(0.0).powf(self.sigma) - self.a * v
    }
}

/// `[a m / (2 (1 - (m-1) k))]^(1/2)`, the square-root form of the sup bound.
pub fn square_root_bound(a: f64, m: usize, kappa: f64) -> f64 {
    (a * m as f64 / (2.0 * (1.0 - (m - 1) as f64 * kappa))).sqrt()
}

#[derive(Clone, Debug, Serialize)]
pub struct SubsolutionProfile {
    pub reduction: KellerOsserman,
    pub v0: f64,
    /// `(s, v, v')`
    pub rows: Vec<(f64, f64, f64)>,
    pub sup: f64,
    pub within_bound: bool,
}

/// Radial solution of `v'' + v'/s = b v^sigma - a v`, regular at `s = 0`
/// with `v(0) = v0`. This is `Delta_f v` for functions of `s` on the flat
/// cylinder with `u = s`, so the profile is an exact sub-solution there.
pub fn radial_subsolution(ko: KellerOsserman, v0: f64, s_max: f64, samples: usize) -> Result<SubsolutionProfile> {
    if !(s_max > 0.0) || samples < 2 {
        return Err(Error::Invalid("need s_max > 0 and at least two samples".into()));
    }
    let s0 = 1e-4;
    let f0 = ko.forcing(v0);
    let y0 = [v0 + f0 * s0 * s0 / 4.0, f0 * s0 / 2.0];
    let rhs = |s: f64, y: &[f64]| Ok(vec![y[1], ko.forcing(y[0]) - y[1] / s]);
    let outputs: Vec<f64> = (1..samples).map(|i| s_max * i as f64 / (samples - 1) as f64).collect();
    let cfg = OdeConfig { h_init: 1e-5, h_max: s_max / samples as f64, ..OdeConfig::with_tol(1e-12) };
    let sol = dopri5(&rhs, s0, &y0, s_max, &outputs, &cfg, |_, _| Flow::Continue)?;
    if let Outcome::EdgeReached { t } = sol.outcome {
        return Err(Error::StepUnderflow { t });
    }
    let mut rows = vec![(0.0, v0, 0.0)];
    for (s, y) in sol.samples.iter().skip(1) {
        if rows.last().map_or(true, |r| *s > r.0 + 1e-12) {
            rows.push((*s, y[0], y[1]));
        }
    }
    let sup = rows.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
    Ok(SubsolutionProfile { reduction: ko, v0, rows, sup, within_bound: sup <= ko.bound() * (1.0 + 1e-12) })
}

#[derive(Clone, Debug, Serialize)]
pub struct LiouvilleHypotheses {
    pub potential: PotentialBounds,
    pub kappa: f64,
    pub kappa_limit: f64,
    /// How the volume growth hypothesis is met.
    pub volume: String,
    pub system: SystemSurvey,
}

#[derive(Clone, Debug, Serialize)]
pub struct LiouvilleReport {
    pub triple: String,
    pub map: String,
    pub potential: String,
    pub hypotheses: LiouvilleHypotheses,
    pub sup_energy_density: f64,
    pub sup_point: Vec<f64>,
    /// Square-root form `[a m / (2 (1 - (m-1) k))]^(1/2)`.
    pub theorem_bound: f64,
    pub reduction: KellerOsserman,
    /// `(a/b)^(1/(sigma-1))`
    pub reduction_bound: f64,
    /// `|(a/b)^(1/(sigma-1)) - a m / (2 (1 - (m-1) k))|`
    pub reduction_identity_gap: f64,
    pub within_reduction_bound: bool,
    pub verdict: Verdict,
}

/// Compares the sampled sup of `|dphi|^2` with both forms of the bound after
/// checking the hypotheses on the same sample.
pub fn liouville_bound(
    triple: &SubstaticTriple<f64>,
    map: &SmoothMap,
    potential: &Potential,
    points: &[Vec<f64>],
    volume: Option<&VolumeGrowth>,
    tol: &Tolerances,
) -> Result<LiouvilleReport> {
    let m = triple.dim();
    let kappa = map.target.sec_bound;
    let kappa_limit = 1.0 / (m - 1) as f64;
    let bounds = potential_bounds(map, potential, m, points)?;
    let (system, _) = system_survey(triple, map, potential, points, tol)?;

    let mut unmet = Vec::new();
    if kappa >= kappa_limit {
        unmet.push(format!("sup Sec_N <= {kappa} is not below 1/(m-1) = {kappa_limit}"));
    }
    if !bounds.inf_v.is_finite() {
        unmet.push("inf V(phi) is not finite".to_string());
    }
    if system.verdict.is_fail() {
        unmet.push(format!(
            "map-source system fails at {} of {} samples (min r1 = {:e}, max r2 = {:e}, max r3 = {:e})",
            system.failures, system.samples, system.min_r1, system.max_r2, system.max_r3
        ));
    }
    let volume_note = match volume {
        Some(v) if v.growth_bounded && v.liminf_estimate.is_finite() => {
            format!("ln vol_f(B_r)/r^2 -> {:.6e} ({})", v.liminf_estimate, v.distance)
        }
        Some(v) => {
            unmet.push(format!("f-volume growth not quadratic-exponential (liminf estimate {:e})", v.liminf_estimate));
            String::new()
        }
        None if triple.volume_box.is_some() => "compact".to_string(),
        None => {
            unmet.push("no f-volume growth evidence for a non-compact triple".to_string());
            String::new()
        }
    };
    if !unmet.is_empty() {
        return Err(Error::HypothesesNotMet(unmet.join("; ")));
    }

    let densities: Vec<f64> =
        points.par_iter().map(|p| map.energy_density(&triple.chart, p, Level::Inner)).collect::<Result<_>>()?;
    let (idx, sup) = densities.iter().enumerate().fold((0, f64::NEG_INFINITY), |acc, (i, &w)| if w > acc.1 { (i, w) } else { acc });

    let reduction = KellerOsserman::for_energy_density(bounds.a, m, kappa)?;
    let reduction_bound = reduction.bound();
    let direct = bounds.a * m as f64 / (2.0 * (1.0 - (m - 1) as f64 * kappa));
    let theorem_bound = square_root_bound(bounds.a, m, kappa);
    Ok(LiouvilleReport {
        triple: triple.name.clone(),
        map: map.name.clone(),
        potential: potential.name.clone(),
        hypotheses: LiouvilleHypotheses { potential: bounds, kappa, kappa_limit, volume: volume_note, system },
        sup_energy_density: sup,
        sup_point: points[idx].clone(),
        theorem_bound,
        reduction,
        reduction_bound,
        reduction_identity_gap: (reduction_bound - direct).abs(),
        within_reduction_bound: sup <= reduction_bound + tol.cert,
        verdict: Verdict::from_bool(sup <= theorem_bound + tol.cert),
    })
}
