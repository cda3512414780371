//! Boundary integral inequalities: the gravity-weighted functional `V(b)`,
//! the divergence-theorem audit behind it, the three-dimensional area bound
//! and the boundary scalar curvature constraint.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::chart::Level;
use crate::kernel::extrapolate::{extrapolate, extrapolate_with_order};
use crate::linalg::generalized_eigenvalues;
use crate::scalar::compensated_sum;
use crate::tolerance::Tolerances;
use crate::triple::{BoundarySurface, LambdaReport, SubstaticTriple};
use crate::verdict::Verdict;

/// Boundary values at one quadrature node.
#[derive(Clone, Debug, Serialize)]
pub struct NodeValues {
    pub y: Vec<f64>,
    /// Parameter weight times area element.
    pub weight: f64,
    pub s_sigma: f64,
    pub s: f64,
    pub tr_q: f64,
    pub grad_u: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentData {
    pub label: String,
    pub kappa: f64,
    pub kappa_spread: f64,
    pub area: f64,
    pub int_s_sigma: f64,
    pub int_s: f64,
    pub int_tr_q: f64,
    #[serde(skip)]
    pub nodes: Vec<NodeValues>,
}

impl ComponentData {
    /// `int (S_Sigma - (m-2)/m S - (2/m) tr Q)`.
    pub fn integrand(&self, m: usize) -> f64 {
        let mf = m as f64;
        self.int_s_sigma - (mf - 2.0) / mf * self.int_s - 2.0 / mf * self.int_tr_q
    }

    /// Euler characteristic by Gauss-Bonnet (`m = 3`): nearest even integer
    /// to `int S_Sigma / 4 pi` and the rounding residual.
    pub fn euler(&self) -> (i64, f64) {
        let x = self.int_s_sigma / (4.0 * PI);
        let chi = 2.0 * (x / 2.0).round();
        (chi as i64, (x - chi).abs())
    }
}

/// Interior signals used by the equality and hypothesis reports.
#[derive(Clone, Debug, Serialize)]
pub struct InteriorSignals {
    pub lambda: LambdaReport,
    pub min_q_eigenvalue: f64,
    /// Largest `|Hess0 u| / (1 + |Hess u|)` seen.
    pub max_hess_traceless: f64,
    pub max_q: f64,
    pub samples: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundaryData {
    pub triple: String,
    pub dim: usize,
    pub components: Vec<ComponentData>,
    pub interior: InteriorSignals,
    /// Observed convergence order of the extrapolated `S + tr Q` at the first node.
    pub regularity_order: Option<f64>,
}

fn interior_signals(t: &SubstaticTriple<f64>, n: usize, seed: u64, tol: &Tolerances) -> Result<InteriorSignals> {
    let lambda = t.lambda_constant(n, seed, tol.constancy)?;
    let pts = t.samples(n, seed + 1);
    let stats: Result<Vec<(f64, f64, f64)>> = pts
        .par_iter()
        .map(|p| {
            let d = t.point_data(p)?;
            let ev = generalized_eigenvalues(&d.q, &d.g).ok_or(Error::SingularMetric { point: p.clone() })?;
            let h0 = d.norm2(&d.hess_traceless()).sqrt() / (1.0 + d.norm2(&d.hess_u).sqrt());
            let qn = d.norm2(&d.q).sqrt();
            Ok((ev[0], h0, qn))
        })
        .collect();
    let stats = stats?;
    Ok(InteriorSignals {
        lambda,
        min_q_eigenvalue: stats.iter().map(|s| s.0).fold(f64::INFINITY, f64::min),
        max_hess_traceless: stats.iter().map(|s| s.1).fold(0.0, f64::max),
        max_q: stats.iter().map(|s| s.2).fold(0.0, f64::max),
        samples: n,
    })
}

fn component_data(t: &SubstaticTriple<f64>, b: &BoundarySurface<f64>, nodes: &[usize]) -> Result<ComponentData> {
    let induced = b.surface.induced_chart(&t.chart);
    let quad = b.surface.area_nodes(&t.chart, nodes)?;
    let vals: Result<Vec<NodeValues>> = quad
        .par_iter()
        .map(|(y, w)| {
            let sample = |s: f64| -> Result<Vec<f64>> {
                let p = b.surface.inward_point(y, s);
                let d = t.point_data(&p)?;
                Ok(vec![d.scalar, d.tr_q(), d.grad_u_norm()])
            };
            let v = extrapolate(&sample, t.extrap_d)?;
            Ok(NodeValues {
                y: y.clone(),
                weight: *w,
                s_sigma: induced.scalar_curvature(y)?,
                s: v[0],
                tr_q: v[1],
                grad_u: v[2],
            })
        })
        .collect();
    let vals = vals?;
    let integ = |f: &dyn Fn(&NodeValues) -> f64| compensated_sum(vals.iter().map(|v| f(v) * v.weight));
    let area = integ(&|_| 1.0);
    let kappa = integ(&|v| v.grad_u) / area;
    let kmin = vals.iter().map(|v| v.grad_u).fold(f64::INFINITY, f64::min);
    let kmax = vals.iter().map(|v| v.grad_u).fold(f64::NEG_INFINITY, f64::max);
    Ok(ComponentData {
        label: b.label.clone(),
        kappa,
        kappa_spread: kmax - kmin,
        area,
        int_s_sigma: integ(&|v| v.s_sigma),
        int_s: integ(&|v| v.s),
        int_tr_q: integ(&|v| v.tr_q),
        nodes: vals,
    })
}

/// Gathers everything the boundary checks need. `refine` multiplies the
/// boundary quadrature orders.
pub fn boundary_data(t: &SubstaticTriple<f64>, tol: &Tolerances, samples: usize, seed: u64, refine: usize) -> Result<BoundaryData> {
    if t.boundary.is_empty() {
        return Err(Error::NoBoundary);
    }
    let components: Result<Vec<ComponentData>> = t
        .boundary
        .iter()
        .map(|b| {
            let nodes: Vec<usize> = b.nodes.iter().map(|n| n * refine.max(1)).collect();
            component_data(t, b, &nodes)
        })
        .collect();
    let components = components?;
    let regularity_order = {
        let b = &t.boundary[0];
        let y = b.surface.param_nodes(&b.nodes)[0].0.clone();
        let f = |s: f64| -> Result<f64> {
            let d = t.point_data(&b.surface.inward_point(&y, s))?;
            Ok(d.scalar + d.tr_q())
        };
        extrapolate_with_order(&f, t.extrap_d).ok().and_then(|r| r.order)
    };
    Ok(BoundaryData {
        triple: t.name.clone(),
        dim: t.dim(),
        components,
        interior: interior_signals(t, samples, seed, tol)?,
        regularity_order,
    })
}

/// `sum_i kappa_i^b I_i` with `I_i` the per-component integral.
pub fn bgh_value(m: usize, comps: &[(f64, f64, f64, f64)], b: f64) -> f64 {
    let mf = m as f64;
    compensated_sum(comps.iter().map(|&(k, ss, s, q)| k.powf(b) * (ss - (mf - 2.0) / mf * s - 2.0 / mf * q)))
}

/// `sum_i kappa_i int (S_Sigma - (m-2)(m-1))` from `(kappa, int S_Sigma, area)`.
pub fn chrusciel_value(m: usize, comps: &[(f64, f64, f64)]) -> f64 {
    let c = ((m - 2) * (m - 1)) as f64;
    compensated_sum(comps.iter().map(|&(k, ss, a)| k * (ss - c * a)))
}

#[derive(Clone, Debug, Serialize)]
pub struct BghRow {
    pub label: String,
    pub kappa: f64,
    pub int_s_sigma: f64,
    pub int_s: f64,
    pub int_tr_q: f64,
    pub area: f64,
    pub weighted: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BghHypotheses {
    pub lambda_constant: bool,
    pub lambda_spread: f64,
    pub b_admissible: bool,
    pub q_psd: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BghReport {
    pub triple: String,
    pub b: f64,
    pub rows: Vec<BghRow>,
    pub value: f64,
    pub scale: f64,
    pub nonneg: bool,
    pub equality_case: bool,
    pub hypotheses: BghHypotheses,
    /// The `b = 1` comparison expression with `S = m(m-1)`, when `b = 1`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chrusciel: Option<f64>,
    pub warnings: Vec<String>,
    pub verdict: Verdict,
}

/// Evaluates `V(b)` on precomputed boundary data.
pub fn bgh_functional(data: &BoundaryData, b: f64, tol: &Tolerances) -> BghReport {
    let m = data.dim;
    let rows: Vec<BghRow> = data
        .components
        .iter()
        .map(|c| BghRow {
            label: c.label.clone(),
            kappa: c.kappa,
            int_s_sigma: c.int_s_sigma,
            int_s: c.int_s,
            int_tr_q: c.int_tr_q,
            area: c.area,
            weighted: c.kappa.powf(b) * c.integrand(m),
        })
        .collect();
    let comps: Vec<(f64, f64, f64, f64)> = rows.iter().map(|r| (r.kappa, r.int_s_sigma, r.int_s, r.int_tr_q)).collect();
    let value = bgh_value(m, &comps, b);
    let mf = m as f64;
    let scale = rows
        .iter()
        .map(|r| r.kappa.powf(b) * (r.int_s_sigma.abs() + (mf - 2.0) / mf * r.int_s.abs() + 2.0 / mf * r.int_tr_q.abs()))
        .sum::<f64>()
        .max(1.0);
    let sig = &data.interior;
    let hyp = BghHypotheses {
        lambda_constant: sig.lambda.is_constant,
        lambda_spread: sig.lambda.spread,
        b_admissible: b >= -1.0 / (mf - 1.0),
        q_psd: sig.min_q_eigenvalue >= -tol.kernel.max(tol.psd_slack),
    };
    let mut warnings = Vec::new();
    if !hyp.lambda_constant {
        warnings.push(format!("Lambda is not constant (spread {:.3e})", sig.lambda.spread));
    }
    if !hyp.b_admissible {
        warnings.push(format!("b = {b} is below -1/(m-1)"));
    }
    if !hyp.q_psd {
        warnings.push(format!("Q is not positive semi-definite (min eigenvalue {:.3e})", sig.min_q_eigenvalue));
    }
    // the inequality is only asserted under its hypotheses
    let nonneg = value >= -tol.cert * scale;
    let rigid = sig.max_hess_traceless < tol.cert && sig.max_q < tol.cert;
    let equality_case = value.abs() < tol.cert * scale && rigid;
    let applicable = hyp.lambda_constant && hyp.b_admissible && hyp.q_psd;
    let verdict = if applicable { Verdict::from_bool(nonneg) } else { Verdict::NotApplicable };
    let chrusciel = (b == 1.0).then(|| {
        let c: Vec<(f64, f64, f64)> = rows.iter().map(|r| (r.kappa, r.int_s_sigma, r.area)).collect();
        chrusciel_value(m, &c)
    });
    BghReport {
        triple: data.triple.clone(),
        b,
        rows,
        value,
        scale,
        nonneg,
        equality_case,
        hypotheses: hyp,
        chrusciel,
        warnings,
        verdict,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub triple: String,
    pub a: f64,
    /// `int_bd <X, n_out>`.
    pub lhs: f64,
    /// `int_M div X`.
    pub rhs: f64,
    pub residual: f64,
    pub scale: f64,
    pub min_div: f64,
    pub hypothesis_ok: bool,
    pub threshold: f64,
    pub verdict: Verdict,
}

/// `X = (2F)^a grad F / u` with `F = |grad u|^2/2 + Lambda u^2/(2m)`; the
/// boundary flux and the volume integral of `div X` are computed separately.
pub fn divergence_audit(t: &SubstaticTriple<f64>, a: f64, tol: &Tolerances, seed: u64) -> Result<AuditReport> {
    let m = t.dim();
    let mf = m as f64;
    let lambda = t.require_constant_lambda(200, seed, tol.constancy)?;
    let region = t.volume_box.clone().ok_or_else(|| Error::Invalid(format!("{} has no volume box", t.name)))?;
    if t.boundary.is_empty() {
        return Err(Error::NoBoundary);
    }
    let f = t.f_field(lambda);
    let chart = t.chart.clone();
    let u = t.u.clone();
    let x_field = move |q: &[f64]| -> Vec<f64> {
        let df = chart.scalar_d(f.as_ref(), q, Level::Inner);
        let fv = f(q);
        let uq = u(q);
        let c = (2.0 * fv).powf(a) / uq;
        match chart.metric_raw(q).inverse() {
            Some(gi) => gi.mul_vec(&df).into_iter().map(|v| v * c).collect(),
            None => vec![f64::NAN; q.len()],
        }
    };

    // div X carries 1/u, so quadrature nodes next to {u = 0} amplify
    // differencing error. Integrate over the collar-free region
    // M_delta = {distance to each face >= delta} and extrapolate delta -> 0.
    let shrunk = |delta: f64| -> Result<Vec<f64>> {
        let mut bx = region.clone();
        for b in &t.boundary {
            if let Some((k, v)) = b.surface.face {
                if (bx.lo[k] - v).abs() < 1e-12 {
                    bx.lo[k] = v + delta;
                } else if (bx.hi[k] - v).abs() < 1e-12 {
                    bx.hi[k] = v - delta;
                }
            }
        }
        let vol = t.chart.volume_nodes(&bx, &t.volume_nodes)?;
        let divs: Result<Vec<f64>> = vol.par_iter().map(|(p, _)| t.chart.divergence(&x_field, p, Level::Outer)).collect();
        let divs = divs?;
        Ok(vec![compensated_sum(divs.iter().zip(&vol).map(|(d, (_, w))| d * w))])
    };
    // both sides extrapolate over a collar of width 4 d; half the default
    // spacing keeps the d^4 truncation below the certification threshold
    let d = t.extrap_d * 0.5;
    let mut cached = Vec::new();
    for k in 1..=4 {
        cached.push(shrunk(d * k as f64)?[0]);
    }
    let rhs = extrapolate(&|s: f64| Ok(vec![cached[((s / d).round() as usize).clamp(1, 4) - 1]]), d)?[0];

    let mut flux_terms = Vec::new();
    for b in &t.boundary {
        let (axis, _) = b.surface.face.ok_or_else(|| Error::Invalid("flux audit needs coordinate-face boundaries".into()))?;
        let inward_sign = b.surface.inward_direction(&b.surface.param.centre())[axis].signum();
        let quad = b.surface.area_nodes(&t.chart, &b.nodes)?;
        let vals: Result<Vec<f64>> = quad
            .par_iter()
            .map(|(y, w)| {
                let sample = |s: f64| -> Result<Vec<f64>> {
                    let p = b.surface.inward_point(y, s);
                    let gi = t.chart.metric(&p)?.inverse().ok_or(Error::SingularMetric { point: p.clone() })?;
                    // outward unit conormal of the parallel face through p
                    let mut n_low = vec![0.0; m];
                    n_low[axis] = -inward_sign;
                    let l = gi.bilinear(&n_low, &n_low).sqrt();
                    let xv = x_field(&p);
                    Ok(vec![crate::linalg::dot(&n_low, &xv) / l])
                };
                Ok(extrapolate(&sample, d)?[0] * w)
            })
            .collect();
        flux_terms.extend(vals?);
    }
    let lhs = compensated_sum(flux_terms);
    let samples = t.samples(256, seed);
    let min_div = samples
        .par_iter()
        .map(|p| t.chart.divergence(&x_field, p, Level::Outer))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    let scale = lhs.abs().max(rhs.abs()).max(1.0);
    let residual = (lhs - rhs).abs() / scale;
    let threshold = -mf / (2.0 * (mf - 1.0));
    let hypothesis_ok = a >= threshold;
    let ok = residual < tol.cert && (!hypothesis_ok || min_div >= -tol.cert);
    Ok(AuditReport {
        triple: t.name.clone(),
        a,
        lhs,
        rhs,
        residual,
        scale,
        min_div,
        hypothesis_ok,
        threshold,
        verdict: Verdict::from_bool(ok),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GravityGroup {
    pub kappa: f64,
    pub labels: Vec<String>,
    pub area: f64,
    pub euler: Vec<i64>,
    pub euler_residual: f64,
    pub has_sphere: bool,
    pub within_bound: bool,
    pub at_bound: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Corollary3d {
    pub s_minus_tr_q: f64,
    pub positive: bool,
    pub bound: f64,
    pub groups: Vec<GravityGroup>,
    /// Groups (0-based, ascending gravity) on which the bound and sphere claim were asserted.
    pub asserted: Vec<usize>,
    pub all_equal: bool,
    /// Equality everywhere together with the rigidity signals.
    pub hemisphere_signals: bool,
    pub verdict: Verdict,
}

/// Area bound per surface-gravity group for one or several compact triples
/// sharing the same constant `S - tr Q`.
pub fn corollary_3d(parts: &[&BoundaryData], tol: &Tolerances) -> Result<Corollary3d> {
    if parts.is_empty() {
        return Err(Error::NoBoundary);
    }
    for d in parts {
        if d.dim != 3 {
            return Err(Error::WrongDimension { expected: 3, got: d.dim });
        }
        if d.components.is_empty() {
            return Err(Error::NoBoundary);
        }
        if !d.interior.lambda.is_constant {
            return Err(Error::LambdaNotConstant { spread: d.interior.lambda.spread, tol: tol.constancy });
        }
    }
    let lam = parts[0].interior.lambda.lambda;
    if let Some(d) = parts.iter().find(|d| (d.interior.lambda.lambda - lam).abs() > tol.constancy) {
        return Err(Error::LambdaNotConstant { spread: (d.interior.lambda.lambda - lam).abs(), tol: tol.constancy });
    }
    let s_minus = 2.0 * lam;
    let bound = 24.0 * PI / s_minus;

    let mut comps: Vec<&ComponentData> = parts.iter().flat_map(|d| d.components.iter()).collect();
    comps.sort_by(|a, b| a.kappa.partial_cmp(&b.kappa).unwrap_or(std::cmp::Ordering::Equal));
    let mut groups: Vec<GravityGroup> = Vec::new();
    for c in comps {
        let (chi, res) = c.euler();
        match groups.last_mut() {
            Some(g) if (c.kappa - g.kappa).abs() < tol.constancy.max(1e-4 * g.kappa) => {
                g.labels.push(c.label.clone());
                g.area += c.area;
                g.euler.push(chi);
                g.euler_residual = g.euler_residual.max(res);
            }
            _ => groups.push(GravityGroup {
                kappa: c.kappa,
                labels: vec![c.label.clone()],
                area: c.area,
                euler: vec![chi],
                euler_residual: res,
                has_sphere: false,
                within_bound: false,
                at_bound: false,
            }),
        }
    }
    for g in &mut groups {
        g.has_sphere = g.euler.iter().any(|&c| c == 2);
        g.within_bound = g.area <= bound * (1.0 + tol.cert);
        g.at_bound = (g.area - bound).abs() <= tol.cert * bound;
    }
    // (i) for the top group, then descend while every group above is at the bound
    let j = groups.len() - 1;
    let mut asserted = vec![j];
    let mut i = j;
    while i > 0 && groups[i..].iter().all(|g| g.at_bound) {
        asserted.push(i - 1);
        i -= 1;
    }
    let all_equal = groups.iter().all(|g| g.at_bound);
    let rigid = parts.iter().all(|d| d.interior.max_hess_traceless < tol.cert && d.interior.max_q < tol.cert);
    let topo_ok = groups.iter().all(|g| g.euler_residual <= 0.1);
    let claims_ok = asserted.iter().all(|&a| groups[a].has_sphere && groups[a].within_bound);
    let equality_ok = !all_equal || rigid;
    let ok = s_minus > 0.0 && topo_ok && claims_ok && equality_ok;
    Ok(Corollary3d {
        s_minus_tr_q: s_minus,
        positive: s_minus > 0.0,
        bound,
        groups,
        asserted,
        all_equal,
        hemisphere_signals: all_equal && rigid,
        verdict: Verdict::from_bool(ok),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ScalarConstraint {
    pub triple: String,
    pub lambda: f64,
    pub min_slack: f64,
    pub min_at: Vec<f64>,
    pub verdict: Verdict,
}

/// `S_bd - Lambda (m-1)(m-2)/m - tr Q >= 0` on the boundary, for unit surface gravities.
pub fn boundary_scalar_constraint(data: &BoundaryData, tol: &Tolerances) -> Result<ScalarConstraint> {
    for c in &data.components {
        if (c.kappa - 1.0).abs() > tol.constancy.max(1e-5) {
            return Err(Error::GravityNotNormalized { kappa: c.kappa });
        }
    }
    if !data.interior.lambda.is_constant {
        return Err(Error::LambdaNotConstant { spread: data.interior.lambda.spread, tol: tol.constancy });
    }
    let mf = data.dim as f64;
    let lam = data.interior.lambda.lambda;
    let shift = lam * (mf - 1.0) * (mf - 2.0) / mf;
    let mut min = f64::INFINITY;
    let mut at = Vec::new();
    for c in &data.components {
        for n in &c.nodes {
            let slack = n.s_sigma - shift - n.tr_q;
            if slack < min {
                min = slack;
                at = n.y.clone();
            }
        }
    }
    Ok(ScalarConstraint {
        triple: data.triple.clone(),
        lambda: lam,
        min_slack: min,
        min_at: at,
        verdict: Verdict::from_bool(min >= -tol.cert),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn hemisphere_equality() {
        let t = catalog::load("hemisphere-3").unwrap().triple;
        let d = boundary_data(&t, &tol(), 64, 0, 1).unwrap();
        let c = &d.components[0];
        assert!((c.area - 4.0 * PI).abs() < 1e-6 * 4.0 * PI);
        assert!((c.kappa - 1.0).abs() < 1e-6);
        assert_eq!(c.euler().0, 2);
        for b in [-0.49, 0.0, 1.0, 5.0] {
            let r = bgh_functional(&d, b, &tol());
            assert!(r.value.abs() < 1e-5, "b = {b}: {}", r.value);
            assert!(r.equality_case && r.verdict == Verdict::Pass);
        }
        let r = bgh_functional(&d, 1.0, &tol());
        assert!((r.chrusciel.unwrap() - r.value).abs() < 1e-5);
        let cor = corollary_3d(&[&d], &tol()).unwrap();
        assert!((cor.bound - 4.0 * PI).abs() < 1e-4);
        assert!(cor.all_equal && cor.hemisphere_signals && cor.verdict == Verdict::Pass);
        let sc = boundary_scalar_constraint(&d, &tol()).unwrap();
        assert!(sc.min_slack.abs() < 1e-5 && sc.verdict == Verdict::Pass);
    }

    #[test]
    fn deformed_hemisphere_is_strict() {
        let t = catalog::load("deformed-hemisphere-0.05").unwrap().triple;
        let d = boundary_data(&t, &tol(), 64, 0, 1).unwrap();
        let (k, v0) = catalog::deformed_hemisphere_boundary(0.05);
        assert!((d.components[0].kappa - k).abs() < 1e-6);
        let r = bgh_functional(&d, 0.0, &tol());
        assert!((r.value - v0).abs() < 1e-5, "{} vs {v0}", r.value);
        assert!(!r.equality_case && r.verdict == Verdict::Pass);
        let r2 = bgh_functional(&d, 2.0, &tol());
        assert!((r2.value - k * k * v0).abs() < 1e-5);
        let cor = corollary_3d(&[&d], &tol()).unwrap();
        assert!(d.components[0].area < cor.bound && !cor.all_equal);
        assert!(matches!(boundary_scalar_constraint(&d, &tol()), Err(Error::GravityNotNormalized { .. })));
        let t1 = t.rescale_lapse(1.0 / k);
        let d1 = boundary_data(&t1, &tol(), 64, 0, 1).unwrap();
        let sc = boundary_scalar_constraint(&d1, &tol()).unwrap();
        let eps: f64 = 0.05;
        assert!((sc.min_slack - (2.0 * eps - 4.0 * eps * eps / (1.0 + eps))).abs() < 1e-5, "{sc:?}");
    }

    #[test]
    fn two_group_union_orders_by_gravity() {
        let parts = catalog::two_group().unwrap();
        let data: Vec<BoundaryData> = parts.iter().map(|e| boundary_data(&e.triple, &tol(), 64, 0, 1).unwrap()).collect();
        let refs: Vec<&BoundaryData> = data.iter().collect();
        let cor = corollary_3d(&refs, &tol()).unwrap();
        assert_eq!(cor.groups.len(), 2);
        assert!(cor.groups[0].kappa < cor.groups[1].kappa);
        assert_eq!(cor.groups[1].labels.len(), 2);
        assert!((cor.bound - 12.0 * PI).abs() < 1e-4);
        assert!(cor.groups[0].at_bound && !cor.groups[1].at_bound);
        assert_eq!(cor.asserted, vec![1]);
        assert_eq!(cor.verdict, Verdict::Pass);
    }

    #[test]
    fn flat_cylinder_constraint_slack_is_zero() {
        let t = catalog::load("flat-cylinder").unwrap().triple;
        let d = boundary_data(&t, &tol(), 32, 0, 1).unwrap();
        let sc = boundary_scalar_constraint(&d, &tol()).unwrap();
        assert!(sc.min_slack.abs() < 1e-8);
    }

    #[test]
    fn divergence_audit_balances() {
        let t = catalog::load("deformed-hemisphere-0.05").unwrap().triple;
        for a in [-0.7, 0.0, 1.0] {
            let r = divergence_audit(&t, a, &tol(), 0).unwrap();
            assert!(r.residual < 1e-5 && r.min_div >= -1e-5, "{r:?}");
            assert!(r.lhs.abs() > 1e-3 && r.verdict == Verdict::Pass);
        }
        let r = divergence_audit(&t, -1.0, &tol(), 0).unwrap();
        assert!(!r.hypothesis_ok);
        let h = catalog::load("hemisphere-3").unwrap().triple;
        let r = divergence_audit(&h, 0.5, &tol(), 0).unwrap();
        assert!(r.lhs.abs() < 1e-6 && r.rhs.abs() < 1e-6, "{r:?}");
    }

    #[test]
    fn chrusciel_reduction_is_exact() {
        let comps = [(0.7, 3.1, 0.0, 0.0), (1.3, 9.4, 0.0, 0.0)];
        let areas = [0.9, 1.7];
        let m = 3;
        let s = 6.0;
        let with_s: Vec<(f64, f64, f64, f64)> = comps.iter().zip(&areas).map(|(c, a)| (c.0, c.1, s * a, 0.0)).collect();
        let v = bgh_value(m, &with_s, 1.0);
        let c: Vec<(f64, f64, f64)> = comps.iter().zip(&areas).map(|(c, a)| (c.0, c.1, *a)).collect();
        assert!((v - chrusciel_value(m, &c)).abs() < 1e-14);
    }
}
