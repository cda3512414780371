//! Named fixture triples with their known values.

pub mod models;
mod perturb;

use std::f64::consts::PI;

use serde::Serialize;

pub use perturb::{apply_bump, perturb, random_bump, Bump};

use crate::error::{Error, Result};
use crate::triple::SubstaticTriple;

/// How a known value is established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    /// Closed-form evaluation of the defining formulas.
    Analytic,
    /// Fixed by a chosen normalisation (e.g. of the lapse).
    Normalization,
    /// True by construction of the fixture, nothing to compute.
    Construction,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Known {
    pub value: f64,
    pub basis: Basis,
}

fn an(value: f64) -> Known {
    Known { value, basis: Basis::Analytic }
}

/// Reference values for a catalog entry; `None` means not applicable.
#[derive(Clone, Debug, Default, Serialize)]
pub struct GroundTruth {
    pub scalar_curvature: Option<Known>,
    pub lambda: Option<Known>,
    pub surface_gravities: Vec<Known>,
    pub boundary_areas: Vec<Known>,
    /// `Q` vanishes identically.
    pub q_zero: bool,
    /// `Q >= 0` everywhere.
    pub substatic: Option<bool>,
    /// Realises equality in the boundary inequality.
    pub equality_case: bool,
    pub u_complete: Option<bool>,
    pub compact: bool,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub description: String,
    pub triple: SubstaticTriple<f64>,
    pub truth: GroundTruth,
}

/// `(name, description)` of every entry.
pub const ENTRIES: &[(&str, &str)] = &[
    ("hemisphere-3", "unit round hemisphere, u = cos r"),
    ("hemisphere-sqrt3", "round hemisphere of radius sqrt 3, u = cos(r/sqrt 3)"),
    ("hemisphere-4", "unit round 4-hemisphere, u = cos r"),
    ("schwarzschild-1", "Schwarzschild slice of mass 1, areal chart"),
    ("flat-cylinder", "[0, inf) x T^2 flat, u = s"),
    ("flat-r3", "flat R^3 in spherical coordinates, u = 1"),
    ("flat-cartesian", "flat cube [-1, 1]^3, u = 1"),
    ("electrostatic-toy", "flat annulus with eta = 1/r and u = 1 + r^2 (not a solution)"),
    ("perfect-fluid", "S^3 with u = 1.5 - 0.5 cos r, exact constant-density fluid"),
    ("perfect-fluid-nec-violating", "S^3 with u = -0.045 + cos r on r < 1.4, negative pressure + density"),
    ("deformed-hemisphere-0.05", "hemisphere deformation, eps = 0.05, constant Lambda"),
    ("deformed-hemisphere-0.01", "hemisphere deformation, eps = 0.01, constant Lambda"),
    ("nariai", "[-pi/2, pi/2] x S^2(0.9), u = cos x"),
    ("warped-cylinder", "r(y)^2 ds^2 + flat T^2, u = r(y) s"),
    ("exp-decay", "[0, inf) x T^2 flat, u = exp(-s)"),
    ("hyperbolic-cusp", "dr^2 + e^{2r} flat T^2, u = 1"),
    ("perturbed-cylinder", "flat cylinder with a bump near s = 1.2"),
];

pub fn names() -> Vec<&'static str> {
    ENTRIES.iter().map(|e| e.0).collect()
}

/// Deformed hemisphere boundary data: `(kappa, 4 pi (2 eps - tr Q))`.
pub fn deformed_hemisphere_boundary(eps: f64) -> (f64, f64) {
    let kappa = (4.0 - 2.0 * eps - 2.0 * eps * eps).sqrt() / 2.0;
    let trq = 4.0 * eps * eps / (1.0 + eps);
    (kappa, 4.0 * PI * (2.0 * eps - trq))
}

fn truth_for(name: &str) -> GroundTruth {
    let mut t = GroundTruth::default();
    match name {
        "hemisphere-3" | "hemisphere-sqrt3" | "hemisphere-4" => {
            let (m, r): (f64, f64) = match name {
                "hemisphere-3" => (3.0, 1.0),
                "hemisphere-4" => (4.0, 1.0),
                _ => (3.0, 3f64.sqrt()),
            };
            t.scalar_curvature = Some(an(m * (m - 1.0) / (r * r)));
            t.lambda = Some(an(m / (r * r)));
            t.surface_gravities = vec![Known { value: 1.0 / r, basis: Basis::Normalization }];
            // area of S^{m-1}(r)
            let area = if m == 3.0 { 4.0 * PI * r * r } else { 2.0 * PI * PI * r.powi(3) };
            t.boundary_areas = vec![an(area)];
            t.q_zero = true;
            t.substatic = Some(true);
            t.equality_case = true;
            t.compact = true;
        }
        "schwarzschild-1" => {
            t.scalar_curvature = Some(an(0.0));
            t.lambda = Some(an(0.0));
            t.surface_gravities = vec![an(0.25)];
            t.boundary_areas = vec![an(16.0 * PI)];
            t.q_zero = true;
            t.substatic = Some(true);
            t.u_complete = Some(true);
        }
        "flat-cylinder" => {
            t.scalar_curvature = Some(an(0.0));
            t.lambda = Some(an(0.0));
            t.surface_gravities = vec![an(1.0)];
            t.boundary_areas = vec![an(1.0)];
            t.q_zero = true;
            t.substatic = Some(true);
            t.u_complete = Some(true);
        }
        "flat-r3" | "flat-cartesian" => {
            t.scalar_curvature = Some(an(0.0));
            t.lambda = Some(an(0.0));
            t.q_zero = true;
            t.substatic = Some(true);
            t.compact = name == "flat-cartesian";
        }
        "perfect-fluid" => {
            t.scalar_curvature = Some(an(6.0));
            t.substatic = Some(true);
            t.compact = true;
        }
        "perfect-fluid-nec-violating" => {
            t.scalar_curvature = Some(an(6.0));
            t.substatic = Some(false);
        }
        "deformed-hemisphere-0.05" | "deformed-hemisphere-0.01" => {
            let eps = if name.ends_with("0.05") { 0.05 } else { 0.01 };
            let (kappa, _) = deformed_hemisphere_boundary(eps);
            t.lambda = Some(an(3.0 * (1.0 - eps)));
            t.surface_gravities = vec![an(kappa)];
            t.boundary_areas = vec![an(4.0 * PI)];
            t.substatic = Some(true);
            t.compact = true;
        }
        "nariai" => {
            let rho: f64 = 0.9;
            t.scalar_curvature = Some(an(2.0 / (rho * rho)));
            t.lambda = Some(an(1.0));
            t.surface_gravities = vec![an(1.0), an(1.0)];
            t.boundary_areas = vec![an(4.0 * PI * rho * rho), an(4.0 * PI * rho * rho)];
            t.substatic = Some(true);
            t.compact = true;
        }
        "exp-decay" => {
            t.scalar_curvature = Some(an(0.0));
            t.substatic = Some(true);
            t.u_complete = Some(false);
        }
        "hyperbolic-cusp" => {
            t.scalar_curvature = Some(an(-6.0));
            t.substatic = Some(false);
        }
        "electrostatic-toy" | "warped-cylinder" | "perturbed-cylinder" => {}
        _ => {}
    }
    t
}

fn build(name: &str) -> Option<SubstaticTriple<f64>> {
    Some(match name {
        "hemisphere-3" => models::hemisphere(3, 1.0),
        "hemisphere-sqrt3" => models::hemisphere(3, 3f64.sqrt()),
        "hemisphere-4" => models::hemisphere(4, 1.0),
        "schwarzschild-1" => models::schwarzschild(1.0),
        "flat-cylinder" => models::flat_cylinder(1.0),
        "flat-r3" => models::flat_spherical(),
        "flat-cartesian" => models::flat_cartesian(),
        "electrostatic-toy" => models::electrostatic_toy(1.0),
        "perfect-fluid" => models::perfect_fluid_sphere(name, 1.0, 1.5, 0.5, PI),
        "perfect-fluid-nec-violating" => models::perfect_fluid_sphere(name, 1.0, -0.045, -1.0, 1.4),
        "deformed-hemisphere-0.05" => models::deformed_hemisphere(0.05),
        "deformed-hemisphere-0.01" => models::deformed_hemisphere(0.01),
        "nariai" => models::nariai_product(1.0, 0.9),
        "warped-cylinder" => models::warped_cylinder(0.3, 1.0),
        "exp-decay" => models::exp_decay_toy(),
        "hyperbolic-cusp" => models::hyperbolic_cusp(),
        "perturbed-cylinder" => {
            let base = models::flat_cylinder(1.0);
            let bump = Bump {
                centre: vec![1.2, 0.5, 0.5],
                width: 0.4,
                amplitude: 0.05,
                metric_dir: crate::linalg::Mat::diag(&[1.0, 0.5, -0.5]),
                lapse_coeff: 0.5,
            };
            let mut t = apply_bump(&base, &bump).ok()?;
            t.name = name.to_string();
            t
        }
        _ => return None,
    })
}

pub fn load(name: &str) -> Result<CatalogEntry> {
    let desc = ENTRIES.iter().find(|e| e.0 == name).ok_or_else(|| Error::UnknownEntry(name.to_string()))?;
    let mut triple = build(name).ok_or_else(|| Error::UnknownEntry(name.to_string()))?;
    triple.name = name.to_string();
    Ok(CatalogEntry { name: name.to_string(), description: desc.1.to_string(), triple, truth: truth_for(name) })
}

/// The two-group union used for multi-group boundary checks: the Nariai
/// product and the radius `sqrt 3` hemisphere, both with `Lambda = 1`.
pub fn two_group() -> Result<Vec<CatalogEntry>> {
    Ok(vec![load("nariai")?, load("hemisphere-sqrt3")?])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_loads() {
        for n in names() {
            let e = load(n).unwrap();
            assert_eq!(e.name, n);
        }
        assert!(matches!(load("nope"), Err(Error::UnknownEntry(_))));
    }

    #[test]
    fn deformed_boundary_frozen_values() {
        let (k, v) = deformed_hemisphere_boundary(0.01);
        assert!((k - 0.997_471_804_112_777_9).abs() < 1e-15);
        assert!((v - 0.246_350_631_845_853_09).abs() < 1e-14);
        let (k, v) = deformed_hemisphere_boundary(0.05);
        assert!((k - 0.986_787_717_799_527_5).abs() < 1e-15);
        assert!((v - 1.136_957_341_299_163_3).abs() < 1e-13);
    }

    #[test]
    fn zero_amplitude_perturbation_is_identity() {
        let e = load("hemisphere-3").unwrap();
        let p = perturb(&e.triple, 0.0, 7).unwrap();
        let x = [0.4, 1.0, 2.0];
        assert_eq!(p.chart.metric_raw(&x), e.triple.chart.metric_raw(&x));
        assert_eq!(p.lapse(&x), e.triple.lapse(&x));
    }

    #[test]
    fn perturbation_is_supported_in_a_ball() {
        let e = load("flat-cartesian").unwrap();
        let p = perturb(&e.triple, 0.1, 11).unwrap();
        let far = [-0.99, -0.99, -0.99];
        assert_eq!(p.chart.metric_raw(&far), e.triple.chart.metric_raw(&far));
        let moved = p.samples(64, 0).iter().any(|x| p.chart.metric_raw(x) != e.triple.chart.metric_raw(x));
        assert!(moved);
    }

    #[test]
    fn analytic_partials_match_differences() {
        let h = 1e-5;
        for n in ["hemisphere-3", "hemisphere-4", "hemisphere-sqrt3", "schwarzschild-1", "flat-r3", "electrostatic-toy", "perfect-fluid"] {
            let t = load(n).unwrap().triple;
            for p in t.samples(6, 3) {
                let jet = t.chart.metric_jet1(&p).unwrap();
                for k in 0..p.len() {
                    let (mut a, mut b) = (p.clone(), p.clone());
                    a[k] += h;
                    b[k] -= h;
                    let fd = t.chart.metric_raw(&a).sub(&t.chart.metric_raw(&b)).scale(0.5 / h);
                    let err = fd.sub(&jet.dg[k]).max_abs();
                    assert!(err < 1e-7, "{n} axis {k} at {p:?}: {err:e}");
                }
            }
        }
    }

    #[test]
    fn equality_case_q_stays_within_psd_slack() {
        for n in ["hemisphere-3", "hemisphere-4", "schwarzschild-1"] {
            let t = load(n).unwrap().triple;
            let worst = t.samples(2000, 0).iter().map(|p| t.q_eigenvalues(p).unwrap()[0]).fold(f64::INFINITY, f64::min);
            assert!(worst > -1e-8, "{n}: {worst:e}");
        }
    }
}
