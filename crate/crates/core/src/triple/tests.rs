use std::f64::consts::PI;
use std::sync::Arc;

use super::*;
use crate::catalog::{self, models};
use crate::kernel::chart::Domain;
use crate::kernel::Axis;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + b.abs())
}

#[test]
fn hemisphere_has_vanishing_q_and_lambda_three() {
    let t = models::hemisphere::<f64>(3, 1.0);
    for p in t.samples(20, 1) {
        let d = t.point_data(&p).unwrap();
        assert!(d.q.max_abs() < 1e-6, "Q = {:?} at {p:?}", d.q);
        assert!(close(d.lambda(), 3.0, 1e-6));
        assert!(d.trace_identity_residual() < 1e-6);
    }
    let r = t.lambda_constant(50, 3, 1e-5).unwrap();
    assert!(r.is_constant && close(r.lambda, 3.0, 1e-6));
}

#[test]
fn perfect_fluid_q_matches_declared() {
    let e = catalog::load("perfect-fluid").unwrap();
    let q = e.triple.source.declared_q.clone().unwrap();
    for p in e.triple.samples(20, 2) {
        let d = e.triple.point_data(&p).unwrap();
        assert!(d.q.sub(&q(&p)).max_abs() < 1e-6);
    }
    assert!(e.triple.require_constant_lambda(30, 0, 1e-5).is_err());
}

#[test]
fn optical_weighted_ricci_equals_q() {
    for name in ["perfect-fluid", "deformed-hemisphere-0.05"] {
        let t = catalog::load(name).unwrap().triple;
        let view = t.optical_view();
        for p in t.samples(8, 5) {
            let q = t.q_tensor(&p).unwrap();
            let rf = view.weighted_ricci(&p).unwrap();
            let scale = 1.0 + q.max_abs();
            assert!(rf.sub(&q).max_abs() / scale < 1e-5, "{name} at {p:?}");
        }
    }
}

#[test]
fn nec_passes_on_fluid_and_fails_on_violating_variant() {
    let ok = catalog::load("perfect-fluid").unwrap().triple;
    let r = ok.nec_check(&[1.0, 1.0, 1.0], 64, QSelect::Geometric, 1e-8, 1e-5).unwrap();
    assert!(r.pass && r.energy_pass, "{r:?}");

    let bad = catalog::load("perfect-fluid-nec-violating").unwrap().triple;
    let r = bad.nec_check(&[0.3349, 1.0, 1.0], 64, QSelect::Declared, 1e-8, 1e-5).unwrap();
    assert!(!r.pass);
    assert!(close(r.min_eigenvalue, -0.1, 1e-3), "{}", r.min_eigenvalue);
}

#[test]
fn level_set_forms_on_hemisphere() {
    // level sets of cos r are geodesic spheres; nu = -grad u points away from
    // the pole, so A = -cot r h
    let t = models::hemisphere::<f64>(3, 1.0);
    let p = vec![0.7, 1.2, 0.4];
    let ff = t.second_fundamental_forms(&SurfaceSite::Level(p)).unwrap();
    let cot = 0.7f64.cos() / 0.7f64.sin();
    assert!(close(ff.h, -2.0 * cot, 1e-6), "H = {}", ff.h);
    assert!(ff.conformal_residual < 1e-5);
    assert!(ff.hf_residual < 1e-5);
}

fn unit_sphere_face() -> crate::kernel::Surface<f64> {
    let param = Domain::new(vec![
        Axis::new("theta", 0.0, PI).singular_at(Some(0.0), Some(PI)),
        Axis::periodic("phi", 0.0, 2.0 * PI),
    ]);
    crate::kernel::Surface::coordinate_face("r=1", param, 0, 1.0, -1.0)
}

#[test]
fn coordinate_sphere_mean_curvature() {
    let t = models::flat_spherical::<f64>();
    let s = unit_sphere_face();
    let ff = t.second_fundamental_forms(&SurfaceSite::Param { surface: &s, y: vec![1.0, 0.5] }).unwrap();
    assert!(close(ff.h, 2.0, 1e-6), "H = {}", ff.h);
    assert!(ff.hf_residual < 1e-6);
}

#[test]
fn schwarzschild_sphere_weighted_mean_curvature() {
    let t = models::schwarzschild::<f64>(1.0);
    let param = Domain::new(vec![
        Axis::new("theta", 0.0, PI).singular_at(Some(0.0), Some(PI)),
        Axis::periodic("phi", 0.0, 2.0 * PI),
    ]);
    let s = crate::kernel::Surface::coordinate_face("r=5", param, 0, 5.0, -1.0);
    let ff = t.second_fundamental_forms(&SurfaceSite::Param { surface: &s, y: vec![1.1, 0.3] }).unwrap();
    // H = 2 sqrt(1 - 2/r) / r
    assert!(close(ff.h, 2.0 * (1.0 - 0.4f64).sqrt() / 5.0, 1e-6));
    assert!(ff.hf_residual < 1e-6 && ff.conformal_residual < 1e-5);
}

#[test]
fn stability_form_on_unit_sphere() {
    let t = models::flat_spherical::<f64>();
    let s = unit_sphere_face();
    let psi: ScalarField<f64> = Arc::new(|y: &[f64]| y[0].cos());
    let v = t.stability_form(&s, &[32, 24], &psi).unwrap();
    assert!(close(v.gradient_part, 8.0 * PI / 3.0, 1e-6));
    assert!(close(v.potential_part, -8.0 * PI / 3.0, 1e-6));
    assert!(v.value.abs() < 1e-6);
}

#[test]
fn stability_form_vanishes_on_hemisphere_boundary() {
    let t = models::hemisphere::<f64>(3, 1.0);
    let b = &t.boundary[0];
    let psi: ScalarField<f64> = Arc::new(|y: &[f64]| y[0].cos());
    let v = t.stability_form(&b.surface, &b.nodes, &psi).unwrap();
    assert!(v.value.abs() < 1e-12, "{v:?}");
}

#[test]
fn surface_gravity_of_fixtures() {
    let cases = [("hemisphere-3", 1.0), ("schwarzschild-1", 0.25), ("flat-cylinder", 1.0), ("deformed-hemisphere-0.05", 0.986_787_717_799_527_5)];
    for (name, k) in cases {
        let t = catalog::load(name).unwrap().triple;
        let g = t.surface_gravity(0, 1e-5).unwrap();
        assert!(g.constant, "{name}: {g:?}");
        assert!(close(g.kappa, k, 1e-5), "{name}: {}", g.kappa);
    }
}

#[test]
fn rescaling_lapse_scales_gravity_and_keeps_q() {
    let t = models::hemisphere::<f64>(3, 1.0).rescale_lapse(2.0);
    let g = t.surface_gravity(0, 1e-5).unwrap();
    assert!(close(g.kappa, 2.0, 1e-5));
    assert!(t.q_tensor(&[0.5, 1.0, 1.0]).unwrap().max_abs() < 1e-6);
}

#[test]
fn f32_triple_q_is_small() {
    let t = models::hemisphere::<f32>(3, 1.0);
    let d = t.point_data(&[0.6, 1.2, 0.7]).unwrap();
    assert!(d.q.max_abs() < 5e-2, "{:?}", d.q);
    assert!((d.lambda() - 3.0).abs() < 5e-2);
}
