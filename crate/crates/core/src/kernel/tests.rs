use std::f64::consts::PI;
use std::sync::Arc;

use super::*;
use crate::linalg::Mat;

fn s3() -> Chart<f64> {
    let domain = Domain::new(vec![
        Axis::new("r", 0.0, PI).singular_at(Some(0.0), Some(PI)),
        Axis::new("theta", 0.0, PI).singular_at(Some(0.0), Some(PI)),
        Axis::periodic("phi", 0.0, 2.0 * PI),
    ]);
    Chart::new(
        "S3",
        domain,
        Arc::new(|p: &[f64]| {
            let s = p[0].sin().powi(2);
            Mat::diag(&[1.0, s, s * p[1].sin().powi(2)])
        }),
    )
}

fn schwarzschild() -> Chart<f64> {
    let domain = Domain::new(vec![
        Axis::new("r", 2.0, 50.0).singular_at(Some(2.0), None),
        Axis::new("theta", 0.0, PI).singular_at(Some(0.0), Some(PI)),
        Axis::periodic("phi", 0.0, 2.0 * PI),
    ]);
    Chart::new(
        "schw",
        domain,
        Arc::new(|p: &[f64]| {
            let r = p[0];
            Mat::diag(&[1.0 / (1.0 - 2.0 / r), r * r, r * r * p[1].sin().powi(2)])
        }),
    )
}

#[test]
fn christoffel_examples() {
    let g = s3().christoffel(&[PI / 4.0, PI / 3.0, 0.2]).unwrap();
    assert!((g.get(0, 1, 1) + 0.5).abs() < 1e-9);
    let g = schwarzschild().christoffel(&[4.0, 1.0, 0.0]).unwrap();
    assert!((g.get(0, 0, 0) + 0.125).abs() < 1e-9);
}

#[test]
fn sphere_ricci_is_twice_metric() {
    let c = s3();
    for p in [[0.7, 1.1, 0.3], [2.0, 0.5, 5.0], [1.3, 2.6, 1.0]] {
        let k = c.curvature(&p).unwrap();
        let diff = k.ricci.sub(&k.g.scale(2.0)).max_abs();
        assert!(diff < 1e-7, "{diff}");
        assert!((k.scalar - 6.0).abs() < 1e-7);
        // sectional curvature one: R^r_{theta r theta} = g_theta_theta
        assert!((k.riemann(0, 1, 0, 1) - k.g[(1, 1)]).abs() < 1e-7);
    }
}

#[test]
fn schwarzschild_slice_is_scalar_flat() {
    let c = schwarzschild();
    for r in [2.05, 3.0, 10.0] {
        let k = c.curvature(&[r, 1.2, 0.0]).unwrap();
        // R_rr = -2M/(r^2 (r - 2M)) sets the scale
        let scale = 2.0 / (r * r * (r - 2.0));
        assert!(k.scalar.abs() / scale < 1e-7, "r = {r}: {}", k.scalar);
        assert!((k.ricci[(0, 0)] + scale).abs() / scale < 1e-7);
    }
}

#[test]
fn laplacian_and_divergence_agree() {
    let c = s3();
    let f = |p: &[f64]| p[0].cos();
    let p = [0.9, 1.0, 0.4];
    // cos r is a first eigenfunction on S^3: Delta f = -3 f
    let lap = c.laplacian(&f, &p).unwrap();
    assert!((lap + 3.0 * f(&p)).abs() < 1e-8);
    let grad = |q: &[f64]| c.gradient(&f, q, Level::Inner).unwrap();
    let div = c.divergence(&grad, &p, Level::Outer).unwrap();
    assert!((div - lap).abs() < 1e-7);
}

#[test]
fn tensor_divergence_of_metric_vanishes() {
    let c = s3();
    let g = |q: &[f64]| c.metric_raw(q);
    let d = c.divergence_sym2(&g, &[1.0, 1.0, 1.0], Level::Outer).unwrap();
    assert!(d.iter().all(|x| x.abs() < 1e-8), "{d:?}");
}

#[test]
fn unit_sphere_area() {
    let flat = Chart::new(
        "flat-spherical",
        Domain::new(vec![
            Axis::new("r", 0.0, 5.0).singular_at(Some(0.0), None),
            Axis::new("theta", 0.0, PI),
            Axis::periodic("phi", 0.0, 2.0 * PI),
        ]),
        Arc::new(|p: &[f64]| Mat::diag(&[1.0, p[0] * p[0], (p[0] * p[1].sin()).powi(2)])),
    );
    let sphere = Surface::coordinate_face(
        "r=1",
        Domain::new(vec![Axis::new("theta", 0.0, PI), Axis::periodic("phi", 0.0, 2.0 * PI)]),
        0,
        1.0,
        -1.0,
    );
    let a = sphere.area(&flat, &[24, 8]).unwrap();
    assert!((a - 4.0 * PI).abs() < 1e-12);
    let h = sphere.induced_chart(&flat);
    let k = h.scalar_curvature(&[1.0, 0.3]).unwrap();
    assert!((k - 2.0).abs() < 1e-7);
    let nu = sphere.unit_normal(&flat, &[1.0, 0.3]).unwrap();
    assert!((nu[0] + 1.0).abs() < 1e-14);
    let vol = flat
        .volume_integral(&SampleBox::new(vec![0.0, 0.0, 0.0], vec![1.0, PI, 2.0 * PI]), &[8, 16, 4], &|_| Ok(1.0))
        .unwrap();
    assert!((vol - 4.0 * PI / 3.0).abs() < 1e-12);
}

#[test]
fn f32_chart_works() {
    let c: Chart<f32> = Chart::new(
        "S2",
        Domain::new(vec![Axis::new("theta", 0.0, 3.14159), Axis::periodic("phi", 0.0, 6.2831855)]),
        Arc::new(|p: &[f32]| Mat::diag(&[1.0, p[0].sin().powi(2)])),
    )
    .with_steps(StepConfig { inner: 0.05, outer: 0.1, ..StepConfig::default() });
    let s = c.scalar_curvature(&[1.0, 0.5]).unwrap();
    assert!((s - 2.0).abs() < 1e-2, "{s}");
}
