//! Closed-form fixture geometries.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::kernel::calculus::TensorField;
use crate::kernel::chart::{Axis, Chart, Domain, PointFn};
use crate::kernel::sampling::SampleBox;
use crate::kernel::surface::Surface;
use crate::linalg::Mat;
use crate::scalar::{lit, Real};
use crate::triple::{BoundarySurface, MatterSource, SourceKind, SubstaticTriple};

/// Diagonal of the round metric on `S^k` in polar angles `(a_1, ..., a_k)`.
fn sphere_diag<T: Real>(angles: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(angles.len());
    let mut f = T::one();
    for &a in angles {
        out.push(f);
        f = f * a.sin() * a.sin();
    }
    out
}

/// First partials of `diag(A(r), W(r) sphere_diag(angles))`. `radial(r)`
/// returns `(A', W, W')`.
fn warped_sphere_partials<T: Real>(radial: impl Fn(T) -> (T, T, T) + Send + Sync + 'static) -> PointFn<T, Vec<Mat<T>>> {
    Arc::new(move |p: &[T]| {
        let m = p.len();
        let (da, w, dw) = radial(p[0]);
        let angles = &p[1..];
        let sigma = sphere_diag(angles);
        let mut out = Vec::with_capacity(m);
        let mut d = vec![T::zero(); m];
        d[0] = da;
        for (i, s) in sigma.iter().enumerate() {
            d[i + 1] = dw * *s;
        }
        out.push(Mat::diag(&d));
        for j in 0..angles.len() {
            let mut d = vec![T::zero(); m];
            // sigma_i contains sin^2(a_j) for every i > j
            for i in j + 1..sigma.len() {
                let mut f = T::one();
                for (l, &a) in angles.iter().enumerate().take(i) {
                    f = f * if l == j { (a + a).sin() } else { a.sin() * a.sin() };
                }
                d[i + 1] = w * f;
            }
            out.push(Mat::diag(&d));
        }
        out
    })
}

/// Polar angle axes of `S^k`: `k - 1` angles in `[0, pi]` and one periodic.
fn sphere_axes<T: Real>(k: usize) -> Vec<Axis<T>> {
    let pi = lit::<T>(PI);
    let mut axes: Vec<Axis<T>> = (1..k)
        .map(|i| Axis::new(&format!("theta{i}"), T::zero(), pi).singular_at(Some(T::zero()), Some(pi)))
        .collect();
    axes.push(Axis::periodic("phi", T::zero(), pi + pi));
    axes
}

fn sphere_box_lo<T: Real>(k: usize, margin: f64) -> Vec<T> {
    let mut v: Vec<T> = (1..k).map(|_| lit(margin)).collect();
    v.push(T::zero());
    v
}

fn sphere_box_hi<T: Real>(k: usize, margin: f64) -> Vec<T> {
    let mut v: Vec<T> = (1..k).map(|_| lit(PI - margin)).collect();
    v.push(lit(2.0 * PI));
    v
}

fn sphere_nodes(k: usize, n_theta: usize, n_phi: usize) -> Vec<usize> {
    let mut v = vec![n_theta; k - 1];
    v.push(n_phi);
    v
}

/// Coordinate face `x^0 = value` over an angular `S^{m-1}`.
fn spherical_face<T: Real>(label: &str, m: usize, value: T, inward: T) -> BoundarySurface<T> {
    let param = Domain::new(sphere_axes(m - 1));
    BoundarySurface {
        label: label.to_string(),
        surface: Surface::coordinate_face(label, param, 0, value, inward),
        nodes: sphere_nodes(m - 1, 32, 24),
    }
}

fn cat<U>(a: Vec<U>, b: Vec<U>) -> Vec<U> {
    a.into_iter().chain(b).collect()
}

/// Round hemisphere of radius `radius` in geodesic polar coordinates about
/// the pole, `u = cos(r / radius)`.
pub fn hemisphere<T: Real>(m: usize, radius: f64) -> SubstaticTriple<T> {
    let rr = lit::<T>(radius);
    let edge = lit::<T>(PI / 2.0 * radius);
    let mut axes = vec![Axis::new("r", T::zero(), edge).singular_at(Some(T::zero()), None).wall_at(edge)];
    axes.extend(sphere_axes(m - 1));
    let metric = Arc::new(move |p: &[T]| {
        let s = rr * (p[0] / rr).sin();
        let mut d = vec![T::one()];
        d.extend(sphere_diag(&p[1..]).into_iter().map(|x| x * s * s));
        Mat::diag(&d)
    });
    let partials = warped_sphere_partials(move |r: T| {
        let (sn, cs) = ((r / rr).sin(), (r / rr).cos());
        (T::zero(), rr * rr * sn * sn, lit::<T>(2.0) * rr * sn * cs)
    });
    let chart = Chart::new(&format!("hemisphere-{m}"), Domain::new(axes), metric).with_partials(partials);
    SubstaticTriple {
        name: format!("hemisphere-{m}"),
        chart,
        u: Arc::new(move |p: &[T]| (p[0] / rr).cos()),
        boundary: vec![spherical_face("equator", m, edge, -T::one())],
        source: MatterSource::vacuum(),
        sample_box: SampleBox::new(
            cat(vec![lit(0.1 * radius)], sphere_box_lo(m - 1, 0.3)),
            cat(vec![lit((PI / 2.0 - 0.1) * radius)], sphere_box_hi(m - 1, 0.3)),
        ),
        volume_box: Some(SampleBox::new(
            cat(vec![T::zero()], sphere_box_lo(m - 1, 0.0)),
            cat(vec![edge], sphere_box_hi(m - 1, 0.0)),
        )),
        volume_nodes: cat(vec![24], sphere_nodes(m - 1, 12, 8)),
        extrap_d: lit(0.02 * radius),
    }
}

/// Spatial Schwarzschild slice in areal coordinates, `u = sqrt(1 - 2M/r)`.
pub fn schwarzschild<T: Real>(mass: f64) -> SubstaticTriple<T> {
    let mm = lit::<T>(mass);
    let two_m = mm + mm;
    let axes = cat(
        vec![Axis::new("r", two_m, lit(2500.0 * mass)).singular_at(Some(two_m), None)],
        sphere_axes(2),
    );
    let metric = Arc::new(move |p: &[T]| {
        let r = p[0];
        let st = p[1].sin();
        Mat::diag(&[T::one() / (T::one() - two_m / r), r * r, r * r * st * st])
    });
    SubstaticTriple {
        name: format!("schwarzschild-{mass}"),
        chart: Chart::new("schwarzschild-areal", Domain::new(axes), metric).with_partials(warped_sphere_partials(move |r: T| {
            let f = T::one() - two_m / r;
            (-two_m / (r * r * f * f), r * r, r + r)
        })),
        u: Arc::new(move |p: &[T]| (T::one() - two_m / p[0]).sqrt()),
        boundary: vec![spherical_face("horizon", 3, two_m, T::one())],
        source: MatterSource::vacuum(),
        sample_box: SampleBox::new(
            cat(vec![lit(2.05 * mass)], sphere_box_lo(2, 0.3)),
            cat(vec![lit(20.0 * mass)], sphere_box_hi(2, 0.3)),
        ),
        volume_box: None,
        volume_nodes: vec![24, 24, 16],
        extrap_d: lit(0.02 * mass),
    }
}

fn torus_axes<T: Real>(side: f64) -> Vec<Axis<T>> {
    vec![Axis::periodic("y1", T::zero(), lit(side)), Axis::periodic("y2", T::zero(), lit(side))]
}

fn torus_face<T: Real>(label: &str, value: T, side: f64) -> BoundarySurface<T> {
    BoundarySurface {
        label: label.to_string(),
        surface: Surface::coordinate_face(label, Domain::new(torus_axes(side)), 0, value, T::one()),
        nodes: vec![16, 16],
    }
}

/// `[0, inf) x T^2` with the product metric and `u = s`.
pub fn flat_cylinder<T: Real>(side: f64) -> SubstaticTriple<T> {
    let axes = cat(vec![Axis::new("s", T::zero(), lit(1.0e4)).wall_at(T::zero())], torus_axes(side));
    SubstaticTriple {
        name: "flat-cylinder-T2".into(),
        chart: Chart::new("cylinder", Domain::new(axes), Arc::new(|_p: &[T]| Mat::identity(3))),
        u: Arc::new(|p: &[T]| p[0]),
        boundary: vec![torus_face("s=0", T::zero(), side)],
        source: MatterSource::vacuum(),
        sample_box: SampleBox::new(vec![lit(0.1), T::zero(), T::zero()], vec![lit(5.0), lit(side), lit(side)]),
        volume_box: None,
        volume_nodes: vec![16, 8, 8],
        extrap_d: lit(0.02),
    }
}

/// Flat `R^3` in spherical coordinates with `u = 1`.
pub fn flat_spherical<T: Real>() -> SubstaticTriple<T> {
    let axes = cat(vec![Axis::new("r", T::zero(), lit(1.0e3)).singular_at(Some(T::zero()), None)], sphere_axes(2));
    let metric = Arc::new(|p: &[T]| {
        let r = p[0];
        let st = p[1].sin();
        Mat::diag(&[T::one(), r * r, r * r * st * st])
    });
    SubstaticTriple {
        name: "flat-r3".into(),
        chart: Chart::new("flat-spherical", Domain::new(axes), metric).with_partials(warped_sphere_partials(|r: T| (T::zero(), r * r, r + r))),
        u: Arc::new(|_p: &[T]| T::one()),
        boundary: vec![],
        source: MatterSource::vacuum(),
        sample_box: SampleBox::new(cat(vec![lit(0.2)], sphere_box_lo(2, 0.3)), cat(vec![lit(5.0)], sphere_box_hi(2, 0.3))),
        volume_box: None,
        volume_nodes: vec![16, 16, 8],
        extrap_d: lit(0.02),
    }
}

/// Flat cube `[-1, 1]^3` in Cartesian coordinates with `u = 1`.
pub fn flat_cartesian<T: Real>() -> SubstaticTriple<T> {
    let axes = vec![
        Axis::new("x", lit(-1.0), T::one()),
        Axis::new("y", lit(-1.0), T::one()),
        Axis::new("z", lit(-1.0), T::one()),
    ];
    SubstaticTriple {
        name: "flat-cartesian".into(),
        chart: Chart::new("cartesian", Domain::new(axes), Arc::new(|_p: &[T]| Mat::identity(3))),
        u: Arc::new(|_p: &[T]| T::one()),
        boundary: vec![],
        source: MatterSource::vacuum(),
        sample_box: SampleBox::new(vec![lit(-0.9); 3], vec![lit(0.9); 3]),
        volume_box: Some(SampleBox::new(vec![lit(-1.0); 3], vec![T::one(); 3])),
        volume_nodes: vec![12, 12, 12],
        extrap_d: lit(0.02),
    }
}

/// Flat annulus `1 <= r <= 2` with `eta = c/r` and a positive lapse; the
/// declared `Q` is the electrostatic one, `(|d eta|^2 g - d eta (x) d eta)/u^2`.
pub fn electrostatic_toy<T: Real>(charge: f64) -> SubstaticTriple<T> {
    let c = lit::<T>(charge);
    let axes = cat(vec![Axis::new("r", T::one(), lit(2.0))], sphere_axes(2));
    let metric = Arc::new(|p: &[T]| {
        let r = p[0];
        let st = p[1].sin();
        Mat::diag(&[T::one(), r * r, r * r * st * st])
    });
    let u = |p: &[T]| T::one() + p[0] * p[0];
    let q: TensorField<T> = Arc::new(move |p: &[T]| {
        let r = p[0];
        let st = p[1].sin();
        let g = Mat::diag(&[T::one(), r * r, r * r * st * st]);
        let deta = -c / (r * r);
        let n2 = deta * deta;
        let mut t = g.scale(n2);
        t[(0, 0)] = t[(0, 0)] - deta * deta;
        let uu = u(p);
        t.scale(T::one() / (uu * uu))
    });
    SubstaticTriple {
        name: "electrostatic-toy".into(),
        chart: Chart::new("annulus", Domain::new(axes), metric).with_partials(warped_sphere_partials(|r: T| (T::zero(), r * r, r + r))),
        u: Arc::new(u),
        boundary: vec![],
        source: MatterSource { kind: SourceKind::Electrostatic, declared_q: Some(q), exact: false },
        sample_box: SampleBox::new(cat(vec![lit(1.1)], sphere_box_lo(2, 0.3)), cat(vec![lit(1.9)], sphere_box_hi(2, 0.3))),
        volume_box: None,
        volume_nodes: vec![12, 12, 8],
        extrap_d: lit(0.02),
    }
}

/// Round `S^3` of radius `radius` with `u = a - b cos(r / radius)`. This is
/// an exact perfect fluid with `Q = (2a / (radius^2 u)) g`, constant density
/// and non-constant pressure. `r_max` limits the chart to where `u > 0`.
pub fn perfect_fluid_sphere<T: Real>(name: &str, radius: f64, a: f64, b: f64, r_max: f64) -> SubstaticTriple<T> {
    let rr = lit::<T>(radius);
    let (at, bt) = (lit::<T>(a), lit::<T>(b));
    let r_hi = lit::<T>(r_max);
    let sing_hi = if r_max >= PI * radius { Some(r_hi) } else { None };
    let axes = cat(vec![Axis::new("r", T::zero(), r_hi).singular_at(Some(T::zero()), sing_hi)], sphere_axes(2));
    let metric = Arc::new(move |p: &[T]| {
        let s = rr * (p[0] / rr).sin();
        let st = p[1].sin();
        Mat::diag(&[T::one(), s * s, s * s * st * st])
    });
    let u = move |p: &[T]| at - bt * (p[0] / rr).cos();
    let q: TensorField<T> = Arc::new(move |p: &[T]| {
        let s = rr * (p[0] / rr).sin();
        let st = p[1].sin();
        Mat::diag(&[T::one(), s * s, s * s * st * st]).scale((at + at) / (rr * rr * u(p)))
    });
    SubstaticTriple {
        name: name.to_string(),
        chart: Chart::new("sphere-polar", Domain::new(axes), metric).with_partials(warped_sphere_partials(move |r: T| {
            let (sn, cs) = ((r / rr).sin(), (r / rr).cos());
            (T::zero(), rr * rr * sn * sn, lit::<T>(2.0) * rr * sn * cs)
        })),
        u: Arc::new(u),
        boundary: vec![],
        source: MatterSource { kind: SourceKind::PerfectFluid, declared_q: Some(q), exact: true },
        sample_box: SampleBox::new(
            cat(vec![lit(0.1 * radius)], sphere_box_lo(2, 0.3)),
            cat(vec![lit((r_max - 0.1 * radius).min(r_max * 0.95))], sphere_box_hi(2, 0.3)),
        ),
        volume_box: None,
        volume_nodes: vec![16, 16, 8],
        extrap_d: lit(0.02),
    }
}

/// Hemisphere deformation with constant `Lambda = 3(1 - eps)`, `Q >= 0` and a
/// strictly positive boundary functional. In areal gauge
/// `g = dR^2/V + R^2 dOmega^2` with `u^2 = (1 - R^2)(1 + eps R^2)`; the chart
/// uses `R = sin(rho)` so that the boundary `rho = pi/2` is regular.
pub fn deformed_hemisphere<T: Real>(eps: f64) -> SubstaticTriple<T> {
    let e = lit::<T>(eps);
    let edge = lit::<T>(PI / 2.0);
    let two = lit::<T>(2.0);
    let three = lit::<T>(3.0);
    let axes = cat(
        vec![Axis::new("rho", T::zero(), edge).singular_at(Some(T::zero()), None).wall_at(edge)],
        sphere_axes(2),
    );
    let metric = Arc::new(move |p: &[T]| {
        let r = p[0].sin();
        let r2 = r * r;
        let pp = T::one() + e * r2;
        let den = two * r2 * e - e + T::one();
        let g_fn = -(e - T::one()) * (three * r2 * e - two * (e - T::one())) / (two * den * den);
        let st = p[1].sin();
        Mat::diag(&[T::one() / (pp * g_fn), r2, r2 * st * st])
    });
    let u = move |p: &[T]| {
        let r = p[0].sin();
        p[0].cos() * (T::one() + e * r * r).sqrt()
    };
    SubstaticTriple {
        name: format!("deformed-hemisphere-{eps}"),
        chart: Chart::new("deformed-polar", Domain::new(axes), metric),
        u: Arc::new(u),
        boundary: vec![spherical_face("equator", 3, edge, -T::one())],
        source: MatterSource::unspecified(),
        sample_box: SampleBox::new(cat(vec![lit(0.1)], sphere_box_lo(2, 0.3)), cat(vec![lit(PI / 2.0 - 0.1)], sphere_box_hi(2, 0.3))),
        volume_box: Some(SampleBox::new(cat(vec![T::zero()], sphere_box_lo(2, 0.0)), cat(vec![edge], sphere_box_hi(2, 0.0)))),
        volume_nodes: vec![24, 12, 8],
        extrap_d: lit(0.02),
    }
}

/// `[-pi/(2k), pi/(2k)] x S^2(rho)` with `u = cos(k x)`; sub-static when `k rho <= 1`.
pub fn nariai_product<T: Real>(k: f64, rho: f64) -> SubstaticTriple<T> {
    let kt = lit::<T>(k);
    let r2 = lit::<T>(rho * rho);
    let edge = lit::<T>(PI / (2.0 * k));
    let axes = cat(vec![Axis::new("x", -edge, edge).wall_at(-edge).wall_at(edge)], sphere_axes(2));
    let metric = Arc::new(move |p: &[T]| {
        let st = p[1].sin();
        Mat::diag(&[T::one(), r2, r2 * st * st])
    });
    let face = |label: &str, v: T, inward: T| BoundarySurface {
        label: label.to_string(),
        surface: Surface::coordinate_face(label, Domain::new(sphere_axes(2)), 0, v, inward),
        nodes: sphere_nodes(2, 32, 24),
    };
    SubstaticTriple {
        name: format!("nariai-{k}-{rho}"),
        chart: Chart::new("nariai", Domain::new(axes), metric),
        u: Arc::new(move |p: &[T]| (kt * p[0]).cos()),
        boundary: vec![face("x-", -edge, T::one()), face("x+", edge, -T::one())],
        source: MatterSource::unspecified(),
        sample_box: SampleBox::new(
            cat(vec![lit(-0.9 * PI / (2.0 * k))], sphere_box_lo(2, 0.3)),
            cat(vec![lit(0.9 * PI / (2.0 * k))], sphere_box_hi(2, 0.3)),
        ),
        volume_box: Some(SampleBox::new(cat(vec![-edge], sphere_box_lo(2, 0.0)), cat(vec![edge], sphere_box_hi(2, 0.0)))),
        volume_nodes: vec![24, 24, 16],
        extrap_d: lit(0.02 / k),
    }
}

/// `g = r(y)^2 ds^2 + h_flat` on `[0, inf) x T^2` with `u = r(y) s`, where
/// `r(y) = 1 + amp cos(2 pi y1 / side)`.
pub fn warped_cylinder<T: Real>(amp: f64, side: f64) -> SubstaticTriple<T> {
    let a = lit::<T>(amp);
    let w = lit::<T>(2.0 * PI / side);
    let warp = move |p: &[T]| T::one() + a * (w * p[1]).cos();
    let axes = cat(vec![Axis::new("s", T::zero(), lit(1.0e3)).wall_at(T::zero())], torus_axes(side));
    let metric = Arc::new(move |p: &[T]| {
        let r = warp(p);
        Mat::diag(&[r * r, T::one(), T::one()])
    });
    SubstaticTriple {
        name: "warped-cylinder".into(),
        chart: Chart::new("warped", Domain::new(axes), metric),
        u: Arc::new(move |p: &[T]| warp(p) * p[0]),
        boundary: vec![torus_face("s=0", T::zero(), side)],
        source: MatterSource::unspecified(),
        sample_box: SampleBox::new(vec![lit(0.2), T::zero(), T::zero()], vec![lit(5.0), lit(side), lit(side)]),
        volume_box: None,
        volume_nodes: vec![16, 8, 8],
        extrap_d: lit(0.02),
    }
}

/// `[0, inf) x T^2` flat with `u = exp(-s)`: sub-static but not u-complete.
pub fn exp_decay_toy<T: Real>() -> SubstaticTriple<T> {
    let axes = cat(vec![Axis::new("s", T::zero(), lit(1.0e3))], torus_axes(1.0));
    SubstaticTriple {
        name: "exp-decay-toy".into(),
        chart: Chart::new("half-cylinder", Domain::new(axes), Arc::new(|_p: &[T]| Mat::identity(3))),
        u: Arc::new(|p: &[T]| (-p[0]).exp()),
        boundary: vec![],
        source: MatterSource::unspecified(),
        sample_box: SampleBox::new(vec![lit(0.1), T::zero(), T::zero()], vec![lit(5.0), T::one(), T::one()]),
        volume_box: None,
        volume_nodes: vec![16, 8, 8],
        extrap_d: lit(0.02),
    }
}

/// `g = dr^2 + e^{2r} h_flat` on `[0, 40] x T^2`, `u = 1` (a hyperbolic cusp end).
pub fn hyperbolic_cusp<T: Real>() -> SubstaticTriple<T> {
    let axes = cat(vec![Axis::new("r", T::zero(), lit(40.0))], torus_axes(1.0));
    let metric = Arc::new(|p: &[T]| {
        let e = (p[0] + p[0]).exp();
        Mat::diag(&[T::one(), e, e])
    });
    SubstaticTriple {
        name: "hyperbolic-cusp".into(),
        chart: Chart::new("cusp", Domain::new(axes), metric),
        u: Arc::new(|_p: &[T]| T::one()),
        boundary: vec![],
        source: MatterSource::unspecified(),
        sample_box: SampleBox::new(vec![lit(0.1), T::zero(), T::zero()], vec![lit(5.0), T::one(), T::one()]),
        volume_box: None,
        volume_nodes: vec![16, 8, 8],
        extrap_d: lit(0.02),
    }
}

/// Stereographic chart of the unit `S^m` (no lapse), for coordinate-invariance checks.
pub fn sphere_stereographic<T: Real>(m: usize) -> Chart<T> {
    let axes = (0..m).map(|i| Axis::new(&format!("x{i}"), lit(-3.0), lit(3.0))).collect();
    Chart::new(
        "sphere-stereographic",
        Domain::new(axes),
        Arc::new(move |p: &[T]| {
            let r2 = p.iter().fold(T::zero(), |a, &x| a + x * x);
            let c = lit::<T>(2.0) / (T::one() + r2);
            Mat::identity(m).scale(c * c)
        }),
    )
}
