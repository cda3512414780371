//! Property tests for the module invariants: random points, parameters and
//! inputs drawn by proptest, checked against identities that hold exactly.

use std::f64::consts::PI;
use std::sync::OnceLock;

use proptest::prelude::*;
use substatic_lab::boundary::{bgh_functional, bgh_value, boundary_data, chrusciel_value, BoundaryData};
use substatic_lab::catalog;
use substatic_lab::comparison::{integrate_geodesic, GeodesicConfig, MetricTag};
use substatic_lab::identities::trace_identity_residual;
use substatic_lab::kernel::{Chart, Level, Scheme, StepConfig};
use substatic_lab::report::{CheckSpec, Scenario};
use substatic_lab::triple::QSelect;
use substatic_lab::wavemap::{potential_bounds, Potential, SmoothMap, TargetManifold};
use substatic_lab::{Mat64, Tolerances, Triple64, Verdict};

const ENTRIES: &[&str] = &[
    "hemisphere-3",
    "hemisphere-4",
    "schwarzschild-1",
    "flat-cylinder",
    "flat-r3",
    "electrostatic-toy",
    "perfect-fluid",
    "perfect-fluid-nec-violating",
    "deformed-hemisphere-0.05",
    "nariai",
    "warped-cylinder",
    "exp-decay",
    "hyperbolic-cusp",
];

/// Entries whose lapse is not identically constant and whose Q is PSD.
const SUBSTATIC: &[&str] = &["hemisphere-3", "schwarzschild-1", "perfect-fluid", "deformed-hemisphere-0.05", "nariai"];

fn triples() -> &'static Vec<Triple64> {
    static T: OnceLock<Vec<Triple64>> = OnceLock::new();
    T.get_or_init(|| ENTRIES.iter().map(|n| catalog::load(n).unwrap().triple).collect())
}

fn triple(name: &str) -> &'static Triple64 {
    &triples()[ENTRIES.iter().position(|n| *n == name).unwrap()]
}

/// Point of the entry's sample box at unit-cube coordinates `t`.
fn at(t: &Triple64, unit: &[f64]) -> Vec<f64> {
    let b = &t.sample_box;
    b.lo.iter().zip(&b.hi).zip(unit).map(|((lo, hi), s)| lo + (hi - lo) * s).collect()
}

fn unit(m: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(0.0f64..1.0, m)
}

fn asym(a: &Mat64) -> f64 {
    a.sub(&a.transpose()).max_abs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ricci_and_hessian_are_symmetric(k in 0..ENTRIES.len(), s in unit(4)) {
        let t = &triples()[k];
        let p = at(t, &s[..t.dim()]);
        let d = t.point_data(&p).unwrap();
        prop_assert_eq!(asym(&d.ricci), 0.0);
        prop_assert_eq!(asym(&d.hess_u), 0.0);
        prop_assert_eq!(asym(&d.q), 0.0);
    }

    #[test]
    fn trace_identity_holds(k in 0..ENTRIES.len(), s in unit(4)) {
        let t = &triples()[k];
        let p = at(t, &s[..t.dim()]);
        let r = trace_identity_residual(t, &p).unwrap();
        prop_assert!(r.abs() < 1e-5, "{} at {:?}: {:e}", t.name, p, r);
    }

    #[test]
    fn null_energy_matches_q(k in 0..ENTRIES.len(), s in unit(4)) {
        let t = &triples()[k];
        let p = at(t, &s[..t.dim()]);
        let r = t.nec_check(&p, 16, QSelect::Geometric, 1e-8, 1e-5).unwrap();
        prop_assert!(r.energy_pass, "{} at {:?}: {:e}", t.name, p, r.energy_residual);
    }

    #[test]
    fn substatic_entries_have_psd_q(k in 0..SUBSTATIC.len(), s in unit(3)) {
        let t = triple(SUBSTATIC[k]);
        let p = at(t, &s);
        let ev = t.q_eigenvalues(&p).unwrap();
        prop_assert!(ev[0] >= -1e-8, "{} at {:?}: {:e}", t.name, p, ev[0]);
    }

    #[test]
    fn optical_weighted_ricci_is_q(k in 0..SUBSTATIC.len(), s in unit(3)) {
        let t = triple(SUBSTATIC[k]);
        let p = at(t, &s);
        let q = t.q_tensor(&p).unwrap();
        let w = t.optical_view().weighted_ricci(&p).unwrap();
        let scale = 1.0f64.max(q.max_abs());
        prop_assert!(w.sub(&q).max_abs() < 10.0 * 1e-5 * scale, "{} at {:?}", t.name, p);
    }

    #[test]
    fn contracted_bianchi(k in 0..4usize, s in unit(3)) {
        let t = triple(["hemisphere-3", "schwarzschild-1", "perfect-fluid", "deformed-hemisphere-0.05"][k]);
        let p = at(t, &s);
        let c = &t.chart;
        let div = c.divergence_sym2(&|q: &[f64]| c.ricci(q).unwrap(), &p, Level::Outer).unwrap();
        let ds = c.scalar_d(&|q: &[f64]| c.scalar_curvature(q).unwrap(), &p, Level::Outer);
        let g = c.metric(&p).unwrap();
        let gap: Vec<f64> = div.iter().zip(&ds).map(|(a, b)| a - 0.5 * b).collect();
        let norm = g.inverse().unwrap().bilinear(&gap, &gap).sqrt();
        prop_assert!(norm < 1e-5, "{} at {:?}: {:e}", t.name, p, norm);
    }
}

#[test]
fn halving_the_step_gains_second_order() {
    // Central differences without extrapolation on the round S^3, Ric = 2 g.
    let t = triple("hemisphere-3");
    let err = |h: f64| {
        let steps = StepConfig { scheme: Scheme::Central, inner: h, inner_frac: 1.0, ..StepConfig::default() };
        let c: Chart<f64> = t.chart.clone().with_steps(steps);
        let p = [0.9, 1.2, 0.4];
        c.ricci(&p).unwrap().sub(&c.metric(&p).unwrap().scale(2.0)).max_abs()
    };
    let ratio = err(4e-2) / err(2e-2);
    assert!(ratio >= 3.5, "ratio {ratio}");
}

fn hemisphere_boundary() -> &'static BoundaryData {
    static D: OnceLock<BoundaryData> = OnceLock::new();
    D.get_or_init(|| boundary_data(triple("hemisphere-3"), &Tolerances::default(), 64, 0, 1).unwrap())
}

fn deformed_boundary() -> &'static BoundaryData {
    static D: OnceLock<BoundaryData> = OnceLock::new();
    D.get_or_init(|| boundary_data(triple("deformed-hemisphere-0.05"), &Tolerances::default(), 64, 0, 1).unwrap())
}

fn verdict() -> impl Strategy<Value = Verdict> {
    prop_oneof![Just(Verdict::Pass), Just(Verdict::Fail), Just(Verdict::NotApplicable)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn equality_case_functional_vanishes(b in (-0.5 + 1e-3)..8.0f64) {
        let r = bgh_functional(hemisphere_boundary(), b, &Tolerances::default());
        prop_assert!(r.value.abs() < 1e-5 * r.scale.max(1.0), "b = {}: {:e}", b, r.value);
        prop_assert!(r.equality_case);
    }

    #[test]
    fn strict_case_functional_is_nonnegative(b in (-0.5 + 1e-3)..8.0f64) {
        let tol = Tolerances::default();
        let r = bgh_functional(deformed_boundary(), b, &tol);
        prop_assert!(r.value >= -tol.quad * r.scale.max(1.0), "b = {}: {:e}", b, r.value);
        prop_assert!(!r.equality_case);
    }

    #[test]
    fn vacuum_functional_reduces_exactly(
        kappas in proptest::collection::vec(0.1f64..3.0, 1..4),
        seeds in proptest::collection::vec((0.1f64..20.0, 0.1f64..5.0), 3),
        m in 3usize..6,
    ) {
        let s = (m * (m - 1)) as f64;
        let comps: Vec<_> = kappas.iter().zip(&seeds).map(|(&k, &(ss, a))| (k, ss, s * a, 0.0)).collect();
        let short: Vec<_> = kappas.iter().zip(&seeds).map(|(&k, &(ss, a))| (k, ss, a)).collect();
        let v = bgh_value(m, &comps, 1.0);
        let c = chrusciel_value(m, &short);
        prop_assert!((v - c).abs() <= 1e-13 * v.abs().max(c.abs()).max(1.0), "{} vs {}", v, c);
    }

    #[test]
    fn verdict_conjunction_laws(a in verdict(), b in verdict(), c in verdict()) {
        prop_assert_eq!(a.and(b), b.and(a));
        prop_assert_eq!(a.and(b).and(c), a.and(b.and(c)));
        prop_assert_eq!(a.and(Verdict::NotApplicable), a);
        prop_assert_eq!(a.and(Verdict::Fail), Verdict::Fail);
    }

    #[test]
    fn potential_floor_is_nonnegative(base in -3.0f64..3.0, curv in -3.0f64..3.0, y in proptest::collection::vec(-1.0f64..1.0, 2)) {
        let map = SmoothMap::constant(TargetManifold::euclidean(2), y);
        let pb = potential_bounds(&map, &Potential::quadratic(base, curv), 3, &[vec![0.5, 1.0, 1.0]]).unwrap();
        prop_assert!(pb.a >= 0.0);
        // (m - 1) curv + 2 V on the identity metric
        let y2: f64 = pb.worst_image_point.iter().map(|v| v * v).sum();
        let floor = 2.0 * curv + 2.0 * (base + 0.5 * curv * y2);
        prop_assert!((pb.a - (-floor).max(0.0)).abs() < 1e-6, "{} vs {}", pb.a, floor);
    }

    #[test]
    fn tolerance_overrides_round_trip(cert in 1e-12f64..1.0, quad in 1e-14f64..1e-2, seed in 0..=substatic_lab::report::MAX_SEED) {
        let mut s = Scenario::new("prop");
        s.seed = seed;
        s.tolerances.cert = cert;
        s.tolerances.quad = quad;
        s.checks.push(CheckSpec::new("wavemap-q0").with("trials", 10i64));
        let back = Scenario::parse(&s.to_toml().unwrap()).unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(back.hash().unwrap(), s.hash().unwrap());
        let mut bad = s.clone();
        bad.tolerances.cert = -cert;
        prop_assert!(Scenario::parse(&bad.to_toml().unwrap()).is_err());
        bad = s.clone();
        bad.seed = substatic_lab::report::MAX_SEED + 1 + seed % 7;
        prop_assert!(bad.validate().is_err());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn geodesics_keep_unit_speed(theta in 0.4f64..(PI - 0.4), phi in 0.0f64..(2.0 * PI), dir in proptest::collection::vec(-1.0f64..1.0, 3)) {
        prop_assume!(dir.iter().map(|v| v * v).sum::<f64>() > 1e-2);
        let t = triple("schwarzschild-1");
        let p = [6.0, theta, phi];
        let v = substatic_lab::comparison::geodesic::unit_vector(&t.chart, &p, &dir).unwrap();
        let tr = integrate_geodesic(&t.chart, MetricTag::G, &p, &v, 3.0, &GeodesicConfig::new(1e-8)).unwrap();
        prop_assert!(tr.energy_drift < 1e-8, "{:e}", tr.energy_drift);
    }
}
