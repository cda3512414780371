use proptest::prelude::*;

use super::*;
use crate::comparison::{f_volume_growth, RadialOrigin, Weight};
use crate::kernel::chart::Level;
use crate::linalg::Mat;
use crate::tolerance::Tolerances;
use crate::verdict::Verdict;

fn tol() -> Tolerances {
    Tolerances::default()
}

/// `(1 + k)(|P|^2 - (tr P)^2 / m)` with `P = X^T X`.
fn q0_oracle(x: &Mat<f64>, kappa: f64) -> f64 {
    let p = x.transpose().matmul(x);
    let m = p.rows();
    let t: f64 = (0..m).map(|i| p[(i, i)]).sum();
    let p2: f64 = p.as_slice().iter().map(|v| v * v).sum();
    (1.0 + kappa) * (p2 - t * t / m as f64)
}

#[test]
fn space_form_curvature_matches_finite_differences() {
    for k in [1.0, -0.5] {
        let target = TargetManifold::space_form(2, k);
        let y = [0.2, -0.3];
        let exact = target.riemann(&y).unwrap();
        let fd = RiemannTensor::from_curvature(&target.chart.curvature(&y).unwrap());
        let scale = exact.get(0, 1, 0, 1).abs();
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    for d in 0..2 {
                        let err = (exact.get(a, b, c, d) - fd.get(a, b, c, d)).abs();
                        assert!(err < 1e-5 * scale, "k = {k} R_{a}{b}{c}{d}: {err}");
                    }
                }
            }
        }
        let h = target.chart.metric(&y).unwrap();
        assert!((fd.sectional(&h, &[1.0, 0.3], &[-0.2, 1.0]) - k).abs() < 1e-5);
    }
}

#[test]
fn q0_matches_closed_form_for_constant_curvature() {
    let x = Mat::from_vec(2, 3, vec![0.3, -0.7, 0.2, 0.9, 0.1, -0.4]);
    for kappa in [0.0, 0.3, -0.8] {
        let r = RiemannTensor::constant(&Mat::identity(2), kappa);
        let c = (1.0 - 2.0 * kappa) / 3.0;
        let (slack, _) = q0_slack(&x, &r, c);
        assert!((slack - q0_oracle(&x, kappa)).abs() < 1e-13, "{kappa}");
    }
}

#[test]
fn q0_of_zero_matrix_is_zero() {
    let r = RiemannTensor::constant(&Mat::identity(3), 0.4);
    let (slack, scale) = q0_slack(&Mat::from_vec(3, 2, vec![0.0; 6]), &r, 0.1);
    assert_eq!((slack, scale), (0.0, 0.0));
}

#[test]
fn q0_search_finds_no_violation_below_the_limit() {
    for kappa in [0.0, 0.3] {
        let rep = q0_lower_bound_check(3, 2, kappa, 100_000, 7).unwrap();
        assert_eq!(rep.violations, 0, "{kappa}");
        assert_eq!(rep.verdict, Verdict::Pass);
        assert!(rep.min_relative_slack >= -1e-12);
    }
}

#[test]
fn q0_search_is_deterministic() {
    let a = q0_probe(4, 3, 0.2, 10_000, 11).unwrap();
    let b = q0_probe(4, 3, 0.2, 10_000, 11).unwrap();
    assert_eq!(a.min_slack.to_bits(), b.min_slack.to_bits());
    assert_eq!(a.worst, b.worst);
}

#[test]
fn q0_check_rejects_kappa_at_the_limit() {
    assert!(matches!(q0_lower_bound_check(3, 2, 0.5, 10, 1), Err(crate::Error::KappaTooLarge { .. })));
    assert!(matches!(q0_lower_bound_check(4, 2, 0.4, 10, 1), Err(crate::Error::KappaTooLarge { .. })));
}

#[test]
fn q0_probe_past_the_limit_still_holds() {
    // the closed form stays nonnegative for every k >= -1
    let rep = q0_probe(3, 2, 0.5 + 0.1, 20_000, 3).unwrap();
    assert_eq!(rep.violations, 0);
}

#[test]
fn q0_probe_below_minus_one_finds_violations() {
    let rep = q0_probe(3, 2, -2.0, 20_000, 3).unwrap();
    assert!(rep.violations > 0);
    let x = Mat::from_vec(2, 3, rep.worst.clone());
    assert!(q0_oracle(&x, -2.0) < 0.0);
}

#[test]
fn frames_are_orthonormal() {
    let g = Mat::from_vec(3, 3, vec![2.0, 0.3, 0.1, 0.3, 1.5, -0.2, 0.1, -0.2, 1.1]);
    for kind in [FrameKind::Cholesky, FrameKind::Symmetric] {
        let e = map::orthonormal_frame(&g, kind).unwrap();
        let id = e.transpose().matmul(&g).matmul(&e);
        let c = map::orthonormal_coframe(&g, kind).unwrap();
        let back = c.matmul(&e);
        for i in 0..3 {
            for j in 0..3 {
                let d = if i == j { 1.0 } else { 0.0 };
                assert!((id[(i, j)] - d).abs() < 1e-12);
                assert!((back[(i, j)] - d).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn differential_norm_is_frame_independent() {
    let sc = scenario("cartesian-sphere").unwrap();
    let p = [0.2, -0.1, 0.3];
    let a = sc.map.differential(&sc.triple.chart, &p, FrameKind::Cholesky).unwrap();
    let b = sc.map.differential(&sc.triple.chart, &p, FrameKind::Symmetric).unwrap();
    let w = sc.map.energy_density(&sc.triple.chart, &p, Level::Inner).unwrap();
    let fa: f64 = a.as_slice().iter().map(|v| v * v).sum();
    let fb: f64 = b.as_slice().iter().map(|v| v * v).sum();
    assert!((fa - w).abs() < 1e-12 * w.max(1.0) && (fb - w).abs() < 1e-12 * w.max(1.0));
}

#[test]
fn hemisphere_constant_map_solves_the_system() {
    let sc = scenario("hemisphere-constant").unwrap();
    let (survey, _) = system_survey(&sc.triple, &sc.map, &sc.potential, &sc.points(64, 1), &tol()).unwrap();
    assert_eq!(survey.verdict, Verdict::Pass, "{survey:?}");
    assert!(survey.max_r2 < 1e-6);
}

#[test]
fn negative_control_breaks_the_map_equation() {
    let sc = scenario("hemisphere-negative").unwrap();
    let (survey, _) = system_survey(&sc.triple, &sc.map, &sc.potential, &sc.points(32, 1), &tol()).unwrap();
    assert_eq!(survey.verdict, Verdict::Fail);
    assert!(survey.max_r3 > 0.1);
}

#[test]
fn bochner_identity_on_the_log_map() {
    let sc = scenario("cylinder-log").unwrap();
    let t = tol();
    for p in sc.points(16, 2) {
        let rep = bochner_residual(&sc.triple, &sc.map, &sc.potential, &p, &t).unwrap();
        assert!(rep.identity.residual.abs() < 10.0 * t.cert, "{p:?} {:e}", rep.identity.residual);
        // lhs = 2/s^4 for phi = ln s
        let s = p[0];
        assert!((rep.lhs - 2.0 / s.powi(4)).abs() < 10.0 * t.cert, "{p:?} {}", rep.lhs);
        assert!(rep.system_ok);
        assert_eq!(rep.verdict, Verdict::Pass);
        assert!(rep.slack >= -t.cert);
    }
}

#[test]
fn bochner_identity_with_curved_target() {
    let sc = scenario("cartesian-sphere").unwrap();
    let t = tol();
    for p in sc.points(8, 3) {
        let rep = bochner_residual(&sc.triple, &sc.map, &sc.potential, &p, &t).unwrap();
        let scale = rep.lhs.abs().max(1.0);
        assert!(rep.identity.residual.abs() < 10.0 * t.cert * scale, "{p:?} {:e}", rep.identity.residual);
    }
}

#[test]
fn potential_floor_for_negative_constant() {
    let sc = scenario("hemisphere-constant").unwrap();
    let v = Potential::constant(-0.5);
    let b = potential_bounds(&sc.map, &v, 3, &sc.points(8, 1)).unwrap();
    assert!((b.a - 1.0).abs() < 1e-9, "{}", b.a);
    assert!((b.inf_v + 0.5).abs() < 1e-15);
    assert!((square_root_bound(b.a, 3, 0.0) - 1.5f64.sqrt()).abs() < 1e-9);
}

#[test]
fn keller_osserman_bound_and_radial_profile() {
    let ko = KellerOsserman::for_energy_density(1.0, 3, 0.0).unwrap();
    assert!((ko.b - 2.0 / 3.0).abs() < 1e-15);
    assert!((ko.bound() - 1.5).abs() < 1e-12);
    // a positive start below the bound decays: sup is attained at s = 0
    let prof = radial_subsolution(ko, 1.0, 4.0, 41).unwrap();
    assert!(prof.within_bound);
    assert!((prof.sup - 1.0).abs() < 1e-9, "{}", prof.sup);
    assert!(prof.rows.windows(2).all(|w| w[1].1 <= w[0].1 + 1e-12));
    // the equilibrium v = a/b is stationary
    let eq = radial_subsolution(ko, 1.5, 4.0, 11).unwrap();
    assert!(eq.rows.iter().all(|r| (r.1 - 1.5).abs() < 1e-9));
    assert!(KellerOsserman::new(1.0, 0.0, 2.0).is_err());
    assert!(KellerOsserman::for_energy_density(1.0, 3, 0.5).is_err());
}

#[test]
fn liouville_on_compact_hemisphere() {
    let sc = scenario("hemisphere-constant").unwrap();
    let rep = liouville_bound(&sc.triple, &sc.map, &sc.potential, &sc.points(64, 1), None, &tol()).unwrap();
    assert_eq!(rep.hypotheses.potential.a, 0.0);
    assert!(rep.sup_energy_density < 1e-5);
    assert_eq!(rep.verdict, Verdict::Pass);
    assert!(rep.reduction_identity_gap < 1e-15);
}

#[test]
fn liouville_on_schwarzschild_with_volume_growth() {
    let sc = scenario("schwarzschild-constant").unwrap();
    let origin = RadialOrigin { axis: 0, value: 2.0 };
    let vg = f_volume_growth(&sc.triple, origin, &[1.0, 2.0, 4.0, 8.0, 16.0], Weight::Map, None).unwrap();
    let rep = liouville_bound(&sc.triple, &sc.map, &sc.potential, &sc.points(48, 1), Some(&vg), &tol()).unwrap();
    assert_eq!(rep.verdict, Verdict::Pass);
    assert!(rep.sup_energy_density < 1e-5);
}

#[test]
fn liouville_refuses_when_hypotheses_fail() {
    let sc = scenario("schwarzschild-constant").unwrap();
    let err = liouville_bound(&sc.triple, &sc.map, &sc.potential, &sc.points(8, 1), None, &tol()).unwrap_err();
    assert!(matches!(err, crate::Error::HypothesesNotMet(ref s) if s.contains("volume")), "{err}");
    let neg = scenario("hemisphere-negative").unwrap();
    let err = liouville_bound(&neg.triple, &neg.map, &neg.potential, &neg.points(8, 1), None, &tol()).unwrap_err();
    assert!(matches!(err, crate::Error::HypothesesNotMet(ref s) if s.contains("system")), "{err}");
}

#[test]
fn unknown_scenario() {
    assert!(scenario("nope").is_err());
    assert_eq!(scenario_names().len(), 5);
}

fn orthogonal(n: usize, angles: &[f64]) -> Mat<f64> {
    // product of Givens rotations
    let mut q = Mat::identity(n);
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            let (s, c) = angles[k % angles.len()].sin_cos();
            let g = Mat::from_fn(n, n, |a, b| match (a, b) {
                _ if a == i && b == i || a == j && b == j => c,
                _ if a == i && b == j => -s,
                _ if a == j && b == i => s,
                _ if a == b => 1.0,
                _ => 0.0,
            });
            q = q.matmul(&g);
            k += 1;
        }
    }
    q
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn q0_slack_is_nonnegative_for_admissible_kappa(
        entries in proptest::collection::vec(-1.0f64..1.0, 6),
        kappa in -1.0f64..0.5,
    ) {
        let x = Mat::from_vec(2, 3, entries);
        let r = RiemannTensor::constant(&Mat::identity(2), kappa);
        let (slack, scale) = q0_slack(&x, &r, (1.0 - 2.0 * kappa) / 3.0);
        prop_assert!(slack >= -1e-12 * scale.max(1e-300));
    }

    #[test]
    fn q0_invariant_under_orthonormal_reframing(
        entries in proptest::collection::vec(-1.0f64..1.0, 12),
        a in proptest::collection::vec(-3.0f64..3.0, 6),
        b in proptest::collection::vec(-3.0f64..3.0, 3),
        kappa in -0.9f64..0.3,
    ) {
        let x = Mat::from_vec(3, 4, entries);
        let r = RiemannTensor::constant(&Mat::identity(3), kappa);
        let y = orthogonal(3, &b).matmul(&x).matmul(&orthogonal(4, &a));
        let (s1, _) = q0_slack(&x, &r, 0.1);
        let (s2, _) = q0_slack(&y, &r, 0.1);
        prop_assert!((s1 - s2).abs() < 1e-12);
    }

    #[test]
    fn keller_osserman_bound_solves_the_balance(a in 0.0f64..10.0, kappa in -2.0f64..0.49) {
        let ko = KellerOsserman::for_energy_density(a, 3, kappa).unwrap();
        prop_assert!(ko.forcing(ko.bound()).abs() < 1e-10 * (1.0 + a * a));
    }
}
