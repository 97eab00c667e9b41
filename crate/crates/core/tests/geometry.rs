use proptest::prelude::*;
use rhlab::catalog::{make_space, SpaceSpec};
use rhlab::geometry::{curvature_pack, ChartDomain, MetricField};
use rhlab::sampling::sample_points;
use rhlab::verifier::pack_invariants;

fn warped_test_metric(a: f64, b: f64) -> MetricField {
    MetricField::new("test", ChartDomain::cube(3, -1.0, 1.0), move |x| {
        let z = x[0].cst(0.0);
        let g00 = (&x[1] * a).exp() + 1.0;
        let g11 = x[0].sq() * b + 2.0;
        let g22 = (&x[0] * &x[1]).cos() + 2.0;
        let g01 = (&x[2] * 0.3).sin() * 0.2;
        vec![g00, g01.clone(), z.clone(), g01, g11, z.clone(), z.clone(), z, g22]
    })
}

proptest! {
    #[test]
    fn riemann_symmetries_on_a_generic_metric(
        a in -1.0..1.0f64, b in 0.0..1.0f64,
        p in proptest::collection::vec(-0.9..0.9f64, 3),
    ) {
        let pack = curvature_pack(&warped_test_metric(a, b), &p).unwrap();
        let inv = pack_invariants(&pack);
        prop_assert!(inv.antisymmetry < 1e-10);
        prop_assert!(inv.pair_symmetry < 1e-10);
        prop_assert!(inv.first_bianchi < 1e-10);
        prop_assert!(inv.scalar_trace < 1e-10);
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    prop_assert_eq!(pack.gamma(k, i, j), pack.gamma(k, j, i));
                }
            }
        }
    }

    #[test]
    fn scalar_curvature_scales_inversely(lambda in 0.3..4.0f64, p in proptest::collection::vec(-0.9..0.9f64, 3)) {
        let m = warped_test_metric(0.5, 0.5);
        let s = curvature_pack(&m, &p).unwrap().scal;
        let s_l = curvature_pack(&m.scaled(lambda), &p).unwrap().scal;
        prop_assert!((lambda * lambda * s_l - s).abs() < 1e-9 * (1.0 + s.abs()));
    }
}

#[test]
fn round_sphere_has_unit_sectional_curvature() {
    let sphere = make_space(&SpaceSpec::named("sphere2")).unwrap();
    for p in sample_points(&sphere.metric.domain, 20, 4).unwrap() {
        let pack = curvature_pack(&sphere.metric, &p).unwrap();
        assert!((pack.scal - 2.0).abs() < 1e-10);
        let ric = &pack.ric - nalgebra::DMatrix::identity(2, 2);
        assert!(ric.amax() < 1e-10);
    }
}

#[test]
fn hyperbolic_half_plane_has_scalar_minus_two() {
    let h = make_space(&SpaceSpec::named("hyperbolic2_halfplane")).unwrap();
    for p in sample_points(&h.metric.domain, 20, 2).unwrap() {
        assert!((curvature_pack(&h.metric, &p).unwrap().scal + 2.0).abs() < 1e-10);
    }
}

#[test]
fn flat_spaces_are_flat() {
    for spec in [SpaceSpec::named("euclidean").with("n", 4.0), SpaceSpec::named("cylinder")] {
        let s = make_space(&spec).unwrap();
        let p = sample_points(&s.metric.domain, 1, 1).unwrap().remove(0);
        let pack = curvature_pack(&s.metric, &p).unwrap();
        assert!(pack.riemann.iter().all(|v| *v == 0.0));
    }
}

#[test]
fn schwarzschild_is_scalar_flat_but_not_ricci_flat() {
    let s = make_space(&SpaceSpec::named("schwarzschild3")).unwrap();
    let pack = curvature_pack(&s.metric, &[1.0, 0.5, -0.3]).unwrap();
    assert!(pack.scal.abs() < 1e-10);
    assert!(pack.ric.amax() > 0.01);
}

#[test]
fn sampling_is_deterministic_and_seed_dependent() {
    let d = ChartDomain::cube(3, -1.0, 1.0);
    let a = sample_points(&d, 50, 7).unwrap();
    assert_eq!(a, sample_points(&d, 50, 7).unwrap());
    assert_ne!(a, sample_points(&d, 50, 8).unwrap());
    assert!(a.iter().all(|p| d.contains(p)));
}
