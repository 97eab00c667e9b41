use proptest::prelude::*;
use rhlab::catalog::{self, build_instance, list_catalog, SolutionSpec, SpaceSpec};
use rhlab::runner::{run_scenario, CatalogConfig, InstanceConfig, SampleConfig, Scenario};
use rhlab::sampling::sample_points;
use rhlab::verifier::{hessian_ricci_residual_at, mu, mu_at, rh_residual, PointEval, Verdict};
use std::collections::BTreeMap;

fn scenario_for(entry: &str, checks: Vec<String>, expect: BTreeMap<String, Verdict>) -> Scenario {
    Scenario {
        name: entry.into(),
        description: String::new(),
        instance: InstanceConfig::Catalog(CatalogConfig { entry: Some(entry.into()), ..CatalogConfig::default() }),
        checks,
        samples: SampleConfig { count: 12, seed: 2, margin: 0.0 },
        tolerances: BTreeMap::new(),
        expect,
        outputs: vec![],
    }
}

#[test]
fn every_catalog_entry_reproduces_its_expected_verdicts() {
    for e in list_catalog() {
        let checks: Vec<String> = e.expected.keys().cloned().collect();
        let s = scenario_for(&e.name, checks, e.expected.clone());
        let r = run_scenario(&s).unwrap_or_else(|err| panic!("{}: {err}", e.name));
        for c in &r.checks {
            assert_eq!(c.verdict, c.expected, "{} / {}: {:?} {:?}", e.name, c.check, c.stats, c.errors);
        }
    }
}

#[test]
fn tashiro_mu_values_follow_the_profile() {
    for (name, expected) in [("hyperbolic2_cosh", -2.0), ("hyperbolic2_sinh", 2.0), ("hyperbolic2_exp", 0.0)] {
        let inst = catalog::entry(name).unwrap().build().unwrap();
        for p in sample_points(&inst.metric.domain, 16, 3).unwrap() {
            assert!((mu(&inst, &p).unwrap() - expected).abs() < 1e-8, "{name}");
            assert!(rh_residual(&inst, &p).unwrap() < 1e-8, "{name}");
        }
    }
}

fn sphere_form(a: f64, b: f64, c: f64) -> rhlab::verifier::RHInstance {
    let sol = SolutionSpec::named("linear_form").with("a", a).with("b", b).with("c", c);
    build_instance("form", &SpaceSpec::named("sphere2"), &sol).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn every_linear_form_solves_with_mu_twice_its_squared_norm(
        a in -2.0..2.0f64, b in -2.0..2.0f64, c in -2.0..2.0f64, seed in 0u64..1000,
    ) {
        let inst = sphere_form(a, b, c);
        let p = sample_points(&inst.metric.domain, 1, seed).unwrap().remove(0);
        let pe = PointEval::new(&inst, &p).unwrap();
        let norm2 = a * a + b * b + c * c;
        prop_assert!(hessian_ricci_residual_at(&pe, 1.0) < 1e-9 * (1.0 + norm2));
        prop_assert!((mu_at(&pe) - 2.0 * norm2).abs() < 1e-9 * (1.0 + norm2));
    }

    #[test]
    fn residual_scales_with_the_homothety(lambda in 0.2..5.0f64, seed in 0u64..1000) {
        let inst = catalog::entry("sphere2_z_squared").unwrap().build().unwrap();
        let p = sample_points(&inst.metric.domain, 1, seed).unwrap().remove(0);
        let rh = rh_residual(&inst, &p).unwrap();
        let rh_l = rh_residual(&inst.rescaled(lambda), &p).unwrap();
        prop_assert!((lambda * lambda * rh_l - rh).abs() < 1e-10 * (1.0 + rh));
        let m = mu(&inst, &p).unwrap();
        let m_l = mu(&inst.rescaled(lambda), &p).unwrap();
        prop_assert!((lambda * lambda * m_l - m).abs() < 1e-10 * (1.0 + m.abs()));
    }

    #[test]
    fn solutions_form_a_vector_space(s in -3.0..3.0f64, t in -3.0..3.0f64, seed in 0u64..1000) {
        let f = sphere_form(0.48 * s, -0.6 * s + t, 0.64 * s);
        let p = sample_points(&f.metric.domain, 1, seed).unwrap().remove(0);
        prop_assert!(rh_residual(&f, &p).unwrap() < 1e-9 * (1.0 + s.abs() + t.abs()));
    }
}

#[test]
fn negative_controls_fail_by_a_wide_margin() {
    for name in ["sphere2_z_squared", "euclidean4_x1_squared", "sphere2_x_sphere2_z"] {
        let inst = catalog::entry(name).unwrap().build().unwrap();
        let worst = sample_points(&inst.metric.domain, 16, 1)
            .unwrap()
            .iter()
            .map(|p| rh_residual(&inst, p).unwrap())
            .fold(0.0, f64::max);
        assert!(worst > 1e-3, "{name}: {worst}");
    }
}

#[test]
fn excluded_points_are_reported() {
    let inst = catalog::entry("schwarzschild_static").unwrap().build().unwrap();
    let err = rh_residual(&inst, &[0.1, 0.0, 0.0]).unwrap_err();
    assert!(matches!(err, rhlab::Error::PointExcluded { .. }), "{err}");
}
