use rhlab::catalog::{SolutionSpec, SpaceSpec};
use rhlab::geometry::curvature_pack;
use rhlab::sampling::sample_points;
use rhlab::warped::{
    assemble, besse_ricci, case_a_residuals, mu1_at, warped_preset, warped_report, CaseTag, WarpedConfig, PRESETS,
};
use rhlab::Error;

const TOL: f64 = 1e-7;

fn points(name: &str, n: usize) -> (rhlab::warped::WarpedSpec, Vec<Vec<f64>>) {
    let spec = warped_preset(name).unwrap();
    let (m, _) = assemble(&spec).unwrap();
    let pts = sample_points(&m.domain, n, 11).unwrap();
    (spec, pts)
}

#[test]
fn case_residuals_agree_with_the_assembled_residual_on_every_preset() {
    for (name, solves) in PRESETS {
        let (spec, pts) = points(name, 10);
        let r = warped_report(&spec, &pts, TOL).unwrap();
        assert_eq!(r.equivalence_violations, 0, "{name}");
        let assembled = r.points.iter().map(|p| p.residuals["assembled_rh"]).fold(0.0, f64::max);
        if solves {
            assert!(assembled < TOL, "{name}: {assembled}");
        } else {
            assert!(assembled > 1e-3, "{name}: negative control only reaches {assembled}");
        }
    }
}

#[test]
fn closed_form_ricci_matches_the_numeric_one() {
    for (name, _) in PRESETS {
        let (spec, pts) = points(name, 6);
        let (m, _) = assemble(&spec).unwrap();
        for p in &pts {
            let numeric = curvature_pack(&m, p).unwrap().ric;
            let closed = besse_ricci(&spec, p).unwrap();
            assert!((numeric - closed).amax() < TOL, "{name} at {p:?}");
        }
    }
}

#[test]
fn polar_coordinates_fail_through_the_fiber() {
    let (spec, pts) = points("b_polar_r3", 8);
    let r = warped_report(&spec, &pts, TOL).unwrap();
    for p in &r.points {
        assert!(p.residuals["res_base"] < TOL);
        assert!((p.residuals["einstein_fiber"] - 1.0).abs() < 1e-9);
    }
}

#[test]
fn mu1_is_constant_on_case_a_solutions() {
    for (name, mu1) in [("a_hyperbolic_line", None), ("a_flat_cone", Some(0.25))] {
        let (spec, pts) = points(name, 12);
        let r = warped_report(&spec, &pts, TOL).unwrap();
        assert!(r.mu1.spread < TOL, "{name}");
        if let Some(v) = mu1 {
            assert!((r.mu1.mean - v).abs() < 1e-9);
        }
    }
}

#[test]
fn total_mu_equals_the_fiber_constant() {
    for name in ["a_hyperbolic_line", "a_interval_sphere", "a_flat_cone", "a_schwarzschild_sphere"] {
        let (spec, pts) = points(name, 8);
        let r = warped_report(&spec, &pts, TOL).unwrap();
        for p in &r.points {
            assert!(p.residuals["mu_relation_corrected"] < TOL, "{name}");
        }
        assert!((r.mu.mean - r.mu2.mean).abs() < TOL, "{name}");
    }
}

#[test]
fn wrong_fiber_curvature_shows_in_the_fiber_residual() {
    let (spec, pts) = points("a_cone_wrong_kappa", 4);
    let x1 = &pts[0][..spec.n1()];
    let mu1 = mu1_at(&spec, x1).unwrap();
    let r = case_a_residuals(&spec, &pts[0], mu1).unwrap();
    assert!(r.res_base < TOL);
    assert!(r.res_fiber > 1e-3, "{}", r.res_fiber);
}

#[test]
fn case_specific_residuals_reject_the_other_case() {
    let (spec, pts) = points("b_hyperbolic", 1);
    assert!(matches!(case_a_residuals(&spec, &pts[0], 0.0), Err(Error::CaseMismatch(_))));
    assert_eq!(spec.case, CaseTag::B);
}

#[test]
fn unknown_preset_is_reported() {
    assert!(matches!(warped_preset("nope"), Err(Error::UnknownEntry(_))));
}

#[test]
fn general_config_validates_the_warp() {
    let cfg = WarpedConfig::General {
        label: "bad".into(),
        base: SpaceSpec::named("sphere2"),
        fiber: SpaceSpec::named("sphere2"),
        warp: SolutionSpec::named("z"),
        f1: SolutionSpec::named("z"),
        f2: SolutionSpec::named("z"),
        case: CaseTag::A,
    };
    assert!(matches!(cfg.build(), Err(Error::NonPositiveWarp(_))));
}
