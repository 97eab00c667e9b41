use rhlab::ode::{
    closed_family, family_residual, integrate, ode_residual, Family, GradientKind, IntegrateOptions, OdeKind,
    OdeProfile, Termination,
};

fn opts(tol: f64) -> IntegrateOptions {
    IntegrateOptions { tol, ..IntegrateOptions::default() }
}

fn max_dev(p: &OdeProfile, exact: impl Fn(f64) -> f64) -> f64 {
    p.grid.iter().zip(&p.u).map(|(&t, &u)| (u - exact(t)).abs()).fold(0.0, f64::max)
}

#[test]
fn circ_profile_is_sine() {
    let kind = OdeKind::Gradient { profile: GradientKind::Circ };
    let p = integrate(kind, &[0.0], (0.0, 1.5), opts(1e-12)).unwrap();
    assert_eq!(p.termination, Termination::Completed);
    assert!(max_dev(&p, f64::sin) < 1e-9, "dev {}", max_dev(&p, f64::sin));
}

#[test]
fn cosh_profile_matches_shifted_cosh() {
    let kind = OdeKind::Gradient { profile: GradientKind::Cosh };
    let y0: f64 = 1.0001;
    let p = integrate(kind, &[y0], (0.0, 1.0), opts(1e-12)).unwrap();
    let shift = y0.acosh();
    assert!(max_dev(&p, |t| (t + shift).cosh()) < 1e-7);
}

#[test]
fn first_integrals_are_conserved() {
    for (profile, y0) in
        [(GradientKind::Circ, 0.1), (GradientKind::Sinh, 0.3), (GradientKind::Cosh, 1.2), (GradientKind::Exp, 0.5)]
    {
        let kind = OdeKind::Gradient { profile };
        let p = integrate(kind, &[y0], (0.0, 1.2), opts(1e-12)).unwrap();
        let (eps, energy) = profile.epsilon_and_energy();
        let worst = p
            .midpoints()
            .iter()
            .map(|&t| {
                let (y, yp, _) = p.interpolate(t).unwrap();
                (yp * yp + eps * y * y - energy).abs()
            })
            .fold(0.0, f64::max);
        assert!(worst < 1e-9, "{profile:?}: {worst:e}");
    }
}

#[test]
fn base_mu1_zero_matches_power_law() {
    let kind = OdeKind::BaseSecondOrder { n2: 3, mu1: 0.0 };
    let p = integrate(kind, &[1.0, 2.0 / 3.0], (0.0, 1.0), opts(1e-12)).unwrap();
    let dev = max_dev(&p, |t| (t + 1.0).powf(2.0 / 3.0));
    assert!(dev < 1e-8, "dev {dev:e}");
    assert!(ode_residual(&p) < 1e-8, "residual {:e}", ode_residual(&p));
}

#[test]
fn backward_power_law_reports_singularity() {
    let kind = OdeKind::BaseSecondOrder { n2: 3, mu1: 0.0 };
    let p = integrate(kind, &[1.0, 2.0 / 3.0], (0.0, -2.0), opts(1e-10)).unwrap();
    match p.termination {
        Termination::Singularity { t } | Termination::ZeroCrossing { t } => assert!((t + 1.0).abs() < 1e-3, "t = {t}"),
        other => panic!("expected a boundary event, got {other:?}"),
    }
    assert!(p.grid.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn families_solve_their_equation() {
    let cases = [
        (Family::A1, 1.0, 0.0, 2.0),
        (Family::B1, 1.5, 0.7, 0.0),
        (Family::C1, 2.0, 0.1, -1.0),
        (Family::D1, 1.0, 2.0, -1.0),
        (Family::E1, 1.0, 0.5, -2.0),
    ];
    for (fam, a, phi, mu1) in cases {
        for t in [0.0, 0.3, 0.9] {
            assert!(family_residual(fam, a, phi, mu1, t).unwrap() < 1e-10);
        }
        let (u0, up0) = closed_family(fam, a, phi, mu1, 0.0).unwrap();
        let p = integrate(OdeKind::LineBase { mu1 }, &[u0, up0], (0.0, 1.0), opts(1e-12)).unwrap();
        let dev = max_dev(&p, |t| closed_family(fam, a, phi, mu1, t).unwrap().0);
        assert!(dev < 1e-8, "{fam:?}: {dev:e}");
    }
    let (u, up) = closed_family(Family::A1, 1.0, 0.0, 2.0, 0.0).unwrap();
    assert_eq!((u, up), (1.0, 0.0));
    assert!(closed_family(Family::A1, 1.0, 0.0, -1.0, 0.0).is_err());
}

#[test]
fn corrupted_profile_is_detected() {
    let p = OdeProfile::from_fn(OdeKind::LineBase { mu1: 0.0 }, 0.0, 1.0, 201, |t| (t.exp(), t.exp()));
    assert!(ode_residual(&p) < 1e-11, "{:e}", ode_residual(&p));
    let mut bad = p.clone();
    for (i, u) in bad.u.iter_mut().enumerate() {
        if i % 2 == 1 {
            *u += 1e-3;
        }
    }
    assert!(ode_residual(&bad) > 1e-4);
}

#[test]
fn radicand_negative_rejected() {
    let kind = OdeKind::Gradient { profile: GradientKind::Cosh };
    assert!(integrate(kind, &[0.5], (0.0, 1.0), opts(1e-10)).is_err());
}

#[test]
fn circ_stops_at_the_maximum() {
    let kind = OdeKind::Gradient { profile: GradientKind::Circ };
    let p = integrate(kind, &[0.0], (0.0, 3.0), opts(1e-10)).unwrap();
    match p.termination {
        Termination::RadicandZero { t } => assert!((t - std::f64::consts::FRAC_PI_2).abs() < 1e-3, "t = {t}"),
        other => panic!("expected radicand event, got {other:?}"),
    }
}

#[test]
fn poisson_profile_matches_closed_form() {
    // u = r coth r − 1 solves u'' + 2 coth(r) u' = 2.
    let r0: f64 = 1e-3;
    let u0 = r0 * r0 / 3.0 - r0.powi(4) / 45.0;
    let up0 = 2.0 * r0 / 3.0 - 4.0 * r0.powi(3) / 45.0;
    let p = integrate(OdeKind::RadialPoisson { dim: 3, rhs: 2.0 }, &[u0, up0], (r0, 3.0), opts(1e-11)).unwrap();
    let dev = max_dev(&p, |r| r / r.tanh() - 1.0);
    assert!(dev < 1e-9, "dev {dev:e}");
}

#[test]
fn taylor_expansion_of_exp_profile() {
    let p = OdeProfile::from_fn(OdeKind::LineBase { mu1: 0.0 }, 0.0, 1.0, 201, |t| (t.exp(), t.exp()));
    let c = p.taylor(0.5, 5).unwrap();
    let e = 0.5f64.exp();
    let fact = [1.0, 1.0, 2.0, 6.0, 24.0, 120.0];
    for k in 0..=5 {
        assert!((c[k] * fact[k] - e).abs() < 1e-9, "k={k}: {}", c[k] * fact[k]);
    }
}
