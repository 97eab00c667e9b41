use std::f64::consts::PI;
use std::sync::OnceLock;

use nalgebra::DMatrix;

use super::spec::{ParamReader, SpaceSpec};
use crate::error::{Error, Result};
use crate::geometry::{ChartDomain, Exclusion, MetricField, ScalarField};
use crate::jet::Jet;
use crate::ode::{integrate, IntegrateOptions, OdeKind, OdeProfile};
use crate::verifier::EndoField;

/// A chart metric from the catalog, with an optional compatible complex structure.
#[derive(Clone, Debug)]
pub struct Space {
    pub spec: SpaceSpec,
    pub metric: MetricField,
    pub j: Option<EndoField>,
    /// Scalar curvature when it is a known constant.
    pub scal: Option<f64>,
    /// Factors of a product, in coordinate order.
    pub factors: Vec<Space>,
}

impl Space {
    pub fn dim(&self) -> usize {
        self.metric.dim
    }
}

pub const SPACE_NAMES: [&str; 14] = [
    "interval",
    "circle",
    "euclidean",
    "sphere2",
    "sphere3",
    "hyperbolic2_halfplane",
    "hyperbolic2_warped",
    "cylinder",
    "flat_torus",
    "product",
    "schwarzschild3",
    "conformal_flat3",
    "hyperbolic3_poisson",
    "hyperbolic3_ball",
];

fn standard_j(n: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(n, n);
    for k in 0..n / 2 {
        j[(2 * k + 1, 2 * k)] = 1.0;
        j[(2 * k, 2 * k + 1)] = -1.0;
    }
    j
}

fn flat(label: String, domain: ChartDomain) -> MetricField {
    let n = domain.dim();
    MetricField::diagonal(label, domain, move |x| vec![x[0].cst(1.0); n])
}

/// `|x|` as a jet.
pub(crate) fn radius(x: &[Jet]) -> Jet {
    let mut acc = x[0].sq();
    for xi in &x[1..] {
        acc += xi.sq();
    }
    acc.sqrt()
}

pub(crate) fn point_radius(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Harmonic functions on flat ℝ³ used by the conformal family.
pub(crate) fn harmonic_u(choice: usize, x: &[Jet]) -> Jet {
    match choice {
        0 => &x[0] * 0.3 - &x[1] * 0.2 + &x[2] * 0.1,
        1 => &x[0] * &x[1],
        _ => x[0].sq() - x[1].sq(),
    }
}

pub(crate) fn harmonic_label(choice: usize) -> &'static str {
    match choice {
        0 => "0.3x1-0.2x2+0.1x3",
        1 => "x1*x2",
        _ => "x1^2-x2^2",
    }
}

/// Radial profile on hyperbolic 3-space with `u'' + 2coth(r)u' = 2`,
/// regular at the origin. Integrated once per process.
pub fn poisson_profile() -> &'static OdeProfile {
    static PROFILE: OnceLock<OdeProfile> = OnceLock::new();
    PROFILE.get_or_init(|| {
        let r0: f64 = 1e-3;
        let u0 = r0 * r0 / 3.0 - r0.powi(4) / 45.0;
        let up0 = 2.0 * r0 / 3.0 - 4.0 * r0.powi(3) / 45.0;
        let opts = IntegrateOptions { tol: 1e-10, ..IntegrateOptions::default() };
        integrate(OdeKind::RadialPoisson { dim: 3, rhs: 2.0 }, &[u0, up0], (r0, 2.6), opts)
            .expect("radial Poisson profile integrates")
    })
}

/// Geodesic distance from the origin in the Poincaré ball.
pub(crate) fn ball_distance(x: &[Jet]) -> Jet {
    radius(x).atanh() * 2.0
}

fn poincare_ball(domain: ChartDomain) -> MetricField {
    MetricField::diagonal("H3 ball", domain, |x| {
        let w = (radius(x).sq() * -1.0 + 1.0).recip().sq() * 4.0;
        vec![w; 3]
    })
}

fn ball_domain() -> ChartDomain {
    ChartDomain::cube(3, -0.8, 0.8)
        .with_exclusion(Exclusion::new("|x| < 0.1", |p| point_radius(p) < 0.1))
        .with_exclusion(Exclusion::new("|x| > 0.8", |p| point_radius(p) > 0.8))
}

/// Build a catalog space.
pub fn make_space(spec: &SpaceSpec) -> Result<Space> {
    let mut rd = ParamReader::new(&spec.name, &spec.params);
    let name = spec.name.as_str();
    if name != "product" && !spec.factors.is_empty() {
        return Err(Error::BadParams(format!("{name} takes no factors")));
    }
    let (metric, j, scal, factors) = match name {
        "euclidean" => {
            let n = rd.count("n", 3, 1..=8)?;
            let half = rd.positive("half_width", 2.0)?;
            let m = flat(format!("R^{n}"), ChartDomain::cube(n, -half, half));
            let j = (n % 2 == 0).then(|| EndoField::constant("standard J", standard_j(n)));
            (m, j, Some(0.0), vec![])
        }
        "interval" => {
            let lo = rd.get("lo", -1.0)?;
            let hi = rd.get("hi", 1.0)?;
            if !(lo < hi) {
                return Err(Error::BadParams(format!("interval needs lo < hi, got [{lo}, {hi}]")));
            }
            (flat(format!("[{lo}, {hi}]"), ChartDomain::new(vec![lo], vec![hi])), None, Some(0.0), vec![])
        }
        "circle" => {
            let radius = rd.positive("radius", 1.0)?;
            let m = MetricField::diagonal(
                format!("S1(r={radius})"),
                ChartDomain::new(vec![0.0], vec![2.0 * PI]),
                move |x| vec![x[0].cst(radius * radius)],
            )
            .with_periodic(vec![true]);
            (m, None, Some(0.0), vec![])
        }
        "flat_torus" => {
            let n = rd.count("n", 2, 1..=8)?;
            let m = flat(format!("T^{n}"), ChartDomain::cube(n, 0.0, 2.0 * PI)).with_periodic(vec![true; n]);
            let j = (n % 2 == 0).then(|| EndoField::constant("standard J", standard_j(n)));
            (m, j, Some(0.0), vec![])
        }
        "cylinder" => {
            let half = rd.positive("half_length", 2.0)?;
            let m = flat("R x S1".into(), ChartDomain::new(vec![-half, 0.0], vec![half, 2.0 * PI]))
                .with_periodic(vec![false, true]);
            (m, Some(EndoField::constant("standard J", standard_j(2))), Some(0.0), vec![])
        }
        "sphere2" => {
            let margin = rd.get("margin", 0.05)?;
            let domain = ChartDomain::new(vec![margin, -PI], vec![PI - margin, PI]);
            let m = MetricField::diagonal("S2", domain, |x| vec![x[0].cst(1.0), x[0].sin().sq()])
                .with_periodic(vec![false, true]);
            let j = EndoField::new("S2 rotation", |p: &[f64]| {
                let s = p[0].sin();
                DMatrix::from_row_slice(2, 2, &[0.0, -s, 1.0 / s, 0.0])
            });
            (m, Some(j), Some(2.0), vec![])
        }
        "sphere3" => {
            let kappa = rd.positive("kappa", 1.0)?;
            let margin = rd.get("margin", 0.1)?;
            let domain = ChartDomain::new(vec![margin, margin, -PI], vec![PI - margin, PI - margin, PI]);
            let m = MetricField::diagonal(format!("S3(kappa={kappa})"), domain, move |x| {
                let s = x[0].sin().sq();
                vec![x[0].cst(1.0 / kappa), &s * (1.0 / kappa), &s * &x[1].sin().sq() * (1.0 / kappa)]
            })
            .with_periodic(vec![false, false, true]);
            (m, None, Some(6.0 * kappa), vec![])
        }
        "hyperbolic2_halfplane" => {
            let domain = ChartDomain::new(vec![-2.0, 0.25], vec![2.0, 3.0]);
            let m = MetricField::diagonal("H2 half-plane", domain, |x| {
                let w = x[1].sq().recip();
                vec![w.clone(), w]
            });
            (m, Some(EndoField::constant("standard J", standard_j(2))), Some(-2.0), vec![])
        }
        "hyperbolic2_warped" => {
            let domain = ChartDomain::new(vec![-1.5, -2.0], vec![1.5, 2.0]);
            let m = MetricField::diagonal("H2 warped", domain, |x| vec![x[0].cst(1.0), (&x[0] * 2.0).exp()]);
            let j = EndoField::new("H2 warped J", |p: &[f64]| {
                let e = p[0].exp();
                DMatrix::from_row_slice(2, 2, &[0.0, -e, 1.0 / e, 0.0])
            });
            (m, Some(j), Some(-2.0), vec![])
        }
        "schwarzschild3" => {
            let mass = rd.positive("m", 1.0)?;
            let (rmin, rmax) = (0.6 * mass, 10.0 * mass);
            let domain = ChartDomain::cube(3, -rmax, rmax)
                .with_exclusion(Exclusion::new(format!("r < {rmin}"), move |p| point_radius(p) < rmin))
                .with_exclusion(Exclusion::new(format!("r > {rmax}"), move |p| point_radius(p) > rmax));
            let m = MetricField::diagonal(format!("Schwarzschild(m={mass})"), domain, move |x| {
                let psi = (radius(x).recip() * (mass / 2.0) + 1.0).powi(4);
                vec![psi; 3]
            });
            (m, None, Some(0.0), vec![])
        }
        "conformal_flat3" => {
            let choice = rd.count("u", 1, 0..=2)?;
            let domain = ChartDomain::cube(3, -1.0, 1.0);
            let m = MetricField::diagonal(format!("exp(-2({})) R3", harmonic_label(choice)), domain, move |x| {
                vec![(harmonic_u(choice, x) * -2.0).exp(); 3]
            });
            (m, None, None, vec![])
        }
        "hyperbolic3_ball" => (poincare_ball(ball_domain()), None, Some(-6.0), vec![]),
        "hyperbolic3_poisson" => {
            let profile = poisson_profile();
            let inner = poincare_ball(ball_domain());
            let u = ScalarField::new("poisson u", move |x| profile.compose(&ball_distance(x)));
            let mut m = inner.conformal(&u.scale(-1.0));
            m.label = "exp(-2u) H3".into();
            (m, None, None, vec![])
        }
        "product" => {
            if spec.factors.len() != 2 {
                return Err(Error::BadParams(format!("product needs two factors, got {}", spec.factors.len())));
            }
            let a = make_space(&spec.factors[0])?;
            let b = make_space(&spec.factors[1])?;
            let metric = a.metric.product(&b.metric);
            let j = match (&a.j, &b.j) {
                (Some(ja), Some(jb)) => {
                    let (ja, jb) = (ja.clone(), jb.clone());
                    let (n1, n2) = (a.dim(), b.dim());
                    Some(EndoField::new(format!("{} + {}", ja.label, jb.label), move |p: &[f64]| {
                        let mut m = DMatrix::zeros(n1 + n2, n1 + n2);
                        m.view_mut((0, 0), (n1, n1)).copy_from(&ja.at(&p[..n1]));
                        m.view_mut((n1, n1), (n2, n2)).copy_from(&jb.at(&p[n1..]));
                        m
                    }))
                }
                _ => None,
            };
            let scal = a.scal.zip(b.scal).map(|(x, y)| x + y);
            (metric, j, scal, vec![a, b])
        }
        other => return Err(Error::UnknownEntry(other.to_string())),
    };
    rd.finish()?;
    Ok(Space { spec: spec.clone(), metric, j, scal, factors })
}
