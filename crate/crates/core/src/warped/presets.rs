use serde::{Deserialize, Serialize};

use super::spec::{CaseTag, WarpedSpec};
use crate::catalog::{make_solution, make_space, SolutionSpec, SpaceSpec};
use crate::error::{Error, Result};
use crate::geometry::{ChartDomain, MetricField, ScalarField};

/// Named warped-product instances, with whether the assembled function is
/// expected to solve the equation.
pub const PRESETS: [(&str, bool); 12] = [
    ("a_hyperbolic_line", true),
    ("a_interval_sphere", true),
    ("a_flat_cone", true),
    ("a_schwarzschild_sphere", true),
    ("a_cone_wrong_kappa", false),
    ("a_sphere_z_squared", false),
    ("b_hyperbolic", true),
    ("b_flat_torus", true),
    ("b_conformal_sphere", true),
    ("b_polar_r3", false),
    ("b_hyperbolic_wrong_f1", false),
    ("product_interval_sphere", true),
];

/// A warped instance in a scenario: a preset name or a general description
/// built from catalog spaces and solutions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
#[allow(clippy::large_enum_variant)]
pub enum WarpedConfig {
    Preset {
        preset: String,
    },
    General {
        label: String,
        base: SpaceSpec,
        fiber: SpaceSpec,
        warp: SolutionSpec,
        f1: SolutionSpec,
        f2: SolutionSpec,
        case: CaseTag,
    },
}

impl WarpedConfig {
    pub fn build(&self) -> Result<WarpedSpec> {
        match self {
            WarpedConfig::Preset { preset } => warped_preset(preset),
            WarpedConfig::General { label, base, fiber, warp, f1, f2, case } => {
                let b = make_space(base)?;
                let fb = make_space(fiber)?;
                let spec = WarpedSpec {
                    label: label.clone(),
                    warp: make_solution(&b, warp)?,
                    f1: make_solution(&b, f1)?,
                    f2: make_solution(&fb, f2)?,
                    base: b.metric,
                    fiber: fb.metric,
                    case: *case,
                };
                spec.validate()?;
                Ok(spec)
            }
        }
    }
}

fn space(spec: SpaceSpec) -> MetricField {
    make_space(&spec).expect("preset space parameters are valid").metric
}

fn interval(lo: f64, hi: f64) -> MetricField {
    space(SpaceSpec::named("interval").with("lo", lo).with("hi", hi))
}

fn line() -> MetricField {
    space(SpaceSpec::named("euclidean").with("n", 1.0))
}

fn sphere2() -> MetricField {
    space(SpaceSpec::named("sphere2"))
}

fn height() -> ScalarField {
    ScalarField::new("z", |x| x[0].cos())
}

fn exp_t(rate: f64) -> ScalarField {
    ScalarField::new(format!("exp({rate}t)"), move |x| (&x[0] * rate).exp())
}

fn cone(kappa_factor: f64, label: &str) -> WarpedSpec {
    let (a, b) = (0.5, 0.2);
    let phi = ScalarField::new(format!("{a}t+{b}"), move |x| &x[0] * a + b);
    WarpedSpec {
        label: label.into(),
        base: interval(0.5, 2.0),
        fiber: space(SpaceSpec::named("sphere3").with("kappa", kappa_factor * a * a)),
        warp: phi.clone(),
        f1: phi,
        f2: ScalarField::new("cos chi", |x| x[0].cos()),
        case: CaseTag::A,
    }
}

fn schwarzschild_static(m: f64) -> ScalarField {
    ScalarField::new("static potential", move |x| {
        let mut r2 = x[0].sq();
        for xi in &x[1..] {
            r2 += xi.sq();
        }
        let q = r2.sqrt().recip() * (m / 2.0);
        (q.clone() * -1.0 + 1.0) / (q + 1.0)
    })
}

/// Build a preset by name.
pub fn warped_preset(name: &str) -> Result<WarpedSpec> {
    let spec = match name {
        "a_hyperbolic_line" => WarpedSpec {
            label: name.into(),
            base: interval(-1.0, 1.0),
            fiber: line(),
            warp: exp_t(1.0),
            f1: exp_t(1.0),
            f2: ScalarField::new("s", |x| x[0].clone()),
            case: CaseTag::A,
        },
        "a_interval_sphere" => WarpedSpec {
            label: name.into(),
            base: interval(-1.0, 1.0),
            fiber: sphere2(),
            warp: ScalarField::constant(1.0),
            f1: ScalarField::constant(1.0),
            f2: height(),
            case: CaseTag::A,
        },
        "a_flat_cone" => cone(1.0, name),
        "a_cone_wrong_kappa" => cone(2.0, name),
        "a_schwarzschild_sphere" => WarpedSpec {
            label: name.into(),
            base: space(SpaceSpec::named("schwarzschild3").with("m", 1.0)),
            fiber: sphere2(),
            warp: schwarzschild_static(1.0),
            f1: schwarzschild_static(1.0),
            f2: height(),
            case: CaseTag::A,
        },
        "a_sphere_z_squared" => WarpedSpec {
            label: name.into(),
            base: interval(-1.0, 1.0),
            fiber: sphere2(),
            warp: ScalarField::constant(1.0),
            f1: ScalarField::constant(1.0),
            f2: ScalarField::new("z^2", |x| x[0].cos().sq()),
            case: CaseTag::A,
        },
        "b_hyperbolic" => WarpedSpec {
            label: name.into(),
            base: interval(-1.0, 1.0),
            fiber: line(),
            warp: exp_t(1.0),
            f1: exp_t(1.0),
            f2: ScalarField::constant(1.0),
            case: CaseTag::B,
        },
        "b_flat_torus" => WarpedSpec {
            label: name.into(),
            base: interval(-1.0, 1.0),
            fiber: space(SpaceSpec::named("flat_torus").with("n", 2.0)),
            warp: ScalarField::constant(1.0),
            f1: ScalarField::new("t+2", |x| &x[0] + 2.0),
            f2: ScalarField::constant(1.0),
            case: CaseTag::B,
        },
        "b_conformal_sphere" => {
            let c = 0.3;
            let base = MetricField::diagonal("exp(2c/r) dr^2", ChartDomain::new(vec![0.5], vec![2.0]), move |x| {
                vec![(x[0].recip() * (2.0 * c)).exp()]
            });
            WarpedSpec {
                label: name.into(),
                base,
                fiber: sphere2(),
                warp: ScalarField::new("r exp(c/r)", move |x| &x[0] * &(x[0].recip() * c).exp()),
                f1: ScalarField::new("exp(c/r)", move |x| (x[0].recip() * c).exp()),
                f2: ScalarField::constant(1.0),
                case: CaseTag::B,
            }
        }
        "b_polar_r3" => WarpedSpec {
            label: name.into(),
            base: interval(0.5, 2.0),
            fiber: sphere2(),
            warp: ScalarField::new("r", |x| x[0].clone()),
            f1: ScalarField::new("r", |x| x[0].clone()),
            f2: ScalarField::constant(1.0),
            case: CaseTag::B,
        },
        "b_hyperbolic_wrong_f1" => WarpedSpec {
            label: name.into(),
            base: interval(-1.0, 1.0),
            fiber: line(),
            warp: exp_t(1.0),
            f1: exp_t(2.0),
            f2: ScalarField::constant(1.0),
            case: CaseTag::B,
        },
        "product_interval_sphere" => WarpedSpec {
            label: name.into(),
            base: interval(-1.0, 1.0),
            fiber: sphere2(),
            warp: ScalarField::constant(1.0),
            f1: ScalarField::constant(1.0),
            f2: height(),
            case: CaseTag::Product,
        },
        other => return Err(Error::UnknownEntry(format!("warped preset `{other}`"))),
    };
    spec.validate()?;
    Ok(spec)
}
