use super::spaces::{ball_distance, harmonic_u, poisson_profile, radius, Space};
use super::spec::{ParamReader, SolutionSpec};
use crate::error::{Error, Result};
use crate::geometry::ScalarField;
use crate::jet::Jet;
use crate::ode::Family;

const AXIS_KEYS: [&str; 8] = ["a0", "a1", "a2", "a3", "a4", "a5", "a6", "a7"];

pub const SOLUTION_NAMES: [&str; 16] = [
    "constant",
    "affine",
    "x1_squared",
    "radial_distance",
    "linear_form",
    "z",
    "z_squared",
    "cos_chi",
    "cosh",
    "sinh",
    "exp",
    "static_potential",
    "exp_neg_u",
    "extend",
    "poisson_u",
    "family",
];

fn incompatible(space: &Space, sol: &SolutionSpec) -> Error {
    Error::IncompatiblePair(format!("{} on {}", sol.display(), space.spec.display()))
}

/// Build a candidate solution on a catalog space.
pub fn make_solution(space: &Space, sol: &SolutionSpec) -> Result<ScalarField> {
    let owner = format!("solution {}", sol.name);
    let mut rd = ParamReader::new(&owner, &sol.params);
    let n = space.dim();
    let sname = space.spec.name.as_str();
    let flat = matches!(sname, "euclidean" | "flat_torus" | "cylinder" | "interval" | "circle");
    if sol.name != "extend" && sol.inner.is_some() {
        return Err(Error::BadParams(format!("{} takes no inner solution", sol.name)));
    }
    let field = match (sol.name.as_str(), sname) {
        ("constant", _) => ScalarField::constant(rd.get("c", 1.0)?),
        ("affine", _) if flat => {
            let mut coeffs = Vec::with_capacity(n);
            for (k, key) in AXIS_KEYS.iter().enumerate().take(n) {
                let a = rd.get(key, if k == 0 { 1.0 } else { 0.0 })?;
                if a != 0.0 && space.metric.periodic_axes[k] {
                    return Err(Error::IncompatiblePair(format!("affine slope along periodic axis {k}")));
                }
                coeffs.push(a);
            }
            let c = rd.get("c", 0.0)?;
            let label = format!("affine{coeffs:?}+{c}");
            ScalarField::new(label, move |x| {
                let mut acc = x[0].cst(c);
                for (xi, a) in x.iter().zip(&coeffs) {
                    acc += xi * *a;
                }
                acc
            })
        }
        ("family", "interval") => {
            let fam = Family::ALL[rd.count("family", 1, 0..=4)?];
            let a = rd.positive("A", 1.0)?;
            let phi = rd.get("phi", 1.0)?;
            let mu1 = rd.get("mu1", 0.0)?;
            fam.jet(a, phi, mu1, &Jet::variable(1, 0, 0.0, 0))?;
            ScalarField::new(format!("{}(A={a}, phi={phi}, mu1={mu1})", fam.name()), move |x| {
                fam.jet(a, phi, mu1, &x[0]).expect("parameters validated")
            })
        }
        ("x1_squared", "euclidean") => ScalarField::new("x1^2", |x| x[0].sq()),
        ("radial_distance", "euclidean") => ScalarField::new("|x|", radius),
        ("linear_form" | "z", "sphere2") => {
            let a = rd.get("a", 0.0)?;
            let b = rd.get("b", 0.0)?;
            let c = rd.get("c", 1.0)?;
            ScalarField::new(format!("{a}x+{b}y+{c}z"), move |x| {
                let s = x[0].sin();
                &s * &x[1].cos() * a + &s * &x[1].sin() * b + x[0].cos() * c
            })
        }
        ("z_squared", "sphere2") => ScalarField::new("z^2", |x| x[0].cos().sq()),
        ("cos_chi", "sphere3") => ScalarField::new("cos chi", |x| x[0].cos()),
        ("cosh", "hyperbolic2_halfplane") => {
            let a = rd.get("A", 1.0)?;
            ScalarField::new("cosh d", move |x| (x[0].sq() + x[1].sq() + 1.0) / (&x[1] * 2.0) * a)
        }
        ("sinh", "hyperbolic2_halfplane") => {
            let a = rd.get("A", 1.0)?;
            ScalarField::new("sinh", move |x| &x[0] / &x[1] * a)
        }
        ("exp", "hyperbolic2_halfplane") => {
            let a = rd.get("A", 1.0)?;
            ScalarField::new("exp", move |x| x[1].recip() * a)
        }
        ("exp", "hyperbolic2_warped") => {
            let a = rd.get("A", 1.0)?;
            ScalarField::new("e^t", move |x| x[0].exp() * a)
        }
        ("static_potential", "schwarzschild3") => {
            let m = space.spec.params.get("m").copied().unwrap_or(1.0);
            ScalarField::new("static potential", move |x| {
                let q = radius(x).recip() * (m / 2.0);
                (q.clone() * -1.0 + 1.0) / (q + 1.0)
            })
        }
        ("exp_neg_u", "conformal_flat3") => {
            let choice = space.spec.params.get("u").copied().unwrap_or(1.0) as usize;
            ScalarField::new("exp(-u)", move |x| (harmonic_u(choice, x) * -1.0).exp())
        }
        ("exp_neg_u", "hyperbolic3_poisson") => {
            let profile = poisson_profile();
            ScalarField::new("exp(-u)", move |x| (profile.compose(&ball_distance(x)) * -1.0).exp())
        }
        ("poisson_u", "hyperbolic3_ball") => {
            let profile = poisson_profile();
            ScalarField::new("poisson u", move |x| profile.compose(&ball_distance(x)))
        }
        ("extend", "product") => {
            let factor = rd.count("factor", 0, 0..=1)?;
            let inner =
                sol.inner.as_deref().ok_or_else(|| Error::BadParams("extend needs an inner solution".into()))?;
            let f = make_solution(&space.factors[factor], inner)?;
            let start = if factor == 0 { 0 } else { space.factors[0].dim() };
            f.lift(start, space.factors[factor].dim())
        }
        _ => return Err(incompatible(space, sol)),
    };
    rd.finish()?;
    Ok(field)
}
