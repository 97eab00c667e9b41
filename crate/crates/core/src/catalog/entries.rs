use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::spec::{SolutionSpec, SpaceSpec};
use crate::verifier::Verdict;

/// A named (space, solution) pair with the verdicts the checks must reproduce.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub space: SpaceSpec,
    pub solution: SolutionSpec,
    pub tags: Vec<String>,
    /// Check name to expected verdict under default tolerances.
    pub expected: BTreeMap<String, Verdict>,
    pub note: String,
}

impl CatalogEntry {
    pub fn has_tag(&self, tag: &str) -> bool {
        self.tags.iter().any(|t| t == tag)
    }
}

fn entry(
    name: &str,
    space: SpaceSpec,
    solution: SolutionSpec,
    tags: &[&str],
    expected: &[(&str, Verdict)],
    note: &str,
) -> CatalogEntry {
    CatalogEntry {
        name: name.into(),
        space,
        solution,
        tags: tags.iter().map(|t| t.to_string()).collect(),
        expected: expected.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        note: note.into(),
    }
}

fn s(name: &str) -> SpaceSpec {
    SpaceSpec::named(name)
}

fn f(name: &str) -> SolutionSpec {
    SolutionSpec::named(name)
}

/// All catalog entries in a stable order.
pub fn list_catalog() -> Vec<CatalogEntry> {
    use Verdict::{Fail, Pass};
    let solved = [("rh_residual", Pass), ("mu", Pass), ("identity_suite", Pass), ("curvature_invariants", Pass)];
    let with = |extra: &[(&'static str, Verdict)]| -> Vec<(&'static str, Verdict)> {
        let mut v = solved.to_vec();
        v.extend_from_slice(extra);
        v
    };
    let s2t2 = || SpaceSpec::product(s("sphere2"), s("flat_torus").with("n", 2.0));
    let h2t2 = || SpaceSpec::product(s("hyperbolic2_halfplane"), s("flat_torus").with("n", 2.0));
    vec![
        entry(
            "euclidean_affine",
            s("euclidean").with("n", 3.0),
            f("affine").with("a0", 0.5).with("a1", -1.0).with("a2", 0.25).with("c", 0.3),
            &["constant-S", "flat"],
            &with(&[("level_set", Pass)]),
            "affine functions on flat space",
        ),
        entry(
            "euclidean4_affine",
            s("euclidean").with("n", 4.0),
            f("affine").with("a0", 1.0).with("a3", -2.0),
            &["constant-S", "flat", "kahler"],
            &with(&[("kahler", Pass)]),
            "flat C^2 with the standard complex structure",
        ),
        entry(
            "euclidean4_x1_squared",
            s("euclidean").with("n", 4.0),
            f("x1_squared"),
            &["flat", "kahler", "negative"],
            &[("rh_residual", Fail), ("kahler", Fail)],
            "rank-one Hessian, not J-invariant",
        ),
        entry(
            "sphere2_linear_form",
            s("sphere2"),
            f("linear_form").with("a", 0.48).with("b", -0.6).with("c", 0.64),
            &["constant-S", "obata", "kahler"],
            &with(&[("kahler", Pass)]),
            "restrictions of linear forms to the unit sphere",
        ),
        entry(
            "sphere2_z_squared",
            s("sphere2"),
            f("z_squared"),
            &["constant-S", "negative"],
            &[("rh_residual", Fail), ("curvature_invariants", Pass)],
            "square of a first eigenfunction",
        ),
        entry(
            "hyperbolic2_cosh",
            s("hyperbolic2_halfplane"),
            f("cosh"),
            &["constant-S", "tashiro", "kahler"],
            &with(&[("kahler", Pass)]),
            "cosh of the distance to (0,1); one critical point",
        ),
        entry(
            "hyperbolic2_sinh",
            s("hyperbolic2_halfplane"),
            f("sinh"),
            &["constant-S", "tashiro"],
            &solved,
            "sinh of the signed distance to a geodesic",
        ),
        entry(
            "hyperbolic2_exp",
            s("hyperbolic2_halfplane"),
            f("exp"),
            &["constant-S", "tashiro"],
            &solved,
            "exponential of a Busemann function; empty zero set",
        ),
        entry(
            "hyperbolic2_warped_exp",
            s("hyperbolic2_warped"),
            f("exp"),
            &["constant-S", "tashiro", "warped"],
            &solved,
            "the same Busemann solution in the warped chart",
        ),
        entry(
            "cylinder_affine",
            s("cylinder"),
            f("affine").with("a0", 1.0).with("c", -0.5),
            &["constant-S", "flat"],
            &solved,
            "affine along the line factor of a flat cylinder",
        ),
        entry(
            "sphere2_x_torus2_z",
            s2t2(),
            SolutionSpec::extend(0, f("z")),
            &["constant-S", "kahler", "product"],
            &with(&[("kahler", Pass), ("ricci_spectrum", Pass), ("codazzi", Pass), ("zero_set", Pass)]),
            "trivial extension of the height function to S2 x T2",
        ),
        entry(
            "hyperbolic2_x_torus2_cosh",
            h2t2(),
            SolutionSpec::extend(0, f("cosh")),
            &["constant-S", "kahler", "product"],
            &with(&[("kahler", Pass), ("ricci_spectrum", Pass), ("codazzi", Pass)]),
            "trivial extension of the Tashiro solution to H2 x T2",
        ),
        entry(
            "line_x_hyperbolic2_cosh",
            SpaceSpec::product(s("euclidean").with("n", 1.0), s("hyperbolic2_halfplane")),
            SolutionSpec::extend(1, f("cosh")),
            &["constant-S", "product"],
            &solved,
            "Ricci-flat line times the hyperbolic plane",
        ),
        entry(
            "sphere2_x_sphere2_z",
            SpaceSpec::product(s("sphere2"), s("sphere2")),
            SolutionSpec::extend(1, f("z")),
            &["constant-S", "product", "negative"],
            &[("rh_residual", Fail), ("curvature_invariants", Pass)],
            "the base factor is not Ricci-flat",
        ),
        entry(
            "schwarzschild_static",
            s("schwarzschild3").with("m", 1.0),
            f("static_potential"),
            &["static", "scalar-flat"],
            &[("static_equation", Pass), ("codazzi", Pass), ("rh_residual", Fail), ("curvature_invariants", Pass)],
            "outer Schwarzschild space with its static potential",
        ),
        entry(
            "conformal_flat3_linear",
            s("conformal_flat3").with("u", 0.0),
            f("exp_neg_u"),
            &["conformal"],
            &with(&[("conformal", Pass)]),
            "exp(-2u) times the flat metric, u linear",
        ),
        entry(
            "conformal_flat3_x1x2",
            s("conformal_flat3").with("u", 1.0),
            f("exp_neg_u"),
            &["conformal", "nonconstant-S"],
            &with(&[("conformal", Pass)]),
            "exp(-2u) times the flat metric, u = x1 x2",
        ),
        entry(
            "conformal_flat3_saddle",
            s("conformal_flat3").with("u", 2.0),
            f("exp_neg_u"),
            &["conformal", "nonconstant-S"],
            &with(&[("conformal", Pass)]),
            "exp(-2u) times the flat metric, u = x1^2 - x2^2",
        ),
        entry(
            "hyperbolic3_poisson",
            s("hyperbolic3_poisson"),
            f("exp_neg_u"),
            &["conformal", "nonconstant-S"],
            &[("rh_residual", Pass), ("mu", Pass), ("identity_suite", Pass), ("conformal", Pass)],
            "exp(-2u) times hyperbolic space, u radial with constant Laplacian",
        ),
    ]
}
