use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InstanceType {
    Catalog,
    Warped,
    Ode,
    Extension,
}

impl InstanceType {
    pub fn name(self) -> &'static str {
        match self {
            InstanceType::Catalog => "catalog",
            InstanceType::Warped => "warped",
            InstanceType::Ode => "ode",
            InstanceType::Extension => "extension",
        }
    }
}

/// A check the runner knows how to execute.
#[derive(Clone, Copy, Debug)]
pub struct CheckInfo {
    pub name: &'static str,
    pub applies_to: &'static [InstanceType],
    /// Tolerance for every gated residual of the check.
    pub default_tol: f64,
    /// Residual-specific defaults that differ from `default_tol`.
    pub residual_tols: &'static [(&'static str, f64)],
    pub summary: &'static str,
}

use InstanceType::{Catalog, Extension, Ode, Warped};

const fn check(
    name: &'static str,
    applies_to: &'static [InstanceType],
    default_tol: f64,
    summary: &'static str,
) -> CheckInfo {
    CheckInfo { name, applies_to, default_tol, residual_tols: &[], summary }
}

pub const CHECKS: &[CheckInfo] = &[
    check(
        "curvature_invariants",
        &[Catalog],
        1e-8,
        "Riemann symmetries, first and second Bianchi identities, scalar trace",
    ),
    check("rh_residual", &[Catalog], 1e-8, "operator norm of Hess f + f Ric"),
    check("mu", &[Catalog], 1e-8, "spread of f Lap f + 2|grad f|^2 and distance to the expected value"),
    check("identity_suite", &[Catalog], 1e-7, "gradient, trace, norm and curvature identities of a solution"),
    check("static_equation", &[Catalog], 1e-7, "operator norm of Hess f - f Ric and |S|"),
    check(
        "codazzi",
        &[Catalog],
        1e-7,
        "Codazzi defect and divergence of Ric; with epsilon, traces and divergences of Ric^s",
    ),
    check("level_set", &[Catalog], 1e-8, "Weingarten map and intrinsic scalar curvature of level sets"),
    check("zero_set", &[Catalog], 1e-6, "level-set geometry at points projected onto f = 0"),
    check("ricci_spectrum", &[Catalog], 1e-6, "Ricci eigenvalues against (eps, eps, 0, ...) and |Ric^T|^2"),
    check("kahler", &[Catalog], 1e-8, "commutator of Hess f with the complex structure"),
    check("conformal", &[Catalog], 1e-6, "Ricci and Laplacian laws of the conformal picture"),
    check("scaling", &[Catalog], 1e-8, "residual and mu after a homothety"),
    check("poisson", &[Catalog], 1e-8, "trace of Hess u against a constant"),
    check("warped_case", &[Warped], 1e-7, "case residuals and the assembled residual"),
    check("warped_equivalence", &[Warped], 1e-7, "case residuals small exactly where the assembled residual is"),
    check("besse", &[Warped], 1e-7, "closed-form warped Ricci against the numeric one"),
    check("mu_relation", &[Warped], 1e-7, "mu = n2 |grad f1|^2 f2^2 + mu2 and constancy of mu1"),
    check("mu_relation_corrected", &[Warped], 1e-7, "mu = mu2 and constancy of mu1"),
    check("product_split", &[Warped], 1e-8, "trivial extension of f2 to the Riemannian product"),
    check("ode_residual", &[Ode], 1e-8, "defining-equation residual of the dense output"),
    check("closed_form", &[Ode], 1e-8, "integrated profile against its closed form"),
    check("first_integral", &[Ode], 1e-9, "conservation of (u')^2 + eps u^2 on gradient profiles"),
    check("log_law", &[Ode], 1e-7, "logarithmic law for the fiber scalar curvature"),
    check("profile_to_warped", &[Ode], 1e-6, "base equation on the surface rebuilt from the profile"),
    CheckInfo {
        name: "families",
        applies_to: &[Ode],
        default_tol: 1e-10,
        residual_tols: &[
            ("a1_integrator", 1e-8),
            ("b1_integrator", 1e-8),
            ("c1_integrator", 1e-8),
            ("d1_integrator", 1e-8),
            ("e1_integrator", 1e-8),
        ],
        summary: "closed families a1-e1: defining equation and agreement with the integrator",
    },
    check("extension_conditions", &[Extension], 1e-10, "divergence and Ricci conditions for both signs"),
    check("extension_ricci", &[Extension], 1e-10, "Ricci of the extension and the equation for e^t"),
    check("extension_scaling", &[Extension], 1e-12, "invariance of the conditions under S -> lambda S"),
];

pub fn check_info(name: &str) -> Option<&'static CheckInfo> {
    CHECKS.iter().find(|c| c.name == name)
}

impl CheckInfo {
    /// Default tolerance of a residual of this check.
    pub fn default_for(&self, residual: &str) -> f64 {
        self.residual_tols.iter().find(|(n, _)| *n == residual).map_or(self.default_tol, |(_, t)| *t)
    }
}
