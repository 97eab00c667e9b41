use serde::{Deserialize, Serialize};

use crate::jet::Jet;

/// Profiles of the gradient flow of a solution, indexed by the sign pattern
/// of `(S, μ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GradientKind {
    /// `y' = sqrt(1 − y²)`
    Circ,
    /// `y' = sqrt(1 + y²)`
    Sinh,
    /// `y' = y`
    Exp,
    /// `y' = sqrt(y² − 1)`
    Cosh,
}

impl GradientKind {
    /// `ε` with `y'' = −ε y`, and the conserved value of `(y')² + ε y²`.
    pub fn epsilon_and_energy(self) -> (f64, f64) {
        match self {
            GradientKind::Circ => (1.0, 1.0),
            GradientKind::Sinh => (-1.0, 1.0),
            GradientKind::Exp => (-1.0, 0.0),
            GradientKind::Cosh => (-1.0, -1.0),
        }
    }
}

/// One-dimensional reductions of the equation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OdeKind {
    /// `u''u + (n2 − 2)/2 · (u')² = μ1/2` (two-dimensional base).
    BaseSecondOrder { n2: u32, mu1: f64 },
    /// `−u u'' + (u')² = −μ1` (one-dimensional base, fiber dimension one).
    LineBase { mu1: f64 },
    /// `u' = sqrt(μ2/2 + ((3μ1 − C)/2 − μ1 ln|u|) u²)`.
    FiberFirstOrder { mu1: f64, mu2: f64, c: f64 },
    /// Gradient-flow profile.
    Gradient { profile: GradientKind },
    /// Radial Poisson equation `u'' + (dim − 1) coth(r) u' = rhs` on hyperbolic space.
    RadialPoisson { dim: u32, rhs: f64 },
}

fn ln_abs(u: &Jet) -> Jet {
    if u.value() < 0.0 {
        (-u).ln()
    } else {
        u.ln()
    }
}

impl OdeKind {
    pub fn is_first_order(&self) -> bool {
        matches!(self, OdeKind::FiberFirstOrder { .. } | OdeKind::Gradient { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            OdeKind::BaseSecondOrder { .. } => "base_second_order",
            OdeKind::LineBase { .. } => "line_base",
            OdeKind::FiberFirstOrder { .. } => "fiber_first_order",
            OdeKind::Gradient { .. } => "gradient",
            OdeKind::RadialPoisson { .. } => "radial_poisson",
        }
    }

    /// Whether the solution must stay positive.
    pub fn requires_positive(&self) -> bool {
        !matches!(self, OdeKind::Gradient { .. } | OdeKind::RadialPoisson { .. })
    }

    /// Radicand of a first-order kind.
    pub fn radicand(&self, u: f64) -> Option<f64> {
        match *self {
            OdeKind::FiberFirstOrder { mu1, mu2, c } => {
                Some(mu2 / 2.0 + ((3.0 * mu1 - c) / 2.0 - mu1 * u.abs().ln()) * u * u)
            }
            OdeKind::Gradient { profile } => Some(match profile {
                GradientKind::Circ => 1.0 - u * u,
                GradientKind::Sinh => 1.0 + u * u,
                GradientKind::Exp => u * u,
                GradientKind::Cosh => u * u - 1.0,
            }),
            _ => None,
        }
    }

    /// `u'` for first-order kinds, `None` when the radicand is negative.
    pub fn slope(&self, u: f64, sign: f64) -> Option<f64> {
        if let OdeKind::Gradient { profile: GradientKind::Exp } = self {
            return Some(u);
        }
        let r = self.radicand(u)?;
        if r < 0.0 || !r.is_finite() {
            None
        } else {
            Some(sign * r.sqrt())
        }
    }

    /// `u''` expressed through `(t, u, u')`.
    pub fn accel(&self, t: f64, u: f64, up: f64) -> f64 {
        match *self {
            OdeKind::BaseSecondOrder { n2, mu1 } => (mu1 / 2.0 - (f64::from(n2) - 2.0) / 2.0 * up * up) / u,
            OdeKind::LineBase { mu1 } => (up * up + mu1) / u,
            OdeKind::FiberFirstOrder { mu1, c, .. } => (mu1 - c / 2.0 - mu1 * u.abs().ln()) * u,
            OdeKind::Gradient { profile } => {
                if profile == GradientKind::Circ {
                    -u
                } else {
                    u
                }
            }
            OdeKind::RadialPoisson { dim, rhs } => rhs - (f64::from(dim) - 1.0) * up / t.tanh(),
        }
    }

    pub fn accel_jet(&self, t: &Jet, u: &Jet, up: &Jet) -> Jet {
        match *self {
            OdeKind::BaseSecondOrder { n2, mu1 } => (up.sq() * (-(f64::from(n2) - 2.0) / 2.0) + mu1 / 2.0) / u,
            OdeKind::LineBase { mu1 } => (up.sq() + mu1) / u,
            OdeKind::FiberFirstOrder { mu1, c, .. } => (ln_abs(u) * (-mu1) + (mu1 - c / 2.0)) * u,
            OdeKind::Gradient { profile } => {
                if profile == GradientKind::Circ {
                    -u
                } else {
                    u.clone()
                }
            }
            OdeKind::RadialPoisson { dim, rhs } => {
                let coth = t.cosh() / t.sinh();
                (coth * up) * (-(f64::from(dim) - 1.0)) + rhs
            }
        }
    }

    /// Jet of `u'` for first-order kinds.
    pub fn slope_jet(&self, u: &Jet, sign: f64) -> Jet {
        match *self {
            OdeKind::FiberFirstOrder { mu1, mu2, c } => {
                let r = (ln_abs(u) * (-mu1) + (3.0 * mu1 - c) / 2.0) * u.sq() + mu2 / 2.0;
                r.sqrt() * sign
            }
            OdeKind::Gradient { profile } => match profile {
                GradientKind::Circ => (1.0 - u.sq()).sqrt() * sign,
                GradientKind::Sinh => (u.sq() + 1.0).sqrt() * sign,
                GradientKind::Exp => u.clone(),
                GradientKind::Cosh => (u.sq() - 1.0).sqrt() * sign,
            },
            _ => panic!("slope_jet called on a second-order kind"),
        }
    }
}
