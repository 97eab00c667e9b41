use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kind::OdeKind;
use super::profile::OdeProfile;
use crate::catalog::{make_space, SpaceSpec};
use crate::error::{Error, Result};
use crate::geometry::frame::endo_norm;
use crate::geometry::{curvature_pack, ScalarDerivs, ScalarField};
use crate::jet::Jet;
use crate::warped::{assemble, CaseTag, WarpedSpec};

/// Worst residuals of the logarithmic law along a fiber profile.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogLawResiduals {
    /// `max |S2 − 2μ1 ln|u| − C|` with `S2 = −2u'''/u'`.
    pub scalar_law: f64,
    /// `max |u'' − (μ1 − C/2 − μ1 ln|u|) u|`.
    pub second_derivative: f64,
    /// Grid nodes and midpoints visited.
    pub samples: usize,
}

/// Evaluate the logarithmic law on grid nodes and midpoints of a
/// `fiber_first_order` profile.
///
/// With `(u')² = R(u)` one has `u'' = R'(u)/2` and `u''' = R''(u) u'/2`, so
/// `S2 = −R''(u)`; both are read off a second-order jet of the profile's own
/// radicand, which stays regular where `u'` vanishes.
pub fn log_law_check(profile: &OdeProfile, mu1: f64, c: f64) -> Result<LogLawResiduals> {
    let OdeKind::FiberFirstOrder { mu1: m1, mu2, c: ck } = profile.kind else {
        return Err(Error::BadParams(format!("log law needs a fiber profile, got {}", profile.kind.name())));
    };
    let mut ts = profile.grid.clone();
    ts.extend(profile.midpoints());
    let mut out = LogLawResiduals { scalar_law: 0.0, second_derivative: 0.0, samples: ts.len() };
    for &t in &ts {
        let (u, _, _) = profile.interpolate(t).ok_or(Error::ZeroCrossing { t })?;
        if u.abs() < 1e-12 || !u.is_finite() {
            return Err(Error::ZeroCrossing { t });
        }
        let uj = Jet::variable(1, 2, u, 0);
        let lnj = if u < 0.0 { (-&uj).ln() } else { uj.ln() };
        let r = (lnj * (-m1) + (3.0 * m1 - ck) / 2.0) * uj.sq() + mu2 / 2.0;
        let rc = r.coefficients();
        let (upp, s2) = (rc[1] / 2.0, -2.0 * rc[2]);
        let ln = u.abs().ln();
        out.second_derivative = out.second_derivative.max((upp - (mu1 - c / 2.0 - mu1 * ln) * u).abs());
        out.scalar_law = out.scalar_law.max((s2 - 2.0 * mu1 * ln - c).abs());
    }
    Ok(out)
}

/// The fiber of the surface built by [`profile_to_warped`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaKind {
    Line,
    Circle,
}

/// The surface `(I × Σ, dt² + (u'(t)/u'(t0))² ds²)` with `f = u(t)`.
#[derive(Clone, Debug)]
pub struct ProfileSurface {
    pub spec: WarpedSpec,
    /// Fiber dimension of the reduction the profile came from.
    pub fiber_dim: u32,
}

/// Per-point output of [`ProfileSurface::residuals`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfaceSample {
    /// `‖∇²f − f/(n2 − 1) Ric‖`; `None` when `n2 = 1`.
    pub residual: Option<f64>,
    pub scal: f64,
}

impl ProfileSurface {
    pub fn residuals(&self, points: &[Vec<f64>]) -> Result<Vec<SurfaceSample>> {
        let (metric, f) = assemble(&self.spec)?;
        let n2 = f64::from(self.fiber_dim);
        points
            .par_iter()
            .map(|p| {
                let pack = curvature_pack(&metric, p)?;
                let d = ScalarDerivs::at(&f, &pack)?;
                let residual =
                    (self.fiber_dim > 1).then(|| endo_norm(&pack.g, &(&d.hess - &pack.ric * (d.value / (n2 - 1.0)))));
                Ok(SurfaceSample { residual, scal: pack.scal })
            })
            .collect()
    }
}

/// Converse construction: a positive increasing base profile gives a surface
/// on which `u(t)` solves the base equation.
pub fn profile_to_warped(profile: &OdeProfile, sigma: SigmaKind) -> Result<ProfileSurface> {
    let fiber_dim = match profile.kind {
        OdeKind::BaseSecondOrder { n2, .. } => n2,
        OdeKind::LineBase { .. } => 1,
        other => return Err(Error::BadParams(format!("profile_to_warped needs a base profile, got {}", other.name()))),
    };
    if profile.grid.len() < 2 {
        return Err(Error::MonotonicityViolated("profile has fewer than two nodes".into()));
    }
    for (i, (&u, &up)) in profile.u.iter().zip(&profile.up).enumerate() {
        if !(u > 0.0 && up > 0.0) {
            return Err(Error::MonotonicityViolated(format!("u = {u}, u' = {up} at t = {}", profile.grid[i])));
        }
    }
    let t0 = if profile.t_min() <= 0.0 && 0.0 <= profile.t_max() { 0.0 } else { profile.t_min() };
    let (_, up0, _) = profile.interpolate(t0).expect("t0 inside grid");
    let margin = 1e-3 * (profile.t_max() - profile.t_min());
    let base = make_space(
        &SpaceSpec::named("interval").with("lo", profile.t_min() + margin).with("hi", profile.t_max() - margin),
    )?
    .metric;
    let fiber = match sigma {
        SigmaKind::Line => make_space(&SpaceSpec::named("euclidean").with("n", 1.0))?.metric,
        SigmaKind::Circle => make_space(&SpaceSpec::named("circle"))?.metric,
    };
    let spec = WarpedSpec {
        label: format!("surface from {} profile", profile.kind.name()),
        base,
        fiber,
        warp: profile.derivative_field("u'/u'(t0)", 0, 1.0 / up0),
        f1: profile.field("u", 0),
        f2: ScalarField::constant(1.0),
        case: CaseTag::B,
    };
    spec.validate()?;
    Ok(ProfileSurface { spec, fiber_dim })
}
