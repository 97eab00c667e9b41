//! Closed-form solutions of `−u u'' + (u')² = −μ1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::Jet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `A cosh(t sqrt(μ1)/A + φ)`, μ1 > 0
    A1,
    /// `A exp(φ t)`, μ1 = 0
    B1,
    /// `A cos(t sqrt(−μ1)/A + φ)`, μ1 < 0
    C1,
    /// `sqrt(−μ1) t + φ`, μ1 < 0
    D1,
    /// `A sinh(t sqrt(−μ1)/A + φ)`, μ1 < 0
    E1,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::A1, Family::B1, Family::C1, Family::D1, Family::E1];

    pub fn name(self) -> &'static str {
        match self {
            Family::A1 => "a1",
            Family::B1 => "b1",
            Family::C1 => "c1",
            Family::D1 => "d1",
            Family::E1 => "e1",
        }
    }

    fn check_sign(self, mu1: f64) -> Result<()> {
        let ok = match self {
            Family::A1 => mu1 > 0.0,
            Family::B1 => mu1 == 0.0,
            Family::C1 | Family::D1 | Family::E1 => mu1 < 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::SignMismatch(format!("family {} incompatible with mu1 = {mu1}", self.name())))
        }
    }

    /// The family as a jet in `t`.
    pub fn jet(self, a: f64, phi: f64, mu1: f64, t: &Jet) -> Result<Jet> {
        self.check_sign(mu1)?;
        if a <= 0.0 {
            return Err(Error::BadParams(format!("amplitude A = {a} must be positive")));
        }
        Ok(match self {
            Family::A1 => ((t * (mu1.sqrt() / a)) + phi).cosh() * a,
            Family::B1 => (t * phi).exp() * a,
            Family::C1 => ((t * ((-mu1).sqrt() / a)) + phi).cos() * a,
            Family::D1 => t * (-mu1).sqrt() + phi,
            Family::E1 => ((t * ((-mu1).sqrt() / a)) + phi).sinh() * a,
        })
    }
}

/// `(u(t), u'(t))` for a closed family.
pub fn closed_family(family: Family, a: f64, phi: f64, mu1: f64, t: f64) -> Result<(f64, f64)> {
    let j = family.jet(a, phi, mu1, &Jet::variable(1, 1, t, 0))?;
    Ok((j.value(), j.partial(&[0])))
}

/// `|−u u'' + (u')² + μ1|` at `t`, from a second-order jet.
pub fn family_residual(family: Family, a: f64, phi: f64, mu1: f64, t: f64) -> Result<f64> {
    let j = family.jet(a, phi, mu1, &Jet::variable(1, 2, t, 0))?;
    let (u, up, upp) = (j.value(), j.partial(&[0]), j.partial(&[0, 0]));
    Ok((-u * upp + up * up + mu1).abs())
}
