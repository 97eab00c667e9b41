//! Matrix-level conditions for `f = e^t` to solve the equation on a
//! one-dimensional extension `N × ℝ` of a homogeneous space `N`.
//!
//! The data are the symmetric part `S` and skew part `A` of the derivation,
//! a candidate Ricci endomorphism of `N`, the divergence `δS` and a sign `ε`.
//! All matrix norms are Frobenius norms.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Pass threshold for the extension conditions.
pub const EXTENSION_TOL: f64 = 1e-10;

/// Matrices of a one-dimensional extension, rows listed in order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionData {
    pub s_mat: Vec<Vec<f64>>,
    pub a_mat: Vec<Vec<f64>>,
    pub ric_n: Vec<Vec<f64>>,
    pub div_s: Vec<f64>,
    pub epsilon: f64,
}

/// Validated matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionMatrices {
    pub s: DMatrix<f64>,
    pub a: DMatrix<f64>,
    pub ric_n: DMatrix<f64>,
    pub div_s: DVector<f64>,
    pub epsilon: f64,
}

fn square(name: &str, rows: &[Vec<f64>], m: usize) -> Result<DMatrix<f64>> {
    if rows.len() != m || rows.iter().any(|r| r.len() != m) {
        return Err(Error::BadParams(format!("{name} must be {m}x{m}")));
    }
    Ok(DMatrix::from_fn(m, m, |i, j| rows[i][j]))
}

impl ExtensionData {
    pub fn dim(&self) -> usize {
        self.s_mat.len()
    }

    /// Check shapes, symmetry of `S` and `Ric_N`, skewness of `A`, `ε = ±1`
    /// and `S ≠ 0`.
    pub fn matrices(&self) -> Result<ExtensionMatrices> {
        let m = self.dim();
        if m == 0 {
            return Err(Error::BadParams("extension data needs m >= 1".into()));
        }
        let s = square("s_mat", &self.s_mat, m)?;
        let a = square("a_mat", &self.a_mat, m)?;
        let ric_n = square("ric_n", &self.ric_n, m)?;
        if self.div_s.len() != m {
            return Err(Error::BadParams(format!("div_s must have length {m}")));
        }
        if (&s - s.transpose()).amax() > 1e-12 {
            return Err(Error::BadParams("s_mat is not symmetric".into()));
        }
        if (&ric_n - ric_n.transpose()).amax() > 1e-12 {
            return Err(Error::BadParams("ric_n is not symmetric".into()));
        }
        if (&a + a.transpose()).amax() > 1e-12 {
            return Err(Error::BadParams("a_mat is not skew".into()));
        }
        if self.epsilon != 1.0 && self.epsilon != -1.0 {
            return Err(Error::BadParams(format!("epsilon must be +1 or -1, got {}", self.epsilon)));
        }
        if s.norm() == 0.0 {
            return Err(Error::ZeroSymmetricPart);
        }
        Ok(ExtensionMatrices { s, a, ric_n, div_s: DVector::from_vec(self.div_s.clone()), epsilon: self.epsilon })
    }

    /// The same data with the opposite sign.
    pub fn with_epsilon(&self, epsilon: f64) -> ExtensionData {
        ExtensionData { epsilon, ..self.clone() }
    }

    /// `S ↦ λS`, `A ↦ λA`, `δS ↦ λδS`, with the Ricci candidate left as is.
    pub fn scaled(&self, lambda: f64) -> ExtensionData {
        let sc = |m: &Vec<Vec<f64>>| m.iter().map(|r| r.iter().map(|v| v * lambda).collect()).collect();
        ExtensionData {
            s_mat: sc(&self.s_mat),
            a_mat: sc(&self.a_mat),
            div_s: self.div_s.iter().map(|v| v * lambda).collect(),
            ..self.clone()
        }
    }
}

fn commutator(x: &DMatrix<f64>, y: &DMatrix<f64>) -> DMatrix<f64> {
    x * y - y * x
}

/// Residuals of the extension system for one sign `ε`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtensionConditions {
    pub epsilon: f64,
    pub alpha: f64,
    pub res_div: f64,
    pub res_ric: f64,
    pub passed: bool,
}

/// The Ricci endomorphism needed on `N`:
/// `|S|⁻² ((tr S + ε|S|) S + [S, A])`.
pub fn target_ricci(m: &ExtensionMatrices) -> DMatrix<f64> {
    let ns = m.s.norm();
    (&m.s * (m.s.trace() + m.epsilon * ns) + commutator(&m.s, &m.a)) / (ns * ns)
}

pub fn extension_conditions(data: &ExtensionData) -> Result<ExtensionConditions> {
    let m = data.matrices()?;
    let alpha = m.epsilon / m.s.norm();
    let res_div = m.div_s.norm();
    let res_ric = (&m.ric_n - target_ricci(&m)).norm();
    Ok(ExtensionConditions {
        epsilon: m.epsilon,
        alpha,
        res_div,
        res_ric,
        passed: res_div < EXTENSION_TOL && res_ric < EXTENSION_TOL,
    })
}

/// Evaluate the system for both signs of `ε`.
pub fn both_signs(data: &ExtensionData) -> Result<[ExtensionConditions; 2]> {
    Ok([extension_conditions(&data.with_epsilon(-1.0))?, extension_conditions(&data.with_epsilon(1.0))?])
}

/// Ricci curvature of the extension and the equation for `f = e^t` in the
/// splitting `ℝξ ⊕ TN`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtensionRicci {
    pub alpha: f64,
    /// `−α² tr(S²)`.
    pub ric_xi_xi: f64,
    /// `α δS`.
    pub ric_x_xi: Vec<f64>,
    /// `Ric_N − α² tr(S) S − α² [S, A]`, row-major.
    pub ric_block: Vec<f64>,
    /// `ric(ξ, ξ) + tr(block)`.
    pub ambient_scal: f64,
    /// `μ(e^t)/e^{2t} = 1 + α tr S`; a solution needs it to vanish.
    pub mu_coefficient: f64,
    /// Largest blockwise defect of `∇²f + f Ric` for `∇²f = f (dt² − α S)`,
    /// divided by `f`.
    pub equation_residual: f64,
}

pub fn extension_ricci(data: &ExtensionData, alpha: f64) -> Result<ExtensionRicci> {
    let m = data.matrices()?;
    let a2 = alpha * alpha;
    let ric_xi_xi = -a2 * (&m.s * &m.s).trace();
    let ric_x_xi = &m.div_s * alpha;
    let block = &m.ric_n - &m.s * (a2 * m.s.trace()) - commutator(&m.s, &m.a) * a2;
    let ambient_scal = ric_xi_xi + block.trace();
    let equation_residual = (1.0 + ric_xi_xi).abs().max(ric_x_xi.amax()).max((&block - &m.s * alpha).norm());
    Ok(ExtensionRicci {
        alpha,
        ric_xi_xi,
        ric_x_xi: ric_x_xi.iter().copied().collect(),
        ric_block: block.transpose().iter().copied().collect(),
        ambient_scal,
        mu_coefficient: 1.0 + alpha * m.s.trace(),
        equation_residual,
    })
}

/// The extension of the real line giving the hyperbolic plane.
pub fn hyperbolic_line_data() -> ExtensionData {
    ExtensionData {
        s_mat: vec![vec![1.0]],
        a_mat: vec![vec![0.0]],
        ric_n: vec![vec![0.0]],
        div_s: vec![0.0],
        epsilon: -1.0,
    }
}

/// Flat `ℝ²` with `S = Id`.
pub fn flat_plane_identity_data() -> ExtensionData {
    ExtensionData {
        s_mat: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        a_mat: vec![vec![0.0, 0.0], vec![0.0, 0.0]],
        ric_n: vec![vec![0.0, 0.0], vec![0.0, 0.0]],
        div_s: vec![0.0, 0.0],
        epsilon: -1.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hyperbolic_line_passes() {
        let d = hyperbolic_line_data();
        let c = extension_conditions(&d).unwrap();
        assert!(c.passed);
        assert_eq!(c.alpha, -1.0);
        let r = extension_ricci(&d, c.alpha).unwrap();
        assert_eq!(r.ric_xi_xi, -1.0);
        assert_eq!(r.ambient_scal, -2.0);
        assert_eq!(r.mu_coefficient, 0.0);
        assert!(r.equation_residual < 1e-14);
    }

    #[test]
    fn flat_plane_fails_by_the_expected_amount() {
        let c = extension_conditions(&flat_plane_identity_data()).unwrap();
        assert!(!c.passed);
        let expected = (2.0 - 2f64.sqrt()) / 2.0 * 2f64.sqrt();
        assert!((c.res_ric - expected).abs() < 1e-14);
    }

    #[test]
    fn zero_symmetric_part_rejected() {
        let mut d = hyperbolic_line_data();
        d.s_mat = vec![vec![0.0]];
        assert_eq!(extension_conditions(&d), Err(Error::ZeroSymmetricPart));
    }
}
