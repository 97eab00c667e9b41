//! Levi-Civita connection and curvature from metric jets.
//!
//! Index conventions: `gamma[k][i][j] = Γ^k_ij`; `riemann[d][c][a][b]` is the
//! coefficient of `∂_d` in `R(∂_a, ∂_b)∂_c` with
//! `R(X,Y) = ∇_X∇_Y − ∇_Y∇_X − ∇_[X,Y]`; `Ric(Y,Z) = tr(X ↦ R(X,Y)Z)`.

use nalgebra::{DMatrix, DVector};

use super::field::{MetricField, ScalarField};
use super::frame::{from_row_major, require_spd};
use crate::error::{Error, Result};
use crate::jet::Jet;

/// Truncation order used by [`curvature_pack`]; the fourth metric derivative
/// feeds the Hessian of the scalar curvature.
pub const PACK_ORDER: usize = 4;

/// Jet-valued curvature data. With metric jets of order `K`, `gamma` has order
/// `K-1` and `ric`/`scal` order `K-2`.
#[derive(Clone, Debug)]
pub struct CurvatureJets {
    pub dim: usize,
    pub g: Vec<Jet>,
    pub ginv: Vec<Jet>,
    pub gamma: Vec<Jet>,
    pub ric: Vec<Jet>,
    pub scal: Jet,
}

fn invert_jets(a: &[Jet], n: usize) -> Vec<Jet> {
    let mut m: Vec<Jet> = a.to_vec();
    let mut inv: Vec<Jet> = (0..n * n).map(|k| a[0].cst(if k / n == k % n { 1.0 } else { 0.0 })).collect();
    for col in 0..n {
        let p = m[col * n + col].recip();
        for j in 0..n {
            m[col * n + j] = &m[col * n + j] * &p;
            inv[col * n + j] = &inv[col * n + j] * &p;
        }
        for row in 0..n {
            if row == col {
                continue;
            }
            let factor = m[row * n + col].clone();
            if factor.coefficients().iter().all(|&v| v == 0.0) {
                continue;
            }
            for j in 0..n {
                let dm = &factor * &m[col * n + j];
                m[row * n + j] -= dm;
                let di = &factor * &inv[col * n + j];
                inv[row * n + j] -= di;
            }
        }
    }
    inv
}

fn metric_values(g: &[Jet], n: usize) -> DMatrix<f64> {
    let vals: Vec<f64> = g.iter().map(Jet::value).collect();
    let m = from_row_major(n, &vals);
    (&m + m.transpose()) * 0.5
}

/// Connection and Ricci jets at a point, from metric jets of the given order (>= 2).
pub fn curvature_jets(metric: &MetricField, point: &[f64], order: usize) -> Result<CurvatureJets> {
    assert!(order >= 2, "curvature needs at least second metric derivatives");
    let n = metric.dim;
    let raw = metric.evaluate(point, order)?;
    let mut g = raw.clone();
    for i in 0..n {
        for j in 0..i {
            let s = (&raw[i * n + j] + &raw[j * n + i]) * 0.5;
            g[i * n + j] = s.clone();
            g[j * n + i] = s;
        }
    }
    require_spd(&metric_values(&g, n))?;
    let ginv = invert_jets(&g, n);

    // dg[a][i*n+j] = ∂_a g_ij
    let dg: Vec<Vec<Jet>> = (0..n).map(|a| g.iter().map(|j| j.diff(a)).collect()).collect();
    let ginv1: Vec<Jet> = ginv.iter().map(|j| j.truncate(order - 1)).collect();
    // first-kind symbols Γ_{l,ij}
    let mut first = vec![Vec::new(); n];
    for (l, row) in first.iter_mut().enumerate() {
        *row = (0..n * n)
            .map(|ij| {
                let (i, j) = (ij / n, ij % n);
                (&dg[i][j * n + l] + &dg[j][i * n + l] - &dg[l][i * n + j]) * 0.5
            })
            .collect();
    }
    let mut gamma: Vec<Jet> = Vec::with_capacity(n * n * n);
    for k in 0..n {
        #[allow(clippy::needless_range_loop)]
        for ij in 0..n * n {
            let (i, j) = (ij / n, ij % n);
            if j < i {
                let sym = gamma[k * n * n + j * n + i].clone();
                gamma.push(sym);
                continue;
            }
            let mut acc = &ginv1[k * n] * &first[0][ij];
            for l in 1..n {
                acc += &ginv1[k * n + l] * &first[l][ij];
            }
            gamma.push(acc);
        }
    }

    let low = order - 2;
    let gam2: Vec<Jet> = gamma.iter().map(|j| j.truncate(low)).collect();
    let gi = |k: usize, i: usize, j: usize| k * n * n + i * n + j;
    // contracted symbols Σ_a Γ^a_{a e}
    let trace: Vec<Jet> = (0..n)
        .map(|e| {
            let mut acc = gam2[gi(0, 0, e)].clone();
            for a in 1..n {
                acc += &gam2[gi(a, a, e)];
            }
            acc
        })
        .collect();
    let zero = gam2[0].cst(0.0);
    let mut ric = vec![zero; n * n];
    for b in 0..n {
        for c in b..n {
            let mut acc = gamma[gi(0, b, c)].diff(0);
            for a in 1..n {
                acc += gamma[gi(a, b, c)].diff(a);
            }
            acc -= trace_diff(&gamma, n, b, c);
            for e in 0..n {
                acc += &trace[e] * &gam2[gi(e, b, c)];
                for a in 0..n {
                    acc -= &gam2[gi(a, b, e)] * &gam2[gi(e, a, c)];
                }
            }
            ric[b * n + c] = acc.clone();
            ric[c * n + b] = acc;
        }
    }
    let ginv2: Vec<Jet> = ginv.iter().map(|j| j.truncate(low)).collect();
    let mut scal = ginv2[0].cst(0.0);
    for i in 0..n {
        for j in 0..n {
            scal += &ginv2[i * n + j] * &ric[i * n + j];
        }
    }
    let cj = CurvatureJets { dim: n, g, ginv, gamma, ric, scal };
    if !cj.scal.is_finite() || cj.ric.iter().any(|j| !j.is_finite()) {
        return Err(Error::NonFiniteValue { what: format!("curvature of `{}` at {point:?}", metric.label) });
    }
    Ok(cj)
}

/// `∂_b Σ_a Γ^a_{ac}`.
fn trace_diff(gamma: &[Jet], n: usize, b: usize, c: usize) -> Jet {
    let mut acc = gamma[c].diff(b); // a = 0: index 0*n*n + 0*n + c
    for a in 1..n {
        acc += gamma[a * n * n + a * n + c].diff(b);
    }
    acc
}

impl CurvatureJets {
    /// `Ric^s` as a symmetric (0,2) jet tensor: `Ric (g^{-1} Ric)^{s-1}`.
    pub fn ricci_power_form(&self, s: usize) -> Vec<Jet> {
        assert!(s >= 1);
        let n = self.dim;
        let ord = self.ric[0].order();
        let ginv: Vec<Jet> = self.ginv.iter().map(|j| j.truncate(ord)).collect();
        let endo = matmul(&ginv, &self.ric, n);
        let mut out = self.ric.clone();
        for _ in 1..s {
            out = matmul(&out, &endo, n);
        }
        out
    }
}

fn matmul(a: &[Jet], b: &[Jet], n: usize) -> Vec<Jet> {
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = &a[i * n] * &b[j];
            for k in 1..n {
                acc += &a[i * n + k] * &b[k * n + j];
            }
            out.push(acc);
        }
    }
    out
}

/// Pointwise curvature values.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvaturePack {
    pub point: Vec<f64>,
    pub dim: usize,
    pub g: DMatrix<f64>,
    pub ginv: DMatrix<f64>,
    /// `Γ^k_ij` at `[k*n*n + i*n + j]`.
    pub gamma: Vec<f64>,
    /// `R^d_{cab}` at `[((d*n + c)*n + a)*n + b]`.
    pub riemann: Vec<f64>,
    /// Ricci as a bilinear form.
    pub ric_form: DMatrix<f64>,
    /// Ricci endomorphism `g^{-1} Ric`.
    pub ric: DMatrix<f64>,
    /// `(∇_k Ric)_ij` at `[k*n*n + i*n + j]`.
    pub nabla_ric: Vec<f64>,
    pub scal: f64,
    /// `dS` (covector).
    pub d_scal: DVector<f64>,
    /// `∇S` (vector).
    pub grad_s: DVector<f64>,
    /// Hessian of S as a bilinear form.
    pub hess_s: DMatrix<f64>,
    /// `ΔS = −tr ∇²S`.
    pub lap_s: f64,
}

impl CurvaturePack {
    pub fn gamma(&self, k: usize, i: usize, j: usize) -> f64 {
        let n = self.dim;
        self.gamma[k * n * n + i * n + j]
    }

    pub fn riemann(&self, d: usize, c: usize, a: usize, b: usize) -> f64 {
        let n = self.dim;
        self.riemann[((d * n + c) * n + a) * n + b]
    }

    /// Fully covariant `R_{dcab} = g_{de} R^e_{cab}`.
    pub fn riemann_lower(&self, d: usize, c: usize, a: usize, b: usize) -> f64 {
        (0..self.dim).map(|e| self.g[(d, e)] * self.riemann(e, c, a, b)).sum()
    }

    pub fn nabla_ric(&self, k: usize, i: usize, j: usize) -> f64 {
        let n = self.dim;
        self.nabla_ric[k * n * n + i * n + j]
    }

    /// `R(X,Y)Z`.
    pub fn apply_riemann(&self, x: &DVector<f64>, y: &DVector<f64>, z: &DVector<f64>) -> DVector<f64> {
        let n = self.dim;
        DVector::from_fn(n, |d, _| {
            let mut acc = 0.0;
            for c in 0..n {
                for a in 0..n {
                    for b in 0..n {
                        acc += self.riemann(d, c, a, b) * x[a] * y[b] * z[c];
                    }
                }
            }
            acc
        })
    }

    /// `(∇_X Ric)(Y)` as a vector.
    pub fn apply_nabla_ric(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        let n = self.dim;
        let form = DVector::from_fn(n, |i, _| {
            let mut acc = 0.0;
            for k in 0..n {
                for j in 0..n {
                    acc += self.nabla_ric(k, i, j) * x[k] * y[j];
                }
            }
            acc
        });
        &self.ginv * form
    }

    /// `∇_X Ric` as an endomorphism.
    pub fn nabla_ric_endo(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let n = self.dim;
        let form = DMatrix::from_fn(n, n, |i, j| (0..n).map(|k| self.nabla_ric(k, i, j) * x[k]).sum());
        &self.ginv * form
    }
}

/// Christoffel symbols `Γ^k_ij` at a point.
pub fn christoffel(metric: &MetricField, point: &[f64]) -> Result<Vec<f64>> {
    let cj = curvature_jets(metric, point, 2)?;
    Ok(cj.gamma.iter().map(Jet::value).collect())
}

/// Full curvature data at a point.
pub fn curvature_pack(metric: &MetricField, point: &[f64]) -> Result<CurvaturePack> {
    let cj = curvature_jets(metric, point, PACK_ORDER)?;
    Ok(pack_from_jets(&cj, point))
}

pub fn pack_from_jets(cj: &CurvatureJets, point: &[f64]) -> CurvaturePack {
    let n = cj.dim;
    let g = metric_values(&cj.g, n);
    let ginv_raw = from_row_major(n, &cj.ginv.iter().map(Jet::value).collect::<Vec<_>>());
    let ginv = (&ginv_raw + ginv_raw.transpose()) * 0.5;
    let gamma: Vec<f64> = cj.gamma.iter().map(Jet::value).collect();
    let gi = |k: usize, i: usize, j: usize| k * n * n + i * n + j;
    // dgamma[a][k][i][j] = ∂_a Γ^k_ij
    let dgamma = |a: usize, k: usize, i: usize, j: usize| cj.gamma[gi(k, i, j)].partial(&[a]);

    let mut riemann = vec![0.0; n * n * n * n];
    for d in 0..n {
        for c in 0..n {
            for a in 0..n {
                for b in (a + 1)..n {
                    let mut v = dgamma(a, d, b, c) - dgamma(b, d, a, c);
                    for e in 0..n {
                        v += gamma[gi(d, a, e)] * gamma[gi(e, b, c)] - gamma[gi(d, b, e)] * gamma[gi(e, a, c)];
                    }
                    riemann[((d * n + c) * n + a) * n + b] = v;
                    riemann[((d * n + c) * n + b) * n + a] = -v;
                }
            }
        }
    }

    let ric_form = from_row_major(n, &cj.ric.iter().map(Jet::value).collect::<Vec<_>>());
    let ric = &ginv * &ric_form;
    let mut nabla_ric = vec![0.0; n * n * n];
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut v = cj.ric[i * n + j].partial(&[k]);
                for m in 0..n {
                    v -= gamma[gi(m, k, i)] * ric_form[(m, j)] + gamma[gi(m, k, j)] * ric_form[(i, m)];
                }
                nabla_ric[gi(k, i, j)] = v;
            }
        }
    }
    let scal = cj.scal.value();
    let d_scal = DVector::from_vec(cj.scal.d1());
    let grad_s = &ginv * &d_scal;
    let d2s = cj.scal.d2();
    let hess_s = DMatrix::from_fn(n, n, |i, j| d2s[i][j] - (0..n).map(|k| gamma[gi(k, i, j)] * d_scal[k]).sum::<f64>());
    let lap_s = -ginv.component_mul(&hess_s).sum();
    CurvaturePack {
        point: point.to_vec(),
        dim: n,
        g,
        ginv,
        gamma,
        riemann,
        ric_form,
        ric,
        nabla_ric,
        scal,
        d_scal,
        grad_s,
        hess_s,
        lap_s,
    }
}

/// First and second covariant derivatives of a scalar at a point.
#[derive(Clone, Debug)]
pub struct ScalarDerivs {
    pub value: f64,
    /// `df` (covector).
    pub df: DVector<f64>,
    /// `∇f` (vector).
    pub grad: DVector<f64>,
    /// `∇²f` as a bilinear form.
    pub hess_form: DMatrix<f64>,
    /// `∇²f` as an endomorphism.
    pub hess: DMatrix<f64>,
    /// `Δf = −tr ∇²f`.
    pub lap: f64,
}

impl ScalarDerivs {
    pub fn from_jet(jet: &Jet, pack: &CurvaturePack) -> ScalarDerivs {
        let n = pack.dim;
        let df = DVector::from_vec(jet.d1());
        let d2 = jet.d2();
        let hess_form =
            DMatrix::from_fn(n, n, |i, j| d2[i][j] - (0..n).map(|k| pack.gamma(k, i, j) * df[k]).sum::<f64>());
        let hess_form = (&hess_form + hess_form.transpose()) * 0.5;
        let hess = &pack.ginv * &hess_form;
        let lap = -hess.trace();
        ScalarDerivs { value: jet.value(), grad: &pack.ginv * &df, df, hess_form, hess, lap }
    }

    pub fn at(f: &ScalarField, pack: &CurvaturePack) -> Result<ScalarDerivs> {
        let jet = f.evaluate(&pack.point, 2)?;
        Ok(ScalarDerivs::from_jet(&jet, pack))
    }
}

fn connection_only(metric: &MetricField, f: &ScalarField, point: &[f64]) -> Result<ScalarDerivs> {
    let cj = curvature_jets(metric, point, 2)?;
    let n = metric.dim;
    let g = metric_values(&cj.g, n);
    let ginv = g.clone().try_inverse().ok_or(Error::SingularMetric { min_eigenvalue: 0.0 })?;
    let pack = CurvaturePack {
        point: point.to_vec(),
        dim: n,
        g,
        ginv,
        gamma: cj.gamma.iter().map(Jet::value).collect(),
        riemann: Vec::new(),
        ric_form: DMatrix::zeros(n, n),
        ric: DMatrix::zeros(n, n),
        nabla_ric: Vec::new(),
        scal: 0.0,
        d_scal: DVector::zeros(n),
        grad_s: DVector::zeros(n),
        hess_s: DMatrix::zeros(n, n),
        lap_s: 0.0,
    };
    let jet = f.evaluate(point, 2)?;
    Ok(ScalarDerivs::from_jet(&jet, &pack))
}

/// Hessian endomorphism `∇²f`.
pub fn hessian(metric: &MetricField, f: &ScalarField, point: &[f64]) -> Result<DMatrix<f64>> {
    Ok(connection_only(metric, f, point)?.hess)
}

/// Gradient vector `∇f`.
pub fn gradient(metric: &MetricField, f: &ScalarField, point: &[f64]) -> Result<DVector<f64>> {
    Ok(connection_only(metric, f, point)?.grad)
}

/// `Δf = −tr_g ∇²f`.
pub fn laplacian(metric: &MetricField, f: &ScalarField, point: &[f64]) -> Result<f64> {
    Ok(connection_only(metric, f, point)?.lap)
}

/// Divergence `δT_j = −g^{ik}(∇_i T)_{kj}` of a symmetric (0,2) tensor built
/// from curvature jets. Returns a covector.
pub fn divergence_sym2(
    metric: &MetricField,
    tensor: &dyn Fn(&CurvatureJets) -> Vec<Jet>,
    point: &[f64],
) -> Result<DVector<f64>> {
    let cj = curvature_jets(metric, point, 3)?;
    Ok(divergence_from_jets(&cj, &tensor(&cj)))
}

pub fn divergence_from_jets(cj: &CurvatureJets, t: &[Jet]) -> DVector<f64> {
    let n = cj.dim;
    let gam = |k: usize, i: usize, j: usize| cj.gamma[k * n * n + i * n + j].value();
    let tv = |i: usize, j: usize| t[i * n + j].value();
    DVector::from_fn(n, |j, _| {
        let mut acc = 0.0;
        for i in 0..n {
            for k in 0..n {
                let mut nab = t[k * n + j].partial(&[i]);
                for m in 0..n {
                    nab -= gam(m, i, k) * tv(m, j) + gam(m, i, j) * tv(k, m);
                }
                acc += cj.ginv[i * n + k].value() * nab;
            }
        }
        -acc
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::domain::ChartDomain;
    use approx::assert_relative_eq;

    fn sphere() -> MetricField {
        MetricField::diagonal("S2", ChartDomain::new(vec![0.05, -7.0], vec![3.09, 7.0]), |x| {
            vec![x[0].cst(1.0), x[0].sin().sq()]
        })
    }

    #[test]
    fn sphere_christoffel_closed_form() {
        let th = std::f64::consts::FRAC_PI_3;
        let gam = christoffel(&sphere(), &[th, 0.2]).unwrap();
        // Γ^θ_φφ = −sinθ cosθ ; Γ^φ_θφ = cotθ
        assert_relative_eq!(gam[3], -th.sin() * th.cos(), epsilon = 1e-14);
        assert_relative_eq!(gam[4 + 1], 1.0 / th.tan(), epsilon = 1e-14);
        assert_relative_eq!(gam[4 + 2], 1.0 / th.tan(), epsilon = 1e-14);
    }

    #[test]
    fn sphere_curvature() {
        let p = curvature_pack(&sphere(), &[1.0, 0.5]).unwrap();
        assert_relative_eq!(p.scal, 2.0, epsilon = 1e-12);
        assert_relative_eq!(p.ric, DMatrix::identity(2, 2), epsilon = 1e-12);
        assert!(p.nabla_ric.iter().all(|v| v.abs() < 1e-12));
        assert!(p.lap_s.abs() < 1e-10);
    }

    #[test]
    fn sign_convention_laplacian() {
        let flat = MetricField::diagonal("R2", ChartDomain::cube(2, -2.0, 2.0), |x| vec![x[0].cst(1.0), x[0].cst(1.0)]);
        let f = ScalarField::new("x^2", |x| x[0].sq());
        assert_eq!(laplacian(&flat, &f, &[0.3, 0.1]).unwrap(), -2.0);
    }
}
