use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::instance::{PointEval, RHInstance};
use crate::error::{Error, Result};
use crate::geometry::curvature::{divergence_from_jets, pack_from_jets, PACK_ORDER};
use crate::geometry::frame::{covec_norm, endo_eigenvalues, endo_norm, inner, orthonormal_frame, vec_norm};
use crate::geometry::{curvature_jets, curvature_pack, CurvaturePack, MetricField, ScalarField};

/// Residual of the identity suite is only meaningful where the equation holds
/// to this level.
pub const IDENTITY_GATE: f64 = 1e-6;

/// `‖∇²f + c·f·Ric‖` in operator norm. `c = 1` is the Ricci-Hessian equation,
/// `c = −1` the static equation.
pub fn hessian_ricci_residual_at(pe: &PointEval, c: f64) -> f64 {
    let r = &pe.f.hess + &pe.pack.ric * (c * pe.f.value);
    endo_norm(&pe.pack.g, &r)
}

/// Operator norm of `∇²f + f·Ric`.
pub fn rh_residual(inst: &RHInstance, point: &[f64]) -> Result<f64> {
    Ok(hessian_ricci_residual_at(&PointEval::new(inst, point)?, 1.0))
}

/// Operator norm of `∇²f − f·Ric`.
pub fn static_residual(inst: &RHInstance, point: &[f64]) -> Result<f64> {
    Ok(hessian_ricci_residual_at(&PointEval::new(inst, point)?, -1.0))
}

pub fn mu_at(pe: &PointEval) -> f64 {
    let g2 = inner(&pe.pack.g, &pe.f.grad, &pe.f.grad);
    pe.f.value * pe.f.lap + 2.0 * g2
}

/// `μ = fΔf + 2|∇f|²`.
pub fn mu(inst: &RHInstance, point: &[f64]) -> Result<f64> {
    Ok(mu_at(&PointEval::new(inst, point)?))
}

/// Summary of a sampled quantity that should be constant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spread {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    pub spread: f64,
}

impl Spread {
    pub fn of(values: &[f64]) -> Spread {
        if values.is_empty() {
            return Spread { mean: f64::NAN, min: f64::NAN, max: f64::NAN, spread: f64::NAN };
        }
        let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let spread = if values.iter().all(|v| v.is_finite()) { max - min } else { f64::NAN };
        Spread { mean, min, max, spread }
    }
}

pub fn mu_constancy(inst: &RHInstance, points: &[Vec<f64>]) -> Result<Spread> {
    let values = points.iter().map(|p| mu(inst, p)).collect::<Result<Vec<_>>>()?;
    Ok(Spread::of(&values))
}

/// Residuals of the consequences of the equation at one point.
///
/// Each value is relative: the gradient identity, trace law and curvature
/// identity are divided by `1 + ‖Ric‖`, the norm identity by `(1 + ‖Ric‖)²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityResiduals {
    /// `Ric(∇f) − (S/2)∇f − (f/4)∇S`.
    pub gradient_identity: f64,
    /// `Δf − fS`.
    pub trace_law: f64,
    /// `f|Ric|² − fS²/2 + ⟨∇f,∇S⟩/4 − (f/4)ΔS`.
    pub norm_identity: f64,
    /// `R(X,Y)∇f + X(f)Ric(Y) − Y(f)Ric(X) + f((∇_X Ric)Y − (∇_Y Ric)X)`, maximised over frame pairs.
    pub curvature_identity: f64,
}

impl IdentityResiduals {
    pub fn named(&self) -> [(&'static str, f64); 4] {
        [
            ("gradient_identity", self.gradient_identity),
            ("trace_law", self.trace_law),
            ("norm_identity", self.norm_identity),
            ("curvature_identity", self.curvature_identity),
        ]
    }
}

pub fn identity_residuals_at(pe: &PointEval) -> Result<IdentityResiduals> {
    let rh = hessian_ricci_residual_at(pe, 1.0);
    if !(rh < IDENTITY_GATE) {
        return Err(Error::PreconditionViolated(format!(
            "equation residual {rh:e} exceeds {IDENTITY_GATE:e} at {:?}",
            pe.pack.point
        )));
    }
    let p = &pe.pack;
    let fd = &pe.f;
    let f = fd.value;
    let scale = 1.0 + endo_norm(&p.g, &p.ric);

    let grad_vec = &p.ric * &fd.grad - &fd.grad * (p.scal / 2.0) - &p.grad_s * (f / 4.0);
    let gradient_identity = vec_norm(&p.g, &grad_vec) / scale;

    let trace_law = (fd.lap - f * p.scal).abs() / scale;

    let ric_sq = (&p.ric * &p.ric).trace();
    let norm = f * ric_sq - f * p.scal * p.scal / 2.0 + inner(&p.g, &fd.grad, &p.grad_s) / 4.0 - f / 4.0 * p.lap_s;
    let norm_identity = norm.abs() / (scale * scale);

    let e = orthonormal_frame(&p.g);
    let n = p.dim;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let x = e.column(i).into_owned();
            let y = e.column(j).into_owned();
            let xf = fd.df.dot(&x);
            let yf = fd.df.dot(&y);
            let v = p.apply_riemann(&x, &y, &fd.grad) + &p.ric * &y * xf - &p.ric * &x * yf
                + (p.apply_nabla_ric(&x, &y) - p.apply_nabla_ric(&y, &x)) * f;
            worst = worst.max(vec_norm(&p.g, &v));
        }
    }
    Ok(IdentityResiduals { gradient_identity, trace_law, norm_identity, curvature_identity: worst / scale })
}

/// Identity suite at a point; refuses points where the equation fails.
pub fn identity_suite(inst: &RHInstance, point: &[f64]) -> Result<IdentityResiduals> {
    identity_residuals_at(&PointEval::new(inst, point)?)
}

/// Outcome of the conformal reformulation at one point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConformalResiduals {
    /// `‖r̄ic − (Δ̄u)ḡ + (n−2)(n−3) du⊗du‖`.
    pub ricci_law: f64,
    /// `|Δ̄u + μ e^{2(n−3)u}/(n−2)|`.
    pub laplacian_law: f64,
    /// Trace-free part of `r̄ic` (the Einstein defect).
    pub einstein: f64,
    /// μ of the original pair at the point.
    pub mu: f64,
}

/// The conformal picture `u = ln f/(2−n)`, `ḡ = e^{2u}g` for a positive `f`.
pub fn conformal_check(metric: &MetricField, f: &ScalarField, point: &[f64]) -> Result<ConformalResiduals> {
    let n = metric.dim;
    if n <= 2 {
        return Err(Error::PreconditionViolated(format!("conformal check needs n > 2, got {n}")));
    }
    let fv = f.value(point)?;
    if !(fv > 0.0) {
        return Err(Error::SignViolation(format!("f = {fv} at {point:?}")));
    }
    let nf = n as f64;
    let u = f.map(format!("ln({})/{}", f.label, 2.0 - nf), move |j| j.ln() * (1.0 / (2.0 - nf)));
    let gbar = metric.conformal(&u);
    let inst = RHInstance::new("conformal", metric.clone(), f.clone());
    let mu = mu(&inst, point)?;

    let pack = curvature_pack(&gbar, point)?;
    let ud = crate::geometry::ScalarDerivs::at(&u, &pack)?;
    let du = &ud.df;
    let target = &pack.g * ud.lap - du * du.transpose() * ((nf - 2.0) * (nf - 3.0));
    let ricci_law = endo_norm(&pack.g, &(&pack.ginv * (&pack.ric_form - target)));
    let uval = ud.value;
    let laplacian_law = (ud.lap + mu * (2.0 * (nf - 3.0) * uval).exp() / (nf - 2.0)).abs();
    let trace_free = &pack.ric - DMatrix::identity(n, n) * (pack.scal / nf);
    let einstein = endo_norm(&pack.g, &trace_free);
    Ok(ConformalResiduals { ricci_law, laplacian_law, einstein, mu })
}

/// Spectrum of the Ricci endomorphism against the pattern `{ε, ε, 0, …, 0}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumCheck {
    pub eigenvalues: Vec<f64>,
    /// Largest deviation from `{ε, ε, 0, …}`.
    pub pattern_deviation: f64,
    /// Squared norm of the Ricci tensor restricted to the level set.
    pub ric_t_norm2: f64,
    pub passed: bool,
}

pub fn ricci_spectrum_at(pe: &PointEval, eps: f64, grad_tol: f64) -> Result<SpectrumCheck> {
    let p = &pe.pack;
    if (p.scal - 2.0 * eps).abs() > 1e-8 {
        return Err(Error::NonconstantScalar(format!("S = {} but 2ε = {}", p.scal, 2.0 * eps)));
    }
    let gn = pe.grad_norm();
    if gn <= grad_tol {
        return Err(Error::CriticalPoint { grad_norm: gn });
    }
    let ev = endo_eigenvalues(&p.g, &p.ric);
    let mut expected = vec![0.0; ev.len()];
    for v in expected.iter_mut().take(2) {
        *v = eps;
    }
    let pattern_deviation = ev.iter().zip(&expected).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let nu = &pe.f.grad / gn;
    let tangent = tangent_frame(&p.g, &nu);
    let rt = tangent.transpose() * &p.ric_form * &tangent;
    let ric_t_norm2 = rt.norm_squared();
    let passed = pattern_deviation < 1e-6 && (ric_t_norm2 - 1.0).abs() < 1e-6;
    Ok(SpectrumCheck { eigenvalues: ev, pattern_deviation, ric_t_norm2, passed })
}

pub fn ricci_spectrum_check(inst: &RHInstance, point: &[f64], eps: f64) -> Result<SpectrumCheck> {
    ricci_spectrum_at(&PointEval::new(inst, point)?, eps, 1e-4)
}

/// A g-orthonormal basis (as columns) of the orthogonal complement of the unit vector `nu`.
pub(crate) fn tangent_frame(g: &DMatrix<f64>, nu: &DVector<f64>) -> DMatrix<f64> {
    let n = g.nrows();
    let mut basis: Vec<DVector<f64>> = vec![nu.clone()];
    for k in 0..n {
        if basis.len() == n {
            break;
        }
        let mut v = DVector::<f64>::zeros(n);
        v[k] = 1.0;
        for b in &basis {
            v -= b * inner(g, &v, b);
        }
        let norm = vec_norm(g, &v);
        if norm > 1e-6 {
            basis.push(v / norm);
        }
    }
    DMatrix::from_columns(&basis[1..])
}

/// Codazzi defect of Ricci plus traces and divergences of its powers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodazziTraces {
    pub codazzi: f64,
    /// `tr(Ric^s)` for `s = 1..=s_max`.
    pub traces: Vec<f64>,
    /// `‖δ(Ric^s)‖` for `s = 1..=s_max`.
    pub divergences: Vec<f64>,
}

impl CodazziTraces {
    /// `max_s |tr(Ric^s) − 2ε^s|`.
    pub fn trace_deviation(&self, eps: f64) -> f64 {
        self.traces.iter().enumerate().map(|(k, t)| (t - 2.0 * eps.powi(k as i32 + 1)).abs()).fold(0.0, f64::max)
    }

    pub fn max_divergence(&self) -> f64 {
        self.divergences.iter().cloned().fold(0.0, f64::max)
    }
}

pub fn codazzi_and_traces(metric: &MetricField, point: &[f64], s_max: usize) -> Result<CodazziTraces> {
    let cj = curvature_jets(metric, point, PACK_ORDER)?;
    let pack = pack_from_jets(&cj, point);
    let codazzi = codazzi_defect(&pack);
    let mut power = DMatrix::identity(pack.dim, pack.dim);
    let mut traces = Vec::with_capacity(s_max);
    let mut divergences = Vec::with_capacity(s_max);
    for s in 1..=s_max {
        power = &power * &pack.ric;
        traces.push(power.trace());
        let div = divergence_from_jets(&cj, &cj.ricci_power_form(s));
        divergences.push(covec_norm(&pack.ginv, &div));
    }
    Ok(CodazziTraces { codazzi, traces, divergences })
}

/// `max ‖(∇_X Ric)Y − (∇_Y Ric)X‖` over orthonormal frame pairs.
pub fn codazzi_defect(pack: &CurvaturePack) -> f64 {
    let e = orthonormal_frame(&pack.g);
    let n = pack.dim;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let x = e.column(i).into_owned();
            let y = e.column(j).into_owned();
            let v = pack.apply_nabla_ric(&x, &y) - pack.apply_nabla_ric(&y, &x);
            worst = worst.max(vec_norm(&pack.g, &v));
        }
    }
    worst
}

/// Checks `J² = −Id` and `g(J·, J·) = g` to `1e-10`.
pub fn check_almost_hermitian(g: &DMatrix<f64>, j: &DMatrix<f64>) -> Result<()> {
    let n = g.nrows();
    let sq = j * j + DMatrix::identity(n, n);
    let iso = j.transpose() * g * j - g;
    let (a, b) = (sq.amax(), iso.amax());
    if a > 1e-10 || b > 1e-10 {
        return Err(Error::NotAlmostHermitian(format!("|J²+Id| = {a:e}, |J*g − g| = {b:e}")));
    }
    Ok(())
}

/// `‖∇²f∘J − J∘∇²f‖`.
pub fn kahler_j_check(inst: &RHInstance, point: &[f64]) -> Result<f64> {
    let jf = inst
        .j
        .as_ref()
        .ok_or_else(|| Error::PreconditionViolated(format!("instance `{}` carries no J", inst.label)))?;
    let pe = PointEval::new(inst, point)?;
    let j = jf.at(point);
    check_almost_hermitian(&pe.pack.g, &j)?;
    let h = &pe.f.hess;
    Ok(endo_norm(&pe.pack.g, &(h * &j - &j * h)))
}

/// `‖δRic + ½∇S‖ / (1 + ‖∇S‖)`.
pub fn bianchi_defect(metric: &MetricField, point: &[f64]) -> Result<f64> {
    let cj = curvature_jets(metric, point, 3)?;
    let div = divergence_from_jets(&cj, &cj.ric);
    let pack = pack_from_jets(&cj, point);
    let defect = &div + &pack.d_scal * 0.5;
    Ok(covec_norm(&pack.ginv, &defect) / (1.0 + covec_norm(&pack.ginv, &pack.d_scal)))
}

/// Riemann symmetries, first Bianchi and the trace law at a point, all relative.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PackInvariants {
    pub antisymmetry: f64,
    pub pair_symmetry: f64,
    pub first_bianchi: f64,
    pub scalar_trace: f64,
}

pub fn pack_invariants(pack: &CurvaturePack) -> PackInvariants {
    let n = pack.dim;
    let mut low = vec![0.0; n * n * n * n];
    let idx = |a: usize, b: usize, c: usize, d: usize| ((a * n + b) * n + c) * n + d;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    low[idx(a, b, c, d)] = pack.riemann_lower(a, b, c, d);
                }
            }
        }
    }
    let size = 1.0 + low.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let (mut anti, mut pair, mut bianchi) = (0.0_f64, 0.0_f64, 0.0_f64);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    // low[d,c,a,b] = R_{dcab}: antisymmetric in (d,c) and in (a,b).
                    anti = anti.max((low[idx(a, b, c, d)] + low[idx(b, a, c, d)]).abs());
                    anti = anti.max((low[idx(a, b, c, d)] + low[idx(a, b, d, c)]).abs());
                    pair = pair.max((low[idx(a, b, c, d)] - low[idx(c, d, a, b)]).abs());
                    let cyc = low[idx(a, b, c, d)] + low[idx(a, c, d, b)] + low[idx(a, d, b, c)];
                    bianchi = bianchi.max(cyc.abs());
                }
            }
        }
    }
    let scalar_trace = (pack.ric.trace() - pack.scal).abs() / (1.0 + pack.scal.abs());
    PackInvariants {
        antisymmetry: anti / size,
        pair_symmetry: pair / size,
        first_bianchi: bianchi / size,
        scalar_trace,
    }
}
