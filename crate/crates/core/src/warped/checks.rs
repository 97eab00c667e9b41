use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::spec::{assemble, CaseTag, WarpedSpec};
use crate::error::{Error, Result};
use crate::geometry::frame::{endo_norm, inner};
use crate::geometry::{curvature_pack, CurvaturePack, MetricField, ScalarDerivs, ScalarField};
use crate::verifier::{hessian_ricci_residual_at, mu_at, PointEval, PointRecord, RHInstance, Spread};

/// Curvature of the base with derivatives of `f1` and `φ` at a base point.
struct BaseEval {
    pack: CurvaturePack,
    f1: ScalarDerivs,
    phi: ScalarDerivs,
}

impl BaseEval {
    fn new(spec: &WarpedSpec, x1: &[f64]) -> Result<Self> {
        let pack = curvature_pack(&spec.base, x1)?;
        let f1 = ScalarDerivs::at(&spec.f1, &pack)?;
        let phi = ScalarDerivs::at(&spec.warp, &pack)?;
        if !(phi.value > 1e-8) {
            return Err(Error::NonPositiveWarp(phi.value));
        }
        Ok(BaseEval { pack, f1, phi })
    }

    fn norm2(&self, v: &nalgebra::DVector<f64>) -> f64 {
        inner(&self.pack.g, v, v)
    }
}

struct FiberEval {
    pack: CurvaturePack,
    f2: ScalarDerivs,
}

impl FiberEval {
    fn new(spec: &WarpedSpec, x2: &[f64]) -> Result<Self> {
        let pack = curvature_pack(&spec.fiber, x2)?;
        let f2 = ScalarDerivs::at(&spec.f2, &pack)?;
        Ok(FiberEval { pack, f2 })
    }
}

fn id(n: usize) -> DMatrix<f64> {
    DMatrix::identity(n, n)
}

/// Closed-form Ricci endomorphism of the warped product at a point.
pub fn besse_ricci(spec: &WarpedSpec, point: &[f64]) -> Result<DMatrix<f64>> {
    let (x1, x2) = spec.split(point);
    let b = BaseEval::new(spec, x1)?;
    let fib = curvature_pack(&spec.fiber, x2)?;
    Ok(besse_from(spec, &b, &fib))
}

fn besse_from(spec: &WarpedSpec, b: &BaseEval, fib: &CurvaturePack) -> DMatrix<f64> {
    let (n1, n2) = (spec.n1(), spec.n2());
    let phi = b.phi.value;
    let n2f = n2 as f64;
    let top = &b.pack.ric - &b.phi.hess * (n2f / phi);
    let coeff = b.phi.lap / phi - (n2f - 1.0) * b.norm2(&b.phi.grad) / (phi * phi);
    let bottom = &fib.ric / (phi * phi) + id(n2) * coeff;
    let mut m = DMatrix::zeros(n1 + n2, n1 + n2);
    m.view_mut((0, 0), (n1, n1)).copy_from(&top);
    m.view_mut((n1, n1), (n2, n2)).copy_from(&bottom);
    m
}

/// `μ1 = (n2 − 2)|∇f1|² − f1 Δf1` at a base point.
pub fn mu1_at(spec: &WarpedSpec, x1: &[f64]) -> Result<f64> {
    let b = BaseEval::new(spec, x1)?;
    Ok(mu1_from(spec, &b))
}

fn mu1_from(spec: &WarpedSpec, b: &BaseEval) -> f64 {
    (spec.n2() as f64 - 2.0) * b.norm2(&b.f1.grad) - b.f1.value * b.f1.lap
}

/// `μ1' = −(φ/f1) g1(∇f1, ∇φ) + (n2 − 1)|∇φ|² − φ Δφ` at a base point.
pub fn mu1_prime_at(spec: &WarpedSpec, x1: &[f64]) -> Result<f64> {
    mu1_prime_from(spec, &BaseEval::new(spec, x1)?)
}

fn mu1_prime_from(spec: &WarpedSpec, b: &BaseEval) -> Result<f64> {
    let f1 = b.f1.value;
    if f1.abs() < 1e-4 {
        return Err(Error::ZeroDivision(format!("f1 = {f1:e} at {:?}", b.pack.point)));
    }
    let phi = b.phi.value;
    Ok(-(phi / f1) * inner(&b.pack.g, &b.f1.grad, &b.phi.grad) + (spec.n2() as f64 - 1.0) * b.norm2(&b.phi.grad)
        - phi * b.phi.lap)
}

/// `μ2 = f2 Δ2 f2 + 2|∇f2|² − μ1 f2²` on the fiber.
fn mu2_from(fib: &FiberEval, mu1: f64) -> f64 {
    let f2 = fib.f2.value;
    f2 * fib.f2.lap + 2.0 * inner(&fib.pack.g, &fib.f2.grad, &fib.f2.grad) - mu1 * f2 * f2
}

/// Residuals of the case-a system at a product point, given the constant `μ1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseAResiduals {
    /// `‖(n2 − 1)∇²f1 − f1 Ric1‖`.
    pub res_base: f64,
    /// `‖∇²f2 − f2(μ1 Id − Ric2)‖`.
    pub res_fiber: f64,
}

pub fn case_a_residuals(spec: &WarpedSpec, point: &[f64], mu1: f64) -> Result<CaseAResiduals> {
    if spec.case != CaseTag::A {
        return Err(Error::CaseMismatch(format!("`{}` is not case a", spec.label)));
    }
    let (x1, x2) = spec.split(point);
    let b = BaseEval::new(spec, x1)?;
    let fib = FiberEval::new(spec, x2)?;
    Ok(case_a_from(spec, &b, &fib, mu1))
}

fn case_a_from(spec: &WarpedSpec, b: &BaseEval, fib: &FiberEval, mu1: f64) -> CaseAResiduals {
    let n2 = spec.n2() as f64;
    let base = &b.f1.hess * (n2 - 1.0) - &b.pack.ric * b.f1.value;
    let fiber = &fib.f2.hess - (id(spec.n2()) * mu1 - &fib.pack.ric) * fib.f2.value;
    CaseAResiduals { res_base: endo_norm(&b.pack.g, &base), res_fiber: endo_norm(&fib.pack.g, &fiber) }
}

/// Residuals of the case-b system at a product point, given the constant `μ1'`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseBResiduals {
    /// `‖∇²f1 + f1(Ric1 − (n2/φ)∇²φ)‖`.
    pub res_base: f64,
    /// `‖Ric2 − μ1' Id‖`.
    pub einstein_fiber: f64,
}

pub fn case_b_residuals(spec: &WarpedSpec, point: &[f64], mu1_prime: f64) -> Result<CaseBResiduals> {
    if spec.case != CaseTag::B {
        return Err(Error::CaseMismatch(format!("`{}` is not case b", spec.label)));
    }
    let (x1, x2) = spec.split(point);
    let b = BaseEval::new(spec, x1)?;
    let fib = curvature_pack(&spec.fiber, x2)?;
    Ok(case_b_from(spec, &b, &fib, mu1_prime))
}

fn case_b_from(spec: &WarpedSpec, b: &BaseEval, fib: &CurvaturePack, mu1_prime: f64) -> CaseBResiduals {
    let n2 = spec.n2() as f64;
    let inner_op = &b.pack.ric - &b.phi.hess * (n2 / b.phi.value);
    let base = &b.f1.hess + inner_op * b.f1.value;
    let fiber = &fib.ric - id(spec.n2()) * mu1_prime;
    CaseBResiduals { res_base: endo_norm(&b.pack.g, &base), einstein_fiber: endo_norm(&fib.g, &fiber) }
}

/// The μ relation at a product point: `(stated, corrected)` residuals
/// `|μ − n2|∇f1|²f2² − μ2|` and `|μ − μ2|`.
pub fn mu_relation_check(spec: &WarpedSpec, point: &[f64], mu1: f64) -> Result<(f64, f64)> {
    if spec.case != CaseTag::A {
        return Err(Error::CaseMismatch(format!("`{}` is not case a", spec.label)));
    }
    let (metric, f) = assemble(spec)?;
    let inst = RHInstance::new(spec.label.clone(), metric, f);
    let pe = PointEval::new(&inst, point)?;
    let (x1, x2) = spec.split(point);
    let b = BaseEval::new(spec, x1)?;
    let fib = FiberEval::new(spec, x2)?;
    Ok(mu_relation_from(spec, &pe, &b, &fib, mu1))
}

fn mu_relation_from(spec: &WarpedSpec, pe: &PointEval, b: &BaseEval, fib: &FiberEval, mu1: f64) -> (f64, f64) {
    let mu = mu_at(pe);
    let mu2 = mu2_from(fib, mu1);
    let f2 = fib.f2.value;
    let stated = (mu - spec.n2() as f64 * b.norm2(&b.f1.grad) * f2 * f2 - mu2).abs();
    (stated, (mu - mu2).abs())
}

/// Everything the warped checks record over a sample set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WarpedReport {
    pub label: String,
    pub case: CaseTag,
    pub points: Vec<PointRecord>,
    /// `μ1` (case a and product) or `μ1'` (case b) over base samples.
    pub mu1: Spread,
    pub mu2: Spread,
    pub mu: Spread,
    /// `|∇f1|` over base samples.
    pub grad_f1: Spread,
    /// Points where "case residuals small" and "assembled residual small" disagree.
    pub equivalence_violations: usize,
    pub equivalence_tol: f64,
}

/// Evaluate the warped checks at product-chart points.
///
/// Per point it records `assembled_rh`, `besse`, the case residuals and, in
/// case a, `mu_relation_stated` and `mu_relation_corrected`.
pub fn warped_report(spec: &WarpedSpec, points: &[Vec<f64>], equivalence_tol: f64) -> Result<WarpedReport> {
    let (metric, f) = assemble(spec)?;
    let inst = RHInstance::new(spec.label.clone(), metric, f);
    let n1 = spec.n1();

    let bases: Vec<Result<BaseEval>> = points.par_iter().map(|p| BaseEval::new(spec, &p[..n1])).collect();
    let firsts: Vec<f64> = bases
        .iter()
        .filter_map(|b| b.as_ref().ok())
        .filter_map(|b| match spec.case {
            CaseTag::B => mu1_prime_from(spec, b).ok(),
            _ => Some(mu1_from(spec, b)),
        })
        .collect();
    let mu1 = Spread::of(&firsts);
    let grads: Vec<f64> = bases.iter().filter_map(|b| b.as_ref().ok()).map(|b| b.norm2(&b.f1.grad).sqrt()).collect();
    let grad_f1 = Spread::of(&grads);

    struct Row {
        record: PointRecord,
        mu: Option<f64>,
        mu2: Option<f64>,
        violation: bool,
    }
    let rows: Vec<Row> = points
        .par_iter()
        .zip(bases.par_iter())
        .map(|(p, base)| {
            let mut rec = PointRecord::new(p);
            let mut row_mu = None;
            let mut row_mu2 = None;
            let evals = (|| -> Result<(PointEval, FiberEval)> {
                Ok((PointEval::new(&inst, p)?, FiberEval::new(spec, &p[n1..])?))
            })();
            let (b, (pe, fib)) = match (base, evals) {
                (Ok(b), Ok(e)) => (b, e),
                (Err(e), _) => {
                    rec.put_err("assembled_rh", e);
                    return Row { record: rec, mu: None, mu2: None, violation: false };
                }
                (_, Err(e)) => {
                    rec.put_err("assembled_rh", e);
                    return Row { record: rec, mu: None, mu2: None, violation: false };
                }
            };
            let rh = hessian_ricci_residual_at(&pe, 1.0);
            rec.put("assembled_rh", rh);
            rec.put("besse", endo_norm(&pe.pack.g, &(&pe.pack.ric - besse_from(spec, b, &fib.pack))));
            row_mu = row_mu.or(Some(mu_at(&pe)));
            let case_worst = match spec.case {
                CaseTag::A | CaseTag::Product => {
                    let r = case_a_from(spec, b, &fib, mu1.mean);
                    rec.put("res_base", r.res_base);
                    rec.put("res_fiber", r.res_fiber);
                    if spec.case == CaseTag::A {
                        let (stated, corrected) = mu_relation_from(spec, &pe, b, &fib, mu1.mean);
                        rec.put("mu_relation_stated", stated);
                        rec.put("mu_relation_corrected", corrected);
                    }
                    row_mu2 = Some(mu2_from(&fib, mu1.mean));
                    r.res_base.max(r.res_fiber)
                }
                CaseTag::B => {
                    let r = case_b_from(spec, b, &fib.pack, mu1.mean);
                    rec.put("res_base", r.res_base);
                    rec.put("einstein_fiber", r.einstein_fiber);
                    r.res_base.max(r.einstein_fiber)
                }
            };
            let violation = (case_worst < equivalence_tol) != (rh < equivalence_tol);
            Row { record: rec, mu: row_mu, mu2: row_mu2, violation }
        })
        .collect();

    let mus: Vec<f64> = rows.iter().filter_map(|r| r.mu).collect();
    let mu2s: Vec<f64> = rows.iter().filter_map(|r| r.mu2).collect();
    Ok(WarpedReport {
        label: spec.label.clone(),
        case: spec.case,
        equivalence_violations: rows.iter().filter(|r| r.violation).count(),
        points: rows.into_iter().map(|r| r.record).collect(),
        mu1,
        mu2: Spread::of(&mu2s),
        mu: Spread::of(&mus),
        grad_f1,
        equivalence_tol,
    })
}

/// Residual of the trivial extension of `f2` to `(M1 × M2, g1 ⊕ g2)` and the
/// size of `Ric1`, per point.
pub fn product_split_check(
    g1: &MetricField,
    g2: &MetricField,
    f2: &ScalarField,
    points: &[Vec<f64>],
) -> Result<Vec<(f64, f64)>> {
    let metric = g1.product(g2);
    let f = f2.lift(g1.dim, g2.dim);
    let inst = RHInstance::new(format!("{} extended", f2.label), metric, f);
    points
        .par_iter()
        .map(|p| {
            let pe = PointEval::new(&inst, p)?;
            let p1 = curvature_pack(g1, &p[..g1.dim])?;
            Ok((hessian_ricci_residual_at(&pe, 1.0), endo_norm(&p1.g, &p1.ric)))
        })
        .collect()
}
