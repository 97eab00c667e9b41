use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::checks::tangent_frame;
use super::instance::{PointEval, RHInstance};
use crate::error::{Error, Result};
use crate::geometry::frame::{inner, spectral_norm};

/// Geometry of the level hypersurface of `f` through a point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelSetProbe {
    pub point: Vec<f64>,
    pub level: f64,
    /// Unit normal `∇f/|∇f|` in chart components.
    pub normal: Vec<f64>,
    /// `g(ν, ν) − 1`.
    pub normal_defect: f64,
    /// Weingarten map `−∇ν` in an orthonormal frame of the level set, row-major.
    pub weingarten: Vec<f64>,
    pub weingarten_norm: f64,
    /// Asymmetry of the Weingarten matrix in the orthonormal frame.
    pub weingarten_asymmetry: f64,
    /// Intrinsic scalar curvature from the Gauss equation.
    pub scal_n: f64,
    /// `‖Ric_N + (f/|∇f|)(∇_ν Ric)|_TN‖`, reported when `S` is constant at the point.
    pub ric_n_residual: Option<f64>,
}

pub fn level_set_probe(inst: &RHInstance, point: &[f64]) -> Result<LevelSetProbe> {
    probe_at(&PointEval::new(inst, point)?, 1e-4)
}

pub fn probe_at(pe: &PointEval, grad_tol: f64) -> Result<LevelSetProbe> {
    let p = &pe.pack;
    let gn = pe.grad_norm();
    if !(gn > grad_tol) {
        return Err(Error::CriticalPoint { grad_norm: gn });
    }
    let nu = &pe.f.grad / gn;
    let e = tangent_frame(&p.g, &nu);
    let m = e.ncols();
    // (∇_X ν) = (∇²f X − g(∇²f X, ν) ν)/|∇f|; restricted to TN the normal part drops.
    let w = -(e.transpose() * &p.g * &pe.f.hess * &e) / gn;
    let weingarten_asymmetry = if m > 0 { (&w - w.transpose()).amax() } else { 0.0 };
    let w = (&w + w.transpose()) * 0.5;
    let tr = w.trace();
    let ric_nn = inner(&p.g, &nu, &(&p.ric * &nu));
    let scal_n = p.scal - 2.0 * ric_nn + tr * tr - w.norm_squared();

    let s_const = p.grad_s.iter().all(|v| v.abs() < 1e-9 * (1.0 + p.scal.abs()));
    let ric_n_residual = if s_const && m > 0 {
        let ric_t = e.transpose() * &p.ric_form * &e;
        let n = p.dim;
        // g(R(ν, X)Y, ν) on tangent frame vectors
        let mut rnn = DMatrix::zeros(m, m);
        for a in 0..m {
            for b in 0..m {
                let x = e.column(a).into_owned();
                let y = e.column(b).into_owned();
                rnn[(a, b)] = inner(&p.g, &p.apply_riemann(&nu, &x, &y), &nu);
            }
        }
        let ric_n = ric_t - rnn + &w * tr - &w * &w;
        let nabla_nu = DMatrix::from_fn(n, n, |i, j| (0..n).map(|k| p.nabla_ric(k, i, j) * nu[k]).sum::<f64>());
        let nabla_t = e.transpose() * nabla_nu * &e;
        Some(spectral_norm(&(ric_n + nabla_t * (pe.f.value / gn))))
    } else {
        None
    };

    Ok(LevelSetProbe {
        point: p.point.clone(),
        level: pe.f.value,
        normal: nu.iter().cloned().collect(),
        normal_defect: inner(&p.g, &nu, &nu) - 1.0,
        weingarten: w.transpose().iter().cloned().collect(),
        weingarten_norm: spectral_norm(&w),
        weingarten_asymmetry,
        scal_n,
        ric_n_residual,
    })
}

/// Newton iteration along `∇f` moving `point` onto the level `f = c`, with
/// step halving that keeps iterates in the chart and decreases `|f − c|`.
pub fn project_to_level(inst: &RHInstance, point: &[f64], c: f64, max_iter: usize) -> Result<Vec<f64>> {
    let mut x = point.to_vec();
    for _ in 0..max_iter {
        let jet = inst.f.evaluate(&x, 1)?;
        let gap = jet.value() - c;
        if gap.abs() < 1e-14 * (1.0 + c.abs()) {
            break;
        }
        let g = inst.metric.evaluate(&x, 0)?;
        let n = inst.dim();
        let gm = DMatrix::from_fn(n, n, |i, j| g[i * n + j].value());
        let df = nalgebra::DVector::from_vec(jet.d1());
        let ginv = gm.try_inverse().ok_or(Error::SingularMetric { min_eigenvalue: 0.0 })?;
        let v = &ginv * &df;
        let slope = df.dot(&v);
        if !(slope > 1e-16) {
            return Err(Error::CriticalPoint { grad_norm: slope.max(0.0).sqrt() });
        }
        let mut step = 1.0;
        let next = loop {
            let trial: Vec<f64> = x.iter().zip(v.iter()).map(|(xi, vi)| xi - step * gap * vi / slope).collect();
            let ok =
                inst.metric.domain.contains(&trial) && inst.f.value(&trial).is_ok_and(|f| (f - c).abs() < gap.abs());
            if ok {
                break trial;
            }
            step *= 0.5;
            if step < 1e-6 {
                inst.metric.domain.check(&trial)?;
                return Err(Error::PreconditionViolated(format!("no descent toward level {c} from {x:?}")));
            }
        };
        x = next;
    }
    Ok(x)
}
