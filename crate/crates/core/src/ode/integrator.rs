//! Dormand–Prince 5(4) with adaptive steps and terminal events.

use serde::{Deserialize, Serialize};

use super::kind::{GradientKind, OdeKind};
use super::profile::OdeProfile;
use crate::error::{Error, Result};

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] =
    [5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0];

/// Integration settings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegrateOptions {
    /// Local error tolerance, in `[1e-12, 1e-6]`.
    pub tol: f64,
    /// Largest step; keeps the Hermite dense output accurate.
    pub h_max: f64,
    /// Take the decreasing square-root branch.
    pub negative_branch: bool,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        IntegrateOptions { tol: 1e-10, h_max: 0.01, negative_branch: false }
    }
}

/// Why an integration stopped.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Termination {
    Completed,
    /// The radicand of a first-order kind reached zero.
    RadicandZero {
        t: f64,
    },
    /// The profile reached zero.
    ZeroCrossing {
        t: f64,
    },
    /// The solution blew up (steps underflowed next to `u = 0`).
    Singularity {
        t: f64,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct IntegratorStats {
    pub steps: usize,
    pub rejected: usize,
    pub max_local_error: f64,
}

struct System {
    kind: OdeKind,
    sign: f64,
}

impl System {
    fn rhs(&self, t: f64, y: &[f64]) -> Option<Vec<f64>> {
        let out = if self.kind.is_first_order() {
            vec![self.kind.slope(y[0], self.sign)?]
        } else {
            vec![y[1], self.kind.accel(t, y[0], y[1])]
        };
        out.iter().all(|v| v.is_finite()).then_some(out)
    }

    /// One Dormand–Prince step; returns the new state and the error estimate.
    fn step(&self, t: f64, y: &[f64], h: f64) -> Option<(Vec<f64>, f64)> {
        let m = y.len();
        let mut k: Vec<Vec<f64>> = Vec::with_capacity(7);
        for s in 0..7 {
            let ys: Vec<f64> = (0..m).map(|i| y[i] + h * (0..s).map(|j| A[s][j] * k[j][i]).sum::<f64>()).collect();
            k.push(self.rhs(t + C[s] * h, &ys)?);
        }
        let ynew: Vec<f64> = (0..m).map(|i| y[i] + h * (0..7).map(|s| B5[s] * k[s][i]).sum::<f64>()).collect();
        let err =
            (0..m).map(|i| (h * (0..7).map(|s| (B5[s] - B4[s]) * k[s][i]).sum::<f64>()).abs()).fold(0.0, f64::max);
        Some((ynew, err))
    }

    fn derivative(&self, y: &[f64]) -> f64 {
        if self.kind.is_first_order() {
            self.kind.slope(y[0], self.sign).unwrap_or(f64::NAN)
        } else {
            y[1]
        }
    }
}

/// Integrate `kind` from `t_span.0` to `t_span.1` (either direction).
///
/// `initial` holds `u0` for first-order kinds and `(u0, u0')` otherwise.
pub fn integrate(kind: OdeKind, initial: &[f64], t_span: (f64, f64), opts: IntegrateOptions) -> Result<OdeProfile> {
    if !(1e-12..=1e-6).contains(&opts.tol) {
        return Err(Error::BadParams(format!("tolerance {} outside [1e-12, 1e-6]", opts.tol)));
    }
    let sys = System { kind, sign: if opts.negative_branch { -1.0 } else { 1.0 } };
    let need = if kind.is_first_order() { 1 } else { 2 };
    if initial.len() != need {
        return Err(Error::BadParams(format!("{} needs {need} initial values", kind.name())));
    }
    let (t0, t1) = t_span;
    if kind.requires_positive() && !(initial[0] > 0.0) {
        return Err(Error::BadParams(format!("{} needs u0 > 0", kind.name())));
    }
    if let Some(r) = kind.radicand(initial[0]) {
        if r < 0.0 {
            return Err(Error::RadicandNegative { t: t0, value: r });
        }
    }
    let dir = if t1 >= t0 { 1.0 } else { -1.0 };
    let span = (t1 - t0).abs();
    let h_floor = 1e-13 * (1.0 + t0.abs().max(t1.abs()));

    let mut y = initial.to_vec();
    let mut t = t0;
    let mut ts = vec![t];
    let mut us = vec![y[0]];
    let mut ups = vec![sys.derivative(&y)];
    let mut stats = IntegratorStats::default();
    let mut h = opts.h_max.min(span / 10.0).max(h_floor) * 0.1;
    let mut termination = Termination::Completed;
    let u_scale = y[0].abs().max(1e-300);
    // The radicand event fires on a downward crossing of a small threshold;
    // data that starts on the threshold (constant branches) never arms it.
    let mut radicand_armed = !radicand_low(&kind, y[0]);

    while dir * (t1 - t) > h_floor {
        h = h.min((t1 - t).abs()).min(opts.h_max);
        let attempt = sys.step(t, &y, dir * h);
        let accepted = match attempt {
            Some((ynew, err)) => {
                let scale = opts.tol * ynew.iter().chain(y.iter()).fold(1.0_f64, |m, v| m.max(v.abs()));
                let ratio = err / scale;
                let crossing = kind.requires_positive() && ynew[0] <= 0.0;
                if ratio <= 1.0 && !crossing {
                    stats.max_local_error = stats.max_local_error.max(err);
                    Some((ynew, ratio))
                } else if ratio <= 1.0 && crossing {
                    let tz = locate(&sys, t, &y, dir * h, |ym| ym[0] > 0.0);
                    push_event_point(&sys, &mut t, &y, tz, (&mut ts, &mut us, &mut ups));
                    termination = Termination::ZeroCrossing { t };
                    break;
                } else {
                    h *= (0.9 * ratio.powf(-0.2)).clamp(0.1, 0.9);
                    None
                }
            }
            None => {
                h *= 0.5;
                None
            }
        };
        match accepted {
            Some((ynew, _)) if radicand_armed && radicand_low(&kind, ynew[0]) => {
                let tz = locate(&sys, t, &y, dir * h, |ym| !radicand_low(&kind, ym[0]));
                push_event_point(&sys, &mut t, &y, tz, (&mut ts, &mut us, &mut ups));
                termination = Termination::RadicandZero { t };
                break;
            }
            Some(_) if h < h_floor || t + dir * h == t => {
                termination = classify_stall(&sys, t, &y, u_scale)?;
                break;
            }
            Some((ynew, ratio)) => {
                t += dir * h;
                y = ynew;
                stats.steps += 1;
                ts.push(t);
                us.push(y[0]);
                ups.push(sys.derivative(&y));
                radicand_armed |= !radicand_low(&kind, y[0]);
                let grow = if ratio > 0.0 { 0.9 * ratio.powf(-0.2) } else { 5.0 };
                h *= grow.clamp(0.2, 5.0);
            }
            None => {
                stats.rejected += 1;
                if h < h_floor {
                    termination = classify_stall(&sys, t, &y, u_scale)?;
                    break;
                }
            }
        }
    }

    if dir < 0.0 {
        ts.reverse();
        us.reverse();
        ups.reverse();
    }
    let profile =
        OdeProfile { grid: ts, u: us, up: ups, kind, negative_branch: opts.negative_branch, stats, termination };
    Ok(profile)
}

fn radicand_low(kind: &OdeKind, u: f64) -> bool {
    match kind {
        OdeKind::Gradient { profile: GradientKind::Exp } => false,
        _ => kind.radicand(u).is_some_and(|r| r <= 1e-12 * (1.0 + u * u)),
    }
}

/// Bisection on the step fraction for the last time at which `inside` holds.
fn locate(sys: &System, t: f64, y: &[f64], h: f64, inside: impl Fn(&[f64]) -> bool) -> f64 {
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while (hi - lo) * h.abs() > 1e-12 {
        let mid = 0.5 * (lo + hi);
        match sys.step(t, y, mid * h) {
            Some((ym, _)) if inside(&ym) => lo = mid,
            _ => hi = mid,
        }
    }
    t + lo * h
}

type Columns<'a> = (&'a mut Vec<f64>, &'a mut Vec<f64>, &'a mut Vec<f64>);

fn push_event_point(sys: &System, t: &mut f64, y: &[f64], tz: f64, cols: Columns<'_>) {
    if tz == *t {
        return;
    }
    let (yz, _) = sys.step(*t, y, tz - *t).expect("bisection step stays admissible");
    *t = tz;
    cols.0.push(tz);
    cols.1.push(yz[0]);
    cols.2.push(sys.derivative(&yz));
}

fn classify_stall(sys: &System, t: f64, y: &[f64], u_scale: f64) -> Result<Termination> {
    if let Some(r) = sys.kind.radicand(y[0]) {
        let scale = 1.0 + y[0] * y[0];
        if r.abs() <= 1e-6 * scale {
            return Ok(Termination::RadicandZero { t });
        }
    }
    if y[0].abs() <= 1e-2 * u_scale.max(1.0) || y.iter().any(|v| v.abs() > 1e8) {
        return Ok(Termination::Singularity { t });
    }
    Err(Error::StepUnderflow { t })
}
