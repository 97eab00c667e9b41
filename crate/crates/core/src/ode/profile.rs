use serde::{Deserialize, Serialize};

use super::integrator::{IntegratorStats, Termination};
use super::kind::OdeKind;
use crate::geometry::ScalarField;
use crate::jet::{Jet, MAX_ORDER};

/// A numerically integrated one-dimensional profile.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OdeProfile {
    pub grid: Vec<f64>,
    pub u: Vec<f64>,
    pub up: Vec<f64>,
    pub kind: OdeKind,
    pub negative_branch: bool,
    pub stats: IntegratorStats,
    pub termination: Termination,
}

impl OdeProfile {
    /// Tabulate a closed-form function on a uniform grid.
    pub fn from_fn(kind: OdeKind, t0: f64, t1: f64, nodes: usize, f: impl Fn(f64) -> (f64, f64)) -> OdeProfile {
        let grid: Vec<f64> = (0..nodes).map(|i| t0 + (t1 - t0) * i as f64 / (nodes - 1) as f64).collect();
        let (u, up) = grid.iter().map(|&t| f(t)).unzip();
        OdeProfile {
            grid,
            u,
            up,
            kind,
            negative_branch: false,
            stats: IntegratorStats::default(),
            termination: Termination::Completed,
        }
    }

    pub fn t_min(&self) -> f64 {
        self.grid[0]
    }

    pub fn t_max(&self) -> f64 {
        *self.grid.last().expect("non-empty grid")
    }

    pub fn sign(&self) -> f64 {
        if self.negative_branch {
            -1.0
        } else {
            1.0
        }
    }

    fn accel_at(&self, i: usize) -> f64 {
        self.kind.accel(self.grid[i], self.u[i], self.up[i])
    }

    /// Quintic Hermite interpolation through `(u, u', u'')` at the bracketing
    /// nodes; returns `(u, u', u'')` at `t`. `None` outside the grid.
    pub fn interpolate(&self, t: f64) -> Option<(f64, f64, f64)> {
        if self.grid.len() < 2 || t < self.t_min() || t > self.t_max() {
            return None;
        }
        let i = match self.grid.partition_point(|&x| x <= t) {
            0 => 0,
            k if k >= self.grid.len() => self.grid.len() - 2,
            k => k - 1,
        };
        Some(self.hermite(i, t))
    }

    fn hermite(&self, i: usize, t: f64) -> (f64, f64, f64) {
        let (t0, t1) = (self.grid[i], self.grid[i + 1]);
        let h = t1 - t0;
        let s = (t - t0) / h;
        let (p0, p1) = (self.u[i], self.u[i + 1]);
        let (v0, v1) = (self.up[i] * h, self.up[i + 1] * h);
        let (a0, a1) = (self.accel_at(i) * h * h, self.accel_at(i + 1) * h * h);
        // Basis polynomials on [0,1] and their first two derivatives.
        let (s2, s3, s4, s5) = (s * s, s * s * s, s.powi(4), s.powi(5));
        let h0 = [
            1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5,
            -30.0 * s2 + 60.0 * s3 - 30.0 * s4,
            -60.0 * s + 180.0 * s2 - 120.0 * s3,
        ];
        let h1 = [
            s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5,
            1.0 - 18.0 * s2 + 32.0 * s3 - 15.0 * s4,
            -36.0 * s + 96.0 * s2 - 60.0 * s3,
        ];
        let h2 = [
            0.5 * s2 - 1.5 * s3 + 1.5 * s4 - 0.5 * s5,
            s - 4.5 * s2 + 6.0 * s3 - 2.5 * s4,
            1.0 - 9.0 * s + 18.0 * s2 - 10.0 * s3,
        ];
        let h3 =
            [10.0 * s3 - 15.0 * s4 + 6.0 * s5, 30.0 * s2 - 60.0 * s3 + 30.0 * s4, 60.0 * s - 180.0 * s2 + 120.0 * s3];
        let h4 =
            [-4.0 * s3 + 7.0 * s4 - 3.0 * s5, -12.0 * s2 + 28.0 * s3 - 15.0 * s4, -24.0 * s + 84.0 * s2 - 60.0 * s3];
        let h5 = [0.5 * s3 - s4 + 0.5 * s5, 1.5 * s2 - 4.0 * s3 + 2.5 * s4, 3.0 * s - 12.0 * s2 + 10.0 * s3];
        let comb = |d: usize| p0 * h0[d] + v0 * h1[d] + a0 * h2[d] + p1 * h3[d] + v1 * h4[d] + a1 * h5[d];
        (comb(0), comb(1) / h, comb(2) / (h * h))
    }

    /// Midpoints of every grid interval.
    pub fn midpoints(&self) -> Vec<f64> {
        self.grid.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    /// Taylor coefficients `u^(k)(t)/k!`, `k = 0..=order`, obtained by
    /// Taylor-mode expansion of the defining equation around interpolated data.
    pub fn taylor(&self, t: f64, order: usize) -> Option<Vec<f64>> {
        let (u0, up0, _) = self.interpolate(t)?;
        Some(taylor_expand(&self.kind, self.sign(), t, u0, up0, order))
    }

    /// Jet of `u ∘ t` for an arbitrary argument jet; NaN outside the grid.
    pub fn compose(&self, t: &Jet) -> Jet {
        compose_profile(self, t, 0)
    }

    /// Jet of `u' ∘ t`.
    pub fn compose_derivative(&self, t: &Jet) -> Jet {
        compose_profile(self, t, 1)
    }

    /// Scalar field `u(x_axis)`.
    pub fn field(&self, label: &str, axis: usize) -> ScalarField {
        let p = self.clone();
        ScalarField::new(label, move |x| compose_profile(&p, &x[axis], 0))
    }

    /// Scalar field `u'(x_axis) * scale`.
    pub fn derivative_field(&self, label: &str, axis: usize, scale: f64) -> ScalarField {
        let p = self.clone();
        ScalarField::new(label, move |x| compose_profile(&p, &x[axis], 1) * scale)
    }
}

fn compose_profile(p: &OdeProfile, t: &Jet, shift: usize) -> Jet {
    let order = t.order();
    match p.taylor(t.value(), order + shift) {
        Some(c) => {
            let derivs: Vec<f64> = (0..=order)
                .map(|k| {
                    let m = k + shift;
                    c[m] * (1..=m).map(|v| v as f64).product::<f64>()
                })
                .collect();
            t.compose(&derivs)
        }
        None => t.cst(f64::NAN),
    }
}

fn jet_from(coeffs: &[f64], order: usize) -> Jet {
    // Univariate jets: coefficient k sits at monomial index k.
    let mut j = Jet::constant(1, order, coeffs[0]);
    let mut pow = Jet::variable(1, order, 0.0, 0);
    for &c in coeffs.iter().take(order + 1).skip(1) {
        j += &pow * c;
        pow = &pow * &Jet::variable(1, order, 0.0, 0);
    }
    j
}

/// Taylor coefficients of the solution through `(t0, u0, u0')`.
pub fn taylor_expand(kind: &OdeKind, sign: f64, t0: f64, u0: f64, up0: f64, order: usize) -> Vec<f64> {
    assert!(order <= MAX_ORDER + 1, "Taylor order limited to {}", MAX_ORDER + 1);
    let mut c = vec![u0, up0];
    while c.len() <= order {
        let m = c.len();
        if kind.is_first_order() {
            let ord = m - 1;
            let u = jet_from(&c, ord);
            let g = kind.slope_jet(&u, sign);
            c.push(g.coefficients()[ord] / m as f64);
        } else {
            let ord = m - 2;
            let tj = Jet::variable(1, ord, 0.0, 0) + t0;
            let u = jet_from(&c, ord);
            let dc: Vec<f64> = (1..c.len()).map(|k| k as f64 * c[k]).collect();
            let up = jet_from(&dc, ord);
            let a = kind.accel_jet(&tj, &u, &up);
            c.push(a.coefficients()[ord] / (m * (m - 1)) as f64);
        }
    }
    c.truncate(order + 1);
    c
}

/// Largest defining-equation residual at interval midpoints of the dense
/// interpolant.
pub fn ode_residual(profile: &OdeProfile) -> f64 {
    profile
        .midpoints()
        .iter()
        .map(|&t| {
            let (u, up, upp) = profile.interpolate(t).expect("midpoint inside grid");
            if profile.kind.is_first_order() {
                match profile.kind.slope(u, profile.sign()) {
                    Some(s) => (up - s).abs(),
                    None => f64::INFINITY,
                }
            } else {
                (upp - profile.kind.accel(t, u, up)).abs()
            }
        })
        .fold(0.0, f64::max)
}
