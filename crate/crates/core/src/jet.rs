//! Truncated multivariate Taylor expansions ("jets").
//!
//! A [`Jet`] stores the Taylor coefficients of a scalar function around a
//! point, `f(x0 + h) = sum_alpha c_alpha h^alpha`, for all multi-indices with
//! `|alpha| <= order`. Arithmetic and elementary functions propagate these
//! coefficients exactly (up to rounding), so every derivative tensor read back
//! from a jet is symmetric by construction.
//!
//! Jets of order up to [`MAX_ORDER`] are supported. Order 3 is the working
//! order for first/second/third partials; curvature code seeds order 4 so that
//! second derivatives of scalar curvature are available.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex, OnceLock};

/// Highest truncation order supported by the coefficient tables.
pub const MAX_ORDER: usize = 4;

/// Monomial bookkeeping shared by all jets in `n` variables.
pub struct JetSpace {
    n: usize,
    exps: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
    /// `count[k]` = number of monomials of degree <= k.
    count: Vec<usize>,
    /// Product table sorted by target index: (lhs, rhs, target).
    mul: Vec<(u32, u32, u32)>,
    /// `mul_end[k]` = number of product triples whose target has degree <= k.
    mul_end: Vec<usize>,
    /// `shift[k][beta]` = (index of beta + e_k, beta_k + 1).
    shift: Vec<Vec<(u32, f64)>>,
    /// `alpha!` per monomial.
    fact: Vec<f64>,
}

impl fmt::Debug for JetSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "JetSpace(n={}, monomials={})", self.n, self.exps.len())
    }
}

fn factorial(k: u8) -> f64 {
    (1..=k as u32).map(f64::from).product()
}

impl JetSpace {
    fn build(n: usize) -> Self {
        let mut exps: Vec<Vec<u8>> = Vec::new();
        let mut count = Vec::with_capacity(MAX_ORDER + 1);
        for deg in 0..=MAX_ORDER {
            let mut level = Vec::new();
            let mut cur = vec![0u8; n];
            gen_degree(n, deg as u8, 0, &mut cur, &mut level);
            exps.extend(level);
            count.push(exps.len());
        }
        let index: HashMap<Vec<u8>, usize> = exps.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        let degree = |e: &Vec<u8>| e.iter().map(|&v| v as usize).sum::<usize>();

        let mut mul = Vec::new();
        for (i, a) in exps.iter().enumerate() {
            for (j, b) in exps.iter().enumerate() {
                if degree(a) + degree(b) > MAX_ORDER {
                    continue;
                }
                let t: Vec<u8> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                mul.push((i as u32, j as u32, index[&t] as u32));
            }
        }
        mul.sort_by_key(|&(i, j, t)| (t, i, j));
        let mul_end =
            (0..=MAX_ORDER).map(|k| mul.iter().take_while(|&&(_, _, t)| (t as usize) < count[k]).count()).collect();

        let shift = (0..n)
            .map(|k| {
                exps[..count[MAX_ORDER - 1]]
                    .iter()
                    .map(|beta| {
                        let mut up = beta.clone();
                        up[k] += 1;
                        (index[&up] as u32, f64::from(up[k]))
                    })
                    .collect()
            })
            .collect();
        let fact = exps.iter().map(|e| e.iter().map(|&v| factorial(v)).product()).collect();
        JetSpace { n, exps, index, count, mul, mul_end, shift, fact }
    }

    /// Shared table for `n` variables.
    pub fn get(n: usize) -> Arc<JetSpace> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<JetSpace>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("jet table cache poisoned");
        guard.entry(n).or_insert_with(|| Arc::new(JetSpace::build(n))).clone()
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Number of coefficients of a jet of the given order.
    pub fn len(&self, order: usize) -> usize {
        self.count[order]
    }

    fn monomial_index(&self, alpha: &[u8]) -> Option<usize> {
        self.index.get(alpha).copied()
    }
}

fn gen_degree(n: usize, deg: u8, pos: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
    if pos + 1 == n {
        cur[pos] = deg;
        out.push(cur.clone());
        cur[pos] = 0;
        return;
    }
    for d in (0..=deg).rev() {
        cur[pos] = d;
        gen_degree(n, deg - d, pos + 1, cur, out);
    }
    cur[pos] = 0;
}

/// Truncated Taylor expansion of a scalar in `dim` variables.
#[derive(Clone)]
pub struct Jet {
    space: Arc<JetSpace>,
    order: usize,
    c: Vec<f64>,
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Jet")
            .field("dim", &self.space.n)
            .field("order", &self.order)
            .field("value", &self.value())
            .field("d1", &self.d1())
            .finish()
    }
}

impl Jet {
    /// Constant jet.
    pub fn constant(dim: usize, order: usize, value: f64) -> Jet {
        assert!(order <= MAX_ORDER, "jet order {order} exceeds {MAX_ORDER}");
        let space = JetSpace::get(dim);
        let mut c = vec![0.0; space.len(order)];
        c[0] = value;
        Jet { space, order, c }
    }

    /// The coordinate function `x_i` expanded around `value`.
    pub fn variable(dim: usize, order: usize, value: f64, i: usize) -> Jet {
        assert!(i < dim);
        let mut j = Jet::constant(dim, order, value);
        if order >= 1 {
            j.c[1 + i] = 1.0;
        }
        j
    }

    /// Coordinate jets for every axis at `point`.
    pub fn seed(point: &[f64], order: usize) -> Vec<Jet> {
        let n = point.len();
        (0..n).map(|i| Jet::variable(n, order, point[i], i)).collect()
    }

    /// A constant living in the same space and order as `self`.
    pub fn cst(&self, value: f64) -> Jet {
        let mut c = vec![0.0; self.c.len()];
        c[0] = value;
        Jet { space: self.space.clone(), order: self.order, c }
    }

    pub fn dim(&self) -> usize {
        self.space.n
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// Raw Taylor coefficients in graded monomial order.
    pub fn coefficients(&self) -> &[f64] {
        &self.c
    }

    pub fn is_finite(&self) -> bool {
        self.c.iter().all(|v| v.is_finite())
    }

    /// Partial derivative for a list of axis indices, e.g. `[0, 0, 1]` for f_xxy.
    pub fn partial(&self, axes: &[usize]) -> f64 {
        if axes.len() > self.order {
            return 0.0;
        }
        let mut alpha = vec![0u8; self.space.n];
        for &a in axes {
            alpha[a] += 1;
        }
        let idx = self.space.monomial_index(&alpha).expect("monomial in table");
        self.c[idx] * self.space.fact[idx]
    }

    pub fn d1(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.partial(&[i])).collect()
    }

    pub fn d2(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        (0..n).map(|i| (0..n).map(|j| self.partial(&[i, j])).collect()).collect()
    }

    pub fn d3(&self) -> Vec<Vec<Vec<f64>>> {
        let n = self.dim();
        (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| self.partial(&[i, j, k])).collect()).collect()).collect()
    }

    /// Drop coefficients above `order`.
    pub fn truncate(&self, order: usize) -> Jet {
        if order >= self.order {
            return self.clone();
        }
        Jet { space: self.space.clone(), order, c: self.c[..self.space.len(order)].to_vec() }
    }

    /// Jet of `∂f/∂x_k`, one order lower.
    pub fn diff(&self, k: usize) -> Jet {
        assert!(self.order >= 1, "cannot differentiate an order-0 jet");
        let order = self.order - 1;
        let len = self.space.len(order);
        let c = self.space.shift[k][..len].iter().map(|&(src, fac)| self.c[src as usize] * fac).collect();
        Jet { space: self.space.clone(), order, c }
    }

    fn check_space(&self, other: &Jet) {
        assert!(
            Arc::ptr_eq(&self.space, &other.space),
            "jets over {} and {} variables cannot be combined",
            self.space.n,
            other.space.n
        );
    }

    fn mul_jet(&self, other: &Jet) -> Jet {
        self.check_space(other);
        let order = self.order.min(other.order);
        let len = self.space.len(order);
        let mut c = vec![0.0; len];
        for &(i, j, t) in &self.space.mul[..self.space.mul_end[order]] {
            c[t as usize] += self.c[i as usize] * other.c[j as usize];
        }
        Jet { space: self.space.clone(), order, c }
    }

    fn zip_with(&self, other: &Jet, f: impl Fn(f64, f64) -> f64) -> Jet {
        self.check_space(other);
        let order = self.order.min(other.order);
        let len = self.space.len(order);
        let c = (0..len).map(|i| f(self.c[i], other.c[i])).collect();
        Jet { space: self.space.clone(), order, c }
    }

    /// Compose with a univariate function given its derivatives
    /// `g(a0), g'(a0), ..., g^(order)(a0)` at the jet's value.
    pub fn compose(&self, derivs: &[f64]) -> Jet {
        let k = self.order;
        assert!(derivs.len() > k, "need {} derivatives, got {}", k + 1, derivs.len());
        let mut h = self.clone();
        h.c[0] = 0.0;
        let mut acc = self.cst(derivs[k] / factorial(k as u8));
        for m in (0..k).rev() {
            acc = acc.mul_jet(&h);
            acc.c[0] += derivs[m] / factorial(m as u8);
        }
        acc
    }

    pub fn exp(&self) -> Jet {
        let e = self.value().exp();
        self.compose(&[e; MAX_ORDER + 1])
    }

    pub fn ln(&self) -> Jet {
        let a = self.value();
        self.compose(&[a.ln(), 1.0 / a, -1.0 / (a * a), 2.0 / (a * a * a), -6.0 / (a * a * a * a)])
    }

    pub fn powf(&self, p: f64) -> Jet {
        let a = self.value();
        let mut d = [0.0; MAX_ORDER + 1];
        let mut coef = 1.0;
        for (k, slot) in d.iter_mut().enumerate() {
            *slot = coef * a.powf(p - k as f64);
            coef *= p - k as f64;
        }
        self.compose(&d)
    }

    pub fn powi(&self, p: i32) -> Jet {
        match p {
            0 => self.cst(1.0),
            1 => self.clone(),
            2 => self * self,
            _ if p < 0 => self.powi(-p).recip(),
            _ => {
                let half = self.powi(p / 2);
                let sq = &half * &half;
                if p % 2 == 0 {
                    sq
                } else {
                    &sq * self
                }
            }
        }
    }

    pub fn sqrt(&self) -> Jet {
        self.powf(0.5)
    }

    pub fn recip(&self) -> Jet {
        let a = self.value();
        let r = 1.0 / a;
        self.compose(&[r, -r * r, 2.0 * r.powi(3), -6.0 * r.powi(4), 24.0 * r.powi(5)])
    }

    pub fn sin(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        self.compose(&[s, c, -s, -c, s])
    }

    pub fn cos(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        self.compose(&[c, -s, -c, s, c])
    }

    pub fn sinh(&self) -> Jet {
        let (s, c) = (self.value().sinh(), self.value().cosh());
        self.compose(&[s, c, s, c, s])
    }

    pub fn cosh(&self) -> Jet {
        let (s, c) = (self.value().sinh(), self.value().cosh());
        self.compose(&[c, s, c, s, c])
    }

    pub fn atanh(&self) -> Jet {
        let a = self.value();
        let q = 1.0 / (1.0 - a * a);
        self.compose(&[
            a.atanh(),
            q,
            2.0 * a * q * q,
            (2.0 + 6.0 * a * a) * q.powi(3),
            (24.0 * a + 24.0 * a.powi(3)) * q.powi(4),
        ])
    }

    /// Square of the jet.
    pub fn sq(&self) -> Jet {
        self.mul_jet(self)
    }
}

macro_rules! jet_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&Jet> for &Jet {
            type Output = Jet;
            fn $m(self, rhs: &Jet) -> Jet {
                let f: fn(&Jet, &Jet) -> Jet = $body;
                f(self, rhs)
            }
        }
        impl $tr<Jet> for Jet {
            type Output = Jet;
            fn $m(self, rhs: Jet) -> Jet {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Jet> for Jet {
            type Output = Jet;
            fn $m(self, rhs: &Jet) -> Jet {
                (&self).$m(rhs)
            }
        }
        impl $tr<Jet> for &Jet {
            type Output = Jet;
            fn $m(self, rhs: Jet) -> Jet {
                self.$m(&rhs)
            }
        }
    };
}

jet_binop!(Add, add, |a, b| a.zip_with(b, |x, y| x + y));
jet_binop!(Sub, sub, |a, b| a.zip_with(b, |x, y| x - y));
jet_binop!(Mul, mul, |a, b| a.mul_jet(b));
jet_binop!(Div, div, |a, b| a.mul_jet(&b.recip()));

macro_rules! jet_scalar_op {
    ($tr:ident, $m:ident, $jet_fn:expr, $rev_fn:expr) => {
        impl $tr<f64> for &Jet {
            type Output = Jet;
            fn $m(self, rhs: f64) -> Jet {
                let f: fn(&Jet, f64) -> Jet = $jet_fn;
                f(self, rhs)
            }
        }
        impl $tr<f64> for Jet {
            type Output = Jet;
            fn $m(self, rhs: f64) -> Jet {
                (&self).$m(rhs)
            }
        }
        impl $tr<&Jet> for f64 {
            type Output = Jet;
            fn $m(self, rhs: &Jet) -> Jet {
                let f: fn(f64, &Jet) -> Jet = $rev_fn;
                f(self, rhs)
            }
        }
        impl $tr<Jet> for f64 {
            type Output = Jet;
            fn $m(self, rhs: Jet) -> Jet {
                self.$m(&rhs)
            }
        }
    };
}

fn scaled(j: &Jet, s: f64) -> Jet {
    Jet { space: j.space.clone(), order: j.order, c: j.c.iter().map(|v| v * s).collect() }
}

fn shifted(j: &Jet, s: f64) -> Jet {
    let mut out = j.clone();
    out.c[0] += s;
    out
}

jet_scalar_op!(Add, add, |j, s| shifted(j, s), |s, j| shifted(j, s));
jet_scalar_op!(Sub, sub, |j, s| shifted(j, -s), |s, j| shifted(&scaled(j, -1.0), s));
jet_scalar_op!(Mul, mul, |j, s| scaled(j, s), |s, j| scaled(j, s));
jet_scalar_op!(Div, div, |j, s| scaled(j, 1.0 / s), |s, j| scaled(&j.recip(), s));

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        scaled(self, -1.0)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        scaled(&self, -1.0)
    }
}

impl AddAssign<&Jet> for Jet {
    fn add_assign(&mut self, rhs: &Jet) {
        *self = &*self + rhs;
    }
}

impl AddAssign<Jet> for Jet {
    fn add_assign(&mut self, rhs: Jet) {
        *self = &*self + &rhs;
    }
}

impl SubAssign<&Jet> for Jet {
    fn sub_assign(&mut self, rhs: &Jet) {
        *self = &*self - rhs;
    }
}

impl SubAssign<Jet> for Jet {
    fn sub_assign(&mut self, rhs: Jet) {
        *self = &*self - &rhs;
    }
}

impl MulAssign<f64> for Jet {
    fn mul_assign(&mut self, rhs: f64) {
        for v in &mut self.c {
            *v *= rhs;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_partials() {
        let x = Jet::seed(&[1.0, 2.0], 3);
        let f = &x[0] * &x[0] * &x[1];
        assert_eq!(f.value(), 2.0);
        assert_eq!(f.d1(), vec![4.0, 1.0]);
        assert_eq!(f.d2(), vec![vec![4.0, 2.0], vec![2.0, 0.0]]);
        assert_eq!(f.partial(&[0, 0, 1]), 2.0);
        assert_eq!(f.partial(&[0, 0, 0]), 0.0);
    }

    #[test]
    fn constant_has_no_derivatives() {
        let c = Jet::constant(3, 3, 4.5);
        assert_eq!(c.value(), 4.5);
        assert!(c.d1().iter().all(|&v| v == 0.0));
        assert!(c.d3().iter().flatten().flatten().all(|&v| v == 0.0));
    }

    #[test]
    fn exp_at_zero() {
        let x = Jet::variable(1, 3, 0.0, 0);
        let e = x.exp();
        assert_eq!(e.value(), 1.0);
        assert_relative_eq!(e.partial(&[0]), 1.0);
        assert_relative_eq!(e.partial(&[0, 0]), 1.0);
        assert_relative_eq!(e.partial(&[0, 0, 0]), 1.0);
    }

    #[test]
    fn diff_shifts_order() {
        let x = Jet::seed(&[0.3, -0.7], 4);
        let f = (&x[0] * &x[1]).sin();
        let fx = f.diff(0);
        assert_eq!(fx.order(), 3);
        assert_relative_eq!(fx.value(), f.partial(&[0]), epsilon = 1e-15);
        assert_relative_eq!(fx.partial(&[1, 1]), f.partial(&[0, 1, 1]), epsilon = 1e-14);
        assert_relative_eq!(fx.partial(&[0, 1, 1]), f.partial(&[0, 0, 1, 1]), epsilon = 1e-14);
    }

    #[test]
    fn mixed_order_truncates_to_lower() {
        let a = Jet::variable(2, 4, 1.0, 0);
        let b = Jet::variable(2, 2, 1.0, 1);
        assert_eq!((&a * &b).order(), 2);
        assert_eq!((&a + &b).order(), 2);
    }

    #[test]
    fn third_partial_of_sin_product() {
        // f_x = y cos(xy), f_xx = -y^2 sin(xy), f_xxy = -2y sin(xy) - x y^2 cos(xy)
        let (x0, y0) = (0.4, 1.3);
        let x = Jet::seed(&[x0, y0], 3);
        let f = (&x[0] * &x[1]).sin();
        let t: f64 = x0 * y0;
        let expect = -2.0 * y0 * t.sin() - x0 * y0 * y0 * t.cos();
        assert_relative_eq!(f.partial(&[0, 0, 1]), expect, epsilon = 1e-14);
        assert_relative_eq!(f.partial(&[1, 0, 0]), expect, epsilon = 1e-14);
    }
}
