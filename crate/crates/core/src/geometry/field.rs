use std::fmt;
use std::sync::Arc;

use super::domain::ChartDomain;
use crate::error::{Error, Result};
use crate::jet::Jet;

type MetricFn = dyn Fn(&[Jet]) -> Vec<Jet> + Send + Sync;
type ScalarFn = dyn Fn(&[Jet]) -> Jet + Send + Sync;

/// Riemannian metric on a single chart. `components` maps coordinate jets to
/// the `n*n` row-major matrix of `g_ij` jets.
#[derive(Clone)]
pub struct MetricField {
    pub dim: usize,
    components: Arc<MetricFn>,
    pub domain: ChartDomain,
    pub periodic_axes: Vec<bool>,
    pub label: String,
}

impl fmt::Debug for MetricField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MetricField").field("label", &self.label).field("dim", &self.dim).finish()
    }
}

impl MetricField {
    pub fn new(
        label: impl Into<String>,
        domain: ChartDomain,
        components: impl Fn(&[Jet]) -> Vec<Jet> + Send + Sync + 'static,
    ) -> Self {
        let dim = domain.dim();
        MetricField {
            dim,
            components: Arc::new(components),
            domain,
            periodic_axes: vec![false; dim],
            label: label.into(),
        }
    }

    /// Diagonal metric from a closure returning the `n` diagonal entries.
    pub fn diagonal(
        label: impl Into<String>,
        domain: ChartDomain,
        diag: impl Fn(&[Jet]) -> Vec<Jet> + Send + Sync + 'static,
    ) -> Self {
        MetricField::new(label, domain, move |x| {
            let d = diag(x);
            let n = d.len();
            let zero = x[0].cst(0.0);
            let mut out = vec![zero; n * n];
            for (i, v) in d.into_iter().enumerate() {
                out[i * n + i] = v;
            }
            out
        })
    }

    pub fn with_periodic(mut self, axes: Vec<bool>) -> Self {
        assert_eq!(axes.len(), self.dim);
        self.periodic_axes = axes;
        self
    }

    /// Evaluate the component jets on arbitrary coordinate jets (no domain check).
    pub fn components_on(&self, x: &[Jet]) -> Vec<Jet> {
        let g = (self.components)(x);
        assert_eq!(g.len(), self.dim * self.dim, "metric `{}` returned wrong component count", self.label);
        g
    }

    /// Component jets `g_ij` at a chart point, to the requested order.
    pub fn evaluate(&self, point: &[f64], order: usize) -> Result<Vec<Jet>> {
        self.domain.check(point)?;
        let g = self.components_on(&Jet::seed(point, order));
        if g.iter().any(|j| !j.is_finite()) {
            return Err(Error::NonFiniteValue { what: format!("metric `{}` at {point:?}", self.label) });
        }
        Ok(g)
    }

    /// The homothetic metric `lambda^2 g`.
    pub fn scaled(&self, lambda: f64) -> MetricField {
        let inner = self.clone();
        let s = lambda * lambda;
        let mut out = MetricField::new(format!("{}*{lambda}^2", self.label), self.domain.clone(), move |x| {
            inner.components_on(x).into_iter().map(|j| j * s).collect()
        });
        out.periodic_axes = self.periodic_axes.clone();
        out
    }

    /// Conformal metric `e^{2u} g`.
    pub fn conformal(&self, u: &ScalarField) -> MetricField {
        let inner = self.clone();
        let u = u.clone();
        let mut out = MetricField::new(format!("e^(2 {}) {}", u.label, self.label), self.domain.clone(), move |x| {
            let w = (u.eval_on(x) * 2.0).exp();
            inner.components_on(x).into_iter().map(|j| &j * &w).collect()
        });
        out.periodic_axes = self.periodic_axes.clone();
        out
    }

    /// Riemannian product `self + other` on concatenated coordinates.
    pub fn product(&self, other: &MetricField) -> MetricField {
        let (a, b) = (self.clone(), other.clone());
        let (n1, n2) = (self.dim, other.dim);
        let mut periodic = self.periodic_axes.clone();
        periodic.extend_from_slice(&other.periodic_axes);
        MetricField::new(format!("{} x {}", self.label, other.label), self.domain.product(&other.domain), move |x| {
            block_diag(x, &a.components_on(&x[..n1]), &b.components_on(&x[n1..]), n1, n2)
        })
        .with_periodic(periodic)
    }
}

/// Assemble a block-diagonal `n1+n2` matrix of jets.
pub(crate) fn block_diag(x: &[Jet], g1: &[Jet], g2: &[Jet], n1: usize, n2: usize) -> Vec<Jet> {
    let n = n1 + n2;
    let zero = x[0].cst(0.0);
    let mut out = vec![zero; n * n];
    for i in 0..n1 {
        for j in 0..n1 {
            out[i * n + j] = g1[i * n1 + j].clone();
        }
    }
    for i in 0..n2 {
        for j in 0..n2 {
            out[(n1 + i) * n + n1 + j] = g2[i * n2 + j].clone();
        }
    }
    out
}

/// Jet-evaluable scalar function on a chart.
#[derive(Clone)]
pub struct ScalarField {
    pub label: String,
    eval: Arc<ScalarFn>,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ScalarField({})", self.label)
    }
}

impl ScalarField {
    pub fn new(label: impl Into<String>, eval: impl Fn(&[Jet]) -> Jet + Send + Sync + 'static) -> Self {
        ScalarField { label: label.into(), eval: Arc::new(eval) }
    }

    pub fn constant(c: f64) -> Self {
        ScalarField::new(format!("{c}"), move |x| x[0].cst(c))
    }

    pub fn eval_on(&self, x: &[Jet]) -> Jet {
        (self.eval)(x)
    }

    pub fn evaluate(&self, point: &[f64], order: usize) -> Result<Jet> {
        let j = self.eval_on(&Jet::seed(point, order));
        if !j.is_finite() {
            return Err(Error::NonFiniteValue { what: format!("scalar `{}` at {point:?}", self.label) });
        }
        Ok(j)
    }

    pub fn value(&self, point: &[f64]) -> Result<f64> {
        Ok(self.evaluate(point, 0)?.value())
    }

    /// Field on a product chart that only reads the coordinates `range`.
    pub fn lift(&self, start: usize, len: usize) -> ScalarField {
        let inner = self.clone();
        ScalarField::new(self.label.clone(), move |x| inner.eval_on(&x[start..start + len]))
    }

    pub fn scale(&self, s: f64) -> ScalarField {
        let inner = self.clone();
        ScalarField::new(format!("{s}*{}", self.label), move |x| inner.eval_on(x) * s)
    }

    pub fn mul(&self, other: &ScalarField) -> ScalarField {
        let (a, b) = (self.clone(), other.clone());
        ScalarField::new(format!("{}*{}", self.label, other.label), move |x| a.eval_on(x) * b.eval_on(x))
    }

    pub fn map(&self, label: impl Into<String>, f: impl Fn(Jet) -> Jet + Send + Sync + 'static) -> ScalarField {
        let inner = self.clone();
        ScalarField::new(label, move |x| f(inner.eval_on(x)))
    }
}
