use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::Result;
use crate::geometry::{curvature_pack, CurvaturePack, MetricField, ScalarDerivs, ScalarField};

type EndoFn = dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync;

/// Pointwise endomorphism field, used for almost-complex structures.
#[derive(Clone)]
pub struct EndoField {
    pub label: String,
    eval: Arc<EndoFn>,
}

impl fmt::Debug for EndoField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EndoField({})", self.label)
    }
}

impl EndoField {
    pub fn new(label: impl Into<String>, eval: impl Fn(&[f64]) -> DMatrix<f64> + Send + Sync + 'static) -> Self {
        EndoField { label: label.into(), eval: Arc::new(eval) }
    }

    /// A field that is the same matrix at every point.
    pub fn constant(label: impl Into<String>, m: DMatrix<f64>) -> Self {
        EndoField::new(label, move |_| m.clone())
    }

    pub fn at(&self, point: &[f64]) -> DMatrix<f64> {
        (self.eval)(point)
    }
}

/// A metric together with a candidate solution and, optionally, an almost
/// complex structure.
#[derive(Clone, Debug)]
pub struct RHInstance {
    pub label: String,
    pub metric: MetricField,
    pub f: ScalarField,
    pub j: Option<EndoField>,
}

impl RHInstance {
    pub fn new(label: impl Into<String>, metric: MetricField, f: ScalarField) -> Self {
        RHInstance { label: label.into(), metric, f, j: None }
    }

    pub fn with_j(mut self, j: EndoField) -> Self {
        self.j = Some(j);
        self
    }

    pub fn dim(&self) -> usize {
        self.metric.dim
    }

    /// Same function on the homothetic metric `λ² g`.
    pub fn rescaled(&self, lambda: f64) -> RHInstance {
        RHInstance {
            label: format!("{} (scaled by {lambda})", self.label),
            metric: self.metric.scaled(lambda),
            f: self.f.clone(),
            j: self.j.clone(),
        }
    }
}

/// Curvature of the metric and derivatives of `f`, evaluated once per point.
#[derive(Clone, Debug)]
pub struct PointEval {
    pub pack: CurvaturePack,
    pub f: ScalarDerivs,
}

impl PointEval {
    pub fn new(inst: &RHInstance, point: &[f64]) -> Result<PointEval> {
        let pack = curvature_pack(&inst.metric, point)?;
        let f = ScalarDerivs::at(&inst.f, &pack)?;
        Ok(PointEval { pack, f })
    }

    pub fn grad_norm(&self) -> f64 {
        crate::geometry::frame::vec_norm(&self.pack.g, &self.f.grad)
    }
}
