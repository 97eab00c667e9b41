use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::field::block_diag;
use crate::geometry::{MetricField, ScalarField};
use crate::sampling::sample_points;

/// Which reduction applies to `f = f1 · f2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseTag {
    /// `f1 = φ`.
    A,
    /// `f2` constant.
    B,
    /// `φ ≡ 1`.
    Product,
}

/// `g1 ⊕ φ² g2` on the concatenated chart with `f = f1(x1) f2(x2)`.
#[derive(Clone, Debug)]
pub struct WarpedSpec {
    pub label: String,
    pub base: MetricField,
    pub fiber: MetricField,
    pub warp: ScalarField,
    pub f1: ScalarField,
    pub f2: ScalarField,
    pub case: CaseTag,
}

/// Base samples used to validate a spec.
const VALIDATION_SAMPLES: usize = 64;

impl WarpedSpec {
    pub fn n1(&self) -> usize {
        self.base.dim
    }

    pub fn n2(&self) -> usize {
        self.fiber.dim
    }

    /// Check the warp is positive and the case tag matches the fields on
    /// Halton samples of the base (and fiber for case b).
    pub fn validate(&self) -> Result<()> {
        let base_pts = sample_points(&self.base.domain, VALIDATION_SAMPLES, 17)?;
        for p in &base_pts {
            let phi = self.warp.value(p)?;
            if !(phi > 1e-8) {
                return Err(Error::NonPositiveWarp(phi));
            }
            match self.case {
                CaseTag::A => {
                    let f1 = self.f1.value(p)?;
                    if (f1 - phi).abs() > 1e-12 * (1.0 + phi.abs()) {
                        return Err(Error::CaseMismatch(format!("case a needs f1 = warp, got {f1} vs {phi} at {p:?}")));
                    }
                }
                CaseTag::Product => {
                    if (phi - 1.0).abs() > 1e-12 {
                        return Err(Error::CaseMismatch(format!("product case needs warp 1, got {phi}")));
                    }
                }
                CaseTag::B => {}
            }
        }
        if self.case == CaseTag::B {
            let fiber_pts = sample_points(&self.fiber.domain, VALIDATION_SAMPLES, 17)?;
            let mut first = None;
            for q in &fiber_pts {
                let j = self.f2.evaluate(q, 1)?;
                let c = *first.get_or_insert(j.value());
                if (j.value() - c).abs() > 1e-12 * (1.0 + c.abs()) || j.d1().iter().any(|d| d.abs() > 1e-12) {
                    return Err(Error::CaseMismatch("case b needs a constant f2".into()));
                }
            }
        }
        Ok(())
    }

    /// Split a point of the product chart.
    pub fn split<'a>(&self, point: &'a [f64]) -> (&'a [f64], &'a [f64]) {
        point.split_at(self.n1())
    }
}

/// The assembled metric and function on the product chart.
pub fn assemble(spec: &WarpedSpec) -> Result<(MetricField, ScalarField)> {
    spec.validate()?;
    let (n1, n2) = (spec.n1(), spec.n2());
    let (g1, g2, warp) = (spec.base.clone(), spec.fiber.clone(), spec.warp.clone());
    let mut periodic = spec.base.periodic_axes.clone();
    periodic.extend_from_slice(&spec.fiber.periodic_axes);
    let domain = spec.base.domain.product(&spec.fiber.domain);
    let metric = MetricField::new(format!("{} x_w {}", spec.base.label, spec.fiber.label), domain, move |x| {
        let phi2 = warp.eval_on(&x[..n1]).sq();
        let fib: Vec<_> = g2.components_on(&x[n1..]).iter().map(|c| c * &phi2).collect();
        block_diag(x, &g1.components_on(&x[..n1]), &fib, n1, n2)
    })
    .with_periodic(periodic);
    let f = spec.f1.lift(0, n1).mul(&spec.f2.lift(n1, n2));
    Ok((metric, f))
}
