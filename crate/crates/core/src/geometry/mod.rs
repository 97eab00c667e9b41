//! Chart-based metrics and curvature computed through jets.

pub mod curvature;
pub mod domain;
pub mod field;
pub mod frame;

pub use curvature::{
    christoffel, curvature_jets, curvature_pack, divergence_sym2, gradient, hessian, laplacian, CurvatureJets,
    CurvaturePack, ScalarDerivs,
};
pub use domain::{ChartDomain, Exclusion};
pub use field::{MetricField, ScalarField};
