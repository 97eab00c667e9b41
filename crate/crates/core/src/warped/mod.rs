//! Warped products `g1 ⊕ φ² g2` with separable candidates `f = f1 · f2`.
//!
//! The reductions compare the equation on the assembled product against
//! systems on the factors. `f1 = φ` reduces to a base equation plus a fiber
//! equation with a constant `μ1`; a constant `f2` forces the fiber to be
//! Einstein.

mod checks;
mod presets;
mod spec;

pub use checks::{
    besse_ricci, case_a_residuals, case_b_residuals, mu1_at, mu1_prime_at, mu_relation_check, product_split_check,
    warped_report, CaseAResiduals, CaseBResiduals, WarpedReport,
};
pub use presets::{warped_preset, WarpedConfig, PRESETS};
pub use spec::{assemble, CaseTag, WarpedSpec};
