//! Pointwise residuals of the Ricci-Hessian equation `∇²f = −f·Ric` and of
//! its consequences.

mod checks;
mod instance;
mod level;
mod report;

pub use checks::{
    bianchi_defect, check_almost_hermitian, codazzi_and_traces, codazzi_defect, conformal_check,
    hessian_ricci_residual_at, identity_residuals_at, identity_suite, kahler_j_check, mu, mu_at, mu_constancy,
    pack_invariants, rh_residual, ricci_spectrum_at, ricci_spectrum_check, static_residual, CodazziTraces,
    ConformalResiduals, IdentityResiduals, PackInvariants, SpectrumCheck, Spread, IDENTITY_GATE,
};
pub use instance::{EndoField, PointEval, RHInstance};
pub use level::{level_set_probe, probe_at, project_to_level, LevelSetProbe};
pub use report::{PointRecord, ResidualReport, Stat, Verdict};
