//! One-dimensional reductions: closed families, adaptive integration, dense
//! output, and reconstruction of metrics from profiles.

pub mod converse;
pub mod families;
pub mod integrator;
pub mod kind;
pub mod profile;

pub use converse::{log_law_check, profile_to_warped, LogLawResiduals, ProfileSurface, SigmaKind, SurfaceSample};
pub use families::{closed_family, family_residual, Family};
pub use integrator::{integrate, IntegrateOptions, IntegratorStats, Termination};
pub use kind::{GradientKind, OdeKind};
pub use profile::{ode_residual, taylor_expand, OdeProfile};
