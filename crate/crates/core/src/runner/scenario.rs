use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::registry::{check_info, InstanceType};
use crate::catalog::{SolutionSpec, SpaceSpec};
use crate::error::{Error, Result};
use crate::homogeneous::ExtensionData;
use crate::ode::{OdeKind, SigmaKind};
use crate::verifier::Verdict;
use crate::warped::WarpedConfig;

/// Largest accepted sample count.
pub const MAX_SAMPLES: usize = 100_000;

/// A declarative batch of checks on one instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    pub instance: InstanceConfig,
    pub checks: Vec<String>,
    #[serde(default)]
    pub samples: SampleConfig,
    /// Overrides keyed by `check` or `check.residual`.
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    /// Expected verdict per check; unlisted checks are expected to pass.
    #[serde(default)]
    pub expect: BTreeMap<String, Verdict>,
    #[serde(default)]
    pub outputs: Vec<OutputSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum InstanceConfig {
    Catalog(CatalogConfig),
    Warped(WarpedInstance),
    Ode(OdeConfig),
    Extension(ExtensionData),
}

impl InstanceConfig {
    pub fn instance_type(&self) -> InstanceType {
        match self {
            InstanceConfig::Catalog(_) => InstanceType::Catalog,
            InstanceConfig::Warped(_) => InstanceType::Warped,
            InstanceConfig::Ode(_) => InstanceType::Ode,
            InstanceConfig::Extension(_) => InstanceType::Extension,
        }
    }
}

/// A catalog entry by name, or an explicit space and solution.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entry: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<SpaceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solution: Option<SolutionSpec>,
    /// Value the `mu` check compares the sample mean against.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_mu: Option<f64>,
    /// Sign `ε` for the spectrum pattern and the Ricci power traces. The
    /// spectrum check falls back to `S/2` when the space has a known constant
    /// scalar curvature; the trace pattern is only checked when `ε` is given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    /// Homothety factor used by the `scaling` check.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
    /// Right-hand side for the `poisson` check.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poisson_rhs: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WarpedInstance {
    #[serde(flatten)]
    pub config: WarpedConfig,
}

fn default_ode_tol() -> f64 {
    1e-10
}

/// An integration problem for the ODE checks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OdeConfig {
    pub kind: OdeKind,
    pub initial: Vec<f64>,
    pub t_span: [f64; 2],
    #[serde(default = "default_ode_tol")]
    pub tol: f64,
    #[serde(default)]
    pub negative_branch: bool,
    /// Constant handed to the `log_law` check; defaults to the kind's `c`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub log_law_c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<SigmaKind>,
    /// Scalar curvature the reconstructed surface must have, if known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_scal: Option<f64>,
}

fn default_count() -> usize {
    32
}

fn default_seed() -> u64 {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleConfig {
    #[serde(default = "default_count")]
    pub count: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Fraction of each non-periodic side trimmed from the sampling box.
    #[serde(default)]
    pub margin: f64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig { count: default_count(), seed: default_seed(), margin: 0.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Json,
    Csv,
    Md,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub format: OutputFormat,
    pub path: String,
}

impl Scenario {
    /// Parse a TOML document and validate it.
    pub fn from_toml(text: &str) -> Result<Scenario> {
        let s: Scenario = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: &std::path::Path) -> Result<Scenario> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Scenario::from_toml(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// Check names resolve and apply to the instance type, the sample count
    /// is in range, and tolerances are positive.
    pub fn validate(&self) -> Result<()> {
        if self.checks.is_empty() {
            return Err(Error::Config("field `checks`: at least one check is required".into()));
        }
        let ty = self.instance.instance_type();
        for name in &self.checks {
            let info =
                check_info(name).ok_or_else(|| Error::Config(format!("field `checks`: unknown check `{name}`")))?;
            if !info.applies_to.contains(&ty) {
                return Err(Error::Config(format!(
                    "field `checks`: `{name}` does not apply to {} instances",
                    ty.name()
                )));
            }
        }
        if !(1..=MAX_SAMPLES).contains(&self.samples.count) {
            return Err(Error::Config(format!(
                "field `samples.count`: {} is outside [1, {MAX_SAMPLES}]",
                self.samples.count
            )));
        }
        if !(0.0..0.5).contains(&self.samples.margin) {
            return Err(Error::Config(format!("field `samples.margin`: {} is outside [0, 0.5)", self.samples.margin)));
        }
        for (k, v) in &self.tolerances {
            let check = k.split('.').next().unwrap_or(k);
            if check_info(check).is_none() {
                return Err(Error::Config(format!("field `tolerances`: unknown check `{check}` in `{k}`")));
            }
            if !(*v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("field `tolerances.{k}`: must be positive, got {v}")));
            }
        }
        for k in self.expect.keys() {
            if !self.checks.contains(k) {
                return Err(Error::Config(format!("field `expect`: `{k}` is not among the requested checks")));
            }
        }
        if let InstanceConfig::Catalog(c) = &self.instance {
            let explicit = c.space.is_some() || c.solution.is_some();
            match (&c.entry, explicit) {
                (Some(_), true) => {
                    return Err(Error::Config("field `instance`: give either `entry` or `space`/`solution`".into()))
                }
                (None, false) => return Err(Error::Config("field `instance`: missing `entry`".into())),
                (None, true) if c.space.is_none() || c.solution.is_none() => {
                    return Err(Error::Config("field `instance`: `space` and `solution` go together".into()))
                }
                _ => {}
            }
        }
        Ok(())
    }
}
