use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Params = BTreeMap<String, f64>;

/// Declarative reference to a catalog space. Products list their factors.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    pub name: String,
    #[serde(default)]
    pub params: Params,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub factors: Vec<SpaceSpec>,
}

impl SpaceSpec {
    pub fn named(name: &str) -> Self {
        SpaceSpec { name: name.to_string(), ..Default::default() }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn product(a: SpaceSpec, b: SpaceSpec) -> Self {
        SpaceSpec { name: "product".into(), params: Params::new(), factors: vec![a, b] }
    }

    /// Compact human-readable form, e.g. `product(sphere2, flat_torus(n=2))`.
    pub fn display(&self) -> String {
        let mut parts: Vec<String> = self.factors.iter().map(SpaceSpec::display).collect();
        parts.extend(self.params.iter().map(|(k, v)| format!("{k}={v}")));
        if parts.is_empty() {
            self.name.clone()
        } else {
            format!("{}({})", self.name, parts.join(", "))
        }
    }
}

/// Declarative reference to a catalog solution. `extend` wraps an inner
/// solution living on one factor of a product.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionSpec {
    pub name: String,
    #[serde(default)]
    pub params: Params,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inner: Option<Box<SolutionSpec>>,
}

impl SolutionSpec {
    pub fn named(name: &str) -> Self {
        SolutionSpec { name: name.to_string(), ..Default::default() }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    /// Trivial extension of `inner` from factor `factor` of a product.
    pub fn extend(factor: usize, inner: SolutionSpec) -> Self {
        SolutionSpec {
            name: "extend".into(),
            params: Params::from([("factor".into(), factor as f64)]),
            inner: Some(Box::new(inner)),
        }
    }

    pub fn display(&self) -> String {
        let mut parts: Vec<String> = self.inner.iter().map(|i| i.display()).collect();
        parts.extend(self.params.iter().map(|(k, v)| format!("{k}={v}")));
        if parts.is_empty() {
            self.name.clone()
        } else {
            format!("{}({})", self.name, parts.join(", "))
        }
    }
}

/// Reads parameters with defaults and rejects unknown keys.
pub(crate) struct ParamReader<'a> {
    owner: &'a str,
    params: &'a Params,
    used: BTreeSet<&'a str>,
}

impl<'a> ParamReader<'a> {
    pub fn new(owner: &'a str, params: &'a Params) -> Self {
        ParamReader { owner, params, used: BTreeSet::new() }
    }

    pub fn get(&mut self, key: &'a str, default: f64) -> Result<f64> {
        self.used.insert(key);
        let v = self.params.get(key).copied().unwrap_or(default);
        if !v.is_finite() {
            return Err(Error::BadParams(format!("{}: `{key}` must be finite", self.owner)));
        }
        Ok(v)
    }

    pub fn positive(&mut self, key: &'a str, default: f64) -> Result<f64> {
        let v = self.get(key, default)?;
        if v <= 0.0 {
            return Err(Error::BadParams(format!("{}: `{key}` must be positive, got {v}", self.owner)));
        }
        Ok(v)
    }

    pub fn count(&mut self, key: &'a str, default: usize, range: std::ops::RangeInclusive<usize>) -> Result<usize> {
        let v = self.get(key, default as f64)?;
        let k = v as usize;
        if v.fract() != 0.0 || v < 0.0 || !range.contains(&k) {
            return Err(Error::BadParams(format!(
                "{}: `{key}` must be an integer in {}..={}, got {v}",
                self.owner,
                range.start(),
                range.end()
            )));
        }
        Ok(k)
    }

    pub fn finish(self) -> Result<()> {
        if let Some(k) = self.params.keys().find(|k| !self.used.contains(k.as_str())) {
            return Err(Error::BadParams(format!("{}: unknown parameter `{k}`", self.owner)));
        }
        Ok(())
    }
}
