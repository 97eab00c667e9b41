use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::registry::CheckInfo;
use super::scenario::Scenario;
use crate::verifier::{PointRecord, Stat, Verdict};

/// Outcome of one check over the scenario's samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check: String,
    pub verdict: Verdict,
    pub expected: Verdict,
    /// Tolerance applied to each gated residual.
    pub tolerances: BTreeMap<String, f64>,
    /// Gated residuals.
    pub stats: BTreeMap<String, Stat>,
    /// Recorded values that do not enter the verdict.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub info: BTreeMap<String, Stat>,
    /// Scalar outputs such as means and spreads.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub summary: BTreeMap<String, f64>,
    /// Named yes/no conditions that enter the verdict.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub conditions: BTreeMap<String, bool>,
    /// Evaluations skipped because a precondition did not hold.
    pub skipped: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<String>,
}

impl CheckResult {
    pub fn matches_expectation(&self) -> bool {
        self.verdict == self.expected
    }
}

/// Run metadata kept apart from everything that must be reproducible.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub version: String,
    pub unix_time: u64,
    pub wall_time_s: f64,
    pub threads: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub scenario: Scenario,
    pub instance_label: String,
    pub checks: Vec<CheckResult>,
    /// Per-point values keyed `check.residual`.
    pub points: Vec<PointRecord>,
    pub verdicts: BTreeMap<String, Verdict>,
    /// Pass when every check matched its expected verdict.
    pub overall: Verdict,
    pub meta: Meta,
}

impl RunReport {
    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.check == name)
    }

    /// Verdicts recomputed from the stored statistics and conditions.
    pub fn recompute_verdicts(&self) -> BTreeMap<String, Verdict> {
        self.checks.iter().map(|c| (c.check.clone(), verdict_of(c))).collect()
    }

    /// The report without its metadata, for reproducibility comparisons.
    pub fn without_meta(&self) -> RunReport {
        RunReport { meta: Meta { version: String::new(), unix_time: 0, wall_time_s: 0.0, threads: 0 }, ..self.clone() }
    }
}

fn verdict_of(c: &CheckResult) -> Verdict {
    let evaluated = c.stats.values().any(|s| s.count > 0) || !c.conditions.is_empty();
    if !c.errors.is_empty() {
        return Verdict::Fail;
    }
    if !evaluated {
        return Verdict::Skipped;
    }
    let within = c.stats.iter().all(|(k, s)| s.count == 0 || s.max <= c.tolerances.get(k).copied().unwrap_or(0.0));
    if within && c.conditions.values().all(|&b| b) {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

/// Collects the values of one check and turns them into a [`CheckResult`].
pub(crate) struct Accumulator<'a> {
    info: &'static CheckInfo,
    overrides: &'a BTreeMap<String, f64>,
    gated: BTreeMap<String, Vec<f64>>,
    ungated: BTreeMap<String, Vec<f64>>,
    summary: BTreeMap<String, f64>,
    conditions: BTreeMap<String, bool>,
    skipped: usize,
    errors: Vec<String>,
}

impl<'a> Accumulator<'a> {
    pub(crate) fn new(info: &'static CheckInfo, overrides: &'a BTreeMap<String, f64>) -> Self {
        Accumulator {
            info,
            overrides,
            gated: BTreeMap::new(),
            ungated: BTreeMap::new(),
            summary: BTreeMap::new(),
            conditions: BTreeMap::new(),
            skipped: 0,
            errors: Vec::new(),
        }
    }

    pub(crate) fn tol(&self, residual: &str) -> f64 {
        let name = self.info.name;
        self.overrides
            .get(&format!("{name}.{residual}"))
            .or_else(|| self.overrides.get(name))
            .copied()
            .unwrap_or_else(|| self.info.default_for(residual))
    }

    pub(crate) fn gate(&mut self, name: &str, value: f64) {
        if value.is_finite() {
            self.gated.entry(name.to_string()).or_default().push(value);
        } else {
            self.errors.push(format!("{name}: non-finite value {value}"));
        }
    }

    pub(crate) fn record(&mut self, name: &str, value: f64) {
        if value.is_finite() {
            self.ungated.entry(name.to_string()).or_default().push(value);
        }
    }

    pub(crate) fn summary(&mut self, name: &str, value: f64) {
        if value.is_finite() {
            self.summary.insert(name.to_string(), value);
        } else {
            self.errors.push(format!("summary {name}: non-finite value {value}"));
        }
    }

    pub(crate) fn condition(&mut self, name: &str, holds: bool) {
        self.conditions.insert(name.to_string(), holds);
    }

    /// Values recorded so far under `name`, gated or not.
    pub(crate) fn values(&self, name: &str) -> &[f64] {
        self.gated.get(name).or_else(|| self.ungated.get(name)).map_or(&[], Vec::as_slice)
    }

    pub(crate) fn skip(&mut self) {
        self.skipped += 1;
    }

    pub(crate) fn error(&mut self, msg: impl Into<String>) {
        self.errors.push(msg.into());
    }

    pub(crate) fn finish(self, expected: Verdict) -> CheckResult {
        let stat = |vals: &Vec<f64>, tol: Option<f64>| Stat {
            max: vals.iter().cloned().fold(0.0_f64, f64::max),
            mean: if vals.is_empty() { 0.0 } else { vals.iter().sum::<f64>() / vals.len() as f64 },
            count: vals.len(),
            failures: tol.map_or(0, |t| vals.iter().filter(|v| **v > t).count()),
        };
        let tolerances: BTreeMap<String, f64> = self.gated.keys().map(|k| (k.clone(), self.tol(k))).collect();
        let stats = self.gated.iter().map(|(k, v)| (k.clone(), stat(v, Some(tolerances[k])))).collect();
        let info = self.ungated.iter().map(|(k, v)| (k.clone(), stat(v, None))).collect();
        let mut result = CheckResult {
            check: self.info.name.to_string(),
            verdict: Verdict::Skipped,
            expected,
            tolerances,
            stats,
            info,
            summary: self.summary,
            conditions: self.conditions,
            skipped: self.skipped,
            errors: self.errors,
        };
        result.verdict = verdict_of(&result);
        result
    }
}
