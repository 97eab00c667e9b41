use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// No point produced a value (for example a precondition failed everywhere).
    Skipped,
}

impl Verdict {
    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

/// Residuals recorded at one sample point.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    pub point: Vec<f64>,
    pub residuals: BTreeMap<String, f64>,
    /// Residual names that could not be evaluated, with the reason.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub errors: BTreeMap<String, String>,
}

impl PointRecord {
    pub fn new(point: &[f64]) -> Self {
        PointRecord { point: point.to_vec(), ..Default::default() }
    }

    /// Store a value; non-finite values become errors so the record stays
    /// representable in JSON.
    pub fn put(&mut self, name: &str, value: f64) {
        if value.is_finite() {
            self.residuals.insert(name.to_string(), value);
        } else {
            self.errors.insert(name.to_string(), format!("non-finite value {value}"));
        }
    }

    pub fn put_err(&mut self, name: &str, err: impl ToString) {
        self.errors.insert(name.to_string(), err.to_string());
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub max: f64,
    pub mean: f64,
    pub count: usize,
    pub failures: usize,
}

/// Named residuals over a sample set, with verdicts against tolerances.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub instance_label: String,
    pub points: Vec<PointRecord>,
    pub stats: BTreeMap<String, Stat>,
    pub mu_samples: Vec<f64>,
    pub verdicts: BTreeMap<String, Verdict>,
    pub tolerances: BTreeMap<String, f64>,
}

impl ResidualReport {
    /// Build statistics and verdicts. A name passes when it was evaluated at
    /// least once, never errored, and its maximum is within tolerance. Names
    /// without a tolerance get statistics but no verdict.
    pub fn build(
        instance_label: impl Into<String>,
        points: Vec<PointRecord>,
        mu_samples: Vec<f64>,
        tolerances: BTreeMap<String, f64>,
    ) -> Self {
        let mut names: Vec<String> = Vec::new();
        for p in &points {
            for k in p.residuals.keys().chain(p.errors.keys()) {
                if !names.contains(k) {
                    names.push(k.clone());
                }
            }
        }
        names.sort();
        let mut stats = BTreeMap::new();
        for name in &names {
            let vals: Vec<f64> = points.iter().filter_map(|p| p.residuals.get(name).copied()).collect();
            let failures = points.iter().filter(|p| p.errors.contains_key(name)).count();
            let max = vals.iter().cloned().fold(0.0_f64, f64::max);
            let mean = if vals.is_empty() { 0.0 } else { vals.iter().sum::<f64>() / vals.len() as f64 };
            stats.insert(name.clone(), Stat { max, mean, count: vals.len(), failures });
        }
        let verdicts = verdicts_from(&stats, &tolerances);
        ResidualReport { instance_label: instance_label.into(), points, stats, mu_samples, verdicts, tolerances }
    }

    /// Recompute verdicts from the stored statistics.
    pub fn recompute_verdicts(&self) -> BTreeMap<String, Verdict> {
        verdicts_from(&self.stats, &self.tolerances)
    }

    pub fn max(&self, name: &str) -> Option<f64> {
        self.stats.get(name).map(|s| s.max)
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.values().all(|v| v.is_pass())
    }
}

fn verdicts_from(stats: &BTreeMap<String, Stat>, tolerances: &BTreeMap<String, f64>) -> BTreeMap<String, Verdict> {
    tolerances
        .iter()
        .map(|(name, &tol)| {
            let v = match stats.get(name) {
                None => Verdict::Skipped,
                Some(s) if s.count == 0 => Verdict::Skipped,
                Some(s) if s.failures == 0 && s.max <= tol => Verdict::Pass,
                Some(_) => Verdict::Fail,
            };
            (name.clone(), v)
        })
        .collect()
}
