//! Verification reports: one entry per identity and grid point.

use std::collections::BTreeMap;

use num_complex::Complex;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub instance: usize,
    pub identity: &'static str,
    pub lambda: Option<[f64; 2]>,
    pub residual: Option<f64>,
    pub bound: Option<f64>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub instances: Vec<String>,
    pub checks: Vec<Check>,
    pub max_residual: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, serde_json::Value>,
}

impl Report {
    pub fn new(suite: &str, instances: Vec<String>) -> Self {
        Self { suite: suite.to_string(), instances, checks: Vec::new(), max_residual: 0.0, pass: true, details: BTreeMap::new() }
    }

    fn push(&mut self, instance: usize, identity: &'static str, lambda: Option<Complex<f64>>, residual: Option<f64>, bound: Option<f64>, status: Status, note: Option<String>) {
        self.checks.push(Check { instance, identity, lambda: lambda.map(|z| [z.re, z.im]), residual, bound, status, note });
    }

    /// A residual that must not exceed `bound`.
    pub fn bounded(&mut self, instance: usize, identity: &'static str, lambda: Option<Complex<f64>>, residual: f64, bound: f64) {
        let status = if residual <= bound { Status::Pass } else { Status::Fail };
        self.push(instance, identity, lambda, Some(residual), Some(bound), status, None);
    }

    /// A yes/no property.
    pub fn holds(&mut self, instance: usize, identity: &'static str, lambda: Option<Complex<f64>>, ok: bool, note: Option<String>) {
        let status = if ok { Status::Pass } else { Status::Fail };
        self.push(instance, identity, lambda, None, None, status, note);
    }

    pub fn skipped(&mut self, instance: usize, identity: &'static str, lambda: Option<Complex<f64>>, note: String) {
        self.push(instance, identity, lambda, None, None, Status::Skipped, Some(note));
    }

    pub fn failed(&mut self, instance: usize, identity: &'static str, lambda: Option<Complex<f64>>, err: impl std::fmt::Display) {
        self.push(instance, identity, lambda, None, None, Status::Fail, Some(err.to_string()));
    }

    /// Sorts checks by instance, identity and `λ`, and fills in the summary.
    pub fn finish(mut self) -> Self {
        let key = |c: &Check| c.lambda.unwrap_or([f64::NEG_INFINITY; 2]);
        self.checks.sort_by(|a, b| {
            (a.instance, a.identity)
                .cmp(&(b.instance, b.identity))
                .then_with(|| key(a)[0].total_cmp(&key(b)[0]))
                .then_with(|| key(a)[1].total_cmp(&key(b)[1]))
        });
        self.max_residual = self.checks.iter().filter_map(|c| c.residual).fold(0.0, f64::max);
        self.pass = self.checks.iter().all(|c| c.status != Status::Fail);
        self
    }

    pub fn merge(&mut self, other: Report) {
        self.checks.extend(other.checks);
        for (k, v) in other.details {
            self.details.insert(format!("{}.{k}", other.suite), v);
        }
    }
}
