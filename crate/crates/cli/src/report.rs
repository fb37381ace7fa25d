//! Suite and case reports.

use std::collections::BTreeMap;

use amphase::ResidualReport;
use serde::Serialize;

use crate::config::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expectation {
    Pass,
    /// Designed to fail; a failing report is the expected outcome.
    Fail,
}

/// A residual report together with the outcome it is expected to have.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    #[serde(flatten)]
    pub report: ResidualReport,
    pub expected: Expectation,
    pub matched: bool,
}

impl Check {
    pub fn new(report: ResidualReport, expected: Expectation) -> Self {
        let matched = report.pass == (expected == Expectation::Pass);
        Self {
            report,
            expected,
            matched,
        }
    }

    pub fn expect_pass(report: ResidualReport) -> Self {
        Self::new(report, Expectation::Pass)
    }

    pub fn expect_fail(report: ResidualReport) -> Self {
        Self::new(report, Expectation::Fail)
    }
}

/// Observed convergence order of one residual over a grid-halving ladder.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderReport {
    pub name: String,
    pub grid_points: Vec<usize>,
    pub errors: Vec<f64>,
    pub observed_order: f64,
    pub min_order: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseKind {
    KCheck,
    NegativeControl,
    VariablePhase,
    ConstantPhase,
    Milne,
    Linear,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseReport {
    pub index: usize,
    pub label: String,
    pub kind: CaseKind,
    pub parameters: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub orders: Vec<OrderReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub pass: bool,
    pub wall_time_s: f64,
}

impl CaseReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.report.name == name)
    }

    pub(crate) fn settle(&mut self) {
        self.pass = self.error.is_none()
            && self.checks.iter().all(|c| c.matched)
            && self.orders.iter().all(|o| o.pass);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub version: String,
    pub config: RunConfig,
    pub cases: Vec<CaseReport>,
    pub verdict: Verdict,
}

impl SuiteReport {
    pub fn new(config: RunConfig, cases: Vec<CaseReport>) -> Self {
        let verdict = if cases.iter().all(|c| c.pass) {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        Self {
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            cases,
            verdict,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Column-major sample table for plotting.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleTable {
    pub columns: Vec<(String, Vec<f64>)>,
}
