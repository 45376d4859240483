//! Verification reports shared by every checking routine.
//!
//! Reports merge associatively (per-check counters add, the left-most
//! counterexample wins), so sweeps can be split across workers and folded
//! back in any grouping.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    #[serde(rename = "identity-id")]
    pub id: String,
    pub tested: u64,
    pub skipped: u64,
    pub failed: u64,
    #[serde(rename = "first-counterexample", default, skip_serializing_if = "Option::is_none")]
    pub first_counterexample: Option<String>,
}

impl Check {
    pub fn new(id: impl Into<String>) -> Self {
        Check { id: id.into(), ..Default::default() }
    }

    pub fn pass(&mut self) {
        self.tested += 1;
    }

    pub fn skip(&mut self) {
        self.skipped += 1;
    }

    pub fn fail(&mut self, detail: impl FnOnce() -> String) {
        self.tested += 1;
        self.failed += 1;
        if self.first_counterexample.is_none() {
            self.first_counterexample = Some(detail());
        }
    }

    /// Records a pass or a failure depending on `ok`.
    pub fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        if ok {
            self.pass()
        } else {
            self.fail(detail)
        }
    }

    fn absorb(&mut self, other: &Check) {
        self.tested += other.tested;
        self.skipped += other.skipped;
        self.failed += other.failed;
        if self.first_counterexample.is_none() {
            self.first_counterexample.clone_from(&other.first_counterexample);
        }
    }
}

/// A documented disagreement (or sharpening) between a published closed
/// form and the factorization oracle. Findings never count as failures.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub id: String,
    pub statement: String,
    pub agreeing: u64,
    pub disagreeing: u64,
    #[serde(rename = "minimal-counterexample", default, skip_serializing_if = "Option::is_none")]
    pub minimal_counterexample: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub subject: String,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub findings: Vec<Finding>,
}

impl VerificationReport {
    pub fn new(subject: impl Into<String>) -> Self {
        VerificationReport { subject: subject.into(), ..Default::default() }
    }

    pub fn check_mut(&mut self, id: &str) -> &mut Check {
        let pos = match self.checks.iter().position(|c| c.id == id) {
            Some(p) => p,
            None => {
                self.checks.push(Check::new(id));
                self.checks.len() - 1
            }
        };
        &mut self.checks[pos]
    }

    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn merge(mut self, other: VerificationReport) -> VerificationReport {
        for c in &other.checks {
            self.check_mut(&c.id).absorb(c);
        }
        for f in other.findings {
            match self.findings.iter_mut().find(|g| g.id == f.id) {
                Some(g) => {
                    g.agreeing += f.agreeing;
                    g.disagreeing += f.disagreeing;
                    if g.minimal_counterexample.is_none() {
                        g.minimal_counterexample = f.minimal_counterexample;
                    }
                }
                None => self.findings.push(f),
            }
        }
        self
    }

    /// Merges `other` with every check id prefixed by `prefix/`.
    pub fn absorb_prefixed(self, prefix: &str, mut other: VerificationReport) -> VerificationReport {
        for c in &mut other.checks {
            c.id = format!("{prefix}/{}", c.id);
        }
        for f in &mut other.findings {
            f.id = format!("{prefix}/{}", f.id);
        }
        other.subject = self.subject.clone();
        self.merge(other)
    }

    pub fn failures(&self) -> u64 {
        self.checks.iter().map(|c| c.failed).sum()
    }

    pub fn tested(&self) -> u64 {
        self.checks.iter().map(|c| c.tested).sum()
    }

    pub fn skipped(&self) -> u64 {
        self.checks.iter().map(|c| c.skipped).sum()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.subject)?;
        for c in &self.checks {
            write!(f, "  {:<40} tested {:>8}  skipped {:>8}  failed {:>4}", c.id, c.tested, c.skipped, c.failed)?;
            if let Some(cx) = &c.first_counterexample {
                write!(f, "  first counterexample: {cx}")?;
            }
            writeln!(f)?;
        }
        for x in &self.findings {
            writeln!(f, "  finding {}: {} (agree {}, disagree {})", x.id, x.statement, x.agreeing, x.disagreeing)?;
            if let Some(cx) = &x.minimal_counterexample {
                writeln!(f, "    minimal counterexample: {cx}")?;
            }
        }
        Ok(())
    }
}
