//! Verdicts and check reports shared by the verifiers.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Outcome of a single finite-prefix property check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Holds,
    ViolatedAt(u64),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub stage: u64,
    pub detail: String,
}

/// One named check: how many instances were examined and the first that failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub examined: u64,
    pub failures: u64,
    pub first_failure: Option<Failure>,
}

impl Check {
    pub fn new(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            examined: 0,
            failures: 0,
            first_failure: None,
        }
    }

    /// Record one instance. `detail` is only evaluated on failure.
    pub fn record(&mut self, stage: u64, ok: bool, detail: impl FnOnce() -> String) {
        self.examined += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(Failure {
                    stage,
                    detail: detail(),
                });
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn verdict(&self) -> Verdict {
        match &self.first_failure {
            None => Verdict::Holds,
            Some(f) => Verdict::ViolatedAt(f.stage),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.first_failure {
            None => write!(f, "PASS {} ({} checked)", self.name, self.examined),
            Some(fail) => write!(
                f,
                "FAIL {} ({} of {} failed; first at stage {}: {})",
                self.name, self.failures, self.examined, fail.stage, fail.detail
            ),
        }
    }
}

/// A suite of checks over one trace.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn merge(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    /// Fold `other` in, combining checks that share a name.
    pub fn absorb(&mut self, other: Report) {
        for c in other.checks {
            match self.checks.iter_mut().find(|x| x.name == c.name) {
                Some(x) => {
                    x.examined += c.examined;
                    x.failures += c.failures;
                    if x.first_failure.is_none() {
                        x.first_failure = c.first_failure;
                    }
                }
                None => self.checks.push(c),
            }
        }
    }
}

/// Accumulates named checks in a fixed display order.
#[derive(Debug, Clone, Default)]
pub struct Suite {
    checks: Vec<Check>,
}

impl Suite {
    pub fn new(names: &[&str]) -> Self {
        Suite {
            checks: names.iter().map(|n| Check::new(*n)).collect(),
        }
    }

    pub fn record(&mut self, name: &str, stage: u64, ok: bool, detail: impl FnOnce() -> String) {
        match self.checks.iter_mut().find(|c| c.name == name) {
            Some(c) => c.record(stage, ok, detail),
            None => {
                let mut c = Check::new(name);
                c.record(stage, ok, detail);
                self.checks.push(c);
            }
        }
    }

    pub fn into_report(self) -> Report {
        Report { checks: self.checks }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}
