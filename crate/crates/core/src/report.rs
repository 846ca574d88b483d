//! Verdict records shared by every verification routine.

use std::time::Instant;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        }
    }
}

/// One identity or property that was checked. A witness is present exactly
/// when the check did not pass.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub description: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

impl Check {
    pub fn pass(id: impl Into<String>, description: impl Into<String>) -> Self {
        Check { id: id.into(), description: description.into(), status: Status::Pass, witness: None, millis: None }
    }

    pub fn fail(id: impl Into<String>, description: impl Into<String>, witness: impl Into<String>) -> Self {
        Check {
            id: id.into(),
            description: description.into(),
            status: Status::Fail,
            witness: Some(witness.into()),
            millis: None,
        }
    }

    pub fn error(id: impl Into<String>, description: impl Into<String>, witness: impl Into<String>) -> Self {
        Check { status: Status::Error, ..Check::fail(id, description, witness) }
    }

    /// Pass when `witness` is `None`, fail otherwise.
    pub fn from_witness(id: impl Into<String>, description: impl Into<String>, witness: Option<String>) -> Self {
        match witness {
            None => Check::pass(id, description),
            Some(w) => Check::fail(id, description, w),
        }
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.millis = Some(start.elapsed().as_millis() as u64);
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub status: Status,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    /// Sorts the checks by id and derives the overall status.
    pub fn from_checks(suite: impl Into<String>, mut checks: Vec<Check>) -> Self {
        checks.sort_by(|a, b| a.id.cmp(&b.id));
        let status = if checks.iter().all(Check::passed) {
            Status::Pass
        } else if checks.iter().any(|c| c.status == Status::Fail) {
            Status::Fail
        } else {
            Status::Error
        };
        SuiteReport { suite: suite.into(), status, checks }
    }

    pub fn merge(suite: impl Into<String>, reports: impl IntoIterator<Item = SuiteReport>) -> Self {
        Self::from_checks(suite, reports.into_iter().flat_map(|r| r.checks).collect())
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> + '_ {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn without_timings(mut self) -> Self {
        for c in &mut self.checks {
            c.millis = None;
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_rules() {
        let r = SuiteReport::from_checks("s", vec![Check::pass("b", ""), Check::pass("a", "")]);
        assert!(r.passed());
        assert_eq!(r.checks[0].id, "a");
        let r = SuiteReport::from_checks("s", vec![Check::pass("a", ""), Check::fail("b", "", "x")]);
        assert_eq!(r.status, Status::Fail);
        let r = SuiteReport::from_checks("s", vec![Check::error("a", "", "boom")]);
        assert_eq!(r.status, Status::Error);
        assert!(Check::fail("a", "", "w").witness.is_some());
        assert!(Check::pass("a", "").witness.is_none());
    }
}
