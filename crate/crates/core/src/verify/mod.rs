//! Verification suites over character tables.
//!
//! Each suite scans a table for configurations satisfying a hypothesis and
//! checks the matching conclusion exactly. Results are reported as a
//! [`Verdict`] per suite and group.

mod catalog;
mod context;
mod products;
mod suites;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

pub use catalog::{
    read_catalog, run_catalog, CatalogEntry, Counts, GroupTiming, Report, ReportConfig, ScanConfig,
    TableCache, Timings,
};
pub use context::GroupContext;
pub use products::ProductTable;
pub use suites::{
    gauss_sum, normal_subgroups, run_suite, suite_conjecture_a, suite_lemma21, suite_lemma22,
    suite_theorem_b, suite_theorem_d, suite_theorem_tt, NormalSubgroups,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("product table: {0}")]
    Products(String),
    #[error("precondition: {0}")]
    Precondition(String),
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SuiteId {
    #[serde(rename = "conjectureA")]
    ConjectureA,
    #[serde(rename = "theoremB")]
    TheoremB,
    #[serde(rename = "theoremD")]
    TheoremD,
    #[serde(rename = "lemma21")]
    Lemma21,
    #[serde(rename = "lemma22")]
    Lemma22,
    #[serde(rename = "theorem_tt")]
    TheoremTt,
}

impl SuiteId {
    pub const ALL: [SuiteId; 6] = [
        SuiteId::ConjectureA,
        SuiteId::TheoremB,
        SuiteId::TheoremD,
        SuiteId::Lemma21,
        SuiteId::Lemma22,
        SuiteId::TheoremTt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteId::ConjectureA => "conjectureA",
            SuiteId::TheoremB => "theoremB",
            SuiteId::TheoremD => "theoremD",
            SuiteId::Lemma21 => "lemma21",
            SuiteId::Lemma22 => "lemma22",
            SuiteId::TheoremTt => "theorem_tt",
        }
    }

    /// Suites that take a group; `lemma22` takes a prime instead.
    pub fn is_group_suite(self) -> bool {
        self != SuiteId::Lemma22
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SuiteId {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SuiteId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| VerifyError::UnknownSuite(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Vacuous,
    Skipped,
    Error,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Vacuous => "vacuous",
            Status::Skipped => "skipped",
            Status::Error => "error",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Severity {
    /// A proven statement failed: the engine is wrong somewhere.
    EngineError,
    /// An open statement failed on a solvable, non-nilpotent group.
    ConjectureCounterexample,
    Info,
}

/// One configuration meeting a suite's hypothesis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub participants: BTreeMap<String, Value>,
    pub hypothesis: BTreeMap<String, Value>,
    pub conclusion: BTreeMap<String, bool>,
    pub holds: bool,
}

impl Instance {
    fn new() -> Self {
        Instance {
            participants: BTreeMap::new(),
            hypothesis: BTreeMap::new(),
            conclusion: BTreeMap::new(),
            holds: true,
        }
    }

    fn participant(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.participants.insert(key.into(), v.into());
        self
    }

    fn hypothesis(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.hypothesis.insert(key.into(), v.into());
        self
    }

    /// Records a conclusion; any false conclusion makes the instance fail.
    fn conclude(mut self, key: &str, ok: bool) -> Self {
        self.conclusion.insert(key.into(), ok);
        self.holds &= ok;
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Details {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub severity: Option<Severity>,
    /// Instances found, including any beyond the recorded ones.
    pub instance_count: usize,
    pub failing_count: usize,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub suite: SuiteId,
    pub spec: String,
    pub status: Status,
    pub instances: Vec<Instance>,
    pub details: Details,
}

impl Verdict {
    pub fn new(suite: SuiteId, spec: impl Into<String>, status: Status) -> Self {
        Verdict {
            suite,
            spec: spec.into(),
            status,
            instances: Vec::new(),
            details: Details::default(),
        }
    }

    pub fn error(suite: SuiteId, spec: impl Into<String>, message: impl Into<String>) -> Self {
        let mut v = Verdict::new(suite, spec, Status::Error);
        v.details.notes.push(message.into());
        v
    }

    pub fn note(mut self, message: impl Into<String>) -> Self {
        self.details.notes.push(message.into());
        self
    }

    /// Recorded instances that fail their conclusion.
    pub fn failing(&self) -> impl Iterator<Item = &Instance> {
        self.instances.iter().filter(|i| !i.holds)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    /// Largest number of irreducible constituents (with multiplicity) in `φ`.
    pub sum_bound: usize,
    /// Stop enumerating normal subgroups past this many.
    pub normal_cap: usize,
    /// Instances kept per verdict; the rest are only counted.
    pub max_recorded: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            sum_bound: 2,
            normal_cap: 512,
            max_recorded: 64,
        }
    }
}

/// Collects instances under the recording cap and settles the status.
struct Tally {
    verdict: Verdict,
    cap: usize,
    failing_recorded: usize,
}

impl Tally {
    fn new(suite: SuiteId, spec: &str, cap: usize) -> Self {
        Tally {
            verdict: Verdict::new(suite, spec, Status::Pass),
            cap,
            failing_recorded: 0,
        }
    }

    /// Failing instances are always kept (up to the cap); passing ones fill
    /// whatever room is left.
    fn push(&mut self, inst: Instance) {
        let d = &mut self.verdict.details;
        d.instance_count += 1;
        if !inst.holds {
            d.failing_count += 1;
            if self.failing_recorded < self.cap {
                self.failing_recorded += 1;
                if self.verdict.instances.len() >= self.cap {
                    if let Some(pos) = self.verdict.instances.iter().rposition(|i| i.holds) {
                        self.verdict.instances.remove(pos);
                    }
                }
                self.verdict.instances.push(inst);
            }
        } else if self.verdict.instances.len() < self.cap {
            self.verdict.instances.push(inst);
        }
    }

    fn note(&mut self, message: impl Into<String>) {
        self.verdict.details.notes.push(message.into());
    }

    /// `fail` if anything failed, `vacuous` if nothing qualified (unless
    /// `empty_is_pass`), otherwise `pass`.
    fn finish(mut self, fail_severity: Severity, empty_is_pass: bool) -> Verdict {
        let d = &mut self.verdict.details;
        self.verdict.status = if d.failing_count > 0 {
            d.severity = Some(fail_severity);
            Status::Fail
        } else if d.instance_count == 0 && !empty_is_pass {
            Status::Vacuous
        } else {
            Status::Pass
        };
        if d.instance_count > self.verdict.instances.len() {
            let kept = self.verdict.instances.len();
            d.notes.push(format!("{kept} of {} instances recorded", d.instance_count));
        }
        self.verdict
    }
}

#[cfg(test)]
mod tests;
