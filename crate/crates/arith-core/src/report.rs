//! Machine-readable verification reports shared by every module.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Verified,
    Failed,
    Inconclusive,
}

impl Status {
    /// Verified only if every part is; any failure dominates inconclusive.
    pub fn combine(self, o: Status) -> Status {
        match (self, o) {
            (Status::Failed, _) | (_, Status::Failed) => Status::Failed,
            (Status::Inconclusive, _) | (_, Status::Inconclusive) => Status::Inconclusive,
            _ => Status::Verified,
        }
    }

    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Verified
        } else {
            Status::Failed
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Verified => "verified",
            Status::Failed => "failed",
            Status::Inconclusive => "inconclusive",
        }
    }
}

/// A named point of interest: a tightest comparison, a counterexample, an extremum.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Witness(pub BTreeMap<String, Value>);

impl Witness {
    pub fn new(label: &str) -> Witness {
        let mut m = BTreeMap::new();
        m.insert("label".to_string(), Value::from(label));
        Witness(m)
    }

    pub fn with(mut self, key: &str, v: impl Into<Value>) -> Witness {
        self.0.insert(key.to_string(), v.into());
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.0.get(key)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub task: String,
    pub parameters: BTreeMap<String, Value>,
    pub status: Status,
    pub witnesses: Vec<Witness>,
    pub mode_flags: Vec<String>,
    pub notes: Vec<String>,
    pub runtime_seconds: f64,
    pub subreports: Vec<VerificationReport>,
}

impl VerificationReport {
    pub fn new(task: &str) -> VerificationReport {
        VerificationReport {
            task: task.to_string(),
            parameters: BTreeMap::new(),
            status: Status::Verified,
            witnesses: Vec::new(),
            mode_flags: Vec::new(),
            notes: Vec::new(),
            runtime_seconds: 0.0,
            subreports: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_string(), v.into());
        self
    }

    pub fn set_param(&mut self, key: &str, v: impl Into<Value>) {
        self.parameters.insert(key.to_string(), v.into());
    }

    pub fn flag(&mut self, f: &str) {
        if !self.mode_flags.iter().any(|x| x == f) {
            self.mode_flags.push(f.to_string());
        }
    }

    pub fn note(&mut self, n: impl Into<String>) {
        self.notes.push(n.into());
    }

    pub fn witness(&mut self, w: Witness) {
        self.witnesses.push(w);
    }

    /// Folds a sub-status into this report's status.
    pub fn require(&mut self, s: Status) {
        self.status = self.status.combine(s);
    }

    pub fn fail(&mut self, w: Witness) {
        self.status = self.status.combine(Status::Failed);
        self.witnesses.push(w);
    }

    pub fn push_sub(&mut self, sub: VerificationReport) {
        self.status = self.status.combine(sub.status);
        self.subreports.push(sub);
    }

    pub fn is_verified(&self) -> bool {
        self.status == Status::Verified
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.runtime_seconds = start.elapsed().as_secs_f64();
        self
    }

    /// Depth-first search for a subreport by task name.
    pub fn find(&self, task: &str) -> Option<&VerificationReport> {
        if self.task == task {
            return Some(self);
        }
        self.subreports.iter().find_map(|s| s.find(task))
    }

    /// Copy with every runtime zeroed, for byte-for-byte comparisons.
    pub fn without_runtimes(&self) -> VerificationReport {
        let mut r = self.clone();
        r.runtime_seconds = 0.0;
        r.subreports = r.subreports.iter().map(|s| s.without_runtimes()).collect();
        r
    }
}
