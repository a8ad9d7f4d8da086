use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;
use serde_json::Value;
use umflow::suites::SuiteReport;

/// What a verb produced: a result payload, check counts and any
/// certificates to be written next to the report.
#[derive(Default)]
pub struct Outcome {
    pub seed: Option<u64>,
    pub result: Option<Value>,
    pub passed: u64,
    pub failures: Vec<String>,
    pub suites: Vec<SuiteReport>,
    pub certificates: Vec<(String, Value)>,
}

impl Outcome {
    pub fn value(result: impl Serialize) -> anyhow::Result<Self> {
        Ok(Self {
            result: Some(serde_json::to_value(result)?),
            ..Self::default()
        })
    }

    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failures.push(what());
        }
    }

    pub fn certificate(&mut self, name: impl Into<String>, cert: impl Serialize) -> anyhow::Result<()> {
        self.certificates.push((name.into(), serde_json::to_value(cert)?));
        Ok(())
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty() && self.suites.iter().all(SuiteReport::passed)
    }
}

/// The report written as `report.json`. It holds no timings, so the same
/// command gives the same bytes; the duration goes to `timing.json`.
#[derive(Serialize)]
pub struct RunReport {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub checks_passed: u64,
    pub checks_failed: u64,
    pub failures: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub suites: Vec<SuiteReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    /// Paths relative to the output directory.
    pub certificates: Vec<String>,
}

impl RunReport {
    pub fn new(command: String, outcome: &Outcome) -> Self {
        let mut failures = outcome.failures.clone();
        for s in &outcome.suites {
            failures.extend(s.failures.iter().map(|f| format!("{}: {} (reproduce: {})", s.name, f.case, f.repro)));
        }
        let suite_passed: u64 = outcome.suites.iter().map(|s| s.checks - s.failed).sum();
        let suite_failed: u64 = outcome.suites.iter().map(|s| s.failed).sum();
        Self {
            command,
            seed: outcome.seed,
            checks_passed: outcome.passed + suite_passed,
            checks_failed: outcome.failures.len() as u64 + suite_failed,
            failures,
            suites: outcome.suites.clone(),
            result: outcome.result.clone(),
            certificates: outcome.certificates.iter().map(|(name, _)| name.clone()).collect(),
        }
    }
}

fn write_json(path: &Path, value: &impl Serialize) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Writes the report, the certificates and the timing file into `out`.
pub fn write_all(out: &Path, report: &RunReport, outcome: &Outcome, seconds: f64) -> anyhow::Result<PathBuf> {
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    for (name, cert) in &outcome.certificates {
        write_json(&out.join(name), cert)?;
    }
    write_json(&out.join("timing.json"), &serde_json::json!({ "wall_clock_seconds": seconds }))?;
    let path = out.join("report.json");
    write_json(&path, report)?;
    Ok(path)
}
