//! The report document every command emits.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::RunConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub payload: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl Check {
    /// Pass unless `failure` holds the first counterexample.
    pub fn verdict(name: impl Into<String>, payload: Value, failure: Option<String>) -> Check {
        let status = if failure.is_some() { Status::Fail } else { Status::Pass };
        Check { name: name.into(), status, payload, counterexample: failure }
    }

    pub fn skipped(name: impl Into<String>, reason: &str) -> Check {
        Check {
            name: name.into(),
            status: Status::Skipped,
            payload: Value::String(reason.to_string()),
            counterexample: None,
        }
    }

    pub fn error(name: impl Into<String>, err: impl std::fmt::Display) -> Check {
        Check { name: name.into(), status: Status::Fail, payload: Value::Null, counterexample: Some(err.to_string()) }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConfigEcho {
    pub p: u64,
    pub precision: u32,
    pub witt_length: usize,
    pub degree_bound: i64,
    pub truncation: u32,
}

impl From<&RunConfig> for ConfigEcho {
    fn from(c: &RunConfig) -> Self {
        ConfigEcho {
            p: c.p,
            precision: c.precision,
            witt_length: c.witt_length,
            degree_bound: c.degree_bound,
            truncation: c.truncation,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportDocument {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: ConfigEcho,
    pub checks: Vec<Check>,
}

impl ReportDocument {
    pub fn new(command: &str, config: &RunConfig, checks: Vec<Check>) -> Self {
        ReportDocument {
            tool: "pdcalc".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            config: config.into(),
            checks,
        }
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| c.status == Status::Fail)
    }

    pub fn exit_code(&self) -> i32 {
        i32::from(self.first_failure().is_some())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.tool, self.version, self.command);
        let c = &self.config;
        s += &format!(
            "p={} N={} L={} D={} K={}\n",
            c.p, c.precision, c.witt_length, c.degree_bound, c.truncation
        );
        for check in &self.checks {
            let tag = match check.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Skipped => "skip",
            };
            s += &format!("{tag:4}  {}\n", check.name);
            if !check.payload.is_null() {
                s += &format!("      {}\n", check.payload);
            }
            if let Some(cx) = &check.counterexample {
                s += &format!("      counterexample: {cx}\n");
            }
        }
        s
    }
}
