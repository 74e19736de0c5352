use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use super::config::RunConfig;
use crate::error::Result;

/// One pass/fail property: `lo <= value <= hi`, open ends omitted.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub value: f64,
    pub lo: Option<f64>,
    pub hi: Option<f64>,
}

impl Check {
    pub fn within(name: impl Into<String>, value: f64, lo: Option<f64>, hi: Option<f64>) -> Self {
        let pass = value.is_finite() && lo.is_none_or(|l| value >= l) && hi.is_none_or(|h| value <= h);
        Self {
            name: name.into(),
            pass,
            value,
            lo,
            hi,
        }
    }

    pub fn at_most(name: impl Into<String>, value: f64, hi: f64) -> Self {
        Self::within(name, value, None, Some(hi))
    }

    pub fn at_least(name: impl Into<String>, value: f64, lo: f64) -> Self {
        Self::within(name, value, Some(lo), None)
    }

    pub fn flag(name: impl Into<String>, ok: bool) -> Self {
        Self::within(name, if ok { 1.0 } else { 0.0 }, Some(1.0), None)
    }
}

/// Result of one subcommand.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub command: &'static str,
    pub checks: Vec<Check>,
    pub details: Value,
}

impl Outcome {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&str> {
        self.checks.iter().find(|c| !c.pass).map(|c| c.name.as_str())
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self, cfg: &RunConfig) -> Value {
        json!({
            "command": self.command,
            "pass": self.pass(),
            "first_failure": self.first_failure(),
            "checks": self.checks,
            "config": config_json(cfg),
            "details": self.details,
        })
    }

    /// One line per check plus a verdict.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let range = match (c.lo, c.hi) {
                (Some(l), Some(h)) => format!("in [{l}, {h}]"),
                (Some(l), None) => format!(">= {l}"),
                (None, Some(h)) => format!("<= {h}"),
                (None, None) => String::new(),
            };
            s.push_str(&format!(
                "{} {:<40} {:>12.4e} {range}\n",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.value
            ));
        }
        match self.first_failure() {
            None => s.push_str(&format!("{}: all {} checks passed\n", self.command, self.checks.len())),
            Some(f) => s.push_str(&format!("{}: FAILED, first failing check `{f}`\n", self.command)),
        }
        s
    }
}

/// The resolved configuration, including the effective `dt`.
pub fn config_json(cfg: &RunConfig) -> Value {
    let mut v = serde_json::to_value(cfg).expect("config serializes");
    v["dt"] = json!(cfg.dt());
    v
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn write_json(path: &Path, v: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(v).expect("json value serializes");
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_ranges() {
        assert!(Check::at_most("a", 1e-11, 1e-10).pass);
        assert!(!Check::at_most("a", f64::NAN, 1e-10).pass);
        assert!(Check::within("o", 2.1, Some(1.8), Some(2.2)).pass);
        assert!(!Check::at_least("g", 9.0, 10.0).pass);
        assert!(Check::flag("f", true).pass && !Check::flag("f", false).pass);
    }

    #[test]
    fn json_keys_sorted() {
        let o = Outcome {
            command: "x",
            checks: vec![Check::flag("z", true), Check::flag("y", false)],
            details: json!({"b": 1, "a": 2}),
        };
        assert_eq!(o.first_failure(), Some("y"));
        let text = serde_json::to_string(&o.to_json(&RunConfig::default())).unwrap();
        let checks = text.find("\"checks\"").unwrap();
        let command = text.find("\"command\"").unwrap();
        assert!(checks < command);
        assert!(text.contains("\"dt\":0.0078125"));
    }
}
