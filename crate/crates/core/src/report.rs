//! Machine-readable verification reports.
//!
//! Reports are deterministic byte for byte given identical parameters and
//! library version: fields serialize in a fixed order, maps are sorted, and
//! wall-clock timings are emitted only on request (so default reports from
//! repeated runs compare equal).

use std::collections::BTreeMap;

use serde::Serialize;

use crate::drinfeld::CheckOutcome;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

impl From<&CheckOutcome> for Check {
    fn from(oc: &CheckOutcome) -> Self {
        let detail = match &oc.counterexample {
            Some(w) => format!("counterexample: {w}"),
            None => format!("{} instances checked", oc.checked),
        };
        Check {
            name: oc.name.clone(),
            pass: oc.pass,
            detail,
            elapsed_ms: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub params: BTreeMap<String, serde_json::Value>,
    pub checks: Vec<Check>,
    pub witnesses: BTreeMap<String, serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
    pub version: String,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.into(),
            params: BTreeMap::new(),
            checks: Vec::new(),
            witnesses: BTreeMap::new(),
            elapsed_ms: None,
            version: env!("CARGO_PKG_VERSION").into(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<serde_json::Value>) -> &mut Self {
        self.params.insert(key.into(), value.into());
        self
    }

    pub fn check(&mut self, name: &str, pass: bool, detail: String) -> &mut Self {
        self.checks.push(Check {
            name: name.into(),
            pass,
            detail,
            elapsed_ms: None,
        });
        self
    }

    pub fn witness(&mut self, key: &str, value: serde_json::Value) -> &mut Self {
        self.witnesses.insert(key.into(), value);
        self
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        for (k, v) in &self.params {
            out.push_str(&format!("  {k} = {v}\n"));
        }
        for c in &self.checks {
            let status = if c.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!("[{status}] {}: {}\n", c.name, c.detail));
            if let Some(ms) = c.elapsed_ms {
                out.push_str(&format!("       ({ms} ms)\n"));
            }
        }
        for (k, v) in &self.witnesses {
            out.push_str(&format!("witness {k}:\n"));
            match serde_json::to_string_pretty(v) {
                Ok(s) => {
                    for line in s.lines() {
                        out.push_str(&format!("  {line}\n"));
                    }
                }
                Err(_) => out.push_str("  <unprintable>\n"),
            }
        }
        if let Some(ms) = self.elapsed_ms {
            out.push_str(&format!("elapsed: {ms} ms\n"));
        }
        out.push_str(&format!(
            "result: {}\n",
            if self.all_pass() {
                "all checks passed"
            } else {
                "CHECKS FAILED"
            }
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_are_deterministic() {
        let build = || {
            let mut r = Report::new("demo");
            r.param("algebra", "borel").param("cutoff", 3);
            r.check("a", true, "1 instance checked".into());
            r.witness("w", serde_json::json!({"k": "v"}));
            r.to_json()
        };
        assert_eq!(build(), build());
        assert!(!build().contains("elapsed_ms"));
    }

    #[test]
    fn failing_check_is_visible() {
        let mut r = Report::new("demo");
        r.check("bad", false, "counterexample: x".into());
        assert!(!r.all_pass());
        assert!(r.to_text().contains("[FAIL] bad"));
    }
}
