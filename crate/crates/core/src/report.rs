//! Check records and the JSON report.

use serde::Serialize;

use crate::multivec::Verdict;

pub const SCHEMA: &str = "weilkit-report/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub input: String,
    pub residual: String,
}

/// One check. Field order is the serialization order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub algebra: String,
    pub degree: u32,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl CheckRecord {
    pub fn new(id: &str, algebra: &str, degree: u32, verdict: &Verdict) -> Self {
        let (status, counterexample) = match verdict {
            Verdict::Pass => ("PASS", None),
            Verdict::Fail { input, residual } => {
                ("FAIL", Some(Counterexample { input: input.clone(), residual: residual.clone() }))
            }
        };
        CheckRecord {
            id: id.into(),
            algebra: algebra.into(),
            degree,
            status,
            value: None,
            counterexample,
            timing_ms: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == "PASS"
    }

    pub fn with_value(mut self, value: Option<String>) -> Self {
        self.value = value;
        self
    }

    /// One line of text output.
    pub fn line(&self) -> String {
        let mut s = format!("{} {} [{} deg {}]", self.status, self.id, self.algebra, self.degree);
        if let Some(v) = &self.value {
            s.push_str(&format!(" = {v}"));
        }
        if let Some(c) = &self.counterexample {
            s.push_str(&format!(" on {}: residual {}", c.input, c.residual));
        }
        if let Some(t) = self.timing_ms {
            s.push_str(&format!(" ({t} ms)"));
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub version: &'static str,
    pub algebra: String,
    pub command: String,
    pub degree: u32,
    pub checks: Vec<CheckRecord>,
}

impl Report {
    pub fn new(algebra: &str, command: &str, degree: u32) -> Self {
        Report {
            schema: SCHEMA,
            version: env!("CARGO_PKG_VERSION"),
            algebra: algebra.into(),
            command: command.into(),
            degree,
            checks: Vec::new(),
        }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(CheckRecord::passed)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        self.checks.iter().map(|c| c.line() + "\n").collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_order_and_skips() {
        let mut r = Report::new("su2", "verify core", 6);
        r.checks.push(CheckRecord::new("a", "su2", 6, &Verdict::Pass));
        r.checks.push(CheckRecord::new("b", "su2", 6, &Verdict::fail("x1", "1/2")).with_value(Some("3".into())));
        let json = r.to_json();
        let pos = |k: &str| json.find(k).unwrap();
        assert!(pos("\"schema\"") < pos("\"version\"") && pos("\"version\"") < pos("\"checks\""));
        assert!(json.contains("\"schema\": \"weilkit-report/1\""));
        assert!(!json.contains("timing_ms"));
        assert_eq!(json.matches("counterexample").count(), 1);
        assert!(!r.all_pass());
        assert_eq!(r.checks[1].line(), "FAIL b [su2 deg 6] = 3 on x1: residual 1/2");
    }
}
