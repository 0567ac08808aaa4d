//! Verification reports: per-check records with expected/actual
//! payloads, serialized deterministically (stable field order, sorted
//! object keys). Runtime fields are informational and excluded from
//! byte-for-byte comparisons by consumers.

use serde::Serialize;
use serde_json::Value;
use std::fmt;

#[derive(Serialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Info,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Info => "info",
        };
        f.write_str(text)
    }
}

#[derive(Serialize, Clone, Debug, PartialEq, Eq)]
pub struct CheckRecord {
    pub check_id: String,
    pub status: CheckStatus,
    pub expected: Value,
    pub actual: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub runtime_ms: u64,
}

impl CheckRecord {
    pub fn new(check_id: impl Into<String>, passed: bool, expected: Value, actual: Value) -> Self {
        CheckRecord {
            check_id: check_id.into(),
            status: if passed { CheckStatus::Pass } else { CheckStatus::Fail },
            expected,
            actual,
            note: None,
            runtime_ms: 0,
        }
    }

    pub fn info(check_id: impl Into<String>, actual: Value) -> Self {
        CheckRecord {
            check_id: check_id.into(),
            status: CheckStatus::Info,
            expected: Value::Null,
            actual,
            note: None,
            runtime_ms: 0,
        }
    }

    pub fn with_note(mut self, note: Option<String>) -> Self {
        self.note = note;
        self
    }
}

#[derive(Serialize, Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub schema: String,
    pub dataset: String,
    pub overall: CheckStatus,
    pub checks: Vec<CheckRecord>,
}

impl VerificationReport {
    /// Overall status is the conjunction of the non-info checks.
    pub fn new(dataset: impl Into<String>, checks: Vec<CheckRecord>) -> Self {
        let overall = if checks
            .iter()
            .filter(|c| c.status != CheckStatus::Info)
            .all(|c| c.status == CheckStatus::Pass)
        {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        VerificationReport {
            schema: "1".into(),
            dataset: dataset.into(),
            overall,
            checks,
        }
    }

    pub fn passed(&self) -> bool {
        self.overall == CheckStatus::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("dataset: {}\n", self.dataset));
        for check in &self.checks {
            let line = match check.status {
                CheckStatus::Info => format!(
                    "INFO {}: {}\n",
                    check.check_id,
                    compact(&check.actual)
                ),
                _ => format!(
                    "{} {}: expected {}, actual {}\n",
                    check.status.to_string().to_uppercase(),
                    check.check_id,
                    compact(&check.expected),
                    compact(&check.actual)
                ),
            };
            out.push_str(&line);
            if let Some(note) = &check.note {
                out.push_str(&format!("     note: {note}\n"));
            }
        }
        out.push_str(&format!("overall: {}\n", self.overall));
        out
    }
}

/// Single-line rendering, shortened for large payloads.
fn compact(value: &Value) -> String {
    let text = value.to_string();
    if text.len() > 160 {
        let mut cut = 157;
        while !text.is_char_boundary(cut) {
            cut -= 1;
        }
        format!("{}… ({} bytes)", &text[..cut], text.len())
    } else {
        text
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn overall_is_the_conjunction_of_non_info_checks() {
        let pass = CheckRecord::new("a", true, json!(1), json!(1));
        let fail = CheckRecord::new("b", false, json!(1), json!(2));
        let info = CheckRecord::info("c", json!("detail"));
        assert!(VerificationReport::new("d", vec![pass.clone(), info.clone()]).passed());
        assert!(!VerificationReport::new("d", vec![pass.clone(), fail]).passed());
        // info alone never fails a report
        assert!(VerificationReport::new("d", vec![info]).passed());
        assert!(VerificationReport::new("d", vec![]).passed());
    }

    #[test]
    fn json_is_deterministic_and_versioned() {
        let make = || {
            VerificationReport::new(
                "appendix_a",
                vec![CheckRecord::new("x", true, json!({"b": 1, "a": 2}), json!([1, 2]))],
            )
        };
        let one = make().to_json();
        let two = make().to_json();
        assert_eq!(one, two);
        assert!(one.contains("\"schema\": \"1\""));
        // object keys are sorted by the serializer
        assert!(one.find("\"a\": 2").unwrap() < one.find("\"b\": 1").unwrap());
    }

    #[test]
    fn text_rendering_mentions_status_and_note() {
        let record = CheckRecord::new("counts", false, json!(11), json!(12))
            .with_note(Some("surplus reported".into()));
        let report = VerificationReport::new("x", vec![record]);
        let text = report.to_text();
        assert!(text.contains("FAIL counts: expected 11, actual 12"));
        assert!(text.contains("note: surplus reported"));
        assert!(text.contains("overall: fail"));
    }
}
