//! Pass/fail records and the suite report that collects them.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    /// `measured ≤ budget + tolerance`.
    #[serde(rename = "<=")]
    AtMost,
    /// `measured ≥ budget − tolerance`.
    #[serde(rename = ">=")]
    AtLeast,
    /// A boolean property; `measured` is 1 when it holds.
    #[serde(rename = "holds")]
    Holds,
}

/// One falsifiable comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub check_id: String,
    pub theorem_anchor: String,
    pub relation: Relation,
    pub measured: f64,
    pub budget: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

impl Check {
    fn new(id: &str, anchor: &str, relation: Relation, measured: f64, budget: f64, tolerance: f64) -> Check {
        let mut c = Check {
            check_id: id.into(),
            theorem_anchor: anchor.into(),
            relation,
            measured,
            budget,
            tolerance,
            pass: false,
            diagnostic: None,
        };
        c.pass = c.evaluate();
        c
    }

    pub fn at_most(id: &str, anchor: &str, measured: f64, budget: f64, tolerance: f64) -> Check {
        Check::new(id, anchor, Relation::AtMost, measured, budget, tolerance)
    }

    pub fn at_least(id: &str, anchor: &str, measured: f64, budget: f64, tolerance: f64) -> Check {
        Check::new(id, anchor, Relation::AtLeast, measured, budget, tolerance)
    }

    pub fn holds(id: &str, anchor: &str, ok: bool) -> Check {
        Check::new(id, anchor, Relation::Holds, if ok { 1.0 } else { 0.0 }, 1.0, 0.0)
    }

    /// A check that could not be evaluated.
    pub fn failed(id: &str, anchor: &str, diagnostic: impl Into<String>) -> Check {
        Check { diagnostic: Some(diagnostic.into()), ..Check::at_most(id, anchor, f64::NAN, 0.0, 0.0) }
    }

    /// Signed distance past the budget; `≤ tolerance` means pass. NaN for
    /// unevaluable checks.
    pub fn margin(&self) -> f64 {
        match self.relation {
            Relation::AtMost => self.measured - self.budget,
            Relation::AtLeast => self.budget - self.measured,
            Relation::Holds => self.budget - self.measured,
        }
    }

    fn evaluate(&self) -> bool {
        self.diagnostic.is_none() && self.margin() <= self.tolerance
    }

    /// Re-judges the check under a new tolerance.
    pub fn with_tolerance(mut self, tolerance: f64) -> Check {
        if self.relation != Relation::Holds {
            self.tolerance = tolerance;
            self.pass = self.evaluate();
        }
        self
    }

    /// Combines two evaluations of the same check into the worst case:
    /// failures dominate, then the larger margin.
    pub fn worst(self, other: Check) -> Check {
        let rank = |c: &Check| (c.pass, if c.margin().is_nan() { f64::INFINITY } else { c.margin() });
        let (sp, sm) = rank(&self);
        let (op, om) = rank(&other);
        let keep_self = match (sp, op) {
            (false, true) => true,
            (true, false) => false,
            _ => sm >= om,
        };
        let pass = sp && op;
        let mut out = if keep_self { self } else { other };
        out.pass = pass;
        out
    }
}

/// Folds checks that share an id into their worst case; output sorted by id.
pub fn aggregate(checks: impl IntoIterator<Item = Check>) -> Vec<Check> {
    let mut map: std::collections::BTreeMap<String, Check> = std::collections::BTreeMap::new();
    for c in checks {
        match map.remove(&c.check_id) {
            Some(prev) => {
                map.insert(c.check_id.clone(), prev.worst(c));
            }
            None => {
                map.insert(c.check_id.clone(), c);
            }
        }
    }
    map.into_values().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub started: String,
    pub finished: String,
    pub checks: Vec<Check>,
    pub summary: Summary,
    /// Free-form measured quantities (frame bounds, constants, grids).
    #[serde(default, skip_serializing_if = "serde_json::Map::is_empty")]
    pub details: serde_json::Map<String, serde_json::Value>,
}

impl Report {
    pub fn new(suite: &str, seed: u64, started: String, checks: Vec<Check>) -> Report {
        let checks = aggregate(checks);
        let summary = Summary { total: checks.len(), passed: checks.iter().filter(|c| c.pass).count() };
        Report { suite: suite.into(), seed, started, finished: now(), checks, summary, details: serde_json::Map::new() }
    }

    pub fn all_pass(&self) -> bool {
        self.summary.passed == self.summary.total
    }

    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.check_id == id)
    }

    pub fn detail(mut self, key: &str, value: impl Serialize) -> Report {
        self.details.insert(key.into(), serde_json::to_value(value).unwrap_or(serde_json::Value::Null));
        self
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// One row per check.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["check_id", "theorem_anchor", "relation", "measured", "budget", "tolerance", "pass"])
            .map_err(csv_err)?;
        for c in &self.checks {
            let relation = match c.relation {
                Relation::AtMost => "<=",
                Relation::AtLeast => ">=",
                Relation::Holds => "holds",
            };
            w.write_record([
                c.check_id.as_str(),
                c.theorem_anchor.as_str(),
                relation,
                &format!("{:e}", c.measured),
                &format!("{:e}", c.budget),
                &format!("{:e}", c.tolerance),
                if c.pass { "true" } else { "false" },
            ])
            .map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }
}

fn csv_err(e: csv::Error) -> crate::error::Error {
    crate::error::Error::Io(std::io::Error::other(e))
}

/// RFC 3339 UTC timestamp.
pub fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comparisons_and_nan() {
        assert!(Check::at_most("a", "", 1.0, 1.0, 0.0).pass);
        assert!(!Check::at_most("a", "", 1.1, 1.0, 0.05).pass);
        assert!(!Check::at_most("a", "", f64::NAN, 1.0, 1.0).pass);
        assert!(Check::at_least("a", "", 0.95, 1.0, 0.1).pass);
        assert!(!Check::at_least("a", "", 0.85, 1.0, 0.1).pass);
        assert!(!Check::holds("a", "", false).pass);
        assert!(!Check::failed("a", "", "boom").pass);
    }

    #[test]
    fn worst_keeps_failures_and_largest_margin() {
        let ok_small = Check::at_most("a", "", 0.1, 1.0, 0.0);
        let ok_big = Check::at_most("a", "", 0.9, 1.0, 0.0);
        let bad = Check::at_most("a", "", 2.0, 1.0, 0.0);
        assert_eq!(ok_small.clone().worst(ok_big.clone()).measured, 0.9);
        let w = ok_big.worst(bad).worst(ok_small);
        assert!(!w.pass);
        assert_eq!(w.measured, 2.0);

        let lo = Check::at_least("b", "", 5.0, 1.0, 0.0);
        let tight = Check::at_least("b", "", 1.5, 1.0, 0.0);
        assert_eq!(lo.worst(tight).measured, 1.5);
    }

    #[test]
    fn tolerance_override_rejudges() {
        let c = Check::at_most("a", "", 1e-9, 0.0, 1e-12);
        assert!(!c.pass);
        assert!(c.with_tolerance(1e-8).pass);
        let f = Check::failed("a", "", "x").with_tolerance(1e9);
        assert!(!f.pass);
    }

    #[test]
    fn report_summary_and_sorting() {
        let r = Report::new(
            "s",
            1,
            now(),
            vec![
                Check::at_most("z", "", 0.0, 1.0, 0.0),
                Check::at_most("a", "", 2.0, 1.0, 0.0),
                Check::at_most("a", "", 0.5, 1.0, 0.0),
            ],
        );
        assert_eq!(r.summary, Summary { total: 2, passed: 1 });
        assert_eq!(r.checks[0].check_id, "a");
        assert!(!r.all_pass());
        let csv = r.to_csv().unwrap();
        assert!(csv.starts_with("check_id,theorem_anchor,relation,measured,budget,tolerance,pass\n"));
        assert_eq!(csv.lines().count(), 3);
    }

    #[test]
    fn report_json_fields() {
        let r = Report::new("s", 3, now(), vec![Check::at_most("a", "x ≤ y", 0.0, 1.0, 0.0)]).detail("k", 2.5);
        let v: serde_json::Value = serde_json::from_str(&r.to_json().unwrap()).unwrap();
        for key in ["suite", "seed", "started", "finished", "checks", "summary"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["checks"][0]["relation"], "<=");
        assert_eq!(v["details"]["k"], 2.5);
        let back: Report = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }
}
