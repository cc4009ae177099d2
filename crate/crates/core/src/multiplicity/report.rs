use std::fmt::Write as _;

use serde::Serialize;

use super::Suite;
use crate::coxeter::Element;
use crate::laurent::LaurentPoly;

/// One checked pair. `status` is `ok`, or `FAIL: <other>` with the value the
/// polynomial was compared against.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportRow {
    pub z: String,
    pub x: String,
    pub polynomial: String,
    pub suite: String,
    pub status: String,
    #[serde(skip)]
    z_pretty: String,
    #[serde(skip)]
    x_pretty: String,
}

impl ReportRow {
    pub(super) fn new(z: &Element, x: &Element, poly: &LaurentPoly, suite: Suite, fail: Option<&LaurentPoly>) -> Self {
        Self {
            z: z.to_word_string(),
            x: x.to_word_string(),
            polynomial: poly.to_string(),
            suite: suite.name().to_string(),
            status: match fail {
                None => "ok".into(),
                Some(other) => format!("FAIL: {other}"),
            },
            z_pretty: z.pretty(),
            x_pretty: x.pretty(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == "ok"
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub pairs_checked: usize,
    pub strict_pairs: usize,
    pub counterexamples: usize,
    pub notes: Vec<String>,
    pub rows: Vec<ReportRow>,
}

impl SuiteReport {
    pub(super) fn new(suite: Suite, pairs: usize, strict: usize, rows: Vec<ReportRow>, notes: Vec<String>) -> Self {
        let counterexamples = rows.iter().filter(|r| !r.passed()).count();
        Self { suite: suite.name().into(), pairs_checked: pairs, strict_pairs: strict, counterexamples, notes, rows }
    }

    pub fn passed(&self) -> bool {
        self.counterexamples == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(|r| !r.passed())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub cartan: String,
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }

    /// Columns `z, x, polynomial, suite, status`, one row per suite and pair.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in self.suites.iter().flat_map(|s| &s.rows) {
            w.serialize(row).expect("in-memory csv write");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv flush")).expect("utf-8 csv")
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Summary per suite plus every counterexample.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.suites {
            let verdict = if s.passed() { "pass" } else { "FAIL" };
            let _ = writeln!(
                out,
                "{} {}: {}, {} comparable pairs checked ({} with z < x), {} counterexamples",
                self.cartan, s.suite, verdict, s.pairs_checked, s.strict_pairs, s.counterexamples
            );
            for note in &s.notes {
                let _ = writeln!(out, "  note: {note}");
            }
            for r in s.failures() {
                let _ = writeln!(out, "  z={} x={}: {} vs {}", r.z_pretty, r.x_pretty, r.polynomial, &r.status[6..]);
            }
        }
        out
    }
}
