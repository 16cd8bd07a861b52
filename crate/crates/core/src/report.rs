//! Machine-readable command reports.

use serde::Serialize;
use serde_json::Value;

use crate::field::C;
use crate::rational::{fmt_q, Q};
use crate::ring::OrbRing;
use crate::series::{grading, ScalarSeries};

pub const SCHEMA: &str = "toricmirror-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub status: Status,
    pub measured: String,
    pub expected: String,
    pub tolerance: String,
    /// `exact`, `oracle` or `numeric`.
    pub kind: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: String,
    pub command: String,
    pub scenario: String,
    pub checks: Vec<CheckRecord>,
    pub data: Value,
    pub timing_ms: u128,
}

impl Report {
    pub fn new(command: &str, scenario: &str) -> Self {
        Report {
            schema: SCHEMA.into(),
            command: command.into(),
            scenario: scenario.into(),
            checks: Vec::new(),
            data: Value::Null,
            timing_ms: 0,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    /// Exact comparison.
    pub fn exact(&mut self, id: impl Into<String>, measured: impl ToString, expected: impl ToString) -> bool {
        let (m, e) = (measured.to_string(), expected.to_string());
        let ok = m == e;
        self.push(id.into(), ok, m, e, "0".into(), "exact");
        ok
    }

    /// Exact comparison against an independently computed value.
    pub fn oracle(&mut self, id: impl Into<String>, measured: impl ToString, expected: impl ToString) -> bool {
        let (m, e) = (measured.to_string(), expected.to_string());
        let ok = m == e;
        self.push(id.into(), ok, m, e, "0".into(), "oracle");
        ok
    }

    /// `|measured| ≤ tol` for a residual.
    pub fn residual(&mut self, id: impl Into<String>, measured: f64, tol: f64) -> bool {
        let ok = measured.is_finite() && measured <= tol;
        self.push(id.into(), ok, format!("{measured:.3e}"), "0".into(), format!("{tol:e}"), "numeric");
        ok
    }

    /// `|measured - expected| ≤ tol · |expected|`.
    pub fn relative(&mut self, id: impl Into<String>, measured: C, expected: C, tol: f64) -> bool {
        let err = (measured - expected).norm() / expected.norm().max(f64::MIN_POSITIVE);
        let ok = err <= tol;
        self.push(id.into(), ok, fmt_c(measured), fmt_c(expected), format!("{tol:e} relative"), "numeric");
        ok
    }

    fn push(&mut self, id: String, ok: bool, measured: String, expected: String, tolerance: String, kind: &str) {
        self.checks.push(CheckRecord {
            id,
            status: if ok { Status::Pass } else { Status::Fail },
            measured,
            expected,
            tolerance,
            kind: kind.into(),
        });
    }

    /// JSON without the timing field, for reproducible output.
    pub fn to_json(&self, with_timing: bool) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if !with_timing {
            v.as_object_mut().unwrap().remove("timing_ms");
        }
        serde_json::to_string_pretty(&v).expect("report serializes")
    }

    pub fn render(&self) -> String {
        let mut out = format!("{} on {}\n", self.command, self.scenario);
        if let Some(text) = self.data.get("text").and_then(Value::as_str) {
            out.push_str(text);
            if !text.ends_with('\n') {
                out.push('\n');
            }
        }
        if !self.checks.is_empty() {
            let w = self.checks.iter().map(|c| c.id.chars().count()).max().unwrap_or(0);
            for c in &self.checks {
                let tag = if c.status == Status::Pass { "PASS" } else { "FAIL" };
                let pad = w - c.id.chars().count();
                out.push_str(&format!("  {tag}  {}{}  measured {}", c.id, " ".repeat(pad), c.measured));
                if c.kind != "numeric" || c.expected != "0" {
                    out.push_str(&format!(", expected {}", c.expected));
                }
                if c.tolerance != "0" {
                    out.push_str(&format!(" (tol {})", c.tolerance));
                }
                out.push('\n');
            }
        }
        let n_fail = self.checks.iter().filter(|c| c.status == Status::Fail).count();
        out.push_str(&format!("{} checks, {} failed\n", self.checks.len(), n_fail));
        out
    }
}

pub fn fmt_c(z: C) -> String {
    if z.im == 0.0 {
        format!("{:.12e}", z.re)
    } else {
        format!("{:.12e}{:+.12e}i", z.re, z.im)
    }
}

pub fn fmt_exponent(e: &[Q]) -> String {
    if e.len() == 1 {
        format!("q^{}", fmt_q(&e[0]))
    } else {
        format!("q^({})", e.iter().map(fmt_q).collect::<Vec<_>>().join(","))
    }
}

/// `Σ a_e q^e` ordered by total degree.
pub fn fmt_scalar_series(s: &ScalarSeries) -> String {
    let mut t: Vec<_> = s.terms.iter().collect();
    t.sort_by(|a, b| grading(a.0).cmp(&grading(b.0)).then_with(|| a.0.cmp(b.0)));
    t.iter().map(|(e, c)| format!("{}·{}", fmt_q(c), fmt_exponent(e))).collect::<Vec<_>>().join(" + ")
}

/// `Σ c_i e_i` with the ring's basis labels.
pub fn fmt_class(ring: &OrbRing, x: &[Q]) -> String {
    let parts: Vec<String> = x
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != Q::from_integer(0.into()))
        .map(|(i, c)| {
            let l = ring.label(i);
            if l == "1" {
                fmt_q(c)
            } else if *c == Q::from_integer(1.into()) {
                l
            } else {
                format!("{}*{l}", fmt_q(c))
            }
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ").replace("+ -", "- ")
    }
}
