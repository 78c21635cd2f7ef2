//! Structured checker verdicts.
//!
//! Every axiom checker in the library emits a [`Report`]: one entry per axiom
//! instance, with an optional counterexample payload so failures are
//! replayable from the serialized report alone.

use serde::{Deserialize, Serialize};

/// Version of the serialized report layout.  Bump when the JSON shape changes.
pub const REPORT_SCHEMA: u32 = 1;

/// Verdict for a single axiom instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportEntry {
    /// Axiom identifier, e.g. `"PS1"`, `"EP6"`, `"BC1"`, `"assoc"`.
    pub axiom: String,
    /// Which instance of the axiom, e.g. the pair of 1-cells involved.
    pub instance: String,
    pub ok: bool,
    /// Human/machine-readable payload describing the failure; `None` on pass.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

/// Aggregated verdicts for one checked subject.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    /// What was checked, e.g. `"category foo"`.
    pub subject: String,
    pub entries: Vec<ReportEntry>,
}

impl Report {
    pub fn new(subject: impl Into<String>) -> Self {
        Report { schema: REPORT_SCHEMA, subject: subject.into(), entries: Vec::new() }
    }

    pub fn pass(&mut self, axiom: &str, instance: impl Into<String>) {
        self.entries.push(ReportEntry {
            axiom: axiom.to_string(),
            instance: instance.into(),
            ok: true,
            counterexample: None,
        });
    }

    pub fn fail(&mut self, axiom: &str, instance: impl Into<String>, why: impl Into<String>) {
        self.entries.push(ReportEntry {
            axiom: axiom.to_string(),
            instance: instance.into(),
            ok: false,
            counterexample: Some(why.into()),
        });
    }

    /// Record a boolean outcome in one call.
    pub fn check(&mut self, axiom: &str, instance: impl Into<String>, ok: bool, why: impl Fn() -> String) {
        if ok {
            self.pass(axiom, instance);
        } else {
            self.fail(axiom, instance, why());
        }
    }

    pub fn is_pass(&self) -> bool {
        self.entries.iter().all(|e| e.ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportEntry> {
        self.entries.iter().filter(|e| !e.ok)
    }

    /// First failure, if any — convenient for error messages.
    pub fn first_failure(&self) -> Option<&ReportEntry> {
        self.failures().next()
    }

    /// Merge another report's entries into this one, prefixing instances.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for mut e in other.entries {
            e.instance = format!("{prefix}{}", e.instance);
            self.entries.push(e);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_roundtrips_through_json() {
        let mut r = Report::new("demo");
        r.pass("assoc", "(f,g,h)");
        r.fail("unit", "f", "id.f != f");
        let s = serde_json::to_string(&r).unwrap();
        let back: Report = serde_json::from_str(&s).unwrap();
        assert_eq!(r, back);
        assert!(!r.is_pass());
        assert_eq!(r.first_failure().unwrap().axiom, "unit");
    }

    #[test]
    fn schema_is_pinned() {
        let r = Report::new("x");
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v["schema"], 1);
    }
}
