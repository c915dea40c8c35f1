//! Report envelopes: versioned JSON (schema 1) and a markdown renderer.
//! Key order comes from serde_json's BTreeMap-backed maps, so identical
//! configs produce byte-identical reports.

use serde_json::{json, Value};

pub const SCHEMA_VERSION: u64 = 1;

/// Classification of a nonzero exit: a mathematical violation of a proved
/// statement is almost certainly an implementation bug; a conjecture
/// counterexample is a finding worth keeping.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    LikelyBug,
    Finding,
}

impl ViolationKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ViolationKind::LikelyBug => "likely-bug",
            ViolationKind::Finding => "finding",
        }
    }
}

pub struct Report {
    pub kind: String,
    pub config: Value,
    pub results: Vec<Value>,
    pub violations: Vec<(ViolationKind, Value)>,
    pub timings_ms: Vec<(String, u128)>,
}

impl Report {
    pub fn new(kind: &str, config: Value) -> Report {
        Report {
            kind: kind.to_string(),
            config,
            results: Vec::new(),
            violations: Vec::new(),
            timings_ms: Vec::new(),
        }
    }

    pub fn push(&mut self, value: Value) {
        self.results.push(value);
    }

    pub fn violation(&mut self, kind: ViolationKind, value: Value) {
        self.violations.push((kind, value));
    }

    pub fn timing(&mut self, label: &str, ms: u128) {
        self.timings_ms.push((label.to_string(), ms));
    }

    pub fn all_passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": SCHEMA_VERSION,
            "kind": self.kind,
            "config": self.config,
            "results": self.results,
            "violations": self
                .violations
                .iter()
                .map(|(k, v)| json!({"kind": k.as_str(), "detail": v}))
                .collect::<Vec<_>>(),
            "timings_ms": self
                .timings_ms
                .iter()
                .map(|(label, ms)| json!({"step": label, "ms": ms}))
                .collect::<Vec<_>>(),
        })
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# {} report (schema {})\n\n", self.kind, SCHEMA_VERSION));
        out.push_str(&format!("config: `{}`\n\n", self.config));
        out.push_str("## Results\n\n");
        for r in &self.results {
            out.push_str(&format!("- `{r}`\n"));
        }
        if !self.violations.is_empty() {
            out.push_str("\n## Violations\n\n");
            for (k, v) in &self.violations {
                out.push_str(&format!("- **{}**: `{v}`\n", k.as_str()));
            }
        }
        out.push_str("\n## Timings\n\n");
        for (label, ms) in &self.timings_ms {
            out.push_str(&format!("- {label}: {ms} ms\n"));
        }
        out
    }
}
