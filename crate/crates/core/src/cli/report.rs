//! Report data and its JSON and text renderings.
//!
//! Every scalar is stored once as its literal string, and both renderings
//! print those strings unchanged.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use super::manifest::Note;
use crate::bundles::{DecompositionRelations, InvarianceReport, SemiInvariantReport};
use crate::verifier::{TheoremReport, Verdict, Witness};

pub type Basis = Vec<Vec<String>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

impl Default for ToolInfo {
    fn default() -> Self {
        Self {
            name: "mll".into(),
            version: env!("CARGO_PKG_VERSION").into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ManifestInfo {
    pub name: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub class: String,
    pub m: usize,
    pub n: usize,
    pub r: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bases {
    pub tangent: Basis,
    pub radical: Basis,
    pub screen: Basis,
    pub ltr: Basis,
    pub coscreen: Basis,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l0: Option<Basis>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l1: Option<Basis>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l2: Option<Basis>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<Basis>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointReport {
    pub index: usize,
    pub point: Vec<String>,
    pub screen_choice: String,
    pub bases: Bases,
    pub relations: DecompositionRelations,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariance: Option<InvarianceReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub semi_invariance: Option<SemiInvariantReport>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Consistent,
    Inconsistent,
    NotApplicable,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Self::Pass
        } else {
            Self::Fail
        }
    }

    pub fn failed(&self) -> bool {
        matches!(self, Self::Fail | Self::Inconsistent)
    }
}

impl From<Verdict> for Status {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Consistent => Self::Consistent,
            Verdict::Inconsistent => Self::Inconsistent,
            Verdict::NotApplicable => Self::NotApplicable,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckRow {
    pub id: String,
    pub label: String,
    pub status: Status,
    pub witnesses: Vec<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<TheoremReport>,
}

impl CheckRow {
    pub fn new(id: &str, label: &str, ok: bool, witnesses: Vec<Witness>) -> Self {
        Self {
            id: id.into(),
            label: label.into(),
            status: Status::from_bool(ok),
            witnesses,
            detail: None,
        }
    }

    pub fn from_theorem(t: TheoremReport) -> Self {
        let witnesses = t
            .rows
            .iter()
            .filter(|r| r.lhs_condition != r.rhs_condition)
            .map(|r| Witness {
                name: format!("point {}", r.point),
                value: format!("lhs {} but rhs {}", r.lhs_condition, r.rhs_condition),
            })
            .chain(t.equations.iter().filter(|e| !e.holds).take(1).map(|e| Witness {
                name: format!("{} at point {} [{}]", e.label, e.point, e.fields),
                value: format!("{} ≠ {}", e.lhs, e.rhs),
            }))
            .collect();
        Self {
            id: t.id.clone(),
            label: t.label.clone(),
            status: t.verdict.into(),
            witnesses,
            detail: Some(t),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub tool: ToolInfo,
    pub manifest: ManifestInfo,
    pub command: String,
    pub classification: Classification,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub structure_kind: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<PointReport>,
    pub checks: Vec<CheckRow>,
    pub notes: Vec<Note>,
    pub status: Status,
}

impl Report {
    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.status.failed())
    }

    /// 0 when every check passed or is consistent, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.failed())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        let mut out = String::new();
        render(&mut out, "", &value, 0);
        out
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

/// Arrays of scalars print inline as tuples; everything else nests.
fn inline(v: &Value) -> Option<String> {
    if let Some(s) = scalar(v) {
        return Some(s);
    }
    match v {
        Value::Array(items) if items.iter().all(|i| scalar(i).is_some()) => {
            Some(format!("({})", items.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn render(out: &mut String, key: &str, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    let label = if key.is_empty() { String::new() } else { format!("{key}:") };
    if let Some(s) = inline(v) {
        let _ = writeln!(out, "{pad}{label} {s}");
        return;
    }
    if !label.is_empty() {
        let _ = writeln!(out, "{pad}{label}");
    }
    let inner = if key.is_empty() { depth } else { depth + 1 };
    match v {
        Value::Object(map) => {
            for (k, item) in map {
                render(out, k, item, inner);
            }
        }
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                render(out, &format!("[{i}]"), item, inner);
            }
        }
        _ => unreachable!("scalars render inline"),
    }
}
