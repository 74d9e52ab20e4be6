//! Ingestion of linter diagnostic streams.
//!
//! The input is line-delimited JSON in the standard compiler message shape:
//! one object per line with `message`, `code.code`, `level`, `spans[]`
//! (`byte_start`/`byte_end`/`file_name`/`suggested_replacement`/
//! `suggestion_applicability`), and `children[]`. Cargo wrapper records
//! (`{"reason": "compiler-message", "message": {...}}`) are unwrapped;
//! build-artifact and summary records are skipped.
//!
//! Suggestions tagged `MachineApplicable` become edits directly. A
//! [`PromotionPolicy`] additionally treats every suggestion of selected lints
//! as machine-applicable — the externalized form of retagging a lint's
//! applicability inside the linter itself.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::detect::LintId;
use crate::rewrite::{Edit, EditSet};
use crate::source::Span;

/// The linter's confidence tag on a suggested fix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Applicability {
    MachineApplicable,
    MaybeIncorrect,
    Unspecified,
    Unresolved,
}

impl Applicability {
    fn parse(raw: &str) -> Applicability {
        match raw {
            "MachineApplicable" => Applicability::MachineApplicable,
            "MaybeIncorrect" => Applicability::MaybeIncorrect,
            "Unresolved" => Applicability::Unresolved,
            _ => Applicability::Unspecified,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Applicability::MachineApplicable => "MachineApplicable",
            Applicability::MaybeIncorrect => "MaybeIncorrect",
            Applicability::Unspecified => "Unspecified",
            Applicability::Unresolved => "Unresolved",
        }
    }
}

/// Reporting severity. Message streams only carry warning/error; everything
/// suppressed or informational maps to Allow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Level {
    Allow,
    Warn,
    Deny,
}

impl Level {
    fn parse(raw: &str) -> Level {
        match raw {
            "warning" => Level::Warn,
            "error" => Level::Deny,
            _ => Level::Allow,
        }
    }

    fn emit(self) -> &'static str {
        match self {
            Level::Warn => "warning",
            Level::Deny => "error",
            Level::Allow => "note",
        }
    }
}

/// Byte span in a named file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileSpan {
    pub file: String,
    pub lo: usize,
    pub hi: usize,
    pub line: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Suggestion {
    pub span: FileSpan,
    pub replacement: String,
    pub applicability: Applicability,
}

/// One parsed linter message. Child suggestions are flattened into
/// `suggestions` alongside the primary span's own.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub lint: LintId,
    pub level: Level,
    pub message: String,
    pub primary: FileSpan,
    pub suggestions: Vec<Suggestion>,
}

/// Lints whose suggestions are applied regardless of their applicability tag.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct PromotionPolicy {
    pub promote: std::collections::BTreeSet<LintId>,
}

impl PromotionPolicy {
    pub fn none() -> PromotionPolicy {
        PromotionPolicy::default()
    }

    pub fn promoting<I: IntoIterator<Item = LintId>>(lints: I) -> PromotionPolicy {
        PromotionPolicy {
            promote: lints.into_iter().collect(),
        }
    }

    pub fn admits(&self, lint: &LintId, applicability: Applicability) -> bool {
        applicability == Applicability::MachineApplicable || self.promote.contains(lint)
    }
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("malformed JSON on line {line}: {source}")]
    Json {
        line: usize,
        source: serde_json::Error,
    },
}

/// Parsed diagnostics plus a record of what was ignored along the way.
#[derive(Debug, Default)]
pub struct ParseOutcome {
    pub diagnostics: Vec<Diagnostic>,
    /// Non-diagnostic records (artifacts, summaries) silently dropped.
    pub skipped_records: usize,
    /// Records that looked diagnostic but were missing required fields.
    pub warnings: Vec<String>,
}

#[derive(Deserialize)]
struct RawDiag {
    message: String,
    code: Option<RawCode>,
    level: String,
    #[serde(default)]
    spans: Vec<RawSpan>,
    #[serde(default)]
    children: Vec<RawDiag>,
}

#[derive(Deserialize)]
struct RawCode {
    code: String,
}

#[derive(Deserialize)]
struct RawSpan {
    file_name: String,
    byte_start: u64,
    byte_end: u64,
    #[serde(default)]
    line_start: u64,
    #[serde(default)]
    is_primary: bool,
    #[serde(default)]
    suggested_replacement: Option<String>,
    #[serde(default)]
    suggestion_applicability: Option<String>,
}

impl RawSpan {
    fn file_span(&self) -> FileSpan {
        FileSpan {
            file: self.file_name.clone(),
            lo: self.byte_start as usize,
            hi: self.byte_end as usize,
            line: self.line_start as u32,
        }
    }
}

fn collect_suggestions(raw: &RawDiag, out: &mut Vec<Suggestion>) {
    for span in &raw.spans {
        if let Some(replacement) = &span.suggested_replacement {
            out.push(Suggestion {
                span: span.file_span(),
                replacement: replacement.clone(),
                applicability: span
                    .suggestion_applicability
                    .as_deref()
                    .map(Applicability::parse)
                    .unwrap_or(Applicability::Unspecified),
            });
        }
    }
    for child in &raw.children {
        collect_suggestions(child, out);
    }
}

/// Parse a line-delimited JSON diagnostic stream. Malformed JSON is a hard
/// error with the offending line number; structurally valid records missing
/// required fields are skipped with a logged warning.
pub fn parse_stream(input: &str) -> Result<ParseOutcome, IngestError> {
    let mut out = ParseOutcome::default();
    for (idx, line) in input.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let value: serde_json::Value =
            serde_json::from_str(line).map_err(|source| IngestError::Json { line: line_no, source })?;
        let raw_value = match value.get("reason") {
            Some(reason) if reason == "compiler-message" => match value.get("message") {
                Some(m) => m.clone(),
                None => {
                    out.warnings
                        .push(format!("line {line_no}: compiler-message without a message body"));
                    continue;
                }
            },
            Some(_) => {
                out.skipped_records += 1;
                continue;
            }
            None => value,
        };
        let raw: RawDiag = match serde_json::from_value(raw_value) {
            Ok(raw) => raw,
            Err(e) => {
                out.warnings
                    .push(format!("line {line_no}: not a diagnostic record ({e})"));
                continue;
            }
        };
        let Some(code) = &raw.code else {
            out.warnings
                .push(format!("line {line_no}: diagnostic without a lint code skipped"));
            continue;
        };
        let Some(primary) = raw
            .spans
            .iter()
            .find(|s| s.is_primary)
            .or_else(|| raw.spans.first())
        else {
            out.warnings
                .push(format!("line {line_no}: diagnostic without spans skipped"));
            continue;
        };
        let mut suggestions = Vec::new();
        collect_suggestions(&raw, &mut suggestions);
        out.diagnostics.push(Diagnostic {
            lint: LintId::other(&code.code),
            level: Level::parse(&raw.level),
            message: raw.message.clone(),
            primary: primary.file_span(),
            suggestions,
        });
    }
    Ok(out)
}

/// Serialize a diagnostic back to one stream line. Retained fields survive a
/// parse round trip.
pub fn to_json_line(diag: &Diagnostic) -> String {
    let mut spans = vec![serde_json::json!({
        "file_name": diag.primary.file,
        "byte_start": diag.primary.lo as u64,
        "byte_end": diag.primary.hi as u64,
        "line_start": diag.primary.line as u64,
        "is_primary": true,
        "suggested_replacement": serde_json::Value::Null,
        "suggestion_applicability": serde_json::Value::Null,
    })];
    for s in &diag.suggestions {
        spans.push(serde_json::json!({
            "file_name": s.span.file,
            "byte_start": s.span.lo as u64,
            "byte_end": s.span.hi as u64,
            "line_start": s.span.line as u64,
            "is_primary": false,
            "suggested_replacement": s.replacement,
            "suggestion_applicability": s.applicability.as_str(),
        }));
    }
    serde_json::json!({
        "message": diag.message,
        "code": { "code": diag.lint.as_str() },
        "level": diag.level.emit(),
        "spans": spans,
        "children": [],
    })
    .to_string()
}

/// A suggestion that was not turned into an edit, and why.
#[derive(Debug, Clone, Serialize)]
pub struct DroppedSuggestion {
    pub file: String,
    pub lo: usize,
    pub lint: LintId,
    pub reason: String,
}

/// Result of resolving suggestions into per-file edit sets.
#[derive(Debug, Default)]
pub struct EditResolution {
    pub per_file: BTreeMap<String, EditSet>,
    pub included: usize,
    /// Overlap losers under first-wins ordering by (file, lo, lint).
    pub skipped: Vec<DroppedSuggestion>,
    /// Spans outside the target file, or files that could not be read.
    pub unresolvable: Vec<DroppedSuggestion>,
    /// Suggestions whose applicability did not admit them and whose lint was
    /// not promoted.
    pub not_admitted: Vec<DroppedSuggestion>,
}

/// Turn diagnostics into per-file edits under the promotion policy.
///
/// Every `MachineApplicable` suggestion is included, plus suggestions of any
/// applicability for promoted lints. Overlaps keep the first suggestion in
/// (file, lo, lint) order; the rest are reported skipped. `file_sizes` maps
/// file names to their byte length for bounds checking — files absent from
/// the map make their suggestions unresolvable rather than failing the run.
pub fn to_edits(
    diags: &[Diagnostic],
    policy: &PromotionPolicy,
    file_sizes: &BTreeMap<String, usize>,
) -> EditResolution {
    let mut candidates: Vec<(&LintId, &str, &Suggestion)> = diags
        .iter()
        .flat_map(|d| {
            d.suggestions
                .iter()
                .map(move |s| (&d.lint, d.message.as_str(), s))
        })
        .collect();
    candidates.sort_by(|a, b| {
        let ka = (&a.2.span.file, a.2.span.lo, a.0.as_str(), a.2.span.hi);
        let kb = (&b.2.span.file, b.2.span.lo, b.0.as_str(), b.2.span.hi);
        ka.cmp(&kb)
    });

    let mut resolution = EditResolution::default();
    candidates.retain(|(lint, _, s)| {
        if policy.admits(lint, s.applicability) {
            return true;
        }
        resolution.not_admitted.push(DroppedSuggestion {
            file: s.span.file.clone(),
            lo: s.span.lo,
            lint: (*lint).clone(),
            reason: format!(
                "applicability {} and lint not promoted",
                s.applicability.as_str()
            ),
        });
        false
    });
    let mut kept: BTreeMap<String, Vec<Edit>> = BTreeMap::new();
    for (lint, message, s) in candidates {
        let Some(&len) = file_sizes.get(&s.span.file) else {
            resolution.unresolvable.push(DroppedSuggestion {
                file: s.span.file.clone(),
                lo: s.span.lo,
                lint: lint.clone(),
                reason: "target file is not readable".to_string(),
            });
            continue;
        };
        if s.span.hi > len || s.span.lo > s.span.hi {
            resolution.unresolvable.push(DroppedSuggestion {
                file: s.span.file.clone(),
                lo: s.span.lo,
                lint: lint.clone(),
                reason: format!("span {}..{} outside file of {} bytes", s.span.lo, s.span.hi, len),
            });
            continue;
        }
        let edit = Edit::replace(
            Span::new(s.span.lo, s.span.hi, s.span.line),
            s.replacement.clone(),
            lint.clone(),
            message.to_string(),
        );
        let file_edits = kept.entry(s.span.file.clone()).or_default();
        if file_edits.iter().any(|e| {
            e.span == edit.span && e.replacement == edit.replacement
        }) {
            continue; // identical duplicate, already covered
        }
        if file_edits.iter().any(|e| e.overlaps(&edit)) {
            resolution.skipped.push(DroppedSuggestion {
                file: s.span.file.clone(),
                lo: s.span.lo,
                lint: lint.clone(),
                reason: "overlaps an earlier suggestion (first wins)".to_string(),
            });
            continue;
        }
        file_edits.push(edit);
        resolution.included += 1;
    }
    for (file, edits) in kept {
        let set = EditSet::new(edits).expect("kept edits are non-overlapping by construction");
        resolution.per_file.insert(file, set);
    }
    resolution
}

/// Exact multiplicity per lint, ordered by descending count then name.
pub fn count_by_lint(diags: &[Diagnostic]) -> Vec<(LintId, u64)> {
    let mut counts: BTreeMap<&LintId, u64> = BTreeMap::new();
    for d in diags {
        *counts.entry(&d.lint).or_insert(0) += 1;
    }
    let mut rows: Vec<(LintId, u64)> = counts.into_iter().map(|(l, c)| (l.clone(), c)).collect();
    rows.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    rows
}
