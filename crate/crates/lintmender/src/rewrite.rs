//! Byte-span edits, unified diffs, and fixpoint-driven repair.
//!
//! Edits are the single currency between native fixers, ingested diagnostic
//! suggestions, and file rewriting. An [`EditSet`] is validated once (sorted,
//! non-overlapping) and applied in a single pass, so application order can
//! never change the result.

use crate::detect::{Finding, LintId};
use crate::source::{SourceError, SourceFile, Span};

use thiserror::Error;

/// One span replacement. A pure insertion has `span.lo == span.hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edit {
    pub span: Span,
    pub replacement: String,
    pub lint: LintId,
    pub note: String,
}

impl Edit {
    pub fn replace(span: Span, replacement: impl Into<String>, lint: LintId, note: impl Into<String>) -> Edit {
        Edit {
            span,
            replacement: replacement.into(),
            lint,
            note: note.into(),
        }
    }

    pub fn insert(at: usize, line: u32, text: impl Into<String>, lint: LintId, note: impl Into<String>) -> Edit {
        Edit {
            span: Span::new(at, at, line),
            replacement: text.into(),
            lint,
            note: note.into(),
        }
    }

    /// Two edits conflict when their spans truly intersect. Insertions at a
    /// replacement boundary are fine; they land before or after it.
    pub fn overlaps(&self, other: &Edit) -> bool {
        if self.span.is_empty() && other.span.is_empty() {
            return false;
        }
        let lo = self.span.lo.max(other.span.lo);
        let hi = self.span.hi.min(other.span.hi);
        if self.span.is_empty() {
            return other.span.lo < self.span.lo && self.span.lo < other.span.hi;
        }
        if other.span.is_empty() {
            return self.span.lo < other.span.lo && other.span.lo < self.span.hi;
        }
        lo < hi
    }

    fn sort_key(&self) -> (usize, usize, &str, &str) {
        (self.span.lo, self.span.hi, self.lint.as_str(), &self.note)
    }

    fn same_change(&self, other: &Edit) -> bool {
        self.span.lo == other.span.lo && self.span.hi == other.span.hi && self.replacement == other.replacement
    }
}

/// Sorted, non-overlapping edits for one file.
#[derive(Debug, Clone, Default)]
pub struct EditSet {
    edits: Vec<Edit>,
}

impl EditSet {
    pub fn empty() -> EditSet {
        EditSet::default()
    }

    /// Sorts by (lo, hi, lint, note), drops exact duplicates, and rejects
    /// overlapping edits. Insertions at the same offset keep their lint/note
    /// order, which makes multi-fixer output deterministic.
    pub fn new(mut edits: Vec<Edit>) -> Result<EditSet, RewriteError> {
        for e in &edits {
            if e.replacement.contains('\0') {
                return Err(RewriteError::NulByte { span: e.span });
            }
        }
        edits.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        edits.dedup_by(|a, b| a.same_change(b));
        for pair in edits.windows(2) {
            if pair[0].overlaps(&pair[1]) {
                return Err(RewriteError::Conflict {
                    first: pair[0].span,
                    second: pair[1].span,
                });
            }
        }
        Ok(EditSet { edits })
    }

    pub fn edits(&self) -> &[Edit] {
        &self.edits
    }

    pub fn len(&self) -> usize {
        self.edits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edits.is_empty()
    }
}

#[derive(Debug, Error)]
pub enum RewriteError {
    #[error("conflicting edits: {first:?} overlaps {second:?}")]
    Conflict { first: Span, second: Span },
    #[error("edit span {span:?} exceeds file length {len}")]
    OutOfBounds { span: Span, len: usize },
    #[error("edit replacement at {span:?} contains a NUL byte")]
    NulByte { span: Span },
    #[error("edited output is not valid UTF-8 (edit boundary splits a character)")]
    BrokenEncoding,
    #[error("max_rounds must be at least 1")]
    ZeroRounds,
    #[error(transparent)]
    Source(#[from] SourceError),
}

/// Apply a validated edit set. Bytes outside the edit spans are preserved
/// exactly; the result length is the input length plus the net replacement
/// growth.
pub fn apply_edits(file: &SourceFile, edits: &EditSet) -> Result<String, RewriteError> {
    apply_to_content(&file.content, edits)
}

pub fn apply_to_content(content: &str, edits: &EditSet) -> Result<String, RewriteError> {
    let bytes = content.as_bytes();
    let mut out: Vec<u8> = Vec::with_capacity(bytes.len());
    let mut cursor = 0usize;
    for e in edits.edits() {
        if e.span.hi > bytes.len() {
            return Err(RewriteError::OutOfBounds {
                span: e.span,
                len: bytes.len(),
            });
        }
        out.extend_from_slice(&bytes[cursor..e.span.lo]);
        out.extend_from_slice(e.replacement.as_bytes());
        cursor = e.span.hi;
    }
    out.extend_from_slice(&bytes[cursor..]);
    String::from_utf8(out).map_err(|_| RewriteError::BrokenEncoding)
}

/// Render the edits as a unified diff with three context lines. An empty edit
/// set (or edits that change nothing) yields the empty string.
pub fn to_diff(file: &SourceFile, edits: &EditSet) -> Result<String, RewriteError> {
    let new = apply_edits(file, edits)?;
    Ok(diff_contents(&file.path_display(), &file.content, &new))
}

pub fn diff_contents(path: &str, old: &str, new: &str) -> String {
    if old == new {
        return String::new();
    }
    similar::TextDiff::from_lines(old, new)
        .unified_diff()
        .context_radius(3)
        .header(&format!("a/{path}"), &format!("b/{path}"))
        .to_string()
}

/// A detector that can propose ready-to-apply fixes.
pub trait Fixer {
    fn lint(&self) -> LintId;
    fn findings(&self, file: &SourceFile) -> Vec<Finding>;
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct FixpointOutcome {
    pub content: String,
    /// Rounds executed, including the final empty round when converged.
    pub rounds: u32,
    pub edits_per_round: Vec<usize>,
    /// Edits still deferred when the round budget ran out.
    pub deferred_final: usize,
    pub converged: bool,
}

impl FixpointOutcome {
    pub fn edits_applied(&self) -> usize {
        self.edits_per_round.iter().sum()
    }
}

/// Repeatedly detect and fix until no fixer proposes an edit or the round
/// budget is exhausted.
///
/// Within a round, fixers run in list order against the same snapshot;
/// conflicting edits lose to the earlier fixer and are re-evaluated next
/// round (fixes can cascade: one repair may expose a new finding).
pub fn run_fixpoint(
    file: &SourceFile,
    fixers: &[Box<dyn Fixer>],
    max_rounds: u32,
) -> Result<FixpointOutcome, RewriteError> {
    if max_rounds == 0 {
        return Err(RewriteError::ZeroRounds);
    }
    let mut content = file.content.clone();
    let mut edits_per_round = Vec::new();
    let mut rounds = 0u32;
    let mut converged = false;
    let mut deferred_final = 0usize;
    loop {
        rounds += 1;
        let snapshot = SourceFile::parse(file.path.clone(), content.clone())?;
        let mut accepted: Vec<Edit> = Vec::new();
        let mut deferred = 0usize;
        for fixer in fixers {
            for finding in fixer.findings(&snapshot) {
                let Some(fix) = finding.fix else { continue };
                for edit in fix {
                    if accepted.iter().any(|a| a.same_change(&edit)) {
                        continue;
                    }
                    if accepted.iter().any(|a| a.overlaps(&edit)) {
                        deferred += 1;
                    } else {
                        accepted.push(edit);
                    }
                }
            }
        }
        edits_per_round.push(accepted.len());
        if accepted.is_empty() {
            converged = true;
            break;
        }
        let set = EditSet::new(accepted)?;
        content = apply_to_content(&content, &set)?;
        if rounds == max_rounds {
            deferred_final = deferred;
            break;
        }
    }
    Ok(FixpointOutcome {
        content,
        rounds,
        edits_per_round,
        deferred_final,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detect::LintId;
    use crate::source::SourceFile;

    fn lint() -> LintId {
        LintId::other("test_lint")
    }

    fn span_of(content: &str, needle: &str) -> Span {
        let lo = content.find(needle).unwrap();
        Span::new(lo, lo + needle.len(), 1)
    }

    #[test]
    fn single_replacement() {
        let file = SourceFile::parse("t.rs", "a+b").unwrap();
        let set = EditSet::new(vec![Edit::replace(span_of("a+b", "+"), "*", lint(), "swap")]).unwrap();
        assert_eq!(apply_edits(&file, &set).unwrap(), "a*b");
    }

    #[test]
    fn empty_set_is_identity() {
        let file = SourceFile::parse("t.rs", "fn main() {}\n").unwrap();
        let out = apply_edits(&file, &EditSet::empty()).unwrap();
        assert_eq!(out, file.content);
    }

    #[test]
    fn suffix_insertion_matches_suggested_fix() {
        let src = "return 0;";
        let file = SourceFile::parse("t.rs", src).unwrap();
        let zero = span_of(src, "0");
        let set = EditSet::new(vec![Edit::replace(zero, "0_i32", lint(), "suffix")]).unwrap();
        assert_eq!(apply_edits(&file, &set).unwrap(), "return 0_i32;");
    }

    #[test]
    fn length_accounting_holds() {
        let src = "abcdef";
        let file = SourceFile::parse("t.rs", src).unwrap();
        let edits = vec![
            Edit::replace(Span::new(0, 2, 1), "XYZW", lint(), "grow"),
            Edit::replace(Span::new(4, 6, 1), "", lint(), "drop"),
        ];
        let set = EditSet::new(edits).unwrap();
        let out = apply_edits(&file, &set).unwrap();
        assert_eq!(out, "XYZWcd");
        // +2 bytes from the first edit, -2 from the second
        assert_eq!(out.len(), src.len());
    }

    #[test]
    fn overlap_is_rejected_with_both_spans() {
        let edits = vec![
            Edit::replace(Span::new(0, 3, 1), "x", lint(), "a"),
            Edit::replace(Span::new(2, 5, 1), "y", lint(), "b"),
        ];
        match EditSet::new(edits) {
            Err(RewriteError::Conflict { first, second }) => {
                assert_eq!(first.lo, 0);
                assert_eq!(second.lo, 2);
            }
            other => panic!("expected conflict, got {other:?}"),
        }
    }

    #[test]
    fn out_of_range_is_rejected() {
        let file = SourceFile::parse("t.rs", "ab").unwrap();
        let set = EditSet::new(vec![Edit::replace(Span::new(1, 9, 1), "x", lint(), "late")]).unwrap();
        assert!(matches!(
            apply_edits(&file, &set),
            Err(RewriteError::OutOfBounds { .. })
        ));
    }

    #[test]
    fn permutations_apply_identically() {
        let src = "0123456789";
        let file = SourceFile::parse("t.rs", src).unwrap();
        let edits = vec![
            Edit::replace(Span::new(8, 9, 1), "Z", lint(), "c"),
            Edit::insert(4, 1, "+", lint(), "b"),
            Edit::replace(Span::new(0, 2, 1), "A", lint(), "a"),
        ];
        let forward = apply_edits(&file, &EditSet::new(edits.clone()).unwrap()).unwrap();
        let mut rev = edits.clone();
        rev.reverse();
        let backward = apply_edits(&file, &EditSet::new(rev).unwrap()).unwrap();
        assert_eq!(forward, backward);
        assert_eq!(forward, "A23+4567Z9");
    }

    #[test]
    fn insertions_at_same_offset_order_by_lint_then_note() {
        let file = SourceFile::parse("t.rs", "ab").unwrap();
        let edits = vec![
            Edit::insert(1, 1, "2", LintId::other("zz_lint"), "n"),
            Edit::insert(1, 1, "1", LintId::other("aa_lint"), "n"),
        ];
        let set = EditSet::new(edits).unwrap();
        assert_eq!(apply_edits(&file, &set).unwrap(), "a12b");
    }

    #[test]
    fn insertion_at_replacement_boundary_is_not_a_conflict() {
        let file = SourceFile::parse("t.rs", "abcd").unwrap();
        let edits = vec![
            Edit::replace(Span::new(1, 3, 1), "X", lint(), "mid"),
            Edit::insert(1, 1, "<", lint(), "before"),
            Edit::insert(3, 1, ">", lint(), "after"),
        ];
        let set = EditSet::new(edits).unwrap();
        assert_eq!(apply_edits(&file, &set).unwrap(), "a<X>d");
    }

    #[test]
    fn insertion_inside_replacement_conflicts() {
        let edits = vec![
            Edit::replace(Span::new(1, 4, 1), "X", lint(), "outer"),
            Edit::insert(2, 1, "!", lint(), "inner"),
        ];
        assert!(matches!(
            EditSet::new(edits),
            Err(RewriteError::Conflict { .. })
        ));
    }

    #[test]
    fn nul_bytes_are_rejected() {
        let edits = vec![Edit::replace(Span::new(0, 1, 1), "a\0b", lint(), "bad")];
        assert!(matches!(EditSet::new(edits), Err(RewriteError::NulByte { .. })));
    }

    #[test]
    fn empty_edits_render_empty_diff() {
        let file = SourceFile::parse("t.rs", "fn main() {}\n").unwrap();
        assert_eq!(to_diff(&file, &EditSet::empty()).unwrap(), "");
    }

    #[test]
    fn one_line_replacement_renders_one_hunk() {
        let src = "fn f() {\n    let a = 1;\n    let b = 2;\n    let c = 3;\n}\n";
        let file = SourceFile::parse("t.rs", src).unwrap();
        let span = span_of(src, "let b = 2;");
        let span = Span::new(span.lo, span.hi, 3);
        let set = EditSet::new(vec![Edit::replace(span, "let b = 9;", lint(), "bump")]).unwrap();
        let diff = to_diff(&file, &set).unwrap();
        assert_eq!(diff.matches("@@").count() / 2, 1);
        assert_eq!(diff.lines().filter(|l| l.starts_with('-') && !l.starts_with("---")).count(), 1);
        assert_eq!(diff.lines().filter(|l| l.starts_with('+') && !l.starts_with("+++")).count(), 1);
        assert!(diff.contains("-    let b = 2;"));
        assert!(diff.contains("+    let b = 9;"));
    }

    #[test]
    fn wrapping_rewrite_shows_in_diff() {
        let src = "fn f(mut i: i32) {\n    i += 1;\n}\n";
        let file = SourceFile::parse("t.rs", src).unwrap();
        let stmt = span_of(src, "i += 1;");
        let stmt = Span::new(stmt.lo, stmt.hi, 2);
        let set = EditSet::new(vec![Edit::replace(stmt, "i = i.wrapping_add(1);", lint(), "wrap")]).unwrap();
        let diff = to_diff(&file, &set).unwrap();
        assert!(diff.contains("+    i = i.wrapping_add(1);"), "{diff}");
    }

    // Fixpoint behavior is checked with toy fixers so the contract stays
    // independent of the real detectors.
    struct Rewrite {
        name: &'static str,
        from: &'static str,
        to: &'static str,
    }

    impl Fixer for Rewrite {
        fn lint(&self) -> LintId {
            LintId::other(self.name)
        }

        fn findings(&self, file: &SourceFile) -> Vec<Finding> {
            let mut out = Vec::new();
            let mut at = 0;
            while let Some(rel) = file.content[at..].find(self.from) {
                let lo = at + rel;
                let span = Span::new(lo, lo + self.from.len(), file.line_of(lo));
                out.push(Finding::fixable(
                    self.lint(),
                    span,
                    "toy".to_string(),
                    vec![Edit::replace(span, self.to, self.lint(), "toy")],
                ));
                at = lo + self.from.len();
            }
            out
        }
    }

    fn boxed(name: &'static str, from: &'static str, to: &'static str) -> Box<dyn Fixer> {
        Box::new(Rewrite { name, from, to })
    }

    #[test]
    fn clean_file_converges_in_one_round() {
        let file = SourceFile::parse("t.rs", "nothing here\n").unwrap();
        let fixers = vec![boxed("a", "xyz", "q")];
        let out = run_fixpoint(&file, &fixers, 8).unwrap();
        assert!(out.converged);
        assert_eq!(out.rounds, 1);
        assert_eq!(out.edits_per_round, vec![0]);
        assert_eq!(out.content, "nothing here\n");
    }

    #[test]
    fn cascading_fixers_take_two_rounds() {
        let file = SourceFile::parse("t.rs", "start 1 end\n").unwrap();
        let fixers = vec![boxed("first", "1", "2"), boxed("second", "2", "3")];
        let out = run_fixpoint(&file, &fixers, 8).unwrap();
        assert!(out.converged);
        assert_eq!(out.rounds, 3);
        assert_eq!(out.edits_per_round, vec![1, 1, 0]);
        assert_eq!(out.content, "start 3 end\n");
    }

    #[test]
    fn conflicting_fixers_resolve_by_order() {
        // Both fixers want the same span; the first wins round one and the
        // second re-evaluates against the new content.
        let file = SourceFile::parse("t.rs", "x\n").unwrap();
        let fixers = vec![boxed("first", "x", "y"), boxed("second", "x", "z")];
        let out = run_fixpoint(&file, &fixers, 8).unwrap();
        assert!(out.converged);
        assert_eq!(out.content, "y\n");
        assert_eq!(out.edits_per_round, vec![1, 0]);
    }

    #[test]
    fn ping_pong_fixers_hit_the_round_budget() {
        let file = SourceFile::parse("t.rs", "a\n").unwrap();
        let fixers = vec![boxed("ab", "a", "b"), boxed("ba", "b", "a")];
        let out = run_fixpoint(&file, &fixers, 4).unwrap();
        assert!(!out.converged);
        assert_eq!(out.rounds, 4);
        assert_eq!(out.edits_per_round.len(), 4);
    }

    #[test]
    fn zero_rounds_is_an_error() {
        let file = SourceFile::parse("t.rs", "a\n").unwrap();
        assert!(matches!(
            run_fixpoint(&file, &[], 0),
            Err(RewriteError::ZeroRounds)
        ));
    }
}
