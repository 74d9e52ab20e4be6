//! Corpus walking and the command implementations behind the `lintmender`
//! binary: `scan`, `fix` (with dry-run), `apply-diagnostics`, `density`, and
//! `evolve`.
//!
//! Files are processed by a small worker pool and results are merged in
//! path-sorted order, so reports are byte-deterministic for identical inputs.
//! JSON reports follow schema "1": top-level `{schema, config, files,
//! density_before, density_after, convergence, ...}` with findings as
//! `{lint, line, lo, hi, message, fixed}`.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use globset::{Glob, GlobSet, GlobSetBuilder};
use serde::Serialize;
use thiserror::Error;

use crate::detect::{detect_all, enabled_fixers, DetectorConfig, Finding, LintId};
use crate::diagnostics::{self, IngestError, PromotionPolicy};
use crate::metrics::{DensityReport, EvolutionRow, MetricsError};
use crate::rewrite::{apply_to_content, diff_contents, run_fixpoint};
use crate::source::{line_count, LineMode, SourceFile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Scan,
    Fix,
    DryRun,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

/// Everything one invocation needs. Serialized into reports so a report is
/// self-describing.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub roots: Vec<PathBuf>,
    pub include: Vec<String>,
    pub exclude: Vec<String>,
    pub detector: DetectorConfig,
    pub promote: BTreeSet<LintId>,
    pub mode: Mode,
    pub line_mode: LineMode,
    pub format: OutputFormat,
    pub max_rounds: u32,
    pub top_k: usize,
}

impl RunConfig {
    pub fn new(roots: Vec<PathBuf>) -> RunConfig {
        RunConfig {
            roots,
            include: vec!["**/*.rs".to_string()],
            exclude: vec!["**/target/**".to_string()],
            detector: DetectorConfig::default(),
            promote: BTreeSet::new(),
            mode: Mode::Scan,
            line_mode: LineMode::Raw,
            format: OutputFormat::Text,
            max_rounds: 8,
            top_k: 5,
        }
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("root `{0}` does not exist or is not readable")]
    Root(String),
    #[error("invalid glob `{pattern}`: {source}")]
    Glob {
        pattern: String,
        source: globset::Error,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("usage: {0}")]
    Usage(String),
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

fn glob_set(patterns: &[String]) -> Result<GlobSet, RunError> {
    let mut builder = GlobSetBuilder::new();
    for pattern in patterns {
        let glob = Glob::new(pattern).map_err(|source| RunError::Glob {
            pattern: pattern.clone(),
            source,
        })?;
        builder.add(glob);
    }
    builder.build().map_err(|source| RunError::Glob {
        pattern: patterns.join(","),
        source,
    })
}

/// Walk the roots for files matching the include globs and not the excludes.
/// Output is lexicographically sorted and deduplicated.
pub fn walk(roots: &[PathBuf], include: &[String], exclude: &[String]) -> Result<Vec<PathBuf>, RunError> {
    if roots.is_empty() {
        return Err(RunError::Usage("at least one root is required".to_string()));
    }
    let include = glob_set(include)?;
    let exclude = glob_set(exclude)?;
    let mut files: BTreeSet<PathBuf> = BTreeSet::new();
    for root in roots {
        if !root.exists() {
            return Err(RunError::Root(root.display().to_string()));
        }
        if root.is_file() {
            if include.is_match(root) && !exclude.is_match(root) {
                files.insert(root.clone());
            }
            continue;
        }
        let mut stack = vec![root.clone()];
        while let Some(dir) = stack.pop() {
            let entries = std::fs::read_dir(&dir).map_err(|source| RunError::Io {
                path: dir.display().to_string(),
                source,
            })?;
            for entry in entries {
                let entry = entry.map_err(|source| RunError::Io {
                    path: dir.display().to_string(),
                    source,
                })?;
                let path = entry.path();
                if path.is_dir() {
                    stack.push(path);
                } else if include.is_match(&path) && !exclude.is_match(&path) {
                    files.insert(path);
                }
            }
        }
    }
    let mut out: Vec<PathBuf> = files.into_iter().collect();
    out.sort_by_key(|p| p.display().to_string());
    Ok(out)
}

/// Index-ordered parallel map over a worker pool; results come back in input
/// order regardless of scheduling.
fn parallel_map<T, F>(items: &[PathBuf], f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&Path) -> T + Sync,
{
    let workers = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(items.len());
    if workers <= 1 {
        return items.iter().map(|p| f(p)).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<T>>> = items.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= items.len() {
                    break;
                }
                let result = f(&items[i]);
                *slots[i].lock().unwrap() = Some(result);
            });
        }
    });
    slots
        .into_iter()
        .map(|m| m.into_inner().unwrap().expect("worker filled every slot"))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct FindingReport {
    pub lint: LintId,
    pub line: u32,
    pub lo: usize,
    pub hi: usize,
    pub message: String,
    pub fixed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FileReport {
    pub path: String,
    pub findings: Vec<FindingReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FileIssue {
    pub path: String,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Convergence {
    pub converged: bool,
    /// Highest round count any file needed.
    pub rounds_max: u32,
    pub unconverged: Vec<String>,
}

/// proposed = applied + skipped. In non-writing modes nothing is applied, so
/// every proposed edit counts as skipped.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct EditTotals {
    pub proposed: usize,
    pub applied: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiffEntry {
    pub path: String,
    pub diff: String,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    pub config: RunConfig,
    pub files: Vec<FileReport>,
    pub density_before: Option<DensityReport>,
    /// Present only in fix mode; a dry run reports diffs instead.
    pub density_after: Option<DensityReport>,
    pub convergence: Option<Convergence>,
    pub edits: EditTotals,
    pub errors: Vec<FileIssue>,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub diffs: Vec<DiffEntry>,
    /// Simulated after-state total for dry-run exit codes.
    #[serde(skip)]
    pub after_total: Option<u64>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl RunReport {
    fn new(config: RunConfig) -> RunReport {
        RunReport {
            schema: "1",
            config,
            files: Vec::new(),
            density_before: None,
            density_after: None,
            convergence: None,
            edits: EditTotals::default(),
            errors: Vec::new(),
            warnings: Vec::new(),
            diffs: Vec::new(),
            after_total: None,
            elapsed: Duration::ZERO,
        }
    }

    pub fn total_findings(&self) -> usize {
        self.files.iter().map(|f| f.findings.len()).sum()
    }

    /// 0 clean, 1 findings (on the after state for fix and dry-run), 2 run
    /// errors.
    pub fn exit_code(&self) -> i32 {
        if !self.errors.is_empty() {
            return 2;
        }
        let findings = match self.after_total {
            Some(total) => total as usize,
            None => self.total_findings(),
        };
        if findings > 0 {
            1
        } else {
            0
        }
    }
}

struct FileScan {
    path: String,
    lines: u64,
    findings: Vec<Finding>,
    content: Option<String>,
    error: Option<String>,
    non_utf8: bool,
}

fn scan_file(path: &Path, detector: &DetectorConfig, line_mode: LineMode) -> FileScan {
    let display = path.display().to_string();
    let mut scan = FileScan {
        path: display.clone(),
        lines: 0,
        findings: Vec::new(),
        content: None,
        error: None,
        non_utf8: false,
    };
    let bytes = match std::fs::read(path) {
        Ok(b) => b,
        Err(e) => {
            scan.error = Some(format!("read failed: {e}"));
            return scan;
        }
    };
    let content = match String::from_utf8(bytes) {
        Ok(c) => c,
        Err(_) => {
            scan.non_utf8 = true;
            return scan;
        }
    };
    scan.lines = line_count(&content, line_mode);
    match SourceFile::parse(path, content.clone()) {
        Ok(file) => {
            scan.findings = detect_all(&file, detector);
            scan.content = Some(content);
        }
        Err(e) => scan.error = Some(e.to_string()),
    }
    scan
}

fn density_from_findings(
    label: &str,
    scans: &[&FileScan],
    counts: BTreeMap<LintId, u64>,
    cfg: &RunConfig,
) -> Option<DensityReport> {
    let ok: Vec<_> = scans.iter().filter(|s| s.error.is_none() && !s.non_utf8).collect();
    let lines: u64 = ok.iter().map(|s| s.lines).sum();
    Some(DensityReport::new(
        label,
        ok.len() as u64,
        lines,
        cfg.line_mode,
        counts,
        cfg.top_k,
    ))
}

fn count_findings(scans: &[&FileScan]) -> BTreeMap<LintId, u64> {
    let mut counts = BTreeMap::new();
    for scan in scans {
        for finding in &scan.findings {
            *counts.entry(finding.lint.clone()).or_insert(0) += 1;
        }
    }
    counts
}

fn finding_reports(findings: &[Finding], fixed: bool) -> Vec<FindingReport> {
    findings
        .iter()
        .map(|f| FindingReport {
            lint: f.lint.clone(),
            line: f.span.line,
            lo: f.span.lo,
            hi: f.span.hi,
            message: f.message.clone(),
            fixed: fixed && f.fixable,
        })
        .collect()
}

/// Detect-only run over the corpus.
pub fn cmd_scan(cfg: &RunConfig) -> Result<RunReport, RunError> {
    let start = Instant::now();
    let files = walk(&cfg.roots, &cfg.include, &cfg.exclude)?;
    let scans = parallel_map(&files, |p| scan_file(p, &cfg.detector, cfg.line_mode));
    let mut report = RunReport::new(cfg.clone());
    let refs: Vec<&FileScan> = scans.iter().collect();
    let proposed: usize = scans
        .iter()
        .flat_map(|s| &s.findings)
        .filter(|f| f.fixable)
        .count();
    report.edits = EditTotals {
        proposed,
        applied: 0,
        skipped: proposed,
    };
    for scan in &scans {
        if let Some(err) = &scan.error {
            report.errors.push(FileIssue {
                path: scan.path.clone(),
                message: err.clone(),
            });
            continue;
        }
        if scan.non_utf8 {
            report
                .warnings
                .push(format!("{}: not valid UTF-8, skipped", scan.path));
            continue;
        }
        report.files.push(FileReport {
            path: scan.path.clone(),
            findings: finding_reports(&scan.findings, false),
        });
    }
    report.density_before = density_from_findings("before", &refs, count_findings(&refs), cfg);
    report.elapsed = start.elapsed();
    Ok(report)
}

struct FileFix {
    scan: FileScan,
    fixed_content: Option<String>,
    after_findings: Vec<Finding>,
    after_lines: u64,
    rounds: u32,
    converged: bool,
    applied: usize,
    deferred: usize,
    diff: Option<String>,
    write_error: Option<String>,
}

fn atomic_write(path: &Path, content: &str) -> std::io::Result<()> {
    let file_name = path
        .file_name()
        .map(|n| n.to_string_lossy().to_string())
        .unwrap_or_else(|| "file".to_string());
    let tmp = path.with_file_name(format!("{file_name}.lintmender.tmp"));
    std::fs::write(&tmp, content)?;
    std::fs::rename(&tmp, path)
}

/// Fixpoint-repair the corpus in place (or compute diffs in dry-run mode) and
/// report before/after densities. Exit codes are computed on the after state.
pub fn cmd_fix(cfg: &RunConfig) -> Result<RunReport, RunError> {
    let start = Instant::now();
    let files = walk(&cfg.roots, &cfg.include, &cfg.exclude)?;
    let write = cfg.mode == Mode::Fix;
    let fixes = parallel_map(&files, |p| {
        let scan = scan_file(p, &cfg.detector, cfg.line_mode);
        let mut fix = FileFix {
            fixed_content: None,
            after_findings: Vec::new(),
            after_lines: scan.lines,
            rounds: 0,
            converged: true,
            applied: 0,
            deferred: 0,
            diff: None,
            write_error: None,
            scan,
        };
        let Some(content) = fix.scan.content.clone() else {
            return fix;
        };
        let parsed = match SourceFile::parse(p, content.clone()) {
            Ok(f) => f,
            Err(e) => {
                fix.scan.error = Some(e.to_string());
                return fix;
            }
        };
        let fixers = enabled_fixers(&cfg.detector);
        match run_fixpoint(&parsed, &fixers, cfg.max_rounds) {
            Ok(outcome) => {
                fix.rounds = outcome.rounds;
                fix.converged = outcome.converged;
                fix.applied = outcome.edits_applied();
                fix.deferred = outcome.deferred_final;
                fix.after_lines = line_count(&outcome.content, cfg.line_mode);
                match SourceFile::parse(p, outcome.content.clone()) {
                    Ok(after) => fix.after_findings = detect_all(&after, &cfg.detector),
                    Err(e) => fix.scan.error = Some(format!("refused fix, output failed to lex: {e}")),
                }
                if fix.scan.error.is_none() && outcome.content != content {
                    if write {
                        if let Err(e) = atomic_write(p, &outcome.content) {
                            fix.write_error = Some(format!("write failed, original kept: {e}"));
                        }
                    } else {
                        fix.diff = Some(diff_contents(
                            &p.display().to_string(),
                            &content,
                            &outcome.content,
                        ));
                    }
                }
                fix.fixed_content = Some(outcome.content);
            }
            Err(e) => fix.scan.error = Some(e.to_string()),
        }
        fix
    });

    let mut report = RunReport::new(cfg.clone());
    let before_refs: Vec<&FileScan> = fixes.iter().map(|f| &f.scan).collect();
    report.density_before =
        density_from_findings("before", &before_refs, count_findings(&before_refs), cfg);

    let mut after_counts: BTreeMap<LintId, u64> = BTreeMap::new();
    let mut after_lines = 0u64;
    let mut after_files = 0u64;
    let mut rounds_max = 0u32;
    let mut unconverged = Vec::new();
    let mut applied = 0usize;
    let mut skipped = 0usize;
    for fix in &fixes {
        if let Some(err) = &fix.scan.error {
            report.errors.push(FileIssue {
                path: fix.scan.path.clone(),
                message: err.clone(),
            });
            continue;
        }
        if fix.scan.non_utf8 {
            report
                .warnings
                .push(format!("{}: not valid UTF-8, skipped", fix.scan.path));
            continue;
        }
        if let Some(err) = &fix.write_error {
            report.errors.push(FileIssue {
                path: fix.scan.path.clone(),
                message: err.clone(),
            });
        }
        rounds_max = rounds_max.max(fix.rounds);
        if !fix.converged {
            unconverged.push(fix.scan.path.clone());
        }
        if write && fix.write_error.is_none() {
            applied += fix.applied;
            skipped += fix.deferred;
        } else {
            skipped += fix.applied + fix.deferred;
        }
        after_files += 1;
        after_lines += fix.after_lines;
        for finding in &fix.after_findings {
            *after_counts.entry(finding.lint.clone()).or_insert(0) += 1;
        }
        let fixed_flag = write && fix.converged && fix.write_error.is_none();
        report.files.push(FileReport {
            path: fix.scan.path.clone(),
            findings: finding_reports(&fix.scan.findings, fixed_flag),
        });
        if let Some(diff) = &fix.diff {
            if !diff.is_empty() {
                report.diffs.push(DiffEntry {
                    path: fix.scan.path.clone(),
                    diff: diff.clone(),
                });
            }
        }
    }
    report.edits = EditTotals {
        proposed: applied + skipped,
        applied,
        skipped,
    };
    let after = DensityReport::new(
        "after",
        after_files,
        after_lines,
        cfg.line_mode,
        after_counts,
        cfg.top_k,
    );
    report.after_total = Some(after.total_warnings);
    if write {
        report.density_after = Some(after);
    }
    report.convergence = Some(Convergence {
        converged: unconverged.is_empty(),
        rounds_max,
        unconverged,
    });
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Where the diagnostic stream comes from.
pub enum DiagnosticsSource {
    File(PathBuf),
    Stdin(String),
    /// Output of a caller-provided command (the optional bridge to a real
    /// linter toolchain; nothing in the core requires it to exist).
    Command(String),
}

fn load_diagnostics(source: &DiagnosticsSource) -> Result<String, RunError> {
    match source {
        DiagnosticsSource::File(path) => {
            std::fs::read_to_string(path).map_err(|source| RunError::Io {
                path: path.display().to_string(),
                source,
            })
        }
        DiagnosticsSource::Stdin(content) => Ok(content.clone()),
        DiagnosticsSource::Command(cmd) => {
            let output = std::process::Command::new("sh")
                .arg("-c")
                .arg(cmd)
                .output()
                .map_err(|source| RunError::Io {
                    path: cmd.clone(),
                    source,
                })?;
            Ok(String::from_utf8_lossy(&output.stdout).into_owned())
        }
    }
}

fn resolve_diag_path(cfg: &RunConfig, name: &str) -> PathBuf {
    let raw = PathBuf::from(name);
    if raw.is_absolute() || raw.exists() {
        return raw;
    }
    match cfg.roots.first() {
        Some(root) => {
            let joined = root.join(&raw);
            if joined.exists() {
                joined
            } else {
                raw
            }
        }
        None => raw,
    }
}

/// Apply machine-applicable (and promoted) suggestions from a diagnostics
/// stream to the files they reference.
pub fn cmd_apply_diagnostics(
    cfg: &RunConfig,
    source: &DiagnosticsSource,
) -> Result<RunReport, RunError> {
    let start = Instant::now();
    let stream = load_diagnostics(source)?;
    let outcome = diagnostics::parse_stream(&stream)?;
    let mut report = RunReport::new(cfg.clone());
    report.warnings.extend(outcome.warnings.iter().cloned());

    // Read every referenced file once; unresolvable ones surface in the
    // resolution rather than failing the run.
    let mut contents: BTreeMap<String, (PathBuf, String)> = BTreeMap::new();
    let mut sizes: BTreeMap<String, usize> = BTreeMap::new();
    for diag in &outcome.diagnostics {
        for suggestion in &diag.suggestions {
            let name = suggestion.span.file.clone();
            if contents.contains_key(&name) {
                continue;
            }
            let path = resolve_diag_path(cfg, &name);
            if let Ok(content) = std::fs::read_to_string(&path) {
                sizes.insert(name.clone(), content.len());
                contents.insert(name, (path, content));
            }
        }
    }

    let policy = PromotionPolicy {
        promote: cfg.promote.clone(),
    };
    let resolution = diagnostics::to_edits(&outcome.diagnostics, &policy, &sizes);
    let write = cfg.mode != Mode::DryRun;
    let mut applied = 0usize;
    for (name, edits) in &resolution.per_file {
        let (path, content) = &contents[name];
        match apply_to_content(content, edits) {
            Ok(new_content) => {
                if write {
                    if let Err(e) = atomic_write(path, &new_content) {
                        report.errors.push(FileIssue {
                            path: name.clone(),
                            message: format!("write failed, original kept: {e}"),
                        });
                        continue;
                    }
                } else {
                    let diff = diff_contents(name, content, &new_content);
                    if !diff.is_empty() {
                        report.diffs.push(DiffEntry {
                            path: name.clone(),
                            diff,
                        });
                    }
                }
                applied += edits.len();
                report.files.push(FileReport {
                    path: name.clone(),
                    findings: edits
                        .edits()
                        .iter()
                        .map(|e| FindingReport {
                            lint: e.lint.clone(),
                            line: e.span.line,
                            lo: e.span.lo,
                            hi: e.span.hi,
                            message: e.note.clone(),
                            fixed: write,
                        })
                        .collect(),
                });
            }
            Err(e) => report.errors.push(FileIssue {
                path: name.clone(),
                message: e.to_string(),
            }),
        }
    }
    for dropped in resolution
        .skipped
        .iter()
        .chain(&resolution.unresolvable)
        .chain(&resolution.not_admitted)
    {
        report.warnings.push(format!(
            "{}:{} {}: {}",
            dropped.file, dropped.lo, dropped.lint, dropped.reason
        ));
    }
    let dropped_total =
        resolution.skipped.len() + resolution.unresolvable.len() + resolution.not_admitted.len();
    report.edits = EditTotals {
        proposed: applied + dropped_total,
        applied: if write { applied } else { 0 },
        skipped: dropped_total + if write { 0 } else { applied },
    };
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Exit code for apply-diagnostics: 0 all applied, 1 some suggestions were
/// skipped or unresolvable, 2 errors.
pub fn apply_exit_code(report: &RunReport) -> i32 {
    if !report.errors.is_empty() {
        2
    } else if report.edits.applied < report.edits.proposed {
        1
    } else {
        0
    }
}

/// Density report over the corpus (a scan without the per-file listing).
pub fn cmd_density(cfg: &RunConfig, label: &str) -> Result<DensityReport, RunError> {
    let files = walk(&cfg.roots, &cfg.include, &cfg.exclude)?;
    let scans = parallel_map(&files, |p| scan_file(p, &cfg.detector, cfg.line_mode));
    if let Some(err) = scans.iter().find_map(|s| s.error.as_ref()) {
        return Err(RunError::Usage(format!("corpus not fully scannable: {err}")));
    }
    let refs: Vec<&FileScan> = scans.iter().collect();
    let counts = count_findings(&refs);
    Ok(density_from_findings(label, &refs, counts, cfg).expect("density report"))
}

/// Densities across pre-checked-out snapshot directories, in input order.
pub fn cmd_evolve(
    cfg: &RunConfig,
    snapshots: &[(String, PathBuf)],
) -> Result<(Vec<DensityReport>, Vec<EvolutionRow>), RunError> {
    if snapshots.is_empty() {
        return Err(RunError::Usage(
            "evolve needs at least one LABEL=DIR snapshot".to_string(),
        ));
    }
    let mut reports = Vec::new();
    for (label, dir) in snapshots {
        let mut snap_cfg = cfg.clone();
        snap_cfg.roots = vec![dir.clone()];
        reports.push(cmd_density(&snap_cfg, label)?);
    }
    let series: Vec<(String, DensityReport)> = snapshots
        .iter()
        .map(|(l, _)| l.clone())
        .zip(reports.iter().cloned())
        .collect();
    let rows = crate::metrics::evolution(&series)?;
    Ok((reports, rows))
}

// ---------------------------------------------------------------------------
// rendering

fn color_enabled() -> bool {
    std::env::var_os("LINTMENDER_NO_COLOR").is_none()
}

fn paint(text: &str, code: &str) -> String {
    if color_enabled() {
        format!("\x1b[{code}m{text}\x1b[0m")
    } else {
        text.to_string()
    }
}

pub fn render_report(report: &RunReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        OutputFormat::Csv => {
            let mut out = String::from("schema,file,lint,line\n");
            for file in &report.files {
                for finding in &file.findings {
                    out.push_str(&format!(
                        "1,{},{},{}\n",
                        file.path, finding.lint, finding.line
                    ));
                }
            }
            out
        }
        OutputFormat::Text => render_report_text(report),
    }
}

fn render_density_line(report: &DensityReport) -> String {
    match report.density {
        Some(d) => format!(
            "{}: {} warnings / {} lines ({} files) = {}/KLOC (exact {})",
            report.label,
            report.total_warnings,
            report.lines,
            report.files,
            d.reported,
            d.exact.to_decimal(2)
        ),
        None => format!(
            "{}: {} warnings / 0 lines ({} files), density undefined",
            report.label, report.total_warnings, report.files
        ),
    }
}

fn render_report_text(report: &RunReport) -> String {
    let mut out = String::new();
    for file in &report.files {
        for f in &file.findings {
            let status = if f.fixed {
                paint("fixed", "32")
            } else {
                paint("found", "33")
            };
            out.push_str(&format!(
                "{}:{}: [{}] {} ({})\n",
                file.path, f.line, f.lint, f.message, status
            ));
        }
    }
    for diff in &report.diffs {
        out.push_str(&diff.diff);
        if !diff.diff.ends_with('\n') {
            out.push('\n');
        }
    }
    for warning in &report.warnings {
        out.push_str(&format!("{} {}\n", paint("warning:", "33"), warning));
    }
    for error in &report.errors {
        out.push_str(&format!(
            "{} {}: {}\n",
            paint("error:", "31"),
            error.path,
            error.message
        ));
    }
    out.push_str(&format!(
        "findings: {}  edits: {} proposed, {} applied, {} skipped\n",
        report.total_findings(),
        report.edits.proposed,
        report.edits.applied,
        report.edits.skipped
    ));
    if let Some(before) = &report.density_before {
        out.push_str(&render_density_line(before));
        out.push('\n');
    }
    if let Some(after) = &report.density_after {
        out.push_str(&render_density_line(after));
        out.push('\n');
    }
    if let Some(convergence) = &report.convergence {
        if convergence.converged {
            out.push_str(&format!(
                "fixpoint converged (max {} rounds)\n",
                convergence.rounds_max
            ));
        } else {
            out.push_str(&format!(
                "fixpoint did NOT converge for {} file(s): {}\n",
                convergence.unconverged.len(),
                convergence.unconverged.join(", ")
            ));
        }
    }
    out
}

const DENSITY_CSV_HEADER: &str =
    "schema,label,files,lines,line_mode,total_warnings,density_reported,density_exact\n";

fn density_csv_row(report: &DensityReport) -> String {
    let (reported, exact) = match report.density {
        Some(d) => (d.reported.to_string(), d.exact.to_decimal(4)),
        None => ("".to_string(), "".to_string()),
    };
    format!(
        "1,{},{},{},{},{},{},{}\n",
        report.label,
        report.files,
        report.lines,
        report.line_mode.as_str(),
        report.total_warnings,
        reported,
        exact
    )
}

pub fn render_density(report: &DensityReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("density serializes");
            s.push('\n');
            s
        }
        OutputFormat::Csv => format!("{DENSITY_CSV_HEADER}{}", density_csv_row(report)),
        OutputFormat::Text => {
            let mut out = render_density_line(report);
            out.push('\n');
            for (lint, count) in &report.warnings_by_lint {
                out.push_str(&format!("  {lint}: {count}\n"));
            }
            for share in &report.top_shares {
                out.push_str(&format!(
                    "  top: {} = {} (cumulative {})\n",
                    share.lint,
                    share.count,
                    share.cumulative.to_decimal(4)
                ));
            }
            out
        }
    }
}

pub fn render_evolution(reports: &[DensityReport], format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(reports).expect("reports serialize");
            s.push('\n');
            s
        }
        OutputFormat::Csv => {
            let mut out = String::from(DENSITY_CSV_HEADER);
            for report in reports {
                out.push_str(&density_csv_row(report));
            }
            out
        }
        OutputFormat::Text => {
            let mut out = String::new();
            for report in reports {
                out.push_str(&render_density_line(report));
                out.push('\n');
            }
            out
        }
    }
}
