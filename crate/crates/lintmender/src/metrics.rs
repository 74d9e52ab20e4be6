//! Warning-density and distribution metrics.
//!
//! Densities and shares are computed in exact rational arithmetic and only
//! rendered to decimal strings at the edge, so reports are deterministic and
//! comparisons never depend on float rounding. The reported (integer) density
//! truncates toward zero; the exact value is always carried alongside.

use std::collections::BTreeMap;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::detect::LintId;
use crate::source::LineMode;

/// Exact non-negative rational. Comparison and equality cross-multiply, so
/// `6/10 == 3/5` holds without normalizing.
#[derive(Debug, Clone, Copy)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Ratio {
        assert!(den > 0, "rational denominator must be positive");
        Ratio { num, den }
    }

    pub fn zero() -> Ratio {
        Ratio { num: 0, den: 1 }
    }

    pub fn one() -> Ratio {
        Ratio { num: 1, den: 1 }
    }

    /// Truncation toward zero.
    pub fn trunc(&self) -> u64 {
        self.num / self.den
    }

    /// Fixed-point decimal string, rounded half-up at `places`.
    pub fn to_decimal(&self, places: u32) -> String {
        let scale = 10u128.pow(places);
        let scaled = self.num as u128 * scale;
        let mut q = scaled / self.den as u128;
        let r = scaled % self.den as u128;
        if r * 2 >= self.den as u128 {
            q += 1;
        }
        if places == 0 {
            return q.to_string();
        }
        format!("{}.{:0width$}", q / scale, q % scale, width = places as usize)
    }
}

impl PartialEq for Ratio {
    fn eq(&self, other: &Ratio) -> bool {
        self.num as u128 * other.den as u128 == other.num as u128 * self.den as u128
    }
}

impl Eq for Ratio {}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Ratio) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Ratio) -> std::cmp::Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("density is undefined for zero lines")]
    ZeroLines,
    #[error("warning count too large to scale to KLOC")]
    CountOverflow,
    #[error("duplicate snapshot label `{0}`")]
    DuplicateLabel(String),
}

/// Warnings per KLOC: the exact rational and the truncated integer the
/// headline numbers use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Density {
    pub exact: Ratio,
    pub reported: u64,
}

impl Serialize for Density {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Density", 4)?;
        s.serialize_field("num", &self.exact.num)?;
        s.serialize_field("den", &self.exact.den)?;
        s.serialize_field("exact", &self.exact.to_decimal(4))?;
        s.serialize_field("reported", &self.reported)?;
        s.end()
    }
}

/// warnings × 1000 / lines.
pub fn density(warnings: u64, lines: u64) -> Result<Density, MetricsError> {
    if lines == 0 {
        return Err(MetricsError::ZeroLines);
    }
    let per_kloc = warnings
        .checked_mul(1000)
        .ok_or(MetricsError::CountOverflow)?;
    let exact = Ratio::new(per_kloc, lines);
    Ok(Density {
        reported: exact.trunc(),
        exact,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShareRow {
    pub lint: LintId,
    pub count: u64,
    /// Running share of the total, in [0, 1].
    pub cumulative: Ratio,
}

impl Serialize for ShareRow {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("ShareRow", 3)?;
        s.serialize_field("lint", &self.lint)?;
        s.serialize_field("count", &self.count)?;
        s.serialize_field("cumulative", &self.cumulative.to_decimal(4))?;
        s.end()
    }
}

/// Top-k lints by count (ties broken by name) with cumulative share of the
/// total. An empty or all-zero count map yields no rows.
pub fn top_shares(counts: &BTreeMap<LintId, u64>, k: usize) -> Vec<ShareRow> {
    let total: u64 = counts.values().sum();
    if total == 0 || k == 0 {
        return Vec::new();
    }
    let mut rows: Vec<(&LintId, u64)> = counts.iter().map(|(l, &c)| (l, c)).collect();
    rows.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let mut running = 0u64;
    rows.into_iter()
        .take(k)
        .map(|(lint, count)| {
            running += count;
            ShareRow {
                lint: lint.clone(),
                count,
                cumulative: Ratio::new(running, total),
            }
        })
        .collect()
}

/// Per-corpus counts, lines, density, and skew shares; diffable before/after.
#[derive(Debug, Clone, Serialize)]
pub struct DensityReport {
    pub label: String,
    pub files: u64,
    pub lines: u64,
    pub line_mode: LineMode,
    pub warnings_by_lint: BTreeMap<LintId, u64>,
    pub total_warnings: u64,
    /// Absent when the corpus has zero lines.
    pub density: Option<Density>,
    pub top_shares: Vec<ShareRow>,
}

impl DensityReport {
    pub fn new(
        label: impl Into<String>,
        files: u64,
        lines: u64,
        line_mode: LineMode,
        warnings_by_lint: BTreeMap<LintId, u64>,
        top_k: usize,
    ) -> DensityReport {
        let total_warnings: u64 = warnings_by_lint.values().sum();
        let density = density(total_warnings, lines).ok();
        let top_shares = top_shares(&warnings_by_lint, top_k);
        DensityReport {
            label: label.into(),
            files,
            lines,
            line_mode,
            warnings_by_lint,
            total_warnings,
            density,
            top_shares,
        }
    }

    pub fn count_for(&self, lint: &LintId) -> u64 {
        self.warnings_by_lint.get(lint).copied().unwrap_or(0)
    }
}

/// Relative change between the last two corpora of a comparison row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Reduction {
    /// previous − last; positive means fewer warnings.
    pub delta: i128,
    pub base: u64,
}

impl Reduction {
    /// Signed percentage, one decimal, rounded half-up on the magnitude.
    pub fn percent(&self) -> String {
        let negative = self.delta < 0;
        let magnitude = self.delta.unsigned_abs();
        let scaled = magnitude * 1000 / self.base as u128;
        let rem = magnitude * 1000 % self.base as u128;
        let mut scaled = scaled;
        if rem * 2 >= self.base as u128 {
            scaled += 1;
        }
        format!(
            "{}{}.{}%",
            if negative { "-" } else { "" },
            scaled / 10,
            scaled % 10
        )
    }
}

impl Serialize for Reduction {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.percent())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SummaryRow {
    pub label: String,
    pub warnings: u64,
    pub lines: u64,
    pub density_reported: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LintRow {
    pub lint: LintId,
    pub counts: Vec<u64>,
    /// Change between the last two columns, when there are at least two and
    /// the earlier count is nonzero.
    pub reduction: Option<Reduction>,
}

/// Side-by-side corpora: one summary row per corpus plus per-lint count rows
/// in the given lint order, with a totals row appended.
#[derive(Debug, Clone, Serialize)]
pub struct ComparisonTable {
    pub labels: Vec<String>,
    pub summary: Vec<SummaryRow>,
    pub lint_rows: Vec<LintRow>,
    pub totals: Vec<u64>,
}

pub fn compare(reports: &[DensityReport], lints: &[LintId]) -> ComparisonTable {
    let labels: Vec<String> = reports.iter().map(|r| r.label.clone()).collect();
    let summary = reports
        .iter()
        .map(|r| SummaryRow {
            label: r.label.clone(),
            warnings: r.total_warnings,
            lines: r.lines,
            density_reported: r.density.map(|d| d.reported),
        })
        .collect();
    let lint_rows = lints
        .iter()
        .map(|lint| {
            let counts: Vec<u64> = reports.iter().map(|r| r.count_for(lint)).collect();
            let reduction = match counts.len() {
                n if n >= 2 => {
                    let prev = counts[n - 2];
                    let last = counts[n - 1];
                    (prev > 0).then_some(Reduction {
                        delta: prev as i128 - last as i128,
                        base: prev,
                    })
                }
                _ => None,
            };
            LintRow {
                lint: lint.clone(),
                counts,
                reduction,
            }
        })
        .collect();
    let totals = reports.iter().map(|r| r.total_warnings).collect();
    ComparisonTable {
        labels,
        summary,
        lint_rows,
        totals,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EvolutionRow {
    pub label: String,
    pub total_warnings: u64,
    pub density_reported: Option<u64>,
}

/// Time-series rows over labeled snapshots, in input order.
pub fn evolution(series: &[(String, DensityReport)]) -> Result<Vec<EvolutionRow>, MetricsError> {
    let mut seen = std::collections::BTreeSet::new();
    for (label, _) in series {
        if !seen.insert(label.clone()) {
            return Err(MetricsError::DuplicateLabel(label.clone()));
        }
    }
    Ok(series
        .iter()
        .map(|(label, report)| EvolutionRow {
            label: label.clone(),
            total_warnings: report.total_warnings,
            density_reported: report.density.map(|d| d.reported),
        })
        .collect())
}
