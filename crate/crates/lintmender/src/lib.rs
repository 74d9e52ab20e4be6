//! Detection, automatic repair, and density reporting for high-frequency
//! linter warnings in Rust-like sources.
//!
//! The crate is organized around a few small stages:
//!
//! - [`source`] — lossless tokens and token trees with byte-exact spans.
//! - [`rewrite`] — span edits, unified diffs, and fixpoint-driven repair.
//! - [`detect`] — native detectors/fixers for the four warning categories the
//!   tool repairs out of the box.
//! - [`diagnostics`] — ingestion of linter JSON streams and promotion of
//!   suggestion applicability.
//! - [`metrics`] — warnings-per-KLOC density, skew shares, and comparison
//!   tables.
//! - [`runner`] — corpus walking and the command implementations behind the
//!   `lintmender` binary.

pub mod detect;
pub mod diagnostics;
pub mod metrics;
pub mod rewrite;
pub mod runner;
pub mod source;

pub use detect::{detect_all, DetectorConfig, Finding, LintId};
pub use diagnostics::{parse_stream, to_edits, Applicability, Diagnostic, PromotionPolicy};
pub use metrics::{compare, density, evolution, top_shares, DensityReport, Ratio};
pub use rewrite::{apply_edits, run_fixpoint, to_diff, Edit, EditSet, Fixer, RewriteError};
pub use source::{LineMode, SourceError, SourceFile, Span, Token, TokenKind, TokenTree};
