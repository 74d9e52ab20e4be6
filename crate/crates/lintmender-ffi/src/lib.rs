//! C ABI over the lintmender core.
//!
//! The surface is string-in/string-out: callers hand over file contents and
//! receive findings as JSON, fixed contents, unified diffs, or decimal
//! strings. Every function returns an [`LmStatus`]; on failure
//! [`lm_last_error`] carries a message for the calling thread. All returned
//! strings are released with [`lm_string_free`].

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lintmender::detect::{detect_all, enabled_fixers, DetectorConfig, LintId};
use lintmender::diagnostics::{parse_stream, to_edits, PromotionPolicy};
use lintmender::metrics::density;
use lintmender::rewrite::{apply_to_content, diff_contents, run_fixpoint};
use lintmender::source::SourceFile;

/// Status codes for every `lm_*` call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LmStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    InvalidConfig = 3,
    LexError = 4,
    ParseError = 5,
    EditError = 6,
    DensityUndefined = 7,
    Panic = 8,
}

/// Detection and repair options. Opaque: create with `lm_options_new`,
/// configure with the setters, release with `lm_options_free`.
pub struct LmOptions {
    detector: DetectorConfig,
    promote: Vec<LintId>,
    max_rounds: u32,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).ok();
    });
}

fn clear_error() {
    LAST_ERROR.with(|slot| slot.borrow_mut().take());
}

/// Last error message for this thread, or null. Caller owns the string.
#[no_mangle]
pub extern "C" fn lm_last_error() -> *mut c_char {
    LAST_ERROR.with(|slot| match &*slot.borrow() {
        Some(msg) => msg.clone().into_raw(),
        None => ptr::null_mut(),
    })
}

/// Release a string returned by any `lm_*` function.
///
/// # Safety
/// `s` must be null or a pointer previously returned by this library.
#[no_mangle]
pub unsafe extern "C" fn lm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn lm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

#[no_mangle]
pub extern "C" fn lm_options_new() -> *mut LmOptions {
    clear_error();
    Box::into_raw(Box::new(LmOptions {
        detector: DetectorConfig::default(),
        promote: Vec::new(),
        max_rounds: 8,
    }))
}

/// # Safety
/// `opts` must be null or a pointer from `lm_options_new`.
#[no_mangle]
pub unsafe extern "C" fn lm_options_free(opts: *mut LmOptions) {
    if !opts.is_null() {
        drop(Box::from_raw(opts));
    }
}

unsafe fn borrow_str<'a>(p: *const c_char) -> Result<&'a str, LmStatus> {
    if p.is_null() {
        set_error("null string argument".to_string());
        return Err(LmStatus::NullArgument);
    }
    CStr::from_ptr(p).to_str().map_err(|e| {
        set_error(format!("argument is not valid UTF-8: {e}"));
        LmStatus::InvalidUtf8
    })
}

unsafe fn borrow_opts<'a>(opts: *mut LmOptions) -> Result<&'a mut LmOptions, LmStatus> {
    if opts.is_null() {
        set_error("null options handle".to_string());
        return Err(LmStatus::NullArgument);
    }
    Ok(&mut *opts)
}

fn write_out(s: String, out: *mut *mut c_char) -> LmStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            LmStatus::Ok
        }
        Err(_) => {
            set_error("output contains a NUL byte".to_string());
            LmStatus::EditError
        }
    }
}

fn guard(body: impl FnOnce() -> LmStatus) -> LmStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic in native code".to_string());
            set_error(msg);
            LmStatus::Panic
        }
    }
}

unsafe fn string_setter(
    opts: *mut LmOptions,
    value: *const c_char,
    apply: impl FnOnce(&mut LmOptions, &str) -> Result<(), String>,
) -> LmStatus {
    guard(|| {
        let (opts, value) = match (borrow_opts(opts), borrow_str(value)) {
            (Ok(o), Ok(v)) => (o, v),
            (Err(e), _) | (_, Err(e)) => return e,
        };
        match apply(opts, value) {
            Ok(()) => LmStatus::Ok,
            Err(msg) => {
                set_error(msg);
                LmStatus::InvalidConfig
            }
        }
    })
}

/// Suffix appended to unsuffixed integer literals (default `i32`).
///
/// # Safety
/// `opts` comes from `lm_options_new`; `value` is a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn lm_options_set_int_suffix(
    opts: *mut LmOptions,
    value: *const c_char,
) -> LmStatus {
    string_setter(opts, value, |opts, value| {
        let mut candidate = opts.detector.clone();
        candidate.int_suffix = value.to_string();
        candidate.validate()?;
        opts.detector = candidate;
        Ok(())
    })
}

/// Suffix appended to unsuffixed float literals (default `f64`).
///
/// # Safety
/// `opts` comes from `lm_options_new`; `value` is a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn lm_options_set_float_suffix(
    opts: *mut LmOptions,
    value: *const c_char,
) -> LmStatus {
    string_setter(opts, value, |opts, value| {
        let mut candidate = opts.detector.clone();
        candidate.float_suffix = value.to_string();
        candidate.validate()?;
        opts.detector = candidate;
        Ok(())
    })
}

/// Comment body inserted above undocumented unsafe blocks.
///
/// # Safety
/// `opts` comes from `lm_options_new`; `value` is a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn lm_options_set_safety_comment(
    opts: *mut LmOptions,
    value: *const c_char,
) -> LmStatus {
    string_setter(opts, value, |opts, value| {
        opts.detector.safety_comment = value.to_string();
        Ok(())
    })
}

/// Comma-separated subset of the native lints to run.
///
/// # Safety
/// `opts` comes from `lm_options_new`; `value` is a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn lm_options_set_lints(
    opts: *mut LmOptions,
    value: *const c_char,
) -> LmStatus {
    string_setter(opts, value, |opts, value| {
        let native = LintId::native();
        let mut enabled = std::collections::BTreeSet::new();
        for name in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let lint = LintId::other(name);
            if !native.contains(&lint) {
                return Err(format!("unknown lint `{name}`"));
            }
            enabled.insert(lint);
        }
        opts.detector.enabled = enabled;
        Ok(())
    })
}

/// Comma-separated lints whose suggestions are applied regardless of their
/// applicability tag.
///
/// # Safety
/// `opts` comes from `lm_options_new`; `value` is a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn lm_options_set_promote(
    opts: *mut LmOptions,
    value: *const c_char,
) -> LmStatus {
    string_setter(opts, value, |opts, value| {
        opts.promote = value
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(LintId::other)
            .collect();
        Ok(())
    })
}

/// # Safety
/// `opts` comes from `lm_options_new`.
#[no_mangle]
pub unsafe extern "C" fn lm_options_set_public_only_debug(
    opts: *mut LmOptions,
    value: bool,
) -> LmStatus {
    guard(|| match borrow_opts(opts) {
        Ok(o) => {
            o.detector.public_only_debug = value;
            LmStatus::Ok
        }
        Err(e) => e,
    })
}

/// # Safety
/// `opts` comes from `lm_options_new`.
#[no_mangle]
pub unsafe extern "C" fn lm_options_set_assume_integer_idents(
    opts: *mut LmOptions,
    value: bool,
) -> LmStatus {
    guard(|| match borrow_opts(opts) {
        Ok(o) => {
            o.detector.assume_integer_idents = value;
            LmStatus::Ok
        }
        Err(e) => e,
    })
}

/// # Safety
/// `opts` comes from `lm_options_new`.
#[no_mangle]
pub unsafe extern "C" fn lm_options_set_max_rounds(opts: *mut LmOptions, rounds: u32) -> LmStatus {
    guard(|| match borrow_opts(opts) {
        Ok(o) => {
            if rounds == 0 {
                set_error("max rounds must be at least 1".to_string());
                return LmStatus::InvalidConfig;
            }
            o.max_rounds = rounds;
            LmStatus::Ok
        }
        Err(e) => e,
    })
}

fn parse_source(name: &str, content: &str) -> Result<SourceFile, LmStatus> {
    SourceFile::parse(name, content).map_err(|e| {
        set_error(e.to_string());
        LmStatus::LexError
    })
}

/// Detect findings in one file. `out_json` receives a JSON array of
/// `{lint, line, lo, hi, message, fixable}` objects.
///
/// # Safety
/// Pointer arguments follow the crate-wide rules: `opts` from
/// `lm_options_new`, strings NUL-terminated, `out_json` a valid location.
#[no_mangle]
pub unsafe extern "C" fn lm_scan(
    opts: *mut LmOptions,
    name: *const c_char,
    content: *const c_char,
    out_json: *mut *mut c_char,
) -> LmStatus {
    guard(|| {
        if out_json.is_null() {
            set_error("null output pointer".to_string());
            return LmStatus::NullArgument;
        }
        let (opts, name, content) = match (borrow_opts(opts), borrow_str(name), borrow_str(content)) {
            (Ok(o), Ok(n), Ok(c)) => (o, n, c),
            (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => return e,
        };
        let file = match parse_source(name, content) {
            Ok(f) => f,
            Err(e) => return e,
        };
        let findings: Vec<serde_json::Value> = detect_all(&file, &opts.detector)
            .into_iter()
            .map(|f| {
                serde_json::json!({
                    "lint": f.lint.as_str(),
                    "line": f.span.line,
                    "lo": f.span.lo,
                    "hi": f.span.hi,
                    "message": f.message,
                    "fixable": f.fixable,
                })
            })
            .collect();
        write_out(serde_json::Value::Array(findings).to_string(), out_json)
    })
}

/// Repair one file's contents to a fixpoint. `out_content` receives the fixed
/// text; `out_rounds` and `out_converged` report how the fixpoint ended.
///
/// # Safety
/// Pointer arguments follow the crate-wide rules.
#[no_mangle]
pub unsafe extern "C" fn lm_fix(
    opts: *mut LmOptions,
    name: *const c_char,
    content: *const c_char,
    out_content: *mut *mut c_char,
    out_rounds: *mut u32,
    out_converged: *mut bool,
) -> LmStatus {
    guard(|| {
        if out_content.is_null() {
            set_error("null output pointer".to_string());
            return LmStatus::NullArgument;
        }
        let (opts, name, content) = match (borrow_opts(opts), borrow_str(name), borrow_str(content)) {
            (Ok(o), Ok(n), Ok(c)) => (o, n, c),
            (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => return e,
        };
        let file = match parse_source(name, content) {
            Ok(f) => f,
            Err(e) => return e,
        };
        let fixers = enabled_fixers(&opts.detector);
        match run_fixpoint(&file, &fixers, opts.max_rounds) {
            Ok(outcome) => {
                if !out_rounds.is_null() {
                    *out_rounds = outcome.rounds;
                }
                if !out_converged.is_null() {
                    *out_converged = outcome.converged;
                }
                write_out(outcome.content, out_content)
            }
            Err(e) => {
                set_error(e.to_string());
                LmStatus::EditError
            }
        }
    })
}

/// Unified diff between `content` and its fixed form (empty string when
/// nothing changes).
///
/// # Safety
/// Pointer arguments follow the crate-wide rules.
#[no_mangle]
pub unsafe extern "C" fn lm_diff(
    opts: *mut LmOptions,
    name: *const c_char,
    content: *const c_char,
    out_diff: *mut *mut c_char,
) -> LmStatus {
    guard(|| {
        if out_diff.is_null() {
            set_error("null output pointer".to_string());
            return LmStatus::NullArgument;
        }
        let (opts, name, content) = match (borrow_opts(opts), borrow_str(name), borrow_str(content)) {
            (Ok(o), Ok(n), Ok(c)) => (o, n, c),
            (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => return e,
        };
        let file = match parse_source(name, content) {
            Ok(f) => f,
            Err(e) => return e,
        };
        let fixers = enabled_fixers(&opts.detector);
        match run_fixpoint(&file, &fixers, opts.max_rounds) {
            Ok(outcome) => write_out(diff_contents(name, content, &outcome.content), out_diff),
            Err(e) => {
                set_error(e.to_string());
                LmStatus::EditError
            }
        }
    })
}

/// Apply a diagnostics stream's admissible suggestions for one named file to
/// `content`. Machine-applicable suggestions always apply; promoted lints
/// apply regardless of their tag. `out_applied`/`out_skipped` receive the
/// suggestion counts (skipped includes other files' suggestions).
///
/// # Safety
/// Pointer arguments follow the crate-wide rules.
#[no_mangle]
pub unsafe extern "C" fn lm_apply_suggestions(
    opts: *mut LmOptions,
    stream: *const c_char,
    file_name: *const c_char,
    content: *const c_char,
    out_content: *mut *mut c_char,
    out_applied: *mut usize,
    out_skipped: *mut usize,
) -> LmStatus {
    guard(|| {
        if out_content.is_null() {
            set_error("null output pointer".to_string());
            return LmStatus::NullArgument;
        }
        let (opts, stream, file_name, content) = match (
            borrow_opts(opts),
            borrow_str(stream),
            borrow_str(file_name),
            borrow_str(content),
        ) {
            (Ok(o), Ok(s), Ok(f), Ok(c)) => (o, s, f, c),
            (Err(e), _, _, _) | (_, Err(e), _, _) | (_, _, Err(e), _) | (_, _, _, Err(e)) => {
                return e
            }
        };
        let outcome = match parse_stream(stream) {
            Ok(o) => o,
            Err(e) => {
                set_error(e.to_string());
                return LmStatus::ParseError;
            }
        };
        let sizes: BTreeMap<String, usize> =
            [(file_name.to_string(), content.len())].into_iter().collect();
        let policy = PromotionPolicy::promoting(opts.promote.iter().cloned());
        let resolution = to_edits(&outcome.diagnostics, &policy, &sizes);
        let skipped = resolution.skipped.len()
            + resolution.unresolvable.len()
            + resolution.not_admitted.len();
        let new_content = match resolution.per_file.get(file_name) {
            Some(edits) => match apply_to_content(content, edits) {
                Ok(c) => c,
                Err(e) => {
                    set_error(e.to_string());
                    return LmStatus::EditError;
                }
            },
            None => content.to_string(),
        };
        if !out_applied.is_null() {
            *out_applied = resolution.included;
        }
        if !out_skipped.is_null() {
            *out_skipped = skipped;
        }
        write_out(new_content, out_content)
    })
}

/// Warnings-per-KLOC. `out_reported` receives the truncated integer;
/// `out_exact` a 4-decimal string.
///
/// # Safety
/// Out-pointers must be valid locations or null.
#[no_mangle]
pub unsafe extern "C" fn lm_density(
    warnings: u64,
    lines: u64,
    out_reported: *mut u64,
    out_exact: *mut *mut c_char,
) -> LmStatus {
    guard(|| match density(warnings, lines) {
        Ok(d) => {
            if !out_reported.is_null() {
                *out_reported = d.reported;
            }
            if !out_exact.is_null() {
                return write_out(d.exact.to_decimal(4), out_exact);
            }
            LmStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            LmStatus::DensityUndefined
        }
    })
}
