//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its measured result. Run with `cargo test -p lintmender --test acceptance`
//! (add `-- --nocapture` to see the PASS lines).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use lintmender::detect::{detect_arithmetic, DetectorConfig, LintId};
use lintmender::metrics::{compare, density, top_shares, Ratio};
use lintmender::rewrite::{apply_edits, EditSet};
use lintmender::runner::{
    cmd_apply_diagnostics, cmd_fix, cmd_scan, render_report, DiagnosticsSource, Mode,
    OutputFormat, RunConfig,
};
use lintmender::source::{tokenize, SourceFile};

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus")
}

/// Ground truth fixed when the corpus was constructed:
/// (file, numeric_fallback, arithmetic, unsafe_blocks, missing_debug).
const CORPUS_MANIFEST: &[(&str, u64, u64, u64, u64)] = &[
    ("arith_compound.rs", 0, 5, 0, 0),
    ("arith_figures.rs", 3, 3, 0, 0),
    ("arith_mixed.rs", 2, 3, 0, 0),
    ("arith_nested.rs", 0, 4, 0, 0),
    ("arith_ops.rs", 0, 5, 0, 0),
    ("clean_annotated.rs", 0, 0, 0, 0),
    ("clean_compact.rs", 0, 0, 0, 0),
    ("clean_strings.rs", 0, 0, 0, 0),
    ("clean_suffixed.rs", 0, 0, 0, 0),
    ("clean_traits.rs", 0, 0, 0, 0),
    ("clean_unicode.rs", 0, 0, 0, 0),
    ("debug_enums.rs", 0, 0, 0, 2),
    ("debug_generic.rs", 0, 0, 0, 1),
    ("debug_nested.rs", 0, 0, 0, 2),
    ("debug_structs.rs", 0, 0, 0, 3),
    ("numeric_arrays.rs", 5, 0, 0, 0),
    ("numeric_calls.rs", 4, 0, 0, 0),
    ("numeric_floats.rs", 5, 0, 0, 0),
    ("numeric_lets.rs", 6, 0, 0, 0),
    ("numeric_returns.rs", 5, 0, 0, 0),
    ("unsafe_cell.rs", 0, 0, 3, 0),
    ("unsafe_ffi.rs", 0, 0, 3, 0),
    ("unsafe_ptrs.rs", 0, 0, 4, 0),
];

const SEEDED_NUMERIC: u64 = 30;
const SEEDED_ARITH: u64 = 20;
const SEEDED_UNSAFE: u64 = 10;
const SEEDED_DEBUG: u64 = 8;

fn copy_corpus(into: &Path) {
    for entry in std::fs::read_dir(corpus_dir()).unwrap() {
        let entry = entry.unwrap();
        std::fs::copy(entry.path(), into.join(entry.file_name())).unwrap();
    }
}

fn lint_count(counts: &BTreeMap<LintId, u64>, name: &str) -> u64 {
    counts.get(&LintId::other(name)).copied().unwrap_or(0)
}

struct XorShift(u64);

impl XorShift {
    fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x.wrapping_mul(0x2545F4914F6CDD1D)
    }

    fn pick<'a, T>(&mut self, pool: &'a [T]) -> &'a T {
        &pool[(self.next() as usize) % pool.len()]
    }

    fn range_i32(&mut self, lo: i32, hi: i32) -> i32 {
        lo + ((self.next() % (hi - lo) as u64) as i32)
    }
}

fn random_token_file(rng: &mut XorShift) -> String {
    const IDENTS: &[&str] = &["alpha", "beta", "x1", "_tmp", "total", "idx", "väl"];
    const KEYWORDS: &[&str] = &["let", "fn", "struct", "unsafe", "return", "as", "match", "pub"];
    const PUNCTS: &[&str] = &[
        "+", "-", "*", "/", "%", "+=", "-=", "::", "->", "=>", "==", "..=", "<<=", ";", ",", ".",
        "#", "!", "?", "&",
    ];
    const DELIMS: &[&str] = &["(", ")", "[", "]", "{", "}"];
    const STRINGS: &[&str] = &[
        "\"plain\"",
        "\"esc \\\" ape\\\\\"",
        "r#\"raw \"str\"\"#",
        "b\"bytes\"",
        "'c'",
        "'\\n'",
        "'static",
    ];
    const COMMENTS: &[&str] = &["// note 42", "/* block /* nested */ done */", "/// doc"];
    const WS: &[&str] = &[" ", "\n", "\t", "  ", "\n\n"];
    let n = 1 + (rng.next() % 80) as usize;
    let mut out = String::new();
    for _ in 0..n {
        match rng.next() % 8 {
            0 => out.push_str(rng.pick(IDENTS)),
            1 => out.push_str(rng.pick(KEYWORDS)),
            2 => {
                // numeric literal in assorted bases and suffixes
                match rng.next() % 4 {
                    0 => out.push_str(&format!("{}", rng.next() % 100_000)),
                    1 => out.push_str(&format!("0x{:x}_u32", rng.next() % 0xFFFF)),
                    2 => out.push_str(&format!("{}.{}", rng.next() % 100, rng.next() % 100)),
                    _ => out.push_str(&format!("{}_i64", rng.next() % 1000)),
                }
            }
            3 => out.push_str(rng.pick(PUNCTS)),
            4 => out.push_str(rng.pick(DELIMS)),
            5 => out.push_str(rng.pick(STRINGS)),
            6 => out.push_str(rng.pick(COMMENTS)),
            _ => out.push_str(rng.pick(IDENTS)),
        }
        out.push_str(rng.pick(WS));
    }
    out
}

#[test]
fn criterion_01_lossless_lexing() {
    let started = Instant::now();
    let mut checked = 0usize;
    for entry in std::fs::read_dir(corpus_dir()).unwrap() {
        let path = entry.unwrap().path();
        let content = std::fs::read_to_string(&path).unwrap();
        let tokens = tokenize(&content).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let concat: String = tokens.iter().map(|t| t.text.as_str()).collect();
        assert_eq!(concat, content, "{} does not round-trip", path.display());
        checked += 1;
    }
    assert!(checked >= 20, "bundled corpus must hold at least 20 files");
    let mut rng = XorShift(0x1EC5_BEEF_0451_7EA1);
    for i in 0..1000 {
        let content = random_token_file(&mut rng);
        let tokens = tokenize(&content).unwrap_or_else(|e| panic!("generated file {i}: {e}\n{content}"));
        let concat: String = tokens.iter().map(|t| t.text.as_str()).collect();
        assert_eq!(concat, content, "generated file {i} does not round-trip");
        let mut cursor = 0;
        for t in &tokens {
            assert_eq!(t.span.lo, cursor);
            cursor = t.span.hi;
        }
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs_f64() < 5.0,
        "round-trip of corpus + 1000 files took {elapsed:?}"
    );
    println!(
        "acceptance 01 lossless-lexing: PASS ({} corpus files + 1000 generated in {elapsed:?})",
        checked
    );
}

fn arith_only_config() -> DetectorConfig {
    DetectorConfig {
        enabled: [LintId::arithmetic()].into_iter().collect(),
        ..DetectorConfig::default()
    }
}

fn rewrite_arith(src: &str) -> String {
    let file = SourceFile::parse("fid.rs", src).unwrap();
    let findings = detect_arithmetic(&file, &arith_only_config());
    let edits: Vec<_> = findings.into_iter().filter_map(|f| f.fix).flatten().collect();
    apply_edits(&file, &EditSet::new(edits).unwrap()).unwrap()
}

#[test]
fn criterion_02_rule_fidelity() {
    assert_eq!(rewrite_arith("i += 1;"), "i = i.wrapping_add(1);");
    assert_eq!(rewrite_arith("n /= p;"), "n = n.wrapping_div(p);");
    // surrounding whitespace is preserved byte for byte
    assert_eq!(
        rewrite_arith("fn f(mut i: i32) {\n    i += 1;\n}\n"),
        "fn f(mut i: i32) {\n    i = i.wrapping_add(1);\n}\n"
    );
    assert_eq!(
        rewrite_arith("fn g(mut n: i32, p: i32) {\n    n /= p;\n}\n"),
        "fn g(mut n: i32, p: i32) {\n    n = n.wrapping_div(p);\n}\n"
    );
    println!("acceptance 02 rewrite-rule-fidelity: PASS (both statement rewrites byte-exact)");
}

#[test]
fn criterion_03_seeded_corpus_counts() {
    let tmp = tempfile::tempdir().unwrap();
    copy_corpus(tmp.path());
    let mut cfg = RunConfig::new(vec![tmp.path().to_path_buf()]);
    let report = cmd_scan(&cfg).unwrap();
    assert!(report.errors.is_empty(), "{:?}", report.errors);

    // per-file ground truth from corpus construction
    for (name, numeric, arith, unsafe_blocks, debug) in CORPUS_MANIFEST {
        let file = report
            .files
            .iter()
            .find(|f| f.path.ends_with(name))
            .unwrap_or_else(|| panic!("{name} missing from scan"));
        let mut counts: BTreeMap<&str, u64> = BTreeMap::new();
        for finding in &file.findings {
            *counts.entry(finding.lint.as_str()).or_insert(0) += 1;
        }
        let get = |lint: &str| counts.get(lint).copied().unwrap_or(0);
        assert_eq!(get(LintId::NUMERIC_FALLBACK), *numeric, "{name} numeric");
        assert_eq!(get(LintId::ARITHMETIC), *arith, "{name} arithmetic");
        assert_eq!(get(LintId::UNSAFE_BLOCKS), *unsafe_blocks, "{name} unsafe");
        assert_eq!(get(LintId::MISSING_DEBUG), *debug, "{name} debug");
    }

    let before = report.density_before.as_ref().unwrap();
    assert_eq!(lint_count(&before.warnings_by_lint, LintId::NUMERIC_FALLBACK), SEEDED_NUMERIC);
    assert_eq!(lint_count(&before.warnings_by_lint, LintId::ARITHMETIC), SEEDED_ARITH);
    assert_eq!(lint_count(&before.warnings_by_lint, LintId::UNSAFE_BLOCKS), SEEDED_UNSAFE);
    assert_eq!(lint_count(&before.warnings_by_lint, LintId::MISSING_DEBUG), SEEDED_DEBUG);

    cfg.mode = Mode::Fix;
    let fix_report = cmd_fix(&cfg).unwrap();
    assert!(fix_report.errors.is_empty(), "{:?}", fix_report.errors);

    let rescan = cmd_scan(&RunConfig::new(vec![tmp.path().to_path_buf()])).unwrap();
    let after = rescan.density_before.as_ref().unwrap();
    let numeric_after = lint_count(&after.warnings_by_lint, LintId::NUMERIC_FALLBACK);
    let arith_after = lint_count(&after.warnings_by_lint, LintId::ARITHMETIC);
    let unsafe_after = lint_count(&after.warnings_by_lint, LintId::UNSAFE_BLOCKS);
    let debug_after = lint_count(&after.warnings_by_lint, LintId::MISSING_DEBUG);
    assert_eq!(numeric_after, 0, "numeric findings must all be repaired");
    assert!(
        arith_after <= (SEEDED_ARITH * 40).div_ceil(100),
        "arithmetic residual {arith_after} exceeds the 40% allowance"
    );
    assert_eq!(arith_after, 0, "every seeded arithmetic pattern is rule-covered");
    assert_eq!(unsafe_after, 0);
    assert_eq!(debug_after, 0);
    println!(
        "acceptance 03 seeded-corpus-counts: PASS ({SEEDED_NUMERIC}/{SEEDED_ARITH}/{SEEDED_UNSAFE}/{SEEDED_DEBUG} before, {numeric_after}/{arith_after}/{unsafe_after}/{debug_after} after)"
    );
}

#[test]
fn criterion_04_idempotence_and_round_budget() {
    let tmp = tempfile::tempdir().unwrap();
    copy_corpus(tmp.path());
    let mut cfg = RunConfig::new(vec![tmp.path().to_path_buf()]);
    cfg.mode = Mode::Fix;
    let first = cmd_fix(&cfg).unwrap();
    let convergence = first.convergence.as_ref().unwrap();
    assert!(convergence.converged, "unconverged: {:?}", convergence.unconverged);
    assert!(
        convergence.rounds_max <= 3,
        "fixpoint needed {} rounds on the bundled corpus",
        convergence.rounds_max
    );
    let second = cmd_fix(&cfg).unwrap();
    assert_eq!(second.edits.applied, 0, "second fix pass must be a no-op");
    let convergence = second.convergence.as_ref().unwrap();
    assert!(convergence.converged);
    assert_eq!(convergence.rounds_max, 1);
    println!(
        "acceptance 04 idempotence: PASS (first pass {} rounds, second pass 0 edits)",
        first.convergence.as_ref().unwrap().rounds_max
    );
}

// ---------------------------------------------------------------------------
// criterion 5: independent execution oracle

/// Checked infix evaluator for the original expressions. Fails (None) on
/// overflow or division by zero, which marks a sample invalid.
mod infix {
    pub fn eval(expr: &str, env: &dyn Fn(&str) -> i32) -> Option<i32> {
        let tokens = lex(expr);
        let mut pos = 0;
        let value = parse(&tokens, &mut pos, 1, env)?;
        if pos != tokens.len() {
            panic!("oracle parse left tokens in {expr}");
        }
        Some(value)
    }

    #[derive(Debug, Clone, PartialEq)]
    enum Tok {
        Num(i32),
        Ident(String),
        Op(char),
        Open,
        Close,
    }

    fn lex(expr: &str) -> Vec<Tok> {
        let mut out = Vec::new();
        let mut chars = expr.chars().peekable();
        while let Some(&c) = chars.peek() {
            match c {
                ' ' => {
                    chars.next();
                }
                '0'..='9' => {
                    let mut n = String::new();
                    while let Some(&d) = chars.peek() {
                        if d.is_ascii_digit() {
                            n.push(d);
                            chars.next();
                        } else {
                            break;
                        }
                    }
                    out.push(Tok::Num(n.parse().unwrap()));
                }
                'a'..='z' | '_' => {
                    let mut s = String::new();
                    while let Some(&d) = chars.peek() {
                        if d.is_ascii_alphanumeric() || d == '_' {
                            s.push(d);
                            chars.next();
                        } else {
                            break;
                        }
                    }
                    out.push(Tok::Ident(s));
                }
                '+' | '-' | '*' | '/' | '%' => {
                    out.push(Tok::Op(c));
                    chars.next();
                }
                '(' => {
                    out.push(Tok::Open);
                    chars.next();
                }
                ')' => {
                    out.push(Tok::Close);
                    chars.next();
                }
                other => panic!("oracle lexer: unexpected `{other}`"),
            }
        }
        out
    }

    fn prec(op: char) -> u8 {
        match op {
            '*' | '/' | '%' => 2,
            _ => 1,
        }
    }

    fn primary(tokens: &[Tok], pos: &mut usize, env: &dyn Fn(&str) -> i32) -> Option<i32> {
        match tokens.get(*pos) {
            Some(Tok::Num(n)) => {
                *pos += 1;
                Some(*n)
            }
            Some(Tok::Ident(name)) => {
                *pos += 1;
                Some(env(name))
            }
            Some(Tok::Open) => {
                *pos += 1;
                let v = parse(tokens, pos, 1, env)?;
                assert_eq!(tokens.get(*pos), Some(&Tok::Close));
                *pos += 1;
                Some(v)
            }
            other => panic!("oracle parser: unexpected {other:?}"),
        }
    }

    fn parse(tokens: &[Tok], pos: &mut usize, min_prec: u8, env: &dyn Fn(&str) -> i32) -> Option<i32> {
        let mut lhs = primary(tokens, pos, env)?;
        while let Some(Tok::Op(op)) = tokens.get(*pos) {
            let op = *op;
            if prec(op) < min_prec {
                break;
            }
            *pos += 1;
            let rhs = parse(tokens, pos, prec(op) + 1, env)?;
            lhs = match op {
                '+' => lhs.checked_add(rhs)?,
                '-' => lhs.checked_sub(rhs)?,
                '*' => lhs.checked_mul(rhs)?,
                '/' => lhs.checked_div(rhs)?,
                '%' => lhs.checked_rem(rhs)?,
                _ => unreachable!(),
            };
        }
        Some(lhs)
    }
}

/// Wrapping evaluator for the rewritten method-call form
/// (`a.wrapping_add(b.wrapping_mul(c))`, parentheses allowed).
mod method_form {
    pub fn eval(expr: &str, env: &dyn Fn(&str) -> i32) -> i32 {
        let mut parser = Parser {
            src: expr.as_bytes(),
            pos: 0,
        };
        let v = parser.receiver(env);
        parser.skip_ws();
        assert_eq!(parser.pos, parser.src.len(), "unconsumed input in {expr}");
        v
    }

    struct Parser<'a> {
        src: &'a [u8],
        pos: usize,
    }

    impl<'a> Parser<'a> {
        fn skip_ws(&mut self) {
            while self.src.get(self.pos) == Some(&b' ') {
                self.pos += 1;
            }
        }

        fn primary(&mut self, env: &dyn Fn(&str) -> i32) -> i32 {
            self.skip_ws();
            match self.src[self.pos] {
                b'(' => {
                    self.pos += 1;
                    let v = self.receiver(env);
                    self.skip_ws();
                    assert_eq!(self.src[self.pos], b')');
                    self.pos += 1;
                    v
                }
                b'0'..=b'9' => {
                    let start = self.pos;
                    while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                        self.pos += 1;
                    }
                    std::str::from_utf8(&self.src[start..self.pos])
                        .unwrap()
                        .parse()
                        .unwrap()
                }
                _ => {
                    let start = self.pos;
                    while self.pos < self.src.len()
                        && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                    {
                        self.pos += 1;
                    }
                    env(std::str::from_utf8(&self.src[start..self.pos]).unwrap())
                }
            }
        }

        fn receiver(&mut self, env: &dyn Fn(&str) -> i32) -> i32 {
            let mut value = self.primary(env);
            loop {
                self.skip_ws();
                if self.src.get(self.pos) != Some(&b'.') {
                    return value;
                }
                self.pos += 1;
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let method = std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string();
                assert_eq!(self.src[self.pos], b'(');
                self.pos += 1;
                let arg = self.receiver(env);
                self.skip_ws();
                assert_eq!(self.src[self.pos], b')');
                self.pos += 1;
                value = match method.as_str() {
                    "wrapping_add" => value.wrapping_add(arg),
                    "wrapping_sub" => value.wrapping_sub(arg),
                    "wrapping_mul" => value.wrapping_mul(arg),
                    "wrapping_div" => value.wrapping_div(arg),
                    "wrapping_rem" => value.wrapping_rem(arg),
                    other => panic!("unexpected method {other}"),
                };
            }
        }
    }
}

struct OracleCase {
    /// Statement or expression as the fixer sees it.
    snippet: &'static str,
    /// Same computation in plain infix form for the checked evaluator.
    original_infix: &'static str,
    vars: &'static [&'static str],
}

const ORACLE_CASES: &[OracleCase] = &[
    OracleCase { snippet: "i += 1;", original_infix: "i + (1)", vars: &["i"] },
    OracleCase { snippet: "n /= p;", original_infix: "n / (p)", vars: &["n", "p"] },
    OracleCase { snippet: "out = 1 + j;", original_infix: "1 + j", vars: &["j"] },
    OracleCase { snippet: "out = a + b * c;", original_infix: "a + b * c", vars: &["a", "b", "c"] },
    OracleCase { snippet: "out = (k - m) % m;", original_infix: "(k - m) % m", vars: &["k", "m"] },
    OracleCase { snippet: "out = a - b;", original_infix: "a - b", vars: &["a", "b"] },
    OracleCase { snippet: "out = x * y;", original_infix: "x * y", vars: &["x", "y"] },
    OracleCase { snippet: "out = q / r;", original_infix: "q / r", vars: &["q", "r"] },
    OracleCase { snippet: "out = s % t;", original_infix: "s % t", vars: &["s", "t"] },
    OracleCase { snippet: "i += j * 2;", original_infix: "i + (j * 2)", vars: &["i", "j"] },
    OracleCase { snippet: "out = total + step;", original_infix: "total + step", vars: &["total", "step"] },
    OracleCase { snippet: "out = p - 1;", original_infix: "p - 1", vars: &["p"] },
];

/// Extract the rewritten right-hand side from the fixer's output for one
/// statement-shaped snippet.
fn rewritten_rhs(snippet: &str) -> String {
    let out = rewrite_arith(snippet);
    assert_ne!(out, snippet, "fixer must rewrite `{snippet}`");
    let eq = out.find('=').unwrap();
    let rhs = out[eq + 1..].trim().trim_end_matches(';').trim();
    // compound assignments render as `x = x.method(..)`; plain assignments
    // keep their `out =` wrapper
    rhs.to_string()
}

#[test]
fn criterion_05_semantic_oracle() {
    assert!(ORACLE_CASES.len() >= 10);
    let mut rng = XorShift(0x5EED_CAFE_1234_0001);
    for case in ORACLE_CASES {
        let rhs = rewritten_rhs(case.snippet);
        assert!(rhs.contains("wrapping_"), "{}: {rhs}", case.snippet);
        let mut valid = 0;
        let mut attempts = 0;
        while valid < 100 {
            attempts += 1;
            assert!(attempts < 100_000, "could not sample enough valid pairs for {}", case.snippet);
            let values: BTreeMap<&str, i32> = case
                .vars
                .iter()
                .map(|v| (*v, rng.range_i32(-1000, 1000)))
                .collect();
            let env = |name: &str| values[name];
            let Some(expected) = infix::eval(case.original_infix, &env) else {
                continue; // overflow or division by zero: not a valid sample
            };
            let got = method_form::eval(&rhs, &env);
            assert_eq!(
                got, expected,
                "{}: rewritten `{rhs}` diverged on {values:?}",
                case.snippet
            );
            valid += 1;
        }
    }
    // the one mandated overflow case: MAX + 1 wraps to MIN in rewritten form
    let rhs = rewritten_rhs("out = a + b;");
    let env = |name: &str| match name {
        "a" => i32::MAX,
        "b" => 1,
        other => panic!("unexpected var {other}"),
    };
    assert_eq!(infix::eval("a + b", &env), None, "checked evaluation must overflow");
    assert_eq!(method_form::eval(&rhs, &env), i32::MIN);
    println!(
        "acceptance 05 semantic-oracle: PASS ({} snippets x 100 samples, overflow wraps to MIN)",
        ORACLE_CASES.len()
    );
}

#[test]
fn criterion_06_density_against_published_numbers() {
    let ecosystem = density(8_095_259, 374_424_742).unwrap();
    assert_eq!(ecosystem.reported, 21);

    let published = [
        (9704u64, 49791u64, 195u64),
        (6885, 43863, 156),
        (812, 43669, 18),
    ];
    let mut reporteds = Vec::new();
    for (warnings, lines, expected) in published {
        let d = density(warnings, lines).unwrap();
        assert!(
            d.reported.abs_diff(expected) <= 1,
            "density({warnings}, {lines}) = {} not within 1 of {expected}",
            d.reported
        );
        reporteds.push(d.reported);
    }
    println!(
        "acceptance 06 density-arithmetic: PASS (21 exact; {:?} within +-1 of [195, 156, 18])",
        reporteds
    );
}

#[test]
fn criterion_07_skew_share() {
    let total = 8_095_259u64;
    let top = 4_887_114u64;
    let counts: BTreeMap<LintId, u64> = [
        (LintId::other("top_lint"), top),
        (LintId::other("long_tail"), total - top),
    ]
    .into_iter()
    .collect();
    let rows = top_shares(&counts, 1);
    assert_eq!(rows[0].count, top);
    assert_eq!(rows[0].cumulative, Ratio::new(top, total));
    assert_eq!(rows[0].cumulative.to_decimal(4), "0.6037");
    assert!(rows[0].cumulative > Ratio::new(1, 2), "top-1 share must exceed one half");
    println!("acceptance 07 skew-share: PASS (top-1 share 0.6037 > 0.5)");
}

#[test]
fn criterion_08_promotion_behavior() {
    let tmp = tempfile::tempdir().unwrap();
    let target = tmp.path().join("main.rs");
    let original = "fn main() {\n    let count = 0;\n    let unused = compute();\n}\n";
    let expected_machine_only =
        "fn main() {\n    let count = 0;\n    let _unused = compute();\n}\n";
    let expected_promoted =
        "fn main() {\n    let count = 0_i32;\n    let _unused = compute();\n}\n";

    let zero_at = original.find('0').unwrap();
    let unused_at = original.find("unused").unwrap();
    let record = |lint: &str, lo: usize, hi: usize, replacement: &str, applicability: &str| {
        serde_json::json!({
            "message": format!("{lint} fired"),
            "code": {"code": lint},
            "level": "warning",
            "spans": [{
                "file_name": target.display().to_string(),
                "byte_start": lo as u64,
                "byte_end": hi as u64,
                "line_start": 2,
                "is_primary": true,
                "suggested_replacement": replacement,
                "suggestion_applicability": applicability,
            }],
            "children": [],
        })
        .to_string()
    };
    let stream = format!(
        "{}\n{}\n",
        record("unused_variables", unused_at, unused_at + "unused".len(), "_unused", "MachineApplicable"),
        record("clippy::default_numeric_fallback", zero_at, zero_at + 1, "0_i32", "MaybeIncorrect"),
    );
    let diag_path = tmp.path().join("diags.jsonl");
    std::fs::write(&diag_path, &stream).unwrap();

    let mut cfg = RunConfig::new(vec![tmp.path().to_path_buf()]);
    cfg.mode = Mode::Fix;

    std::fs::write(&target, original).unwrap();
    let report = cmd_apply_diagnostics(&cfg, &DiagnosticsSource::File(diag_path.clone())).unwrap();
    assert_eq!(report.edits.applied, 1);
    assert_eq!(std::fs::read_to_string(&target).unwrap(), expected_machine_only);

    std::fs::write(&target, original).unwrap();
    cfg.promote.insert(LintId::numeric_fallback());
    let report = cmd_apply_diagnostics(&cfg, &DiagnosticsSource::File(diag_path)).unwrap();
    assert_eq!(report.edits.applied, 2);
    assert_eq!(std::fs::read_to_string(&target).unwrap(), expected_promoted);
    println!("acceptance 08 promotion: PASS (1 edit without promotion, 2 with, outputs byte-exact)");
}

fn tree_bytes(root: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    for entry in std::fs::read_dir(root).unwrap() {
        let path = entry.unwrap().path();
        if path.is_file() {
            out.insert(
                path.file_name().unwrap().to_string_lossy().into_owned(),
                std::fs::read(&path).unwrap(),
            );
        }
    }
    out
}

#[test]
fn criterion_09_determinism_and_dry_run_safety() {
    let tmp = tempfile::tempdir().unwrap();
    copy_corpus(tmp.path());
    let mut cfg = RunConfig::new(vec![tmp.path().to_path_buf()]);
    cfg.format = OutputFormat::Json;
    let first = render_report(&cmd_scan(&cfg).unwrap(), OutputFormat::Json);
    let second = render_report(&cmd_scan(&cfg).unwrap(), OutputFormat::Json);
    assert_eq!(first, second, "scan reports must be byte-identical");

    let before = tree_bytes(tmp.path());
    let mut dry = cfg.clone();
    dry.mode = Mode::DryRun;
    let report = cmd_fix(&dry).unwrap();
    assert!(!report.diffs.is_empty(), "dry run should propose diffs on the seeded corpus");
    let after = tree_bytes(tmp.path());
    assert_eq!(before, after, "dry run must not modify any file");
    println!(
        "acceptance 09 determinism: PASS (identical JSON reports, dry-run left {} files untouched)",
        before.len()
    );
}

#[test]
fn criterion_10_end_to_end_density_reduction() {
    let started = Instant::now();
    let tmp = tempfile::tempdir().unwrap();
    copy_corpus(tmp.path());
    let mut cfg = RunConfig::new(vec![tmp.path().to_path_buf()]);
    cfg.mode = Mode::Fix;
    let report = cmd_fix(&cfg).unwrap();
    let before = report.density_before.as_ref().unwrap();
    let after = report.density_after.as_ref().unwrap();
    let (before_density, after_density) = (
        before.density.expect("corpus has lines"),
        after.density.expect("corpus has lines"),
    );
    assert!(
        after_density.exact < before_density.exact,
        "density must drop: {} -> {}",
        before_density.exact.to_decimal(2),
        after_density.exact.to_decimal(2)
    );

    // before/after table in the shape of the published per-lint comparison
    let lints = [
        LintId::arithmetic(),
        LintId::numeric_fallback(),
        LintId::unsafe_blocks(),
        LintId::missing_debug(),
    ];
    let table = compare(&[before.clone(), after.clone()], &lints);
    assert_eq!(table.labels, vec!["before", "after"]);
    assert_eq!(table.lint_rows.len(), 4);
    assert_eq!(table.lint_rows[0].counts, vec![SEEDED_ARITH, 0]);
    assert_eq!(table.lint_rows[1].counts, vec![SEEDED_NUMERIC, 0]);
    assert_eq!(table.lint_rows[2].counts, vec![SEEDED_UNSAFE, 0]);
    assert_eq!(table.lint_rows[3].counts, vec![SEEDED_DEBUG, 0]);
    for row in &table.lint_rows {
        assert_eq!(row.reduction.unwrap().percent(), "100.0%");
    }
    assert_eq!(table.totals, vec![68, 0]);

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 60, "end-to-end pipeline took {elapsed:?}");
    println!(
        "acceptance 10 density-reduction: PASS ({}/KLOC -> {}/KLOC in {elapsed:?})",
        before_density.reported, after_density.reported
    );
}
