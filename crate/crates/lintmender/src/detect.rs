//! Native detectors and fixers for the four warning categories the tool
//! repairs out of the box: `default_numeric_fallback`,
//! `arithmetic_side_effects`, `undocumented_unsafe_blocks`, and
//! `missing_debug_implementations`.
//!
//! Detection is lexical, driven by token shapes rather than type inference.
//! The arithmetic fixer is deliberately conservative: an expression is only
//! rewritten when every operand is a plain identifier, an integer literal, or
//! a parenthesized subexpression of the same shape. Anything touched by a
//! method call, field access, cast, unary operator, or float literal is left
//! alone rather than risk changing evaluation order, and type-looking names
//! are never operands (`Sized + Mul` in a bound is not an addition).

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::rewrite::Edit;
use crate::source::{Delim, SourceFile, Span, Token, TokenKind, TokenTree};

/// Canonical lint name: non-empty, lowercase snake case.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LintId(String);

impl LintId {
    pub const NUMERIC_FALLBACK: &'static str = "default_numeric_fallback";
    pub const ARITHMETIC: &'static str = "arithmetic_side_effects";
    pub const UNSAFE_BLOCKS: &'static str = "undocumented_unsafe_blocks";
    pub const MISSING_DEBUG: &'static str = "missing_debug_implementations";

    pub fn numeric_fallback() -> LintId {
        LintId(Self::NUMERIC_FALLBACK.to_string())
    }

    pub fn arithmetic() -> LintId {
        LintId(Self::ARITHMETIC.to_string())
    }

    pub fn unsafe_blocks() -> LintId {
        LintId(Self::UNSAFE_BLOCKS.to_string())
    }

    pub fn missing_debug() -> LintId {
        LintId(Self::MISSING_DEBUG.to_string())
    }

    /// The four natively fixable lints, in canonical fixer order.
    pub fn native() -> [LintId; 4] {
        [
            Self::arithmetic(),
            Self::numeric_fallback(),
            Self::unsafe_blocks(),
            Self::missing_debug(),
        ]
    }

    /// Lint id for an ingested diagnostic or ad-hoc rule. Tool prefixes like
    /// `clippy::` are stripped and the rest is normalized to snake case.
    pub fn other(raw: &str) -> LintId {
        let raw = raw.rsplit("::").next().unwrap_or(raw);
        let normalized: String = raw
            .trim()
            .chars()
            .map(|c| match c {
                '-' => '_',
                c => c.to_ascii_lowercase(),
            })
            .collect();
        LintId(normalized)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl std::fmt::Display for LintId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// One detected lint occurrence, optionally with a ready-to-apply fix.
#[derive(Debug, Clone)]
pub struct Finding {
    pub lint: LintId,
    pub span: Span,
    pub message: String,
    pub fix: Option<Vec<Edit>>,
    pub fixable: bool,
}

impl Finding {
    pub fn fixable(lint: LintId, span: Span, message: String, fix: Vec<Edit>) -> Finding {
        Finding {
            lint,
            span,
            message,
            fix: Some(fix),
            fixable: true,
        }
    }

    pub fn unfixable(lint: LintId, span: Span, message: String) -> Finding {
        Finding {
            lint,
            span,
            message,
            fix: None,
            fixable: false,
        }
    }
}

pub const INT_SUFFIXES: &[&str] = &[
    "i8", "i16", "i32", "i64", "i128", "isize", "u8", "u16", "u32", "u64", "u128", "usize",
];
pub const FLOAT_SUFFIXES: &[&str] = &["f32", "f64"];

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DetectorConfig {
    pub enabled: BTreeSet<LintId>,
    /// Suffix appended to unsuffixed integer literals; mirrors the language's
    /// integer inference fallback.
    pub int_suffix: String,
    pub float_suffix: String,
    /// Comment body inserted above undocumented unsafe blocks.
    pub safety_comment: String,
    /// Only flag `pub` items for the missing-Debug check.
    pub public_only_debug: bool,
    /// Treat identifier operands as integers. Without type inference this is
    /// the only total policy; disabling it restricts arithmetic rewrites to
    /// literal-only expressions.
    pub assume_integer_idents: bool,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        DetectorConfig {
            enabled: LintId::native().into_iter().collect(),
            int_suffix: "i32".to_string(),
            float_suffix: "f64".to_string(),
            safety_comment: "SAFETY: machine-generated code; invariants reviewed mechanically"
                .to_string(),
            public_only_debug: false,
            assume_integer_idents: true,
        }
    }
}

impl DetectorConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !INT_SUFFIXES.contains(&self.int_suffix.as_str()) {
            return Err(format!(
                "`{}` is not an integer type suffix (expected one of {})",
                self.int_suffix,
                INT_SUFFIXES.join(", ")
            ));
        }
        if !FLOAT_SUFFIXES.contains(&self.float_suffix.as_str()) {
            return Err(format!(
                "`{}` is not a float type suffix (expected f32 or f64)",
                self.float_suffix
            ));
        }
        for lint in &self.enabled {
            if lint.as_str().is_empty() {
                return Err("empty lint name".to_string());
            }
        }
        Ok(())
    }

    pub fn is_enabled(&self, name: &str) -> bool {
        self.enabled.iter().any(|l| l.as_str() == name)
    }
}

// ---------------------------------------------------------------------------
// Shared token-tree helpers

fn is_trivia(file: &SourceFile, tree: &TokenTree) -> bool {
    match tree {
        TokenTree::Leaf(i) => file.tokens[*i].kind.is_trivia(),
        TokenTree::Group { .. } => false,
    }
}

fn sig_children<'a>(file: &SourceFile, trees: &'a [TokenTree]) -> Vec<&'a TokenTree> {
    trees.iter().filter(|t| !is_trivia(file, t)).collect()
}

fn leaf_token<'a>(file: &'a SourceFile, tree: &TokenTree) -> Option<&'a Token> {
    match tree {
        TokenTree::Leaf(i) => Some(&file.tokens[*i]),
        TokenTree::Group { .. } => None,
    }
}

fn is_leaf_text(file: &SourceFile, tree: &TokenTree, kind: TokenKind, text: &str) -> bool {
    leaf_token(file, tree).is_some_and(|t| t.kind == kind && t.text == text)
}

fn is_punct(file: &SourceFile, tree: &TokenTree, text: &str) -> bool {
    is_leaf_text(file, tree, TokenKind::Punct, text)
}

fn is_keyword(file: &SourceFile, tree: &TokenTree, text: &str) -> bool {
    is_leaf_text(file, tree, TokenKind::Keyword, text)
}

/// Spans of `#[...]` / `#![...]` attributes anywhere in the file. Literals and
/// expressions inside attributes are never flagged.
fn attribute_spans(file: &SourceFile) -> Vec<Span> {
    let mut spans = Vec::new();
    fn rec(file: &SourceFile, trees: &[TokenTree], spans: &mut Vec<Span>) {
        let sig = sig_children(file, trees);
        for (i, el) in sig.iter().enumerate() {
            if let TokenTree::Group { delim: Delim::Bracket, span, .. } = el {
                let prev = i.checked_sub(1).and_then(|p| sig.get(p));
                let prev2 = i.checked_sub(2).and_then(|p| sig.get(p));
                let direct = prev.is_some_and(|p| is_punct(file, p, "#"));
                let inner = prev.is_some_and(|p| is_punct(file, p, "!"))
                    && prev2.is_some_and(|p| is_punct(file, p, "#"));
                if direct || inner {
                    spans.push(*span);
                }
            }
        }
        for t in trees {
            if let TokenTree::Group { children, .. } = t {
                rec(file, children, spans);
            }
        }
    }
    rec(file, &file.trees, &mut spans);
    spans
}

fn in_spans(spans: &[Span], target: Span) -> bool {
    spans.iter().any(|s| s.covers(target))
}

// ---------------------------------------------------------------------------
// default_numeric_fallback

/// Flag unsuffixed numeric literals that would take the default inference
/// fallback. Excluded: the direct initializer of a type-annotated `let`, the
/// left operand of an `as` cast, and anything inside attributes. (Strings and
/// comments never produce numeric tokens, so they are excluded by
/// construction.)
pub fn detect_numeric_fallback(file: &SourceFile, cfg: &DetectorConfig) -> Vec<Finding> {
    let attrs = attribute_spans(file);
    let mut findings = Vec::new();
    fn rec(
        file: &SourceFile,
        cfg: &DetectorConfig,
        trees: &[TokenTree],
        attrs: &[Span],
        findings: &mut Vec<Finding>,
    ) {
        let sig = sig_children(file, trees);
        for (i, el) in sig.iter().enumerate() {
            let Some(tok) = leaf_token(file, el) else {
                continue;
            };
            let is_float = tok.kind == TokenKind::Float;
            if !(tok.kind == TokenKind::Int || is_float) || tok.suffix.is_some() {
                continue;
            }
            if in_spans(attrs, tok.span) {
                continue;
            }
            let prev = i.checked_sub(1).and_then(|p| sig.get(p));
            let next = sig.get(i + 1);
            if next.is_some_and(|n| is_keyword(file, n, "as")) {
                continue;
            }
            // tuple indices (`pair.0`, `triple.1.2`) are field names, not
            // typed literals; suffixing them would not even parse
            if prev.is_some_and(|p| is_punct(file, p, ".")) {
                continue;
            }
            let direct_let_init = prev.is_some_and(|p| is_punct(file, p, "="))
                && next.is_some_and(|n| is_punct(file, n, ";"))
                && annotated_let_before(file, &sig, i - 1);
            if direct_let_init {
                continue;
            }
            let suffix = if is_float { &cfg.float_suffix } else { &cfg.int_suffix };
            // Replace the whole literal rather than inserting at its end: a
            // pure insertion at the boundary of another fixer's span would
            // slip past conflict detection and suffix the wrong expression.
            // A trailing-dot float like `1.` also needs its fraction
            // completed before a suffix is legal.
            let replacement = if is_float && tok.text.ends_with('.') {
                format!("{}0_{suffix}", tok.text)
            } else {
                format!("{}_{suffix}", tok.text)
            };
            let edit = Edit::replace(
                tok.span,
                replacement,
                LintId::numeric_fallback(),
                format!("append `{suffix}` type suffix"),
            );
            findings.push(Finding::fixable(
                LintId::numeric_fallback(),
                tok.span,
                format!(
                    "unsuffixed {} literal `{}` falls back to the default numeric type",
                    if is_float { "float" } else { "integer" },
                    tok.text
                ),
                vec![edit],
            ));
        }
        for t in trees {
            if let TokenTree::Group { children, .. } = t {
                rec(file, cfg, children, attrs, findings);
            }
        }
    }
    rec(file, cfg, &file.trees, &attrs, &mut findings);
    findings.sort_by_key(|f| f.span.lo);
    findings
}

/// Walking back from the `=` of a candidate initializer: the statement must
/// begin with `let` and carry a `:` type annotation before the `=`.
fn annotated_let_before(file: &SourceFile, sig: &[&TokenTree], eq_idx: usize) -> bool {
    let mut has_colon = false;
    let mut first: Option<&TokenTree> = None;
    for el in sig[..eq_idx].iter().rev() {
        let boundary = is_punct(file, el, ";")
            || matches!(el, TokenTree::Group { delim: Delim::Brace, .. });
        if boundary {
            break;
        }
        if is_punct(file, el, ":") {
            has_colon = true;
        }
        first = Some(el);
    }
    first.is_some_and(|el| is_keyword(file, el, "let")) && has_colon
}

// ---------------------------------------------------------------------------
// arithmetic_side_effects

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Rem,
}

impl ArithOp {
    fn from_binary(text: &str) -> Option<ArithOp> {
        match text {
            "+" => Some(ArithOp::Add),
            "-" => Some(ArithOp::Sub),
            "*" => Some(ArithOp::Mul),
            "/" => Some(ArithOp::Div),
            "%" => Some(ArithOp::Rem),
            _ => None,
        }
    }

    fn from_compound(text: &str) -> Option<ArithOp> {
        match text {
            "+=" => Some(ArithOp::Add),
            "-=" => Some(ArithOp::Sub),
            "*=" => Some(ArithOp::Mul),
            "/=" => Some(ArithOp::Div),
            "%=" => Some(ArithOp::Rem),
            _ => None,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            ArithOp::Add => "+",
            ArithOp::Sub => "-",
            ArithOp::Mul => "*",
            ArithOp::Div => "/",
            ArithOp::Rem => "%",
        }
    }

    pub fn method(self) -> &'static str {
        match self {
            ArithOp::Add => "wrapping_add",
            ArithOp::Sub => "wrapping_sub",
            ArithOp::Mul => "wrapping_mul",
            ArithOp::Div => "wrapping_div",
            ArithOp::Rem => "wrapping_rem",
        }
    }

    /// `*`, `/`, `%` bind tighter than `+`, `-`; all left-associative.
    fn precedence(self) -> u8 {
        match self {
            ArithOp::Add | ArithOp::Sub => 1,
            ArithOp::Mul | ArithOp::Div | ArithOp::Rem => 2,
        }
    }
}

/// Arithmetic expression over token spans. `Opaque` marks a candidate that
/// started like arithmetic but ran into an operand the fixer will not touch.
#[derive(Debug, Clone)]
pub enum ArithExpr {
    Binary {
        op: ArithOp,
        left: Box<ArithExpr>,
        right: Box<ArithExpr>,
        span: Span,
    },
    Ident(Span),
    Int(Span),
    /// Parenthesized operand. `inner` is the rewritable expression when the
    /// contents are pure arithmetic; `None` means the group renders verbatim
    /// (an integer cast of a single operand).
    Paren { inner: Option<Box<ArithExpr>>, span: Span },
    Opaque(Span),
}

impl ArithExpr {
    pub fn span(&self) -> Span {
        match self {
            ArithExpr::Binary { span, .. } => *span,
            ArithExpr::Ident(span) | ArithExpr::Int(span) | ArithExpr::Opaque(span) => *span,
            ArithExpr::Paren { span, .. } => *span,
        }
    }

    pub fn op_count(&self) -> usize {
        match self {
            ArithExpr::Binary { left, right, .. } => 1 + left.op_count() + right.op_count(),
            ArithExpr::Paren { inner: Some(e), .. } => e.op_count(),
            _ => 0,
        }
    }

    pub fn is_opaque(&self) -> bool {
        matches!(self, ArithExpr::Opaque(_))
    }

    fn op_nodes(&self, out: &mut Vec<(ArithOp, Span)>) {
        match self {
            ArithExpr::Binary { op, left, right, span } => {
                // innermost first
                left.op_nodes(out);
                right.op_nodes(out);
                out.push((*op, *span));
            }
            ArithExpr::Paren { inner: Some(e), .. } => e.op_nodes(out),
            _ => {}
        }
    }

    /// Rewrite into wrapping method-call form. Literal receivers are
    /// parenthesized so the method call parses; suffixing stays the numeric
    /// fixer's job so the two compose under the fixpoint.
    fn render(&self, content: &str, receiver: bool) -> String {
        match self {
            ArithExpr::Ident(s) | ArithExpr::Opaque(s) => content[s.lo..s.hi].to_string(),
            ArithExpr::Int(s) => {
                let text = &content[s.lo..s.hi];
                if receiver {
                    format!("({text})")
                } else {
                    text.to_string()
                }
            }
            ArithExpr::Paren { inner: Some(e), .. } => format!("({})", e.render(content, false)),
            ArithExpr::Paren { inner: None, span } => content[span.lo..span.hi].to_string(),
            ArithExpr::Binary { op, left, right, .. } => format!(
                "{}.{}({})",
                left.render(content, true),
                op.method(),
                right.render(content, false)
            ),
        }
    }
}

/// Rough identifier classification for operand screening. Type names must
/// never become arithmetic operands — `Sized + Mul` in a trait bound looks
/// exactly like an addition to a token scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum IdentClass {
    /// snake_case or starting lowercase/underscore: an ordinary value.
    Value,
    /// SCREAMING_CASE (two or more chars, no lowercase): a constant.
    Constant,
    /// PascalCase (starts uppercase, has lowercase): a type or trait name.
    TypeLike,
    /// A single uppercase letter: a const generic or a type parameter.
    Ambiguous,
}

fn ident_class(text: &str) -> IdentClass {
    let Some(first) = text.chars().next() else {
        return IdentClass::Value;
    };
    if !first.is_uppercase() {
        return IdentClass::Value;
    }
    if text.chars().any(|c| c.is_lowercase()) {
        return IdentClass::TypeLike;
    }
    if text.chars().count() == 1 {
        return IdentClass::Ambiguous;
    }
    IdentClass::Constant
}

/// `T + U` is far more likely a trait bound than const-generic arithmetic;
/// reject nodes whose operands are both single-uppercase-letter identifiers.
/// `N + 1` stays rewritable.
fn both_sides_ambiguous(expr: &ArithExpr, content: &str) -> bool {
    let is_ambiguous_leaf = |e: &ArithExpr| match e {
        ArithExpr::Ident(s) => ident_class(&content[s.lo..s.hi]) == IdentClass::Ambiguous,
        _ => false,
    };
    match expr {
        ArithExpr::Binary { left, right, .. } => {
            (is_ambiguous_leaf(left) && is_ambiguous_leaf(right))
                || both_sides_ambiguous(left, content)
                || both_sides_ambiguous(right, content)
        }
        ArithExpr::Paren { inner: Some(e), .. } => both_sides_ambiguous(e, content),
        _ => false,
    }
}

struct CompoundAssign {
    lvalue: Span,
    op: ArithOp,
    rhs: ArithExpr,
    /// Whole statement including the trailing semicolon.
    stmt: Span,
}

#[derive(Default)]
struct ArithScan {
    exprs: Vec<ArithExpr>,
    compounds: Vec<CompoundAssign>,
}

struct SeqParser<'a, 'f> {
    file: &'f SourceFile,
    cfg: &'f DetectorConfig,
    seq: &'a [&'a TokenTree],
    pos: usize,
    consumed_groups: Vec<usize>,
    ops_seen: usize,
    last_span: Option<Span>,
}

impl<'a, 'f> SeqParser<'a, 'f> {
    fn new(file: &'f SourceFile, cfg: &'f DetectorConfig, seq: &'a [&'a TokenTree], pos: usize) -> Self {
        SeqParser {
            file,
            cfg,
            seq,
            pos,
            consumed_groups: Vec::new(),
            ops_seen: 0,
            last_span: None,
        }
    }

    fn peek(&self) -> Option<&'a TokenTree> {
        self.seq.get(self.pos).copied()
    }

    fn peek_op(&self) -> Option<ArithOp> {
        let el = self.peek()?;
        let tok = leaf_token(self.file, el)?;
        if tok.kind == TokenKind::Punct {
            ArithOp::from_binary(&tok.text)
        } else {
            None
        }
    }

    fn parse_expr(&mut self, min_prec: u8) -> Option<ArithExpr> {
        let mut lhs = self.parse_operand()?;
        while let Some(op) = self.peek_op() {
            let prec = op.precedence();
            if prec < min_prec {
                break;
            }
            self.pos += 1;
            self.ops_seen += 1;
            self.peek()?;
            let rhs = self.parse_expr(prec + 1)?;
            // `a + b as u64` casts only `b`; rewriting would regroup it
            if self.peek().is_some_and(|el| is_keyword(self.file, el, "as")) {
                return None;
            }
            let span = Span::new(lhs.span().lo, rhs.span().hi, lhs.span().line);
            lhs = ArithExpr::Binary {
                op,
                left: Box::new(lhs),
                right: Box::new(rhs),
                span,
            };
        }
        Some(lhs)
    }

    fn parse_operand(&mut self) -> Option<ArithExpr> {
        let el = self.peek()?;
        self.last_span = Some(el.span(&self.file.tokens));
        match el {
            TokenTree::Leaf(i) => {
                let tok = &self.file.tokens[*i];
                match tok.kind {
                    TokenKind::Ident if self.cfg.assume_integer_idents => {
                        if ident_class(&tok.text) == IdentClass::TypeLike {
                            return None;
                        }
                        if self.next_is_postfix(self.pos + 1) {
                            return None;
                        }
                        self.pos += 1;
                        Some(ArithExpr::Ident(tok.span))
                    }
                    TokenKind::Int => {
                        if self.next_is_postfix(self.pos + 1) {
                            return None;
                        }
                        self.pos += 1;
                        Some(ArithExpr::Int(tok.span))
                    }
                    _ => None,
                }
            }
            TokenTree::Group { delim: Delim::Paren, open, span, children, .. } => {
                if self.next_is_postfix(self.pos + 1) {
                    return None;
                }
                let inner = self.parse_paren_contents(children)?;
                self.consumed_groups.push(*open);
                self.pos += 1;
                Some(ArithExpr::Paren { inner, span: *span })
            }
            TokenTree::Group { .. } => None,
        }
    }

    /// Method calls, field access, paths, indexing, and `?` make an operand
    /// opaque; the expression around it is not rewritten.
    fn next_is_postfix(&self, at: usize) -> bool {
        match self.seq.get(at) {
            Some(el) => match el {
                TokenTree::Leaf(i) => {
                    let tok = &self.file.tokens[*i];
                    tok.kind == TokenKind::Punct
                        && matches!(tok.text.as_str(), "." | "::" | "!" | "?")
                }
                TokenTree::Group { delim: Delim::Paren | Delim::Bracket, .. } => true,
                TokenTree::Group { .. } => false,
            },
            None => false,
        }
    }

    /// Accept `(pure arith)` or `(operand as <int type>)`; anything else
    /// poisons the surrounding expression.
    fn parse_paren_contents(&mut self, children: &[TokenTree]) -> Option<Option<Box<ArithExpr>>> {
        let inner_sig = sig_children(self.file, children);
        let mut sub = SeqParser::new(self.file, self.cfg, &inner_sig, 0);
        if let Some(expr) = sub.parse_expr(1) {
            if sub.pos == inner_sig.len() {
                self.ops_seen += expr.op_count();
                self.consumed_groups.extend(sub.consumed_groups);
                return Some(Some(Box::new(expr)));
            }
        }
        // (x as usize): single operand, integer cast, rendered verbatim
        if inner_sig.len() == 3 {
            let operand_ok = leaf_token(self.file, inner_sig[0]).is_some_and(|t| {
                matches!(t.kind, TokenKind::Int)
                    || (t.kind == TokenKind::Ident
                        && self.cfg.assume_integer_idents
                        && ident_class(&t.text) != IdentClass::TypeLike)
            });
            let cast_ok = is_keyword(self.file, inner_sig[1], "as")
                && leaf_token(self.file, inner_sig[2])
                    .is_some_and(|t| t.kind == TokenKind::Ident && INT_SUFFIXES.contains(&t.text.as_str()));
            if operand_ok && cast_ok {
                return Some(None);
            }
        }
        None
    }
}

/// Elements that must not directly precede an accepted expression: unary
/// operators, casts, paths, member access, adjacent values, and equal- or
/// higher-precedence binary operators whose left side we could not parse.
fn bad_expr_prefix(file: &SourceFile, el: &TokenTree) -> bool {
    match el {
        TokenTree::Group { .. } => true,
        TokenTree::Leaf(i) => {
            let tok = &file.tokens[*i];
            match tok.kind {
                TokenKind::Ident
                | TokenKind::Int
                | TokenKind::Float
                | TokenKind::Str
                | TokenKind::Lifetime => true,
                TokenKind::Keyword => tok.text == "as",
                TokenKind::Punct => matches!(
                    tok.text.as_str(),
                    "." | "::" | "&" | "&&" | "!" | "#" | "+" | "-" | "*" | "/" | "%"
                ),
                _ => false,
            }
        }
    }
}

fn statement_start(file: &SourceFile, prev: Option<&TokenTree>) -> bool {
    match prev {
        None => true,
        Some(el) => {
            is_punct(file, el, ";") || matches!(el, TokenTree::Group { delim: Delim::Brace, .. })
        }
    }
}

fn arith_scan_level(
    file: &SourceFile,
    cfg: &DetectorConfig,
    trees: &[TokenTree],
    attrs: &[Span],
    out: &mut ArithScan,
) {
    let sig = sig_children(file, trees);
    let mut consumed: BTreeSet<usize> = BTreeSet::new();
    let mut pos = 0usize;
    while pos < sig.len() {
        // compound assignment: `x OP= rhs;` with a plain identifier lvalue
        if let Some(compound) = try_compound(file, cfg, &sig, pos, attrs) {
            let (c, end, groups) = compound;
            consumed.extend(groups);
            out.compounds.push(c);
            pos = end;
            continue;
        }
        let prev = pos.checked_sub(1).and_then(|p| sig.get(p).copied());
        if prev.is_some_and(|p| bad_expr_prefix(file, p)) {
            pos += 1;
            continue;
        }
        let mut parser = SeqParser::new(file, cfg, &sig, pos);
        match parser.parse_expr(1) {
            Some(expr) if expr.op_count() > 0 => {
                if in_spans(attrs, expr.span()) || both_sides_ambiguous(&expr, &file.content) {
                    pos = parser.pos.max(pos + 1);
                    continue;
                }
                consumed.extend(parser.consumed_groups.iter().copied());
                out.exprs.push(expr);
                pos = parser.pos;
            }
            Some(_) => {
                // single operand, nothing arithmetic here
                pos = parser.pos.max(pos + 1);
            }
            None if parser.ops_seen > 0 => {
                // poisoned candidate: report it opaque and jump to the next
                // statement-ish boundary so no misgrouped tail gets rewritten
                let start = sig[pos].span(&file.tokens);
                let end = parser.last_span.unwrap_or(start);
                out.exprs.push(ArithExpr::Opaque(Span::new(
                    start.lo,
                    end.hi.max(start.hi),
                    start.line,
                )));
                pos = parser.pos.max(pos + 1);
                while pos < sig.len() {
                    let el = sig[pos];
                    let boundary = is_punct(file, el, ";")
                        || is_punct(file, el, ",")
                        || matches!(el, TokenTree::Group { delim: Delim::Brace, .. });
                    pos += 1;
                    if boundary {
                        break;
                    }
                }
            }
            None => {
                pos += 1;
            }
        }
    }
    for t in trees {
        if let TokenTree::Group { open, children, .. } = t {
            if !consumed.contains(open) {
                arith_scan_level(file, cfg, children, attrs, out);
            }
        }
    }
}

type CompoundHit = (CompoundAssign, usize, Vec<usize>);

fn try_compound(
    file: &SourceFile,
    cfg: &DetectorConfig,
    sig: &[&TokenTree],
    pos: usize,
    attrs: &[Span],
) -> Option<CompoundHit> {
    if !cfg.assume_integer_idents {
        return None;
    }
    let prev = pos.checked_sub(1).and_then(|p| sig.get(p).copied());
    if !statement_start(file, prev) {
        return None;
    }
    let lvalue = leaf_token(file, sig.get(pos)?)?;
    if lvalue.kind != TokenKind::Ident {
        return None;
    }
    let op_tok = leaf_token(file, sig.get(pos + 1)?)?;
    if op_tok.kind != TokenKind::Punct {
        return None;
    }
    let op = ArithOp::from_compound(&op_tok.text)?;
    let semi_rel = sig[pos + 2..]
        .iter()
        .position(|el| is_punct(file, el, ";"))?;
    let semi_idx = pos + 2 + semi_rel;
    if semi_idx == pos + 2 {
        return None; // empty right-hand side
    }
    let rhs_seq = &sig[pos + 2..semi_idx];
    let mut parser = SeqParser::new(file, cfg, rhs_seq, 0);
    let rhs = parser.parse_expr(1)?;
    if parser.pos != rhs_seq.len() || both_sides_ambiguous(&rhs, &file.content) {
        return None;
    }
    let semi = leaf_token(file, sig[semi_idx]).expect("semicolon is a leaf");
    let stmt = Span::new(lvalue.span.lo, semi.span.hi, lvalue.span.line);
    if in_spans(attrs, stmt) {
        return None;
    }
    Some((
        CompoundAssign {
            lvalue: lvalue.span,
            op,
            rhs,
            stmt,
        },
        semi_idx + 1,
        parser.consumed_groups,
    ))
}

fn run_arith_scan(file: &SourceFile, cfg: &DetectorConfig) -> ArithScan {
    let attrs = attribute_spans(file);
    let mut out = ArithScan::default();
    arith_scan_level(file, cfg, &file.trees, &attrs, &mut out);
    out
}

/// Maximal arithmetic expressions over identifiers, integer literals, and
/// parenthesized subexpressions. Candidates that ran into floats, strings, or
/// call-shaped operands are reported as opaque and never rewritten.
pub fn parse_arith(file: &SourceFile, cfg: &DetectorConfig) -> Vec<ArithExpr> {
    let mut scan = run_arith_scan(file, cfg);
    let mut exprs = std::mem::take(&mut scan.exprs);
    for c in scan.compounds {
        exprs.push(c.rhs);
    }
    exprs.sort_by_key(|e| e.span().lo);
    exprs
}

/// One finding per arithmetic node and per compound assignment over integer
/// operands, each carrying the consolidated rewrite for its whole maximal
/// expression.
pub fn detect_arithmetic(file: &SourceFile, cfg: &DetectorConfig) -> Vec<Finding> {
    let scan = run_arith_scan(file, cfg);
    let lint = LintId::arithmetic();
    let mut findings = Vec::new();
    for expr in &scan.exprs {
        if expr.is_opaque() || expr.op_count() == 0 {
            continue;
        }
        let replacement = expr.render(&file.content, false);
        let edit = Edit::replace(
            expr.span(),
            replacement,
            lint.clone(),
            "rewrite with wrapping arithmetic methods".to_string(),
        );
        let mut nodes = Vec::new();
        expr.op_nodes(&mut nodes);
        for (op, span) in nodes {
            findings.push(Finding::fixable(
                lint.clone(),
                span,
                format!(
                    "arithmetic operation `{}` can overflow or panic at runtime",
                    op.symbol()
                ),
                vec![edit.clone()],
            ));
        }
    }
    for c in &scan.compounds {
        let lvalue_text = &file.content[c.lvalue.lo..c.lvalue.hi];
        let replacement = format!(
            "{lv} = {lv}.{method}({rhs});",
            lv = lvalue_text,
            method = c.op.method(),
            rhs = c.rhs.render(&file.content, false)
        );
        let edit = Edit::replace(
            c.stmt,
            replacement,
            lint.clone(),
            format!("rewrite `{}=` with {}", c.op.symbol(), c.op.method()),
        );
        findings.push(Finding::fixable(
            lint.clone(),
            c.stmt,
            format!(
                "compound assignment `{}=` can overflow or panic at runtime",
                c.op.symbol()
            ),
            vec![edit.clone()],
        ));
        let mut nodes = Vec::new();
        c.rhs.op_nodes(&mut nodes);
        for (op, span) in nodes {
            findings.push(Finding::fixable(
                lint.clone(),
                span,
                format!(
                    "arithmetic operation `{}` can overflow or panic at runtime",
                    op.symbol()
                ),
                vec![edit.clone()],
            ));
        }
    }
    findings.sort_by_key(|f| f.span.lo);
    findings
}

// ---------------------------------------------------------------------------
// undocumented_unsafe_blocks

fn comment_payload(text: &str) -> &str {
    let t = text.trim();
    if let Some(rest) = t.strip_prefix("/*") {
        let rest = rest.strip_suffix("*/").unwrap_or(rest);
        rest.trim_start_matches('*').trim_start_matches('!').trim()
    } else {
        t.trim_start_matches('/').trim_start_matches('!').trim()
    }
}

fn is_safety_comment(tok: &Token) -> bool {
    tok.kind == TokenKind::Comment && comment_payload(&tok.text).starts_with("SAFETY:")
}

/// Flag `unsafe { ... }` blocks without a vouching `SAFETY:` comment. A block
/// is documented when the nearest preceding non-whitespace token is such a
/// comment, or when one ends the line directly above (which is what the fixer
/// inserts for mid-statement blocks like `let a = unsafe { .. };`). `unsafe
/// fn` signatures are out of scope; the lint is about blocks.
pub fn detect_unsafe_blocks(file: &SourceFile, cfg: &DetectorConfig) -> Vec<Finding> {
    let lint = LintId::unsafe_blocks();
    let mut findings = Vec::new();
    let mut claimed_lines: BTreeSet<u32> = BTreeSet::new();
    for (i, tok) in file.tokens.iter().enumerate() {
        if tok.kind != TokenKind::Keyword || tok.text != "unsafe" {
            continue;
        }
        let next = file.tokens[i + 1..]
            .iter()
            .find(|t| !t.kind.is_trivia());
        let opens_block = next.is_some_and(|t| t.kind == TokenKind::OpenDelim && t.text == "{");
        if !opens_block {
            continue;
        }
        let prev_non_ws = file.tokens[..i]
            .iter()
            .rev()
            .find(|t| t.kind != TokenKind::Whitespace);
        let mut documented = prev_non_ws.is_some_and(is_safety_comment);
        if !documented {
            let line_start = file.line_start(tok.span.line);
            documented = file.tokens[..i]
                .iter()
                .rev()
                .filter(|t| t.span.hi <= line_start)
                .find(|t| t.kind != TokenKind::Whitespace)
                .is_some_and(is_safety_comment);
        }
        if documented {
            continue;
        }
        let line = tok.span.line;
        let message = "unsafe block is missing a preceding `// SAFETY:` comment".to_string();
        if claimed_lines.contains(&line) {
            // A comment line can vouch for only one block; a second unsafe
            // block on the same line stays reported but unfixed.
            findings.push(Finding::unfixable(lint.clone(), tok.span, message));
            continue;
        }
        claimed_lines.insert(line);
        let indent = file.line_indent(line);
        let edit = Edit::insert(
            file.line_start(line),
            line,
            format!("{indent}// {}\n", cfg.safety_comment),
            lint.clone(),
            "insert SAFETY comment line above the block".to_string(),
        );
        findings.push(Finding::fixable(lint.clone(), tok.span, message, vec![edit]));
    }
    findings
}

// ---------------------------------------------------------------------------
// missing_debug_implementations

/// Type names with a same-file `impl ... Debug ... for <Name>`.
fn debug_impl_names(file: &SourceFile) -> BTreeSet<String> {
    let mut names = BTreeSet::new();
    fn rec(file: &SourceFile, trees: &[TokenTree], names: &mut BTreeSet<String>) {
        let sig = sig_children(file, trees);
        for (i, el) in sig.iter().enumerate() {
            if !is_keyword(file, el, "impl") {
                continue;
            }
            let mut saw_debug = false;
            let mut past_for = false;
            for el in &sig[i + 1..] {
                if matches!(el, TokenTree::Group { delim: Delim::Brace, .. })
                    || is_punct(file, el, ";")
                    || is_keyword(file, el, "where")
                {
                    break;
                }
                if is_keyword(file, el, "for") {
                    past_for = true;
                    continue;
                }
                if let Some(tok) = leaf_token(file, el) {
                    if tok.kind == TokenKind::Ident {
                        if !past_for && tok.text == "Debug" {
                            saw_debug = true;
                        } else if past_for && saw_debug {
                            names.insert(tok.text.clone());
                        }
                    }
                }
            }
        }
        for t in trees {
            if let TokenTree::Group { children, .. } = t {
                rec(file, children, names);
            }
        }
    }
    rec(file, &file.trees, &mut names);
    names
}

/// Attributes directly above an item, collected by walking back over
/// visibility modifiers and `#[...]` groups.
struct ItemContext<'a> {
    attrs: Vec<&'a TokenTree>,
    is_pub: bool,
    /// First token of the declaration core (`pub` or the item keyword); the
    /// derive line is inserted above this token's line, below existing
    /// attributes and doc comments.
    core_token: usize,
}

fn item_context<'a>(file: &SourceFile, sig: &[&'a TokenTree], kw_idx: usize) -> ItemContext<'a> {
    let kw_token = match sig[kw_idx] {
        TokenTree::Leaf(i) => *i,
        TokenTree::Group { .. } => unreachable!("item keyword is a leaf"),
    };
    let mut ctx = ItemContext {
        attrs: Vec::new(),
        is_pub: false,
        core_token: kw_token,
    };
    let mut idx = kw_idx;
    while idx > 0 {
        let prev = sig[idx - 1];
        if is_keyword(file, prev, "pub") {
            ctx.is_pub = true;
            if let TokenTree::Leaf(i) = prev {
                ctx.core_token = *i;
            }
            idx -= 1;
            continue;
        }
        // pub(crate) and friends
        if matches!(prev, TokenTree::Group { delim: Delim::Paren, .. })
            && idx >= 2
            && is_keyword(file, sig[idx - 2], "pub")
        {
            ctx.is_pub = true;
            if let TokenTree::Leaf(i) = sig[idx - 2] {
                ctx.core_token = *i;
            }
            idx -= 2;
            continue;
        }
        if matches!(prev, TokenTree::Group { delim: Delim::Bracket, .. })
            && idx >= 2
            && is_punct(file, sig[idx - 2], "#")
        {
            ctx.attrs.push(prev);
            idx -= 2;
            continue;
        }
        break;
    }
    ctx
}

/// The `(...)` group of a `#[derive(...)]` attribute, if this is one.
fn derive_group<'a>(file: &SourceFile, attr: &'a TokenTree) -> Option<&'a TokenTree> {
    let TokenTree::Group { children, .. } = attr else {
        return None;
    };
    let sig = sig_children(file, children);
    if sig.len() == 2
        && leaf_token(file, sig[0]).is_some_and(|t| t.kind == TokenKind::Ident && t.text == "derive")
        && matches!(sig[1], TokenTree::Group { delim: Delim::Paren, .. })
    {
        Some(sig[1])
    } else {
        None
    }
}

fn group_contains_ident(file: &SourceFile, group: &TokenTree, name: &str) -> bool {
    let TokenTree::Group { open, close, .. } = group else {
        return false;
    };
    file.tokens[open + 1..*close]
        .iter()
        .any(|t| t.kind == TokenKind::Ident && t.text == name)
}

/// Flag `struct`/`enum` declarations without a Debug derive or a same-file
/// `impl Debug`. The scan is keyword-driven, so declarations inside function
/// bodies are flagged too.
pub fn detect_missing_debug(file: &SourceFile, cfg: &DetectorConfig) -> Vec<Finding> {
    let lint = LintId::missing_debug();
    let implemented = debug_impl_names(file);
    let mut findings = Vec::new();
    fn rec(
        file: &SourceFile,
        cfg: &DetectorConfig,
        trees: &[TokenTree],
        implemented: &BTreeSet<String>,
        lint: &LintId,
        findings: &mut Vec<Finding>,
    ) {
        let sig = sig_children(file, trees);
        for (i, el) in sig.iter().enumerate() {
            let is_item_kw = is_keyword(file, el, "struct") || is_keyword(file, el, "enum");
            if !is_item_kw {
                continue;
            }
            let Some(name_tok) = sig.get(i + 1).and_then(|n| leaf_token(file, n)) else {
                continue;
            };
            if name_tok.kind != TokenKind::Ident {
                continue;
            }
            let ctx = item_context(file, &sig, i);
            if cfg.public_only_debug && !ctx.is_pub {
                continue;
            }
            let derive_groups: Vec<&TokenTree> = ctx
                .attrs
                .iter()
                .filter_map(|a| derive_group(file, a))
                .collect();
            let has_debug = derive_groups
                .iter()
                .any(|g| group_contains_ident(file, g, "Debug"));
            if has_debug || implemented.contains(&name_tok.text) {
                continue;
            }
            let kw_tok = leaf_token(file, el).expect("keyword leaf");
            let span = Span::new(kw_tok.span.lo, name_tok.span.hi, kw_tok.span.line);
            let edit = match derive_groups.first() {
                Some(TokenTree::Group { open, close, children, .. }) => {
                    let inner_sig = sig_children(file, children);
                    let close_tok = &file.tokens[*close];
                    let insertion = match inner_sig.last() {
                        None => "Debug".to_string(),
                        Some(last) if is_punct(file, last, ",") => " Debug".to_string(),
                        Some(_) => ", Debug".to_string(),
                    };
                    let _ = open;
                    Edit::insert(
                        close_tok.span.lo,
                        close_tok.span.line,
                        insertion,
                        lint.clone(),
                        "add Debug to the existing derive list".to_string(),
                    )
                }
                _ => {
                    let core = &file.tokens[ctx.core_token];
                    let line = core.span.line;
                    let indent = file.line_indent(line);
                    Edit::insert(
                        file.line_start(line),
                        line,
                        format!("{indent}#[derive(Debug)]\n"),
                        lint.clone(),
                        "insert a #[derive(Debug)] attribute line".to_string(),
                    )
                }
            };
            findings.push(Finding::fixable(
                lint.clone(),
                span,
                format!("`{}` has no `Debug` implementation", name_tok.text),
                vec![edit],
            ));
        }
        for t in trees {
            if let TokenTree::Group { children, .. } = t {
                rec(file, cfg, children, implemented, lint, findings);
            }
        }
    }
    rec(file, cfg, &file.trees, &implemented, &lint, &mut findings);
    findings.sort_by_key(|f| f.span.lo);
    findings
}

// ---------------------------------------------------------------------------
// combined detection and fixer plumbing

/// Union of all enabled detectors, sorted by span then lint name.
pub fn detect_all(file: &SourceFile, cfg: &DetectorConfig) -> Vec<Finding> {
    let mut findings = Vec::new();
    if cfg.is_enabled(LintId::ARITHMETIC) {
        findings.extend(detect_arithmetic(file, cfg));
    }
    if cfg.is_enabled(LintId::NUMERIC_FALLBACK) {
        findings.extend(detect_numeric_fallback(file, cfg));
    }
    if cfg.is_enabled(LintId::UNSAFE_BLOCKS) {
        findings.extend(detect_unsafe_blocks(file, cfg));
    }
    if cfg.is_enabled(LintId::MISSING_DEBUG) {
        findings.extend(detect_missing_debug(file, cfg));
    }
    findings.sort_by(|a, b| {
        (a.span.lo, a.lint.as_str(), a.span.hi).cmp(&(b.span.lo, b.lint.as_str(), b.span.hi))
    });
    findings
}

macro_rules! native_fixer {
    ($name:ident, $lint:ident, $detect:ident) => {
        pub struct $name {
            cfg: DetectorConfig,
        }

        impl $name {
            pub fn new(cfg: DetectorConfig) -> Self {
                Self { cfg }
            }
        }

        impl crate::rewrite::Fixer for $name {
            fn lint(&self) -> LintId {
                LintId::$lint()
            }

            fn findings(&self, file: &SourceFile) -> Vec<Finding> {
                $detect(file, &self.cfg)
            }
        }
    };
}

native_fixer!(ArithmeticFixer, arithmetic, detect_arithmetic);
native_fixer!(NumericFallbackFixer, numeric_fallback, detect_numeric_fallback);
native_fixer!(UnsafeBlockFixer, unsafe_blocks, detect_unsafe_blocks);
native_fixer!(MissingDebugFixer, missing_debug, detect_missing_debug);

/// Enabled fixers in canonical order: arithmetic first so its statement-level
/// rewrites win conflicts, then suffixing, then the line inserters.
pub fn enabled_fixers(cfg: &DetectorConfig) -> Vec<Box<dyn crate::rewrite::Fixer>> {
    let mut fixers: Vec<Box<dyn crate::rewrite::Fixer>> = Vec::new();
    if cfg.is_enabled(LintId::ARITHMETIC) {
        fixers.push(Box::new(ArithmeticFixer::new(cfg.clone())));
    }
    if cfg.is_enabled(LintId::NUMERIC_FALLBACK) {
        fixers.push(Box::new(NumericFallbackFixer::new(cfg.clone())));
    }
    if cfg.is_enabled(LintId::UNSAFE_BLOCKS) {
        fixers.push(Box::new(UnsafeBlockFixer::new(cfg.clone())));
    }
    if cfg.is_enabled(LintId::MISSING_DEBUG) {
        fixers.push(Box::new(MissingDebugFixer::new(cfg.clone())));
    }
    fixers
}
