//! Lossless lexical model of Rust-like source files.
//!
//! A file is split into tokens that tile it exactly — whitespace and comments
//! included — and the tokens are grouped into bracket-delimited trees. The
//! model is deliberately shallow: detectors need token shapes and byte-precise
//! spans, not a semantic AST. The one invariant everything else leans on is
//! that concatenating token texts in order reproduces the input byte for byte.

use std::path::PathBuf;

use thiserror::Error;

/// Byte range within one file, half-open, plus the 1-based line of its start.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    pub lo: usize,
    pub hi: usize,
    pub line: u32,
}

impl Span {
    pub fn new(lo: usize, hi: usize, line: u32) -> Self {
        debug_assert!(lo <= hi);
        Span { lo, hi, line }
    }

    pub fn len(&self) -> usize {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.lo == self.hi
    }

    /// True when `offset` falls strictly inside the span.
    pub fn contains(&self, offset: usize) -> bool {
        self.lo <= offset && offset < self.hi
    }

    /// True when `other` lies entirely within `self`.
    pub fn covers(&self, other: Span) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Keyword,
    Ident,
    Int,
    Float,
    Str,
    Comment,
    Whitespace,
    Punct,
    OpenDelim,
    CloseDelim,
    Lifetime,
    Other,
}

impl TokenKind {
    /// Tokens that carry no syntactic weight for pattern scans.
    pub fn is_trivia(self) -> bool {
        matches!(self, TokenKind::Whitespace | TokenKind::Comment)
    }
}

/// One lexical token. `text` is the exact source slice for `span`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub span: Span,
    /// Type suffix of a numeric literal (`0_i32` carries `i32`), if any.
    pub suffix: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Delim {
    Paren,
    Bracket,
    Brace,
}

impl Delim {
    fn from_open(c: char) -> Option<Delim> {
        match c {
            '(' => Some(Delim::Paren),
            '[' => Some(Delim::Bracket),
            '{' => Some(Delim::Brace),
            _ => None,
        }
    }

    fn close_char(self) -> char {
        match self {
            Delim::Paren => ')',
            Delim::Bracket => ']',
            Delim::Brace => '}',
        }
    }
}

/// Tokens nested by balanced delimiters. Leaves index into the owning file's
/// token list; in-order leaf traversal visits every token exactly once.
#[derive(Debug, Clone)]
pub enum TokenTree {
    Leaf(usize),
    Group {
        delim: Delim,
        /// Token index of the opening delimiter.
        open: usize,
        /// Token index of the closing delimiter.
        close: usize,
        children: Vec<TokenTree>,
        /// Covers open..close inclusive of both delimiter tokens.
        span: Span,
    },
}

impl TokenTree {
    pub fn span(&self, tokens: &[Token]) -> Span {
        match self {
            TokenTree::Leaf(i) => tokens[*i].span,
            TokenTree::Group { span, .. } => *span,
        }
    }
}

/// A file and every derived lexical view of it. Immutable after construction.
#[derive(Debug, Clone)]
pub struct SourceFile {
    pub path: PathBuf,
    pub content: String,
    pub tokens: Vec<Token>,
    pub trees: Vec<TokenTree>,
    /// Byte offset of the start of each line; always begins with 0.
    pub line_starts: Vec<usize>,
}

impl SourceFile {
    pub fn parse(path: impl Into<PathBuf>, content: impl Into<String>) -> Result<Self, SourceError> {
        let content = content.into();
        let tokens = tokenize(&content)?;
        let trees = build_trees(&tokens)?;
        let line_starts = line_starts(&content);
        Ok(SourceFile {
            path: path.into(),
            content,
            tokens,
            trees,
            line_starts,
        })
    }

    pub fn parse_bytes(path: impl Into<PathBuf>, bytes: &[u8]) -> Result<Self, SourceError> {
        let content = decode_utf8(bytes)?;
        Self::parse(path, content)
    }

    pub fn token(&self, idx: usize) -> &Token {
        &self.tokens[idx]
    }

    pub fn token_text(&self, idx: usize) -> &str {
        &self.tokens[idx].text
    }

    /// 1-based line containing the byte offset.
    pub fn line_of(&self, offset: usize) -> u32 {
        line_of(&self.line_starts, offset)
    }

    /// Byte offset where the given 1-based line starts.
    pub fn line_start(&self, line: u32) -> usize {
        self.line_starts[(line as usize).saturating_sub(1)]
    }

    /// Leading whitespace of the given 1-based line.
    pub fn line_indent(&self, line: u32) -> &str {
        let start = self.line_start(line);
        let rest = &self.content[start..];
        let end = rest
            .find(|c: char| !(c == ' ' || c == '\t'))
            .unwrap_or(rest.len());
        &rest[..end]
    }

    pub fn path_display(&self) -> String {
        self.path.display().to_string()
    }
}

#[derive(Debug, Error)]
pub enum SourceError {
    #[error("{path}: invalid UTF-8 at byte {offset}")]
    Encoding { path: String, offset: usize },
    #[error("unterminated {what} starting at byte {lo}")]
    Unterminated { what: &'static str, lo: usize, line: u32 },
    #[error("unmatched closing delimiter `{found}` at byte {lo}")]
    Unbalanced { found: String, lo: usize, line: u32 },
    #[error("mismatched delimiter: expected `{expected}`, found `{found}` at byte {lo}")]
    Mismatched { expected: char, found: String, lo: usize, line: u32 },
    #[error("unclosed delimiter `{open}` at byte {lo}")]
    Unclosed { open: String, lo: usize, line: u32 },
}

/// How lines are counted for density metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LineMode {
    #[default]
    Raw,
    NonBlank,
}

impl LineMode {
    pub fn as_str(self) -> &'static str {
        match self {
            LineMode::Raw => "raw",
            LineMode::NonBlank => "nonblank",
        }
    }
}

/// Count lines. `Raw` counts newline-separated lines; `NonBlank` counts lines
/// holding at least one non-whitespace byte. The empty file is 0 in both modes.
pub fn line_count(content: &str, mode: LineMode) -> u64 {
    match mode {
        LineMode::Raw => {
            if content.is_empty() {
                0
            } else {
                let newlines = content.bytes().filter(|&b| b == b'\n').count() as u64;
                if content.ends_with('\n') {
                    newlines
                } else {
                    newlines + 1
                }
            }
        }
        LineMode::NonBlank => content
            .split('\n')
            .filter(|line| line.chars().any(|c| !c.is_whitespace()))
            .count() as u64,
    }
}

fn decode_utf8(bytes: &[u8]) -> Result<String, SourceError> {
    String::from_utf8(bytes.to_vec()).map_err(|e| SourceError::Encoding {
        path: String::new(),
        offset: e.utf8_error().valid_up_to(),
    })
}

/// Tokenize raw bytes; invalid UTF-8 is an error rather than a panic.
pub fn tokenize_bytes(bytes: &[u8]) -> Result<Vec<Token>, SourceError> {
    let content = decode_utf8(bytes)?;
    tokenize(&content)
}

const KEYWORDS: &[&str] = &[
    "as", "async", "await", "break", "const", "continue", "crate", "dyn", "else", "enum",
    "extern", "false", "fn", "for", "if", "impl", "in", "let", "loop", "match", "mod", "move",
    "mut", "pub", "ref", "return", "self", "Self", "static", "struct", "super", "trait", "true",
    "type", "unsafe", "use", "where", "while",
];

// Longest first so maximal munch falls out of the scan order.
const PUNCTS_3: &[&str] = &["<<=", ">>=", "..=", "..."];
const PUNCTS_2: &[&str] = &[
    "::", "->", "=>", "==", "!=", "<=", ">=", "&&", "||", "<<", ">>", "+=", "-=", "*=", "/=",
    "%=", "&=", "|=", "^=", "..",
];
const PUNCTS_1: &[char] = &[
    '+', '-', '*', '/', '%', '=', '<', '>', '&', '|', '^', '!', '~', '@', '#', '$', '?', ',',
    ';', ':', '.',
];

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    tokens: Vec<RawToken>,
}

struct RawToken {
    kind: TokenKind,
    lo: usize,
    hi: usize,
    suffix: Option<String>,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src,
            pos: 0,
            tokens: Vec::new(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.rest().chars().nth(n)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn eat_while(&mut self, pred: impl Fn(char) -> bool) {
        while let Some(c) = self.peek() {
            if pred(c) {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn push(&mut self, kind: TokenKind, lo: usize) {
        self.push_suffixed(kind, lo, None);
    }

    fn push_suffixed(&mut self, kind: TokenKind, lo: usize, suffix: Option<String>) {
        self.tokens.push(RawToken {
            kind,
            lo,
            hi: self.pos,
            suffix,
        });
    }

    fn err(&self, what: &'static str, lo: usize) -> SourceError {
        SourceError::Unterminated {
            what,
            lo,
            line: line_of(&line_starts(self.src), lo),
        }
    }

    fn run(mut self) -> Result<Vec<RawToken>, SourceError> {
        while let Some(c) = self.peek() {
            let lo = self.pos;
            if c.is_whitespace() {
                self.eat_while(|c| c.is_whitespace());
                self.push(TokenKind::Whitespace, lo);
            } else if self.rest().starts_with("//") {
                self.eat_while(|c| c != '\n');
                self.push(TokenKind::Comment, lo);
            } else if self.rest().starts_with("/*") {
                self.block_comment(lo)?;
            } else if c == '"' {
                self.bump();
                self.string_body(lo, "string literal")?;
            } else if c == '\'' {
                self.lifetime_or_char(lo)?;
            } else if c.is_ascii_digit() {
                self.number(lo);
            } else if let Some(len) = string_prefix_len(self.rest()) {
                // b"..", r"..", br#"..."#, c"..", b'x' and friends.
                self.prefixed_literal(lo, len)?;
            } else if is_ident_start(c) {
                self.eat_while(is_ident_continue);
                let kind = if KEYWORDS.contains(&&self.src[lo..self.pos]) {
                    TokenKind::Keyword
                } else {
                    TokenKind::Ident
                };
                self.push(kind, lo);
            } else if Delim::from_open(c).is_some() {
                self.bump();
                self.push(TokenKind::OpenDelim, lo);
            } else if matches!(c, ')' | ']' | '}') {
                self.bump();
                self.push(TokenKind::CloseDelim, lo);
            } else if let Some(p) = PUNCTS_3.iter().find(|p| self.rest().starts_with(**p)) {
                self.pos += p.len();
                self.push(TokenKind::Punct, lo);
            } else if let Some(p) = PUNCTS_2.iter().find(|p| self.rest().starts_with(**p)) {
                self.pos += p.len();
                self.push(TokenKind::Punct, lo);
            } else if PUNCTS_1.contains(&c) {
                self.bump();
                self.push(TokenKind::Punct, lo);
            } else {
                self.bump();
                self.push(TokenKind::Other, lo);
            }
        }
        Ok(self.tokens)
    }

    fn block_comment(&mut self, lo: usize) -> Result<(), SourceError> {
        self.pos += 2;
        let mut depth = 1usize;
        while depth > 0 {
            if self.rest().starts_with("/*") {
                depth += 1;
                self.pos += 2;
            } else if self.rest().starts_with("*/") {
                depth -= 1;
                self.pos += 2;
            } else if self.bump().is_none() {
                return Err(self.err("block comment", lo));
            }
        }
        self.push(TokenKind::Comment, lo);
        Ok(())
    }

    /// Body of a non-raw string after its opening quote, handling escapes.
    fn string_body(&mut self, lo: usize, what: &'static str) -> Result<(), SourceError> {
        loop {
            match self.bump() {
                None => return Err(self.err(what, lo)),
                Some('\\') => {
                    self.bump();
                }
                Some('"') => break,
                Some(_) => {}
            }
        }
        self.push(TokenKind::Str, lo);
        Ok(())
    }

    fn prefixed_literal(&mut self, lo: usize, prefix_len: usize) -> Result<(), SourceError> {
        let prefix = &self.src[lo..lo + prefix_len];
        self.pos += prefix_len;
        if prefix.ends_with('\'') {
            // byte char literal b'x'
            match self.bump() {
                None => return Err(self.err("byte literal", lo)),
                Some('\\') => {
                    self.bump();
                }
                Some(_) => {}
            }
            if self.peek() == Some('\'') {
                self.bump();
                self.push(TokenKind::Str, lo);
                Ok(())
            } else {
                Err(self.err("byte literal", lo))
            }
        } else if prefix.ends_with('r') {
            let mut hashes = 0;
            while self.peek() == Some('#') {
                hashes += 1;
                self.bump();
            }
            if self.peek() != Some('"') {
                return Err(self.err("raw string literal", lo));
            }
            self.bump();
            let closing: String = std::iter::once('"')
                .chain(std::iter::repeat_n('#', hashes))
                .collect();
            match self.rest().find(&closing) {
                Some(at) => {
                    self.pos += at + closing.len();
                    self.push(TokenKind::Str, lo);
                    Ok(())
                }
                None => Err(self.err("raw string literal", lo)),
            }
        } else {
            // b"..." or c"..." with ordinary escapes
            self.bump();
            self.string_body(lo, "string literal")
        }
    }

    fn lifetime_or_char(&mut self, lo: usize) -> Result<(), SourceError> {
        self.bump(); // the quote
        let first = self.peek();
        let second = self.peek_at(1);
        let is_lifetime = match first {
            Some(c) if is_ident_start(c) => second != Some('\''),
            _ => false,
        };
        if is_lifetime {
            self.eat_while(is_ident_continue);
            self.push(TokenKind::Lifetime, lo);
            return Ok(());
        }
        match self.bump() {
            None => return Err(self.err("character literal", lo)),
            Some('\\') => {
                // escapes: \n \' \\ \u{...} \x7f
                match self.bump() {
                    Some('u') => {
                        if self.peek() == Some('{') {
                            self.bump();
                            self.eat_while(|c| c != '}');
                            self.bump();
                        }
                    }
                    Some('x') => {
                        self.bump();
                        self.bump();
                    }
                    _ => {}
                }
            }
            Some(_) => {}
        }
        if self.peek() == Some('\'') {
            self.bump();
            self.push(TokenKind::Str, lo);
            Ok(())
        } else {
            Err(self.err("character literal", lo))
        }
    }

    fn number(&mut self, lo: usize) {
        let mut is_float = false;
        let mut suffix_allowed = true;
        if self.rest().starts_with("0x") || self.rest().starts_with("0X") {
            self.pos += 2;
            self.eat_while(|c| c.is_ascii_hexdigit() || c == '_');
        } else if self.rest().starts_with("0o") || self.rest().starts_with("0O")
            || self.rest().starts_with("0b") || self.rest().starts_with("0B")
        {
            self.pos += 2;
            self.eat_while(|c| c.is_ascii_digit() || c == '_');
        } else {
            self.eat_while(|c| c.is_ascii_digit() || c == '_');
            if self.peek() == Some('.') {
                match self.peek_at(1) {
                    Some(c) if c.is_ascii_digit() => {
                        is_float = true;
                        self.bump();
                        self.eat_while(|c| c.is_ascii_digit() || c == '_');
                        self.exponent();
                    }
                    Some(c) if is_ident_start(c) || c == '.' => {
                        // `1.method()`, `1..n`: the dot is not ours.
                    }
                    _ => {
                        // trailing-dot float like `1.`; no suffix can follow
                        is_float = true;
                        suffix_allowed = false;
                        self.bump();
                    }
                }
            } else if self.exponent() {
                is_float = true;
            }
        }
        let mut suffix = None;
        if suffix_allowed {
            if let Some(c) = self.peek() {
                if c.is_alphabetic() {
                    let start = self.pos;
                    self.eat_while(is_ident_continue);
                    suffix = Some(self.src[start..self.pos].to_string());
                }
            }
        }
        let kind = if is_float || matches!(suffix.as_deref(), Some("f32") | Some("f64")) {
            TokenKind::Float
        } else {
            TokenKind::Int
        };
        self.push_suffixed(kind, lo, suffix);
    }

    /// Consume `e`/`E` exponents when actually followed by digits.
    fn exponent(&mut self) -> bool {
        if !matches!(self.peek(), Some('e') | Some('E')) {
            return false;
        }
        let mut n = 1;
        if matches!(self.peek_at(1), Some('+') | Some('-')) {
            n = 2;
        }
        if matches!(self.peek_at(n), Some(c) if c.is_ascii_digit()) {
            for _ in 0..=n {
                self.bump();
            }
            self.eat_while(|c| c.is_ascii_digit() || c == '_');
            true
        } else {
            false
        }
    }
}

/// Detects `b"`, `r"`, `br#`, `c"`, `b'` style literal prefixes. Returns the
/// byte length of the prefix letters (plus the quote for byte chars), or None
/// when the letters are just the start of an identifier (`broken`, `r#ident`).
fn string_prefix_len(rest: &str) -> Option<usize> {
    let bytes = rest.as_bytes();
    let letters = if rest.starts_with("br") || rest.starts_with("cr") {
        2
    } else if rest.starts_with('b') || rest.starts_with('c') || rest.starts_with('r') {
        1
    } else {
        return None;
    };
    if letters == 1 && bytes[0] == b'b' && bytes.get(1) == Some(&b'\'') {
        return Some(2);
    }
    let raw = bytes[letters - 1] == b'r';
    match bytes.get(letters) {
        Some(&b'"') => Some(letters),
        Some(&b'#') if raw => {
            // raw string, unless the hashes introduce a raw identifier
            let mut i = letters;
            while bytes.get(i) == Some(&b'#') {
                i += 1;
            }
            if bytes.get(i) == Some(&b'"') {
                Some(letters)
            } else {
                None
            }
        }
        _ => None,
    }
}

fn is_ident_start(c: char) -> bool {
    c == '_' || c.is_alphabetic()
}

fn is_ident_continue(c: char) -> bool {
    c == '_' || c.is_alphanumeric()
}

fn line_starts(content: &str) -> Vec<usize> {
    let mut starts = vec![0];
    for (i, b) in content.bytes().enumerate() {
        if b == b'\n' {
            starts.push(i + 1);
        }
    }
    starts
}

fn line_of(starts: &[usize], offset: usize) -> u32 {
    starts.partition_point(|&s| s <= offset) as u32
}

/// Lossless lexing: concatenating the returned token texts reproduces
/// `content` exactly.
pub fn tokenize(content: &str) -> Result<Vec<Token>, SourceError> {
    let raw = Lexer::new(content).run()?;
    let starts = line_starts(content);
    Ok(raw
        .into_iter()
        .map(|t| Token {
            kind: t.kind,
            text: content[t.lo..t.hi].to_string(),
            span: Span::new(t.lo, t.hi, line_of(&starts, t.lo)),
            suffix: t.suffix,
        })
        .collect())
}

/// Group a token stream by balanced `()`, `[]`, `{}`.
pub fn build_trees(tokens: &[Token]) -> Result<Vec<TokenTree>, SourceError> {
    struct Open {
        delim: Delim,
        open_idx: usize,
        children: Vec<TokenTree>,
    }
    let mut stack: Vec<Open> = Vec::new();
    let mut top: Vec<TokenTree> = Vec::new();
    for (i, t) in tokens.iter().enumerate() {
        match t.kind {
            TokenKind::OpenDelim => {
                let delim = Delim::from_open(t.text.chars().next().unwrap()).unwrap();
                stack.push(Open {
                    delim,
                    open_idx: i,
                    children: Vec::new(),
                });
            }
            TokenKind::CloseDelim => {
                let c = t.text.chars().next().unwrap();
                let Some(open) = stack.pop() else {
                    return Err(SourceError::Unbalanced {
                        found: t.text.clone(),
                        lo: t.span.lo,
                        line: t.span.line,
                    });
                };
                if open.delim.close_char() != c {
                    return Err(SourceError::Mismatched {
                        expected: open.delim.close_char(),
                        found: t.text.clone(),
                        lo: t.span.lo,
                        line: t.span.line,
                    });
                }
                let open_tok = &tokens[open.open_idx];
                let group = TokenTree::Group {
                    delim: open.delim,
                    open: open.open_idx,
                    close: i,
                    children: open.children,
                    span: Span::new(open_tok.span.lo, t.span.hi, open_tok.span.line),
                };
                match stack.last_mut() {
                    Some(parent) => parent.children.push(group),
                    None => top.push(group),
                }
            }
            _ => {
                let leaf = TokenTree::Leaf(i);
                match stack.last_mut() {
                    Some(parent) => parent.children.push(leaf),
                    None => top.push(leaf),
                }
            }
        }
    }
    if let Some(open) = stack.last() {
        let t = &tokens[open.open_idx];
        return Err(SourceError::Unclosed {
            open: t.text.clone(),
            lo: t.span.lo,
            line: t.span.line,
        });
    }
    Ok(top)
}
