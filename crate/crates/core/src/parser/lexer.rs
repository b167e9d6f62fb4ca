//! Token stream for the declaration grammar. Ordinary comments are
//! dropped; doc comments are kept as tokens so declarations can claim them.

use crate::diagnostics::{Code, Diagnostic};
use crate::model::{Position, Span};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum TokenKind {
    Ident(String),
    /// Numeric literal, verbatim.
    Number(String),
    /// String or character literal, verbatim including quotes.
    Literal(String),
    Punct(char),
    /// Interior of a `/** ... */` comment.
    DocComment(String),
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub kind: TokenKind,
    pub span: Span,
    /// Byte offsets into the source.
    pub start: usize,
    pub end: usize,
}

impl Token {
    pub fn is_punct(&self, c: char) -> bool {
        self.kind == TokenKind::Punct(c)
    }

    pub fn is_ident(&self, word: &str) -> bool {
        matches!(&self.kind, TokenKind::Ident(w) if w == word)
    }

    pub fn ident(&self) -> Option<&str> {
        match &self.kind {
            TokenKind::Ident(w) => Some(w),
            _ => None,
        }
    }

    pub fn is_doc(&self) -> bool {
        matches!(self.kind, TokenKind::DocComment(_))
    }
}

struct Cursor<'a> {
    src: &'a str,
    /// Byte offset.
    pos: usize,
    line: u32,
    column: u32,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.src[self.pos..].chars().nth(n)
    }

    fn starts_with(&self, s: &str) -> bool {
        self.src[self.pos..].starts_with(s)
    }

    fn here(&self) -> Position {
        Position::new(self.line, self.column)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }
}

pub(crate) fn tokenize(src: &str) -> (Vec<Token>, Vec<Diagnostic>) {
    let mut cur = Cursor { src, pos: 0, line: 1, column: 1 };
    let mut tokens = Vec::new();
    let mut diags = Vec::new();

    while let Some(c) = cur.peek() {
        let start = cur.pos;
        let start_pos = cur.here();
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        if cur.starts_with("//") {
            while let Some(c) = cur.peek() {
                if c == '\n' {
                    break;
                }
                cur.bump();
            }
            continue;
        }
        if cur.starts_with("/*") {
            let is_doc = cur.starts_with("/**") && !cur.starts_with("/**/");
            cur.bump();
            cur.bump();
            let interior_start = if is_doc {
                cur.bump();
                cur.pos
            } else {
                cur.pos
            };
            let mut closed = false;
            while cur.peek().is_some() {
                if cur.starts_with("*/") {
                    closed = true;
                    break;
                }
                cur.bump();
            }
            if !closed {
                diags.push(Diagnostic::new(
                    Code::P001,
                    Span::new(start_pos, cur.here()),
                    "comment is not closed before end of file",
                ));
                break;
            }
            let interior_end = cur.pos;
            cur.bump();
            cur.bump();
            if is_doc {
                tokens.push(Token {
                    kind: TokenKind::DocComment(src[interior_start..interior_end].to_string()),
                    span: Span::new(start_pos, cur.here()),
                    start,
                    end: cur.pos,
                });
            }
            continue;
        }
        let kind = if c.is_alphabetic() || c == '_' || c == '$' {
            while cur.peek().is_some_and(|c| c.is_alphanumeric() || c == '_' || c == '$') {
                cur.bump();
            }
            TokenKind::Ident(src[start..cur.pos].to_string())
        } else if c.is_ascii_digit() {
            while cur.peek().is_some_and(|c| c.is_alphanumeric() || c == '_' || c == '.') {
                cur.bump();
            }
            TokenKind::Number(src[start..cur.pos].to_string())
        } else if c == '"' || c == '\'' {
            cur.bump();
            while let Some(ch) = cur.peek() {
                if ch == '\n' {
                    break;
                }
                cur.bump();
                if ch == '\\' {
                    cur.bump();
                } else if ch == c {
                    break;
                }
            }
            TokenKind::Literal(src[start..cur.pos].to_string())
        } else {
            // `...` in varargs and `::` in method refs are rare enough to
            // stay single-character punctuation.
            if c == '.' && cur.peek_at(1) == Some('.') && cur.peek_at(2) == Some('.') {
                cur.bump();
                cur.bump();
            }
            cur.bump();
            TokenKind::Punct(c)
        };
        tokens.push(Token { kind, span: Span::new(start_pos, cur.here()), start, end: cur.pos });
    }
    (tokens, diags)
}
