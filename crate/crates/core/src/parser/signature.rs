//! Declaration headers: modifiers, types, names and parameter lists.

use crate::diagnostics::{Code, Diagnostic};
use crate::model::{MemberKind, Param, Signature, Span, TypeRef, Visibility};

use super::lexer::{tokenize, Token, TokenKind};

const MODIFIERS: &[&str] =
    &["static", "final", "abstract", "synchronized", "native", "transient", "volatile", "default"];

const PRIMITIVES: &[&str] =
    &["void", "boolean", "byte", "char", "short", "int", "long", "float", "double"];

/// A parsed member header.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Declaration {
    pub kind: MemberKind,
    pub visibility: Visibility,
    pub modifiers: Vec<String>,
    pub signature: Signature,
}

/// Where a header ended.
#[derive(Debug)]
pub(crate) enum HeaderEnd {
    /// After `)` (and any `throws` list). Body, `;` or internal comment may follow.
    Callable,
    /// At `;` (consumed).
    Attribute,
    /// At `=`; the initializer runs to the next `;` at depth zero.
    AttributeInit,
}

pub(crate) struct HeaderParser<'t> {
    pub toks: &'t [Token],
    pub pos: usize,
    pub diags: Vec<Diagnostic>,
}

type Res<T> = Result<T, Diagnostic>;

impl<'t> HeaderParser<'t> {
    fn peek(&self) -> Option<&'t Token> {
        self.toks.get(self.pos)
    }

    fn err(&self, message: impl Into<String>) -> Diagnostic {
        let span = self
            .peek()
            .or_else(|| self.toks.last())
            .map(|t| t.span)
            .unwrap_or_default();
        Diagnostic::new(Code::P002, span, message)
    }

    fn eat_punct(&mut self, c: char) -> bool {
        if self.peek().is_some_and(|t| t.is_punct(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn name(&mut self) -> Res<String> {
        match self.peek().and_then(Token::ident) {
            Some(w) => {
                self.pos += 1;
                Ok(w.to_string())
            }
            None => Err(self.err("expected a name")),
        }
    }

    /// `<...>` starting at the current `<`, returned verbatim-normalized.
    pub fn type_args(&mut self) -> Res<String> {
        let mut text = String::from("<");
        self.pos += 1;
        let mut depth = 1;
        while depth > 0 {
            let tok = self.peek().ok_or_else(|| self.err("unclosed `<`"))?;
            self.pos += 1;
            match &tok.kind {
                TokenKind::Punct('<') => {
                    depth += 1;
                    text.push('<');
                }
                TokenKind::Punct('>') => {
                    depth -= 1;
                    text.push('>');
                }
                TokenKind::Punct(',') => text.push_str(", "),
                TokenKind::Punct('?') => text.push('?'),
                TokenKind::Punct('[') => text.push('['),
                TokenKind::Punct(']') => text.push(']'),
                TokenKind::Punct('.') => text.push('.'),
                TokenKind::Punct('&') => text.push_str(" & "),
                TokenKind::Ident(w) => {
                    if text.ends_with(|c: char| c.is_alphanumeric() || c == '?' || c == '_') {
                        text.push(' ');
                    }
                    text.push_str(w);
                }
                _ => return Err(self.err("unexpected token in type arguments")),
            }
        }
        Ok(text)
    }

    pub fn type_ref(&mut self) -> Res<TypeRef> {
        let mut text = self.name()?;
        while self.peek().is_some_and(|t| t.is_punct('.') && t.end - t.start == 1)
            && self.toks.get(self.pos + 1).and_then(Token::ident).is_some()
        {
            self.pos += 1;
            text.push('.');
            text.push_str(&self.name()?);
        }
        if self.peek().is_some_and(|t| t.is_punct('<')) {
            text.push_str(&self.type_args()?);
        }
        while self.peek().is_some_and(|t| t.is_punct('['))
            && self.toks.get(self.pos + 1).is_some_and(|t| t.is_punct(']'))
        {
            self.pos += 2;
            text.push_str("[]");
        }
        Ok(TypeRef::new(text))
    }

    fn params(&mut self) -> Res<Vec<Param>> {
        let mut params: Vec<Param> = Vec::new();
        if self.eat_punct(')') {
            return Ok(params);
        }
        loop {
            while self.peek().is_some_and(|t| t.is_ident("final")) {
                self.pos += 1;
            }
            let mut ty = self.type_ref()?;
            if self.peek().is_some_and(|t| t.is_punct('.') && t.end - t.start == 3) {
                // varargs `T... xs`
                self.pos += 1;
                ty = TypeRef::new(format!("{ty}..."));
            }
            let name = self.name()?;
            if PRIMITIVES.contains(&name.as_str()) {
                return Err(self.err(format!("`{name}` is not a parameter name")));
            }
            if params.iter().any(|p| p.name == name) {
                return Err(self.err(format!("duplicate parameter name `{name}`")));
            }
            params.push(Param { name, ty });
            if self.eat_punct(')') {
                return Ok(params);
            }
            if !self.eat_punct(',') {
                return Err(self.err("expected `,` or `)` in parameter list"));
            }
        }
    }

    /// Parse modifiers through the end of a member header. `class_name`
    /// is used to recognise constructors; `None` accepts any name.
    pub fn member_header(&mut self, class_name: Option<&str>) -> Res<(Declaration, HeaderEnd)> {
        let mut visibility = Visibility::Package;
        let mut modifiers = Vec::new();
        while let Some(word) = self.peek().and_then(Token::ident) {
            match word {
                "public" => visibility = Visibility::Public,
                "private" => visibility = Visibility::Private,
                "protected" => {
                    let span = self.peek().unwrap().span;
                    self.diags.push(Diagnostic::new(
                        Code::P009,
                        span,
                        "`protected` is read as package visibility",
                    ));
                    visibility = Visibility::Package;
                }
                w if MODIFIERS.contains(&w) => modifiers.push(w.to_string()),
                _ => break,
            }
            self.pos += 1;
        }
        if self.peek().is_some_and(|t| t.is_punct('<')) {
            return Err(self.err("generic methods are not supported"));
        }
        let first = self.type_ref()?;

        if self.eat_punct('(') {
            let (name, type_args) = match first.as_str().find('<') {
                Some(i) => (first.as_str()[..i].to_string(), Some(first.as_str()[i..].to_string())),
                None => (first.as_str().to_string(), None),
            };
            if class_name.is_some_and(|c| c != name) || PRIMITIVES.contains(&name.as_str()) {
                return Err(self.err(format!("method `{name}` has no return type")));
            }
            let params = self.params()?;
            let throws = self.throws()?;
            let signature = Signature { name, type_args, params, throws, ..Signature::default() };
            let decl = Declaration { kind: MemberKind::Constructor, visibility, modifiers, signature };
            return Ok((decl, HeaderEnd::Callable));
        }

        let name = self.name()?;
        if self.eat_punct('(') {
            let params = self.params()?;
            let throws = self.throws()?;
            let signature = Signature { name, params, return_type: Some(first), throws, ..Signature::default() };
            let decl = Declaration { kind: MemberKind::Method, visibility, modifiers, signature };
            return Ok((decl, HeaderEnd::Callable));
        }
        let signature = Signature { name, declared_type: Some(first), ..Signature::default() };
        let decl = Declaration { kind: MemberKind::Attribute, visibility, modifiers, signature };
        if self.eat_punct(';') {
            Ok((decl, HeaderEnd::Attribute))
        } else if self.eat_punct('=') {
            Ok((decl, HeaderEnd::AttributeInit))
        } else {
            Err(self.err("expected `(`, `;` or `=` after member name"))
        }
    }

    fn throws(&mut self) -> Res<Vec<TypeRef>> {
        let mut out = Vec::new();
        if self.peek().is_some_and(|t| t.is_ident("throws")) {
            self.pos += 1;
            loop {
                out.push(self.type_ref()?);
                if !self.eat_punct(',') {
                    break;
                }
            }
        }
        Ok(out)
    }
}

/// Parse a single declaration line such as `public void remove(T elem)` or
/// `private List<T> lst;`.
pub fn parse_signature(decl: &str) -> Result<Declaration, Diagnostic> {
    let (toks, mut lex_diags) = tokenize(decl);
    if let Some(d) = lex_diags.pop() {
        return Err(d);
    }
    let mut p = HeaderParser { toks: &toks, pos: 0, diags: Vec::new() };
    let (decl, end) = p.member_header(None)?;
    if let HeaderEnd::AttributeInit = end {
        while p.peek().is_some_and(|t| !t.is_punct(';')) {
            p.pos += 1;
        }
        p.eat_punct(';');
    }
    if p.pos < toks.len() && !toks[p.pos].is_punct('{') && !toks[p.pos].is_punct(';') {
        return Err(Diagnostic::new(Code::P002, toks[p.pos].span, "unexpected text after declaration"));
    }
    if toks.is_empty() {
        return Err(Diagnostic::new(Code::P002, Span::point(1, 1), "empty declaration"));
    }
    Ok(decl)
}
