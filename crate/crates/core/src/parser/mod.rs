//! Annotated source text to [`MasterDocument`].
//!
//! Declarations follow a small Java subset: one class header with an
//! optional type-parameter list, attributes, constructors and methods,
//! with bodies kept as opaque text. Doc comments attach by placement: the
//! comment right above a public declaration is its external
//! specification, a comment directly below the header (before the body) is
//! its internal specification. Non-public members have no external view,
//! so their comment above is internal.

mod expr;
mod lexer;
mod signature;
mod spec;

use std::collections::HashSet;

use crate::diagnostics::{Code, Diagnostic};
use crate::model::{ClassUnit, MasterDocument, Member, MemberKind, NodeId, Span, SpecBlock, Visibility};

pub use expr::{classify_clause, parse_clause_expression};
pub use signature::{parse_signature, Declaration};
pub use spec::parse_spec_block;

use lexer::{tokenize, Token, TokenKind};
use signature::{HeaderEnd, HeaderParser};

const CLASS_MODIFIERS: &[&str] = &["public", "private", "protected", "abstract", "final", "static"];

/// A class, its span, and the index and span of each member.
type ParsedClass = (ClassUnit, Span, Vec<(usize, Span)>);

struct DocParser<'s> {
    src: &'s str,
    toks: Vec<Token>,
    pos: usize,
    diags: Vec<Diagnostic>,
    doc: MasterDocument,
}

fn doc_text(tok: &Token) -> &str {
    match &tok.kind {
        TokenKind::DocComment(text) => text,
        _ => "",
    }
}

/// Append `extra`'s clauses to `base`.
fn merge_blocks(base: &mut SpecBlock, extra: SpecBlock) {
    match (&mut base.desc, extra.desc) {
        (Some(d), Some(e)) => {
            d.raw.push(' ');
            d.raw.push_str(&e.raw);
        }
        (slot @ None, e) => *slot = e,
        _ => {}
    }
    base.invariants.extend(extra.invariants);
    base.requires.extend(extra.requires);
    base.ensures.extend(extra.ensures);
    base.signals.extend(extra.signals);
    base.assignable.extend(extra.assignable);
    base.pure |= extra.pure;
    base.represents.extend(extra.represents);
    base.subspecs.extend(extra.subspecs);
    base.unknown.extend(extra.unknown);
}

impl<'s> DocParser<'s> {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn peek_at(&self, offset: usize) -> Option<&Token> {
        self.toks.get(self.pos + offset)
    }

    fn at_punct(&self, c: char) -> bool {
        self.peek().is_some_and(|t| t.is_punct(c))
    }

    fn at_doc(&self) -> bool {
        self.peek().is_some_and(Token::is_doc)
    }

    /// Parse the doc comment at token `idx`, shifting diagnostic positions
    /// from comment-relative to file-absolute.
    fn spec_of(&mut self, idx: usize) -> SpecBlock {
        let tok = &self.toks[idx];
        let origin = tok.span.start;
        let (block, diags) = parse_spec_block(doc_text(tok));
        for mut d in diags {
            for p in [&mut d.span.start, &mut d.span.end] {
                if p.line == 1 {
                    p.column += origin.column + 2;
                }
                p.line += origin.line - 1;
            }
            self.diags.push(d);
        }
        block
    }

    fn orphan(&mut self, idx: usize) {
        let span = self.toks[idx].span;
        self.diags.push(Diagnostic::new(Code::P006, span, "doc comment is not attached to any declaration"));
    }

    /// Skip a `{ ... }` block starting at the current token; returns the
    /// byte range strictly inside the braces.
    fn skip_block(&mut self) -> Option<(usize, usize)> {
        let open = self.peek()?.end;
        let mut depth = 0;
        while let Some(tok) = self.peek() {
            if tok.is_punct('{') {
                depth += 1;
            } else if tok.is_punct('}') {
                depth -= 1;
                if depth == 0 {
                    let close = tok.start;
                    self.pos += 1;
                    return Some((open, close));
                }
            }
            self.pos += 1;
        }
        None
    }

    fn recover_member(&mut self, start: usize) {
        if self.pos == start && !self.at_punct('}') && !self.at_doc() {
            self.pos += 1;
        }
        while let Some(tok) = self.peek() {
            if tok.is_punct(';') {
                self.pos += 1;
                return;
            }
            if tok.is_punct('}') || tok.is_doc() {
                return;
            }
            if tok.is_punct('{') {
                self.skip_block();
                return;
            }
            self.pos += 1;
        }
    }

    fn looks_like_class(&self) -> bool {
        let mut i = self.pos;
        while let Some(word) = self.toks.get(i).and_then(Token::ident) {
            if word == "class" {
                return true;
            }
            if !CLASS_MODIFIERS.contains(&word) {
                return false;
            }
            i += 1;
        }
        false
    }

    fn run(mut self) -> (MasterDocument, Vec<Diagnostic>) {
        let mut pending: Option<usize> = None;
        let mut names = HashSet::new();
        while let Some(tok) = self.peek() {
            if tok.is_doc() {
                if let Some(p) = pending.replace(self.pos) {
                    self.orphan(p);
                }
                self.pos += 1;
                continue;
            }
            if tok.is_ident("import") || tok.is_ident("package") {
                while self.peek().is_some_and(|t| !t.is_punct(';')) {
                    self.pos += 1;
                }
                self.pos += 1;
                continue;
            }
            if self.looks_like_class() {
                if let Some(class) = self.class(pending.take()) {
                    if names.insert(class.0.name.clone()) {
                        let idx = self.doc.classes.len();
                        for (mi, span) in class.2 {
                            self.doc.source_spans.insert(NodeId::Member(idx, mi), span);
                        }
                        self.doc.source_spans.insert(NodeId::Class(idx), class.1);
                        self.doc.classes.push(class.0);
                    } else {
                        self.diags.push(Diagnostic::new(
                            Code::P010,
                            class.1,
                            format!("class `{}` is declared twice; the second is skipped", class.0.name),
                        ));
                    }
                }
                continue;
            }
            let span = tok.span;
            self.diags.push(Diagnostic::new(Code::P002, span, "expected a class declaration"));
            if let Some(p) = pending.take() {
                self.orphan(p);
            }
            while let Some(tok) = self.peek() {
                if tok.is_doc() || self.looks_like_class() {
                    break;
                }
                if tok.is_punct('{') {
                    self.skip_block();
                } else {
                    self.pos += 1;
                }
            }
        }
        if let Some(p) = pending {
            self.orphan(p);
        }
        (self.doc, self.diags)
    }

    fn class(&mut self, comment: Option<usize>) -> Option<ParsedClass> {
        let start_tok = self.pos;
        let mut visibility = Visibility::Package;
        while let Some(word) = self.peek().and_then(Token::ident) {
            match word {
                "class" => break,
                "public" => visibility = Visibility::Public,
                "private" => visibility = Visibility::Private,
                other => {
                    let span = self.peek().unwrap().span;
                    self.diags.push(Diagnostic::new(
                        Code::P009,
                        span,
                        format!("class modifier `{other}` is not supported and is dropped"),
                    ));
                }
            }
            self.pos += 1;
        }
        self.pos += 1; // `class`
        let Some(name) = self.peek().and_then(Token::ident).map(String::from) else {
            let span = self.peek().map(|t| t.span).unwrap_or(self.toks[self.pos - 1].span);
            self.diags.push(Diagnostic::new(Code::P002, span, "class without a name"));
            self.recover_member(self.pos);
            return None;
        };
        self.pos += 1;
        let mut class = ClassUnit::new(name);
        class.visibility = visibility;
        if self.at_punct('<') {
            let mut hp = HeaderParser { toks: &self.toks, pos: self.pos, diags: Vec::new() };
            match hp.type_args() {
                Ok(text) => {
                    self.pos = hp.pos;
                    class.type_params = split_top_level(&text[1..text.len() - 1]);
                }
                Err(d) => {
                    self.diags.push(d);
                    self.recover_member(self.pos);
                    return None;
                }
            }
        }
        let header_span = Span::new(self.toks[start_tok].span.start, self.toks[self.pos - 1].span.end);
        if self.peek().is_some_and(|t| t.is_ident("extends") || t.is_ident("implements")) {
            let span = self.peek().unwrap().span;
            self.diags.push(Diagnostic::new(Code::P002, span, "inheritance clauses are not supported and are dropped"));
            while self.peek().is_some_and(|t| !t.is_punct('{') && !t.is_doc()) {
                self.pos += 1;
            }
        }
        if let Some(c) = comment {
            class.external_spec = self.spec_of(c);
        }
        if self.at_doc() && self.peek_at(1).is_some_and(|t| t.is_punct('{')) {
            class.internal_spec = Some(self.spec_of(self.pos));
            self.pos += 1;
        }
        if !self.at_punct('{') {
            self.diags.push(Diagnostic::new(Code::P002, header_span, "expected `{` after class header"));
            return None;
        }
        self.pos += 1;

        let mut spans = Vec::new();
        let mut keys = HashSet::new();
        let mut pending: Option<usize> = None;
        loop {
            let Some(tok) = self.peek() else {
                self.diags.push(Diagnostic::new(
                    Code::P007,
                    header_span,
                    format!("class `{}` is not closed before end of file", class.name),
                ));
                break;
            };
            if tok.is_punct('}') {
                self.pos += 1;
                break;
            }
            if tok.is_doc() {
                if let Some(p) = pending.replace(self.pos) {
                    self.orphan(p);
                }
                self.pos += 1;
                continue;
            }
            if tok.is_punct(';') {
                self.pos += 1;
                continue;
            }
            if self.looks_like_class() {
                let span = tok.span;
                self.diags.push(Diagnostic::new(Code::P002, span, "nested classes are not supported"));
                while self.peek().is_some_and(|t| !t.is_punct('{')) {
                    self.pos += 1;
                }
                self.skip_block();
                pending = None;
                continue;
            }
            let start = self.pos;
            let Some((member, span)) = self.member(&class.name, pending.take()) else {
                self.recover_member(start);
                continue;
            };
            let key = match member.kind {
                MemberKind::Attribute => format!("attribute {}", member.name()),
                _ => format!("callable {}", member.signature.key()),
            };
            if keys.insert(key) {
                spans.push((class.members.len(), span));
                class.members.push(member);
            } else {
                self.diags.push(Diagnostic::new(
                    Code::P011,
                    span,
                    format!("`{}` is declared twice; the second is skipped", member.signature.key()),
                ));
            }
        }
        if let Some(p) = pending {
            self.orphan(p);
        }
        Some((class, header_span, spans))
    }

    fn member(&mut self, class_name: &str, comment: Option<usize>) -> Option<(Member, Span)> {
        let start = self.pos;
        let mut hp = HeaderParser { toks: &self.toks, pos: self.pos, diags: Vec::new() };
        let header = hp.member_header(Some(class_name));
        let pos = hp.pos;
        self.diags.append(&mut hp.diags);
        let (decl, end) = match header {
            Ok(ok) => ok,
            Err(d) => {
                self.diags.push(d);
                self.pos = pos;
                return None;
            }
        };
        self.pos = pos;
        let mut body = None;
        if let HeaderEnd::AttributeInit = end {
            let init_start = self.toks[self.pos - 1].end;
            let mut depth = 0i32;
            loop {
                match self.peek() {
                    Some(t) if t.is_punct(';') && depth == 0 => break,
                    Some(t) if t.is_punct('(') || t.is_punct('{') || t.is_punct('[') => depth += 1,
                    Some(t) if t.is_punct(')') || t.is_punct('}') || t.is_punct(']') => {
                        depth -= 1;
                        if depth < 0 {
                            let span = t.span;
                            self.diags.push(Diagnostic::new(Code::P002, span, "attribute initializer is not terminated by `;`"));
                            return None;
                        }
                    }
                    Some(t) if t.is_doc() => {
                        let span = t.span;
                        self.diags.push(Diagnostic::new(Code::P002, span, "attribute initializer is not terminated by `;`"));
                        return None;
                    }
                    Some(_) => {}
                    None => {
                        let span = self.toks[start].span;
                        self.diags.push(Diagnostic::new(Code::P002, span, "attribute initializer is not terminated by `;`"));
                        return None;
                    }
                }
                self.pos += 1;
            }
            let init_end = self.toks[self.pos].start;
            body = Some(self.src[init_start..init_end].trim().to_string());
            self.pos += 1;
        }
        let header_end = self.toks[self.pos - 1].span.end;
        let span = Span::new(self.toks[start].span.start, header_end);
        let public = decl.visibility == Visibility::Public;

        let mut trailing = None;
        if self.at_doc() {
            let doc_line = self.peek().unwrap().span.start.line;
            let next = self.peek_at(1);
            let brace_follows = matches!(end, HeaderEnd::Callable) && next.is_some_and(|t| t.is_punct('{'));
            let adjacent = doc_line <= header_end.line + 1;
            let declaration_follows = next.is_some_and(|t| !t.is_punct('}') && !t.is_doc());
            if brace_follows || (adjacent && (public || !declaration_follows)) {
                trailing = Some(self.pos);
                self.pos += 1;
            }
        }
        if let HeaderEnd::Callable = end {
            if self.at_punct('{') {
                match self.skip_block() {
                    Some((a, b)) => body = Some(self.src[a..b].to_string()),
                    None => {
                        self.diags.push(Diagnostic::new(Code::P007, span, "method body is not closed before end of file"));
                        body = Some(self.src[self.toks[self.toks.len() - 1].end.min(self.src.len())..].to_string());
                    }
                }
            } else if self.at_punct(';') {
                self.pos += 1;
            }
        }

        let above = comment.map(|c| self.spec_of(c));
        let below = trailing.map(|c| self.spec_of(c));
        let (external_spec, internal_spec) = if public {
            (above, below)
        } else {
            match (above, below) {
                (Some(mut a), Some(b)) => {
                    let span = self.toks[trailing.unwrap()].span;
                    self.diags.push(Diagnostic::new(
                        Code::P008,
                        span,
                        "second specification comment on a non-public member is merged into the first",
                    ));
                    merge_blocks(&mut a, b);
                    (None, Some(a))
                }
                (a, b) => (None, a.or(b)),
            }
        };

        let member = Member {
            kind: decl.kind,
            visibility: decl.visibility,
            modifiers: decl.modifiers,
            signature: decl.signature,
            external_spec,
            internal_spec,
            body,
        };
        if member.kind == MemberKind::Attribute {
            for block in member.specs() {
                if block.has_flat_conditions() || !block.subspecs.is_empty() {
                    self.diags.push(Diagnostic::new(
                        Code::P005,
                        span,
                        format!("attribute `{}` carries @requires/@ensures/@signals/@sub", member.name()),
                    ));
                    break;
                }
            }
        }
        Some((member, span))
    }
}

fn split_top_level(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut cur = String::new();
    for c in text.chars() {
        match c {
            '<' => depth += 1,
            '>' => depth -= 1,
            ',' if depth == 0 => {
                out.push(cur.trim().to_string());
                cur.clear();
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

/// Parse a whole source file. Never fails: constructs that cannot be
/// understood are skipped and reported.
pub fn parse_master(source: &str, source_name: &str) -> (MasterDocument, Vec<Diagnostic>) {
    let (toks, diags) = tokenize(source);
    let parser = DocParser { src: source, toks, pos: 0, diags, doc: MasterDocument::new(source_name) };
    parser.run()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::TypeRef;

    #[test]
    fn empty_source() {
        let (doc, diags) = parse_master("", "empty.java");
        assert!(doc.classes.is_empty());
        assert!(diags.is_empty());
    }

    #[test]
    fn placement_convention() {
        let src = "\
/** A counter. */
public class Counter {

  /** @desc current value */
  private int n = 0;

  /**
   * @desc Adds one.
   * @ensures value() = \\old(value()) + 1
   */
  public void inc()
  /**
   * @assignable n
   */
  {
    n++;
  }

  /** @desc Reads. @pure */
  public int value() { return n; }
}
";
        let (doc, diags) = parse_master(src, "Counter.java");
        assert!(diags.is_empty(), "{diags:?}");
        let class = &doc.classes[0];
        assert_eq!(class.external_spec.desc.as_ref().unwrap().raw, "A counter.");
        let n = &class.members[0];
        assert_eq!(n.kind, MemberKind::Attribute);
        assert!(n.external_spec.is_none());
        assert_eq!(n.internal_spec.as_ref().unwrap().desc.as_ref().unwrap().raw, "current value");
        assert_eq!(n.body.as_deref(), Some("0"));
        let inc = &class.members[1];
        assert_eq!(inc.external_spec.as_ref().unwrap().ensures.len(), 1);
        assert_eq!(inc.internal_spec.as_ref().unwrap().assignable, vec!["n"]);
        assert_eq!(inc.body.as_deref(), Some("\n    n++;\n  "));
        let value = &class.members[2];
        assert!(value.external_spec.as_ref().unwrap().pure);
        assert!(value.internal_spec.is_none());
        assert_eq!(value.signature.return_type, Some(TypeRef::new("int")));
        assert_eq!(doc.span(NodeId::Member(0, 1)).start.line, 11);
    }

    #[test]
    fn separated_comment_belongs_to_next_member() {
        let src = "class A {\n  public void a()\n\n  /** @desc b */\n  public void b()\n}\n";
        let (doc, diags) = parse_master(src, "A.java");
        assert!(diags.is_empty());
        assert!(doc.classes[0].members[0].internal_spec.is_none());
        assert!(doc.classes[0].members[1].external_spec.is_some());
    }

    #[test]
    fn class_level_internal_comment() {
        let src = "/** ext */\npublic class A<K, V extends Comparable<V>>\n/** @inv size >= 0 */\n{\n}\n";
        let (doc, diags) = parse_master(src, "A.java");
        assert!(diags.is_empty(), "{diags:?}");
        let class = &doc.classes[0];
        assert_eq!(class.type_params, vec!["K", "V extends Comparable<V>"]);
        assert_eq!(class.internal_spec.as_ref().unwrap().invariants.len(), 1);
    }

    #[test]
    fn malformed_member_is_skipped_and_parsing_continues() {
        let src = "class A {\n  public void broken(int) { }\n  /** @desc ok */\n  public void ok()\n}\n";
        let (doc, diags) = parse_master(src, "A.java");
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, Code::P002);
        assert_eq!(doc.classes[0].members.len(), 1);
        assert_eq!(doc.classes[0].members[0].name(), "ok");
    }

    #[test]
    fn unterminated_comment_keeps_earlier_classes() {
        let src = "class A {\n}\n/** oops";
        let (doc, diags) = parse_master(src, "A.java");
        assert_eq!(doc.classes.len(), 1);
        assert!(diags.iter().any(|d| d.code == Code::P001));
    }

    #[test]
    fn missing_class_close_is_p007() {
        let (doc, diags) = parse_master("class A {\n  int x;\n", "A.java");
        assert_eq!(doc.classes[0].members.len(), 1);
        assert_eq!(diags[0].code, Code::P007);
    }

    #[test]
    fn orphan_comment_is_p006() {
        let src = "class A {\n  /** @desc lost */\n\n  /** @desc kept */\n  public void f()\n}\n";
        let (doc, diags) = parse_master(src, "A.java");
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, Code::P006);
        assert_eq!(diags[0].span.start.line, 2);
        let spec = doc.classes[0].members[0].external_spec.as_ref().unwrap();
        assert_eq!(spec.desc.as_ref().unwrap().raw, "kept");
    }

    #[test]
    fn duplicates_are_reported() {
        let src = "class A { void f(int a) void f(int b) void f(T a) }\nclass A { }\n";
        let (doc, diags) = parse_master(src, "A.java");
        assert_eq!(doc.classes.len(), 1);
        assert_eq!(doc.classes[0].members.len(), 2);
        let codes: Vec<Code> = diags.iter().map(|d| d.code).collect();
        assert_eq!(codes, vec![Code::P011, Code::P010]);
    }

    #[test]
    fn requires_on_attribute_warns() {
        let src = "class A {\n  /** @requires x > 0 */\n  private int x;\n}\n";
        let (_, diags) = parse_master(src, "A.java");
        assert_eq!(diags[0].code, Code::P005);
    }

    #[test]
    fn comment_diagnostics_use_file_positions() {
        let src = "class A {\n  /**\n   * @bogus\n   */\n  public void f()\n}\n";
        let (_, diags) = parse_master(src, "A.java");
        assert_eq!(diags[0].code, Code::P004);
        assert_eq!(diags[0].span.start.line, 3);
    }

    #[test]
    fn imports_are_skipped() {
        let src = "package p;\nimport java.util.List;\nclass A { }\n";
        let (doc, diags) = parse_master(src, "A.java");
        assert!(diags.is_empty());
        assert_eq!(doc.classes[0].name, "A");
    }

    #[test]
    fn junk_never_panics() {
        for junk in ["}", "{", "class", "class {", "public class A { public", "@@@", "class A { int = ; }",
            "class A { private List<T lst; }", "/**/ /** */ x", "class A { void f() { \"}\" }", "\u{1F600} class \u{e9} {}"] {
            let _ = parse_master(junk, "junk.java");
        }
    }
}
