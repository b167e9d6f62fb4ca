//! The line-oriented test-model format.
//!
//! ```text
//! subject Bag#remove
//! bind T = Integer
//! fixture b1: add(2); add(2); add(6); add(4)
//! domain elem: boundary "last occurrence" = 6 -> subspec "elem is present" expect mult(6) = 0
//! domain internal this: equivalence "empty" = b0
//! ```
//!
//! `#` starts a comment line. A `this` domain chooses among fixtures.
//! `domain internal` partitions only apply when deriving from the
//! Internal view.

use serde::Serialize;

use crate::diagnostics::{Code, Diagnostic, Subject};
use crate::model::{Member, Span, ViewDocument, ViewKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PartitionKind {
    Equivalence,
    Boundary,
}

/// An expected observation after the call: `mult(6) = 0`, or
/// `result = 3` for the call's own return value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Observation {
    pub call: String,
    pub expected: String,
}

impl Observation {
    pub fn is_result(&self) -> bool {
        self.call == "result" || self.call == "\\result"
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Partition {
    pub label: String,
    pub kind: PartitionKind,
    /// Literal source text passed as the argument (or fixture name for `this`).
    pub representative: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub maps_to_subspec: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub expect: Vec<Observation>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub internal: bool,
    #[serde(skip)]
    pub line: u32,
}

/// Partitions of one parameter, or of `this`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Domain {
    pub target: String,
    pub partitions: Vec<Partition>,
}

impl Domain {
    pub fn is_receiver(&self) -> bool {
        self.target == "this"
    }

    /// Partitions that apply when deriving from `kind`.
    pub fn partitions_for(&self, kind: ViewKind) -> impl Iterator<Item = &Partition> {
        self.partitions.iter().filter(move |p| kind != ViewKind::External || !p.internal)
    }
}

/// A receiver built with the no-argument constructor, then `ops` in order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fixture {
    pub name: String,
    pub ops: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TestModel {
    pub class: String,
    pub member: String,
    /// Type-parameter instantiations, e.g. `T = Integer`.
    pub bindings: Vec<(String, String)>,
    pub fixtures: Vec<Fixture>,
    pub domains: Vec<Domain>,
    #[serde(skip)]
    pub subject_line: u32,
}

impl TestModel {
    pub fn domain(&self, target: &str) -> Option<&Domain> {
        self.domains.iter().find(|d| d.target == target)
    }

    pub fn fixture(&self, name: &str) -> Option<&Fixture> {
        self.fixtures.iter().find(|f| f.name == name)
    }

    pub fn subject(&self) -> Subject {
        Subject::member(&self.class, &self.member)
    }
}

/// Split on `sep` outside quotes, parentheses and brackets.
pub(crate) fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut quote: Option<char> = None;
    let mut escaped = false;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        if let Some(q) = quote {
            if escaped {
                escaped = false;
            } else if c == '\\' {
                escaped = true;
            } else if c == q {
                quote = None;
            }
            continue;
        }
        match c {
            '"' | '\'' => quote = Some(c),
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            c if c == sep && depth == 0 => {
                parts.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

/// Read a leading `"..."` string; returns its contents and the rest.
fn quoted(s: &str) -> Option<(String, &str)> {
    let body = s.trim_start().strip_prefix('"')?;
    let mut out = String::new();
    let mut chars = body.char_indices();
    while let Some((i, c)) = chars.next() {
        match c {
            '\\' => out.push(chars.next()?.1),
            '"' => return Some((out, &body[i + 1..])),
            c => out.push(c),
        }
    }
    None
}

/// Byte offset of ` word ` (surrounded by whitespace or at the end) outside quotes.
fn find_keyword(s: &str, word: &str) -> Option<usize> {
    let mut quote = false;
    let mut escaped = false;
    for (i, c) in s.char_indices() {
        if quote {
            if escaped {
                escaped = false;
            } else if c == '\\' {
                escaped = true;
            } else if c == '"' {
                quote = false;
            }
            continue;
        }
        if c == '"' {
            quote = true;
            continue;
        }
        if s[i..].starts_with(word) {
            let before = i == 0 || s[..i].ends_with(char::is_whitespace);
            let after = s[i + word.len()..].chars().next().is_none_or(char::is_whitespace);
            if before && after {
                return Some(i);
            }
        }
    }
    None
}

fn is_call(op: &str) -> bool {
    let Some(open) = op.find('(') else { return false };
    let name = op[..open].trim();
    !name.is_empty()
        && name.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '.')
        && op.trim_end().ends_with(')')
}

fn observation(text: &str) -> Option<Observation> {
    let bytes = text.as_bytes();
    let eq = split_top(text, '=')
        .first()
        .map(|p| p.len())
        .filter(|&i| i < text.len() && bytes.get(i + 1) != Some(&b'='))?;
    let call = text[..eq].trim();
    let expected = text[eq + 1..].trim();
    (!call.is_empty() && !expected.is_empty()).then(|| Observation { call: call.into(), expected: expected.into() })
}

struct LineParser {
    model: TestModel,
    diags: Vec<Diagnostic>,
}

impl LineParser {
    fn bad(&mut self, line: u32, message: impl Into<String>) {
        self.diags.push(Diagnostic::new(Code::T004, Span::point(line, 1), message));
    }

    fn line(&mut self, text: &str, n: u32) {
        let (keyword, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
        let rest = rest.trim();
        match keyword {
            "subject" => match rest.split_once('#') {
                Some((c, m)) if !c.trim().is_empty() && !m.trim().is_empty() && self.model.class.is_empty() => {
                    self.model.class = c.trim().into();
                    self.model.member = m.trim().into();
                    self.model.subject_line = n;
                }
                Some(_) if !self.model.class.is_empty() => self.bad(n, "second `subject` line"),
                _ => self.bad(n, "expected `subject Class#member`"),
            },
            "bind" => match rest.split_once('=') {
                Some((p, t)) if !p.trim().is_empty() && !t.trim().is_empty() => {
                    self.model.bindings.push((p.trim().into(), t.trim().into()))
                }
                _ => self.bad(n, "expected `bind T = Type`"),
            },
            "fixture" => self.fixture(rest, n),
            "domain" => self.domain(rest, n),
            _ => self.bad(n, format!("unknown line kind `{keyword}`")),
        }
    }

    fn fixture(&mut self, rest: &str, n: u32) {
        let Some((name, ops)) = rest.split_once(':') else {
            return self.bad(n, "expected `fixture name: op(args); ...`");
        };
        let name = name.trim();
        if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return self.bad(n, "fixture name must be an identifier");
        }
        if self.model.fixture(name).is_some() {
            return self.bad(n, format!("fixture `{name}` is defined twice"));
        }
        let mut list = Vec::new();
        for op in split_top(ops, ';').into_iter().map(str::trim).filter(|o| !o.is_empty()) {
            if !is_call(op) {
                return self.bad(n, format!("fixture step `{op}` is not a call"));
            }
            list.push(op.to_string());
        }
        self.model.fixtures.push(Fixture { name: name.into(), ops: list });
    }

    fn domain(&mut self, rest: &str, n: u32) {
        let (internal, rest) = match rest.strip_prefix("internal") {
            Some(r) if r.starts_with(char::is_whitespace) => (true, r.trim_start()),
            _ => (false, rest),
        };
        let Some((target, rest)) = rest.split_once(':') else {
            return self.bad(n, "expected `domain param: kind \"label\" = literal`");
        };
        let target = target.trim();
        let rest = rest.trim_start();
        let (kind_word, rest) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
        let kind = match kind_word {
            "equivalence" => PartitionKind::Equivalence,
            "boundary" => PartitionKind::Boundary,
            other => return self.bad(n, format!("partition kind `{other}` is neither equivalence nor boundary")),
        };
        let Some((label, rest)) = quoted(rest) else {
            return self.bad(n, "partition label must be a quoted string");
        };
        let Some(rest) = rest.trim_start().strip_prefix('=') else {
            return self.bad(n, "expected `= literal` after the partition label");
        };
        let mut rest = rest.trim();
        let mut expect_text = None;
        if let Some(i) = find_keyword(rest, "expect") {
            expect_text = Some(rest[i + "expect".len()..].trim());
            rest = rest[..i].trim_end();
        }
        let mut maps_to_subspec = None;
        if let Some(i) = find_keyword(rest, "->") {
            let mapping = rest[i + 2..].trim();
            let Some((label, tail)) = mapping.strip_prefix("subspec").and_then(quoted) else {
                return self.bad(n, "expected `-> subspec \"label\"`");
            };
            if !tail.trim().is_empty() {
                return self.bad(n, format!("unexpected `{}` after the subspec label", tail.trim()));
            }
            maps_to_subspec = Some(label);
            rest = rest[..i].trim_end();
        }
        if rest.is_empty() {
            return self.bad(n, "partition has no representative value");
        }
        let mut expect = Vec::new();
        if let Some(text) = expect_text {
            for part in split_top(text, ',') {
                match observation(part) {
                    Some(o) => expect.push(o),
                    None => return self.bad(n, format!("expectation `{}` is not `call = value`", part.trim())),
                }
            }
        }
        let partition = Partition {
            label,
            kind,
            representative: rest.to_string(),
            maps_to_subspec,
            expect,
            internal,
            line: n,
        };
        let idx = match self.model.domains.iter().position(|d| d.target == target) {
            Some(i) => i,
            None => {
                self.model.domains.push(Domain { target: target.into(), partitions: Vec::new() });
                self.model.domains.len() - 1
            }
        };
        if self.model.domains[idx].partitions.iter().any(|p| p.label == partition.label) {
            self.diags.push(Diagnostic::new(
                Code::T006,
                Span::point(n, 1),
                format!("partition \"{}\" is defined twice for `{target}`", partition.label),
            ));
            return;
        }
        self.model.domains[idx].partitions.push(partition);
    }
}

/// Syntax only; see [`validate_model`] for checks against a view.
pub fn parse_test_model(text: &str) -> (TestModel, Vec<Diagnostic>) {
    let mut p = LineParser { model: TestModel::default(), diags: Vec::new() };
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        p.line(line, i as u32 + 1);
    }
    (p.model, p.diags)
}

/// The callable named by the model's subject, if the view has it.
pub fn subject_member<'v>(model: &TestModel, view: &'v ViewDocument) -> Option<&'v Member> {
    view.class(&model.class)?.members.iter().find(|m| m.is_callable() && m.name() == model.member)
}

/// Check the model against the view it will be derived from.
pub fn validate_model(model: &TestModel, view: &ViewDocument) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let at = |line: u32| Span::point(line.max(1), 1);
    if model.class.is_empty() {
        diags.push(Diagnostic::new(Code::T001, at(1), "model has no `subject` line"));
        return diags;
    }
    let Some(member) = subject_member(model, view) else {
        diags.push(
            Diagnostic::new(
                Code::T001,
                at(model.subject_line),
                format!("`{}#{}` is not a method of the {} view", model.class, model.member, view.kind),
            )
            .with_subject(model.subject()),
        );
        return diags;
    };
    for domain in &model.domains {
        let known = domain.is_receiver() || member.signature.params.iter().any(|p| p.name == domain.target);
        if !known {
            let line = domain.partitions.first().map_or(1, |p| p.line);
            diags.push(
                Diagnostic::new(Code::T005, at(line), format!("`{}` is not a parameter of {}", domain.target, model.member))
                    .with_subject(model.subject()),
            );
        }
        if domain.is_receiver() {
            for p in &domain.partitions {
                if model.fixture(&p.representative).is_none() {
                    diags.push(
                        Diagnostic::new(Code::T005, at(p.line), format!("unknown fixture `{}`", p.representative))
                            .with_subject(model.subject()),
                    );
                }
            }
        }
    }
    for param in &member.signature.params {
        let count = model.domain(&param.name).map_or(0, |d| d.partitions_for(view.kind).count());
        if count == 0 {
            diags.push(
                Diagnostic::new(Code::T002, at(model.subject_line), format!("parameter `{}` has no partitions", param.name))
                    .with_subject(model.subject()),
            );
        }
    }
    diags
}

/// Parse and validate in one step.
pub fn load_test_model(text: &str, view: &ViewDocument) -> (TestModel, Vec<Diagnostic>) {
    let (model, mut diags) = parse_test_model(text);
    diags.extend(validate_model(&model, view));
    (model, diags)
}
