//! Tag grammar inside doc comments.
//!
//! A tag starts a line (after the optional `*` gutter) or follows
//! whitespace on a line; text without a tag continues the previous tag.
//! Text before the first tag is the description. `@sub label {` opens a
//! subspecification that a `}` at brace depth zero closes.

use crate::diagnostics::{Code, Diagnostic};
use crate::model::{Clause, SignalClause, Span, SpecBlock, SubSpec, UnknownTag};

use super::expr::classify_clause;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tag {
    Desc,
    Inv,
    Requires,
    Ensures,
    Signals,
    Assignable,
    Pure,
    Represents,
    Unknown(String),
}

impl Tag {
    fn from_word(word: &str) -> Option<Tag> {
        Some(match word {
            "desc" => Tag::Desc,
            "inv" => Tag::Inv,
            "requires" => Tag::Requires,
            "ensures" => Tag::Ensures,
            "signals" => Tag::Signals,
            "assignable" => Tag::Assignable,
            "pure" => Tag::Pure,
            "represents" => Tag::Represents,
            _ => return None,
        })
    }

    fn allowed_in_sub(&self) -> bool {
        matches!(self, Tag::Requires | Tag::Ensures | Tag::Signals | Tag::Assignable)
    }
}

pub(crate) const KNOWN_TAGS: &[&str] =
    &["desc", "inv", "requires", "ensures", "signals", "assignable", "pure", "represents", "sub"];

struct Item {
    tag: Tag,
    payload: String,
    sub: Option<usize>,
    span: Span,
}

struct BlockParser {
    items: Vec<Item>,
    labels: Vec<(String, Span)>,
    open_sub: Option<usize>,
    /// Item that untagged text continues.
    current: Option<usize>,
    diags: Vec<Diagnostic>,
}

/// Byte index where the current segment ends: before a whitespace-preceded
/// known tag, or (inside `@sub`) before a `}` at brace depth zero.
fn segment_end(s: &str, in_sub: bool) -> usize {
    let bytes = s.as_bytes();
    let mut depth = 0i32;
    let mut in_string = false;
    let mut prev_ws = true;
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if in_string {
            if c == b'\\' {
                i += 2;
                continue;
            }
            if c == b'"' {
                in_string = false;
            }
            prev_ws = false;
            i += 1;
            continue;
        }
        match c {
            b'"' => in_string = true,
            b'{' => depth += 1,
            b'}' => {
                if depth == 0 && in_sub {
                    return i;
                }
                depth -= 1;
            }
            b'@' if prev_ws && i > 0 && starts_known_tag(&s[i..]) => return i,
            _ => {}
        }
        prev_ws = c.is_ascii_whitespace();
        i += 1;
    }
    s.len()
}

fn tag_word(s: &str) -> Option<&str> {
    let rest = s.strip_prefix('@')?;
    let end = rest.find(|c: char| !(c.is_alphanumeric() || c == '_')).unwrap_or(rest.len());
    (end > 0 && rest.starts_with(|c: char| c.is_alphabetic())).then(|| &rest[..end])
}

fn starts_known_tag(s: &str) -> bool {
    tag_word(s).is_some_and(|w| KNOWN_TAGS.contains(&w))
}

impl BlockParser {
    fn diag(&mut self, code: Code, span: Span, message: impl Into<String>) {
        self.diags.push(Diagnostic::new(code, span, message));
    }

    fn line(&mut self, content: &str, line_no: u32, col0: u32) {
        let mut rest = content;
        loop {
            let trimmed = rest.trim_start();
            let col = col0 + (content.len() - trimmed.len()) as u32;
            let span = Span::point(line_no, col);
            rest = trimmed;
            if rest.is_empty() {
                return;
            }
            if let Some(after) = rest.strip_prefix('}') {
                if self.open_sub.take().is_none() {
                    self.diag(Code::P003, span, "`}` without an open @sub block");
                }
                self.current = None;
                rest = after;
                continue;
            }
            if let Some(word) = tag_word(rest) {
                let after = &rest[1 + word.len()..];
                if word == "sub" {
                    rest = self.open(after, span);
                    continue;
                }
                let tag = match Tag::from_word(word) {
                    Some(tag) => tag,
                    None => {
                        self.diag(Code::P004, span, format!("unknown tag @{word}"));
                        Tag::Unknown(word.to_string())
                    }
                };
                let end = segment_end(after, self.open_sub.is_some());
                self.items.push(Item {
                    tag,
                    payload: after[..end].trim().to_string(),
                    sub: self.open_sub,
                    span,
                });
                self.current = Some(self.items.len() - 1);
                rest = &after[end..];
                continue;
            }
            let end = segment_end(rest, self.open_sub.is_some()).max(1).min(rest.len());
            let text = rest[..end].trim();
            rest = &rest[end..];
            match self.current {
                Some(i) => {
                    let item = &mut self.items[i];
                    if !item.payload.is_empty() {
                        item.payload.push(' ');
                    }
                    item.payload.push_str(text);
                }
                None => {
                    if self.open_sub.is_some() {
                        self.diag(Code::P008, span, "untagged text inside @sub is read as description");
                    }
                    self.items.push(Item { tag: Tag::Desc, payload: text.to_string(), sub: None, span });
                    self.current = Some(self.items.len() - 1);
                }
            }
        }
    }

    /// Handle `@sub label {`; returns the rest of the line.
    fn open<'s>(&mut self, after: &'s str, span: Span) -> &'s str {
        if self.open_sub.is_some() {
            self.diag(Code::P003, span, "nested @sub; the enclosing @sub is closed first");
        }
        let (label, rest) = match after.find('{') {
            Some(i) => (after[..i].trim(), &after[i + 1..]),
            None => {
                self.diag(Code::P003, span, "@sub label is not followed by `{`");
                let end = segment_end(after, false);
                (after[..end].trim(), &after[end..])
            }
        };
        if label.is_empty() {
            self.diag(Code::P003, span, "@sub without a label");
        }
        self.labels.push((label.to_string(), span));
        self.open_sub = Some(self.labels.len() - 1);
        self.current = None;
        rest
    }

    fn finish(mut self, end: Span) -> (SpecBlock, Vec<Diagnostic>) {
        if self.open_sub.is_some() {
            self.diag(Code::P003, end, "@sub block is not closed");
        }
        let mut block = SpecBlock {
            subspecs: self.labels.iter().map(|(l, _)| SubSpec::new(l.clone())).collect(),
            ..SpecBlock::default()
        };
        let items = std::mem::take(&mut self.items);
        for item in items {
            self.place(&mut block, item);
        }
        (block, self.diags)
    }

    fn place(&mut self, block: &mut SpecBlock, item: Item) {
        let Item { tag, payload, mut sub, span } = item;
        if sub.is_some() && !tag.allowed_in_sub() {
            if !matches!(tag, Tag::Unknown(_)) {
                self.diag(Code::P008, span, "tag is not allowed inside @sub; kept on the enclosing block");
            }
            sub = None;
        }
        match tag {
            Tag::Pure => {
                if !payload.is_empty() {
                    self.diag(Code::P012, span, "text after @pure is ignored");
                }
                block.pure = true;
                return;
            }
            Tag::Unknown(tag) => {
                block.unknown.push(UnknownTag { tag, payload });
                return;
            }
            _ => {}
        }
        if payload.is_empty() {
            self.diag(Code::P012, span, "tag without payload is ignored");
            return;
        }
        match tag {
            Tag::Desc => match &mut block.desc {
                Some(desc) => {
                    self.diag(Code::P008, span, "repeated @desc is appended to the first");
                    desc.raw.push(' ');
                    desc.raw.push_str(&payload);
                }
                None => block.desc = Some(Clause::informal(payload)),
            },
            Tag::Inv => block.invariants.push(classify_clause(&payload)),
            Tag::Represents => block.represents.push(classify_clause(&payload)),
            Tag::Requires => match sub {
                Some(i) => block.subspecs[i].requires.push(classify_clause(&payload)),
                None => block.requires.push(classify_clause(&payload)),
            },
            Tag::Ensures => match sub {
                Some(i) => block.subspecs[i].ensures.push(classify_clause(&payload)),
                None => block.ensures.push(classify_clause(&payload)),
            },
            Tag::Signals => match parse_signal(&payload) {
                Some(signal) => match sub {
                    Some(i) => block.subspecs[i].signals.push(signal),
                    None => block.signals.push(signal),
                },
                None => self.diag(Code::P012, span, "@signals needs an exception type"),
            },
            Tag::Assignable => {
                let targets = payload.split(',').map(str::trim).filter(|t| !t.is_empty()).map(String::from);
                match sub {
                    Some(i) => block.subspecs[i].assignable.extend(targets),
                    None => block.assignable.extend(targets),
                }
            }
            Tag::Pure | Tag::Unknown(_) => unreachable!(),
        }
    }
}

/// `Type`, `Type("message")`, optionally followed by a condition.
pub(crate) fn parse_signal(payload: &str) -> Option<SignalClause> {
    let payload = payload.trim();
    let end = payload
        .find(|c: char| !(c.is_alphanumeric() || c == '_' || c == '.' || c == '$'))
        .unwrap_or(payload.len());
    let exception_type = &payload[..end];
    if exception_type.is_empty() || !exception_type.starts_with(|c: char| c.is_alphabetic() || c == '_') {
        return None;
    }
    let mut rest = payload[end..].trim_start();
    let mut message = None;
    if let Some(args) = rest.strip_prefix('(') {
        let args = args.trim_start();
        if let Some(lit) = args.strip_prefix('"') {
            let mut text = String::new();
            let mut chars = lit.char_indices();
            let mut close = None;
            while let Some((i, c)) = chars.next() {
                match c {
                    '\\' => {
                        if let Some((_, n)) = chars.next() {
                            text.push(n);
                        }
                    }
                    '"' => {
                        close = Some(i);
                        break;
                    }
                    c => text.push(c),
                }
            }
            let after = close.map(|i| lit[i + 1..].trim_start())?;
            rest = after.strip_prefix(')')?;
            message = Some(text);
        } else {
            rest = args.strip_prefix(')')?;
        }
    }
    let rest = rest.trim();
    Some(SignalClause {
        exception_type: exception_type.to_string(),
        message,
        condition: (!rest.is_empty()).then(|| classify_clause(rest)),
    })
}

/// Strip the `*` gutter; returns the content and its 1-based column.
fn strip_gutter(line: &str) -> (&str, u32) {
    let trimmed = line.trim_start();
    let mut col = 1 + (line.len() - trimmed.len()) as u32;
    match trimmed.strip_prefix('*') {
        Some(rest) if !rest.starts_with('/') => {
            col += 1;
            (rest, col)
        }
        _ => (trimmed, col),
    }
}

/// Parse the interior of a `/** ... */` comment. Spans are relative to the
/// comment: line 1 is the line holding `/**`.
pub fn parse_spec_block(comment: &str) -> (SpecBlock, Vec<Diagnostic>) {
    let mut parser = BlockParser {
        items: Vec::new(),
        labels: Vec::new(),
        open_sub: None,
        current: None,
        diags: Vec::new(),
    };
    let mut last_line = 1;
    for (i, raw_line) in comment.split('\n').enumerate() {
        let line_no = i as u32 + 1;
        last_line = line_no;
        let line = raw_line.strip_suffix('\r').unwrap_or(raw_line);
        let (content, col) = strip_gutter(line);
        parser.line(content, line_no, col);
    }
    parser.finish(Span::point(last_line, 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Formality;

    #[test]
    fn external_remove() {
        let (block, diags) = parse_spec_block(
            "\n   * @desc Removes one instance of elem \n   * @requires B(elem) > 0\n   * @ensures B(elem) = \\old(B(elem)) - 1\n   * @ensures \\forall e: T | e != elem :: B(e) = \\old(B(e))  \n   ",
        );
        assert!(diags.is_empty(), "{diags:?}");
        assert_eq!(block.desc.unwrap().raw, "Removes one instance of elem");
        assert_eq!(block.requires.len(), 1);
        assert_eq!(block.requires[0].raw, "B(elem) > 0");
        assert_eq!(block.ensures.len(), 2);
        assert!(!block.pure);
    }

    #[test]
    fn pure_alone() {
        let (block, diags) = parse_spec_block(" @pure ");
        assert!(diags.is_empty());
        assert_eq!(block, SpecBlock { pure: true, ..SpecBlock::default() });
    }

    #[test]
    fn inline_subspecs() {
        let (block, diags) =
            parse_spec_block("@sub A { @requires x>0 } @sub B { @requires x<=0 @signals E(\"m\") }");
        assert!(diags.is_empty(), "{diags:?}");
        let mut a = SubSpec::new("A");
        a.requires.push(classify_clause("x>0"));
        let mut b = SubSpec::new("B");
        b.requires.push(classify_clause("x<=0"));
        b.signals.push(SignalClause {
            exception_type: "E".into(),
            message: Some("m".into()),
            condition: None,
        });
        assert_eq!(block, SpecBlock { subspecs: vec![a, b], ..SpecBlock::default() });
    }

    #[test]
    fn continuation_lines_join() {
        let (block, _) = parse_spec_block(
            "\n * @represents \\forall e : T :: B(e) = (\\num_of i: int | \n *     0 <= i < lst.size() :: lst[i] = e)\n ",
        );
        assert_eq!(block.represents.len(), 1);
        assert_eq!(block.represents[0].formality, Formality::Formal);
    }

    #[test]
    fn untagged_lead_is_description() {
        let (block, _) = parse_spec_block("\n * This class represents a bag B of elements of type T.\n ");
        assert_eq!(block.desc.unwrap().raw, "This class represents a bag B of elements of type T.");
    }

    #[test]
    fn unknown_tag_warns_and_is_kept() {
        let (block, diags) = parse_spec_block("@author someone");
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, Code::P004);
        assert_eq!(block.unknown, vec![UnknownTag { tag: "author".into(), payload: "someone".into() }]);
    }

    #[test]
    fn at_sign_mid_prose_is_text() {
        let (block, diags) = parse_spec_block("@desc mail me at x@y.org or @someone");
        assert!(diags.is_empty());
        assert_eq!(block.desc.unwrap().raw, "mail me at x@y.org or @someone");
    }

    #[test]
    fn unclosed_sub_is_p003() {
        let (block, diags) = parse_spec_block("@sub A {\n @requires x > 0\n");
        assert_eq!(block.subspecs.len(), 1);
        assert_eq!(block.subspecs[0].requires.len(), 1);
        assert!(diags.iter().any(|d| d.code == Code::P003));
    }

    #[test]
    fn stray_close_is_p003() {
        let (_, diags) = parse_spec_block("@requires x > 0\n}");
        assert_eq!(diags.iter().filter(|d| d.code == Code::P003).count(), 1);
    }

    #[test]
    fn braces_inside_payload_stay_balanced() {
        let (block, diags) = parse_spec_block("@sub A {\n @requires s = {1, 2}\n}");
        assert!(diags.is_empty(), "{diags:?}");
        assert_eq!(block.subspecs[0].requires[0].raw, "s = {1, 2}");
    }

    #[test]
    fn desc_inside_sub_moves_out() {
        let (block, diags) = parse_spec_block("@sub A {\n @desc nope\n @requires x > 0\n}");
        assert_eq!(block.desc.unwrap().raw, "nope");
        assert_eq!(diags[0].code, Code::P008);
    }

    #[test]
    fn signal_forms() {
        let s = parse_signal("ArgumentNotFoundException(\"Elem is not present\")").unwrap();
        assert_eq!(s.exception_type, "ArgumentNotFoundException");
        assert_eq!(s.message.as_deref(), Some("Elem is not present"));
        assert!(s.condition.is_none());

        let s = parse_signal("IllegalStateException x < 0").unwrap();
        assert_eq!(s.message, None);
        assert_eq!(s.condition.unwrap().raw, "x < 0");

        let s = parse_signal("E(\"say \\\"hi\\\"\")").unwrap();
        assert_eq!(s.message.as_deref(), Some("say \"hi\""));

        assert!(parse_signal("(\"no type\")").is_none());
        assert!(parse_signal("").is_none());
    }

    #[test]
    fn assignable_splits_targets() {
        let (block, _) = parse_spec_block("@assignable lst, count");
        assert_eq!(block.assignable, vec!["lst", "count"]);
    }

    #[test]
    fn empty_payload_warns() {
        let (block, diags) = parse_spec_block("@requires");
        assert!(block.requires.is_empty());
        assert_eq!(diags[0].code, Code::P012);
    }

    #[test]
    fn diagnostic_positions_are_comment_relative() {
        let (_, diags) = parse_spec_block("\n   * @bogus x");
        assert_eq!(diags[0].span.start.line, 2);
        assert_eq!(diags[0].span.start.column, 6);
    }
}
