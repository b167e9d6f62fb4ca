use std::fmt::Write;

use crate::model::{normalize_text, ClassUnit, Member, MemberKind, SignalClause, SpecBlock, ViewDocument, Visibility};

/// Render a whole view: classes separated by a blank line.
pub fn render(view: &ViewDocument) -> String {
    let mut out = String::new();
    for (i, class) in view.classes.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&render_class(class));
    }
    out
}

/// Render one class in listing style.
pub fn render_class(class: &ClassUnit) -> String {
    let mut out = String::new();
    if !class.external_spec.is_empty() {
        comment(&mut out, &class.external_spec, "");
    }
    if let Some(kw) = class.visibility.keyword() {
        out.push_str(kw);
        out.push(' ');
    }
    out.push_str("class ");
    out.push_str(&class.name);
    if !class.type_params.is_empty() {
        let _ = write!(out, "<{}>", class.type_params.join(", "));
    }
    match &class.internal_spec {
        Some(spec) => {
            out.push('\n');
            comment(&mut out, spec, "");
            out.push_str("{\n");
        }
        None => out.push_str(" {\n"),
    }
    for member in &class.members {
        out.push('\n');
        render_member(&mut out, member);
    }
    out.push_str("}\n");
    out
}

fn render_member(out: &mut String, member: &Member) {
    const INDENT: &str = "  ";
    let public = member.visibility == Visibility::Public;
    let above = if public { member.external_spec.as_ref() } else { member.internal_spec.as_ref() };
    if let Some(spec) = above {
        comment(out, spec, INDENT);
    }
    out.push_str(INDENT);
    out.push_str(&header(member));
    let below = if public { member.internal_spec.as_ref() } else { None };
    if member.kind == MemberKind::Attribute {
        if let Some(init) = &member.body {
            let _ = write!(out, " = {init}");
        }
        out.push_str(";\n");
        if let Some(spec) = below {
            comment(out, spec, INDENT);
        }
        return;
    }
    match (below, &member.body) {
        (Some(spec), body) => {
            out.push('\n');
            comment(out, spec, INDENT);
            if let Some(body) = body {
                let _ = writeln!(out, "{INDENT}{{{body}}}");
            }
        }
        (None, Some(body)) => {
            let _ = writeln!(out, " {{{body}}}");
        }
        (None, None) => out.push('\n'),
    }
}

fn header(member: &Member) -> String {
    let sig = &member.signature;
    let mut words: Vec<String> = Vec::new();
    if let Some(kw) = member.visibility.keyword() {
        words.push(kw.to_string());
    }
    words.extend(member.modifiers.iter().cloned());
    match member.kind {
        MemberKind::Attribute => {
            if let Some(ty) = &sig.declared_type {
                words.push(ty.to_string());
            }
            words.push(sig.name.clone());
            return words.join(" ");
        }
        MemberKind::Method => {
            if let Some(ty) = &sig.return_type {
                words.push(ty.to_string());
            }
        }
        MemberKind::Constructor => {}
    }
    let params: Vec<String> = sig.params.iter().map(|p| format!("{} {}", p.ty, p.name)).collect();
    words.push(format!("{}{}({})", sig.name, sig.type_args.as_deref().unwrap_or(""), params.join(", ")));
    let mut text = words.join(" ");
    if !sig.throws.is_empty() {
        let throws: Vec<String> = sig.throws.iter().map(ToString::to_string).collect();
        let _ = write!(text, " throws {}", throws.join(", "));
    }
    text
}

fn signal(s: &SignalClause) -> String {
    let mut text = s.exception_type.clone();
    if let Some(msg) = &s.message {
        text.push_str("(\"");
        for c in msg.chars() {
            if c == '"' || c == '\\' {
                text.push('\\');
            }
            text.push(c);
        }
        text.push_str("\")");
    }
    if let Some(cond) = &s.condition {
        text.push(' ');
        text.push_str(&normalize_text(&cond.raw));
    }
    text
}

/// Tag lines of a block, in fixed order.
fn tag_lines(spec: &SpecBlock) -> Vec<String> {
    let mut lines = Vec::new();
    let mut tag = |name: &str, payload: &str| lines.push(format!("@{name} {}", normalize_text(payload)));
    if let Some(desc) = &spec.desc {
        tag("desc", &desc.raw);
    }
    for c in &spec.invariants {
        tag("inv", &c.raw);
    }
    for c in &spec.represents {
        tag("represents", &c.raw);
    }
    for c in &spec.requires {
        tag("requires", &c.raw);
    }
    for t in &spec.assignable {
        tag("assignable", t);
    }
    for c in &spec.ensures {
        tag("ensures", &c.raw);
    }
    for s in &spec.signals {
        tag("signals", &signal(s));
    }
    for u in &spec.unknown {
        tag(&u.tag, &u.payload);
    }
    if spec.pure {
        lines.push("@pure".to_string());
    }
    for sub in &spec.subspecs {
        lines.push(format!("@sub {} {{", normalize_text(&sub.label)));
        let mut inner = |name: &str, payload: &str| lines.push(format!("  @{name} {}", normalize_text(payload)));
        for c in &sub.requires {
            inner("requires", &c.raw);
        }
        for t in &sub.assignable {
            inner("assignable", t);
        }
        for c in &sub.ensures {
            inner("ensures", &c.raw);
        }
        for s in &sub.signals {
            inner("signals", &signal(s));
        }
        lines.push("}".to_string());
    }
    lines
}

fn comment(out: &mut String, spec: &SpecBlock, indent: &str) {
    let _ = writeln!(out, "{indent}/**");
    for line in tag_lines(spec) {
        let _ = writeln!(out, "{indent} * {}", line.trim_end());
    }
    let _ = writeln!(out, "{indent} */");
}
