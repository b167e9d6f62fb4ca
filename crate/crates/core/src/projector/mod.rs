//! Views of a master document, their text rendering, and structural diffs
//! between two views of the same kind.

mod render;

use serde::Serialize;
use thiserror::Error;

pub use render::{render, render_class};

use crate::model::{
    member_view_membership, normalize, ClassUnit, MasterDocument, Member, MemberKind, SpecBlock, ViewDocument,
    ViewKind,
};

/// Project `doc` onto one stakeholder view.
pub fn project(doc: &MasterDocument, kind: ViewKind) -> ViewDocument {
    let doc = normalize(doc);
    let classes = doc
        .classes
        .into_iter()
        .map(|class| match kind {
            ViewKind::Code => class,
            ViewKind::External => ClassUnit {
                external_spec: class.external_spec.without_represents(),
                internal_spec: None,
                members: class
                    .members
                    .into_iter()
                    .filter(|m| member_view_membership(m, kind))
                    .map(|m| Member {
                        external_spec: m.external_spec.map(|s| s.without_represents()),
                        internal_spec: None,
                        body: None,
                        ..m
                    })
                    .collect(),
                ..class
            },
            ViewKind::Internal => ClassUnit {
                members: class.members.into_iter().map(|m| Member { body: None, ..m }).collect(),
                ..class
            },
        })
        .collect();
    ViewDocument { kind, classes, provenance: doc.source_name }
}

/// File name for one class of a rendered view, e.g. `Bag.external.java`.
pub fn view_file_name(class: &str, kind: ViewKind) -> String {
    format!("{class}.{kind}.java")
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ViewError {
    #[error("cannot compare a {expected} view with a {actual} view")]
    KindMismatch { expected: ViewKind, actual: ViewKind },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Change {
    Added,
    Removed,
    Changed,
    /// Present in `actual` although the view kind excludes it.
    NotPermitted,
}

/// One structural difference. `field` is a spec field name (`requires`,
/// `internal.ensures`, `sub[label].requires`, ...) or one of `class`,
/// `member`, `signature`, `body`, `members.order`, `header`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ViewDelta {
    pub class: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub member: Option<String>,
    pub field: String,
    pub change: Change,
    pub detail: String,
}

/// Structural differences from `expected` to `actual`, after normalization.
pub fn diff_views(expected: &ViewDocument, actual: &ViewDocument) -> Result<Vec<ViewDelta>, ViewError> {
    if expected.kind != actual.kind {
        return Err(ViewError::KindMismatch { expected: expected.kind, actual: actual.kind });
    }
    let exp = normalize(&expected.to_document());
    let act = normalize(&actual.to_document());
    let mut out = Diff { kind: actual.kind, deltas: Vec::new() };
    for e in &exp.classes {
        match act.classes.iter().find(|a| a.name == e.name) {
            Some(a) => out.class(e, a),
            None => out.push(&e.name, None, "class", Change::Removed, "class missing"),
        }
    }
    for a in act.classes.iter().filter(|a| exp.class(&a.name).is_none()) {
        out.push(&a.name, None, "class", Change::Added, "unexpected class");
    }
    let names = |d: &MasterDocument| d.classes.iter().map(|c| c.name.clone()).collect::<Vec<_>>();
    let (en, an) = (names(&exp), names(&act));
    let common_e: Vec<_> = en.iter().filter(|n| an.contains(n)).collect();
    let common_a: Vec<_> = an.iter().filter(|n| en.contains(n)).collect();
    if common_e != common_a {
        out.push("", None, "classes.order", Change::Changed, "classes appear in a different order");
    }
    Ok(out.deltas)
}

fn member_key(m: &Member) -> String {
    match m.kind {
        MemberKind::Attribute => m.name().to_string(),
        _ => m.signature.key(),
    }
}

struct Diff {
    kind: ViewKind,
    deltas: Vec<ViewDelta>,
}

impl Diff {
    fn push(&mut self, class: &str, member: Option<&str>, field: &str, change: Change, detail: impl Into<String>) {
        self.deltas.push(ViewDelta {
            class: class.to_string(),
            member: member.map(String::from),
            field: field.to_string(),
            change,
            detail: detail.into(),
        });
    }

    fn class(&mut self, e: &ClassUnit, a: &ClassUnit) {
        let c = &e.name;
        if e.visibility != a.visibility || e.type_params != a.type_params {
            self.push(c, None, "header", Change::Changed, "class visibility or type parameters differ");
        }
        self.block(c, None, "", Some(&e.external_spec), Some(&a.external_spec));
        self.block(c, None, "internal.", e.internal_spec.as_ref(), a.internal_spec.as_ref());

        let display = |class: &ClassUnit, m: &Member| {
            if class.members_named(m.name()).count() > 1 {
                member_key(m)
            } else {
                m.name().to_string()
            }
        };
        let find = |class: &ClassUnit, key: &str| class.members.iter().position(|m| member_key(m) == key);
        let mut order_e = Vec::new();
        let mut order_a = Vec::new();
        for (ei, em) in e.members.iter().enumerate() {
            let name = display(e, em);
            match find(a, &member_key(em)) {
                Some(ai) => {
                    order_e.push(ei);
                    order_a.push(ai);
                    self.member(c, &name, em, &a.members[ai]);
                }
                None => self.push(c, Some(&name), "member", Change::Removed, member_key(em)),
            }
        }
        for am in &a.members {
            if find(e, &member_key(am)).is_none() {
                let change = if member_view_membership(am, self.kind) { Change::Added } else { Change::NotPermitted };
                self.push(c, Some(&display(a, am)), "member", change, member_key(am));
            }
        }
        let mut sorted = order_a.clone();
        sorted.sort_unstable();
        if sorted != order_a {
            self.push(c, None, "members.order", Change::Changed, "members appear in a different order");
        }
    }

    fn member(&mut self, c: &str, name: &str, e: &Member, a: &Member) {
        if e.kind != a.kind || e.visibility != a.visibility || e.modifiers != a.modifiers || e.signature != a.signature {
            self.push(c, Some(name), "signature", Change::Changed, "declaration header differs");
        }
        match (&e.body, &a.body) {
            (Some(_), None) => self.push(c, Some(name), "body", Change::Removed, ""),
            (None, Some(_)) => {
                let change = if self.kind == ViewKind::Code { Change::Added } else { Change::NotPermitted };
                self.push(c, Some(name), "body", change, "")
            }
            (Some(x), Some(y)) if x != y => self.push(c, Some(name), "body", Change::Changed, ""),
            _ => {}
        }
        self.block(c, Some(name), "", e.external_spec.as_ref(), a.external_spec.as_ref());
        self.block(c, Some(name), "internal.", e.internal_spec.as_ref(), a.internal_spec.as_ref());
    }

    fn block(&mut self, c: &str, m: Option<&str>, prefix: &str, e: Option<&SpecBlock>, a: Option<&SpecBlock>) {
        let empty = SpecBlock::default();
        match (e, a) {
            (None, None) => return,
            (Some(x), None) if x.is_empty() => {
                return self.push(c, m, &format!("{prefix}spec"), Change::Removed, "empty specification comment")
            }
            (None, Some(y)) if y.is_empty() => {
                let change = self.permitted(prefix);
                return self.push(c, m, &format!("{prefix}spec"), change, "empty specification comment");
            }
            _ => {}
        }
        let e = e.unwrap_or(&empty);
        let a = a.unwrap_or(&empty);
        let before = self.deltas.len();
        let mut field = |name: &str, x: Vec<String>, y: Vec<String>, not_permitted: bool| {
            if x == y {
                return;
            }
            let change = if not_permitted && x.is_empty() {
                Change::NotPermitted
            } else if y.is_empty() {
                Change::Removed
            } else if x.is_empty() {
                Change::Added
            } else {
                Change::Changed
            };
            let gone: Vec<_> = x.iter().filter(|t| !y.contains(t)).cloned().collect();
            let new: Vec<_> = y.iter().filter(|t| !x.contains(t)).cloned().collect();
            let detail = match (gone.is_empty(), new.is_empty()) {
                (false, true) => format!("missing: {}", gone.join(" | ")),
                (true, false) => format!("extra: {}", new.join(" | ")),
                (false, false) => format!("missing: {}; extra: {}", gone.join(" | "), new.join(" | ")),
                (true, true) => "order or multiplicity differs".to_string(),
            };
            self.deltas.push(ViewDelta {
                class: c.to_string(),
                member: m.map(String::from),
                field: format!("{prefix}{name}"),
                change,
                detail,
            });
        };
        let raw = |cs: &[crate::model::Clause]| cs.iter().map(|c| c.raw.clone()).collect::<Vec<_>>();
        let sig = |ss: &[crate::model::SignalClause]| ss.iter().map(|s| format!("{s:?}")).collect::<Vec<_>>();
        let internal_only = self.kind == ViewKind::External;
        let np = internal_only && !prefix.is_empty();
        field("desc", e.desc.iter().map(|d| d.raw.clone()).collect(), a.desc.iter().map(|d| d.raw.clone()).collect(), np);
        field("inv", raw(&e.invariants), raw(&a.invariants), np);
        field("represents", raw(&e.represents), raw(&a.represents), internal_only);
        field("requires", raw(&e.requires), raw(&a.requires), np);
        field("ensures", raw(&e.ensures), raw(&a.ensures), np);
        field("signals", sig(&e.signals), sig(&a.signals), np);
        field("assignable", e.assignable.clone(), a.assignable.clone(), np);
        field("pure", e.pure.then(|| "@pure".into()).into_iter().collect(), a.pure.then(|| "@pure".into()).into_iter().collect(), np);
        field(
            "unknown",
            e.unknown.iter().map(|u| format!("@{} {}", u.tag, u.payload)).collect(),
            a.unknown.iter().map(|u| format!("@{} {}", u.tag, u.payload)).collect(),
            np,
        );
        let labels = |b: &SpecBlock| b.subspecs.iter().map(|s| s.label.clone()).collect::<Vec<_>>();
        field("subs", labels(e), labels(a), np);
        for es in &e.subspecs {
            if let Some(asub) = a.subspecs.iter().find(|s| s.label == es.label) {
                let p = format!("sub[{}].", es.label);
                field(&format!("{p}requires"), raw(&es.requires), raw(&asub.requires), np);
                field(&format!("{p}ensures"), raw(&es.ensures), raw(&asub.ensures), np);
                field(&format!("{p}signals"), sig(&es.signals), sig(&asub.signals), np);
                field(&format!("{p}assignable"), es.assignable.clone(), asub.assignable.clone(), np);
            }
        }
        // Hand-built documents can agree on clause text but not on its
        // parsed form; still report it so the diff is empty iff equal.
        if e != a && self.deltas.len() == before {
            self.push(c, m, &format!("{prefix}spec"), Change::Changed, "clause classification differs");
        }
    }

    fn permitted(&self, prefix: &str) -> Change {
        if self.kind == ViewKind::External && !prefix.is_empty() {
            Change::NotPermitted
        } else {
            Change::Added
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Clause, Signature, Visibility};

    fn method(name: &str, vis: Visibility) -> Member {
        Member {
            kind: MemberKind::Method,
            visibility: vis,
            modifiers: Vec::new(),
            signature: Signature { name: name.into(), ..Signature::default() },
            external_spec: Some(SpecBlock {
                requires: vec![Clause::informal("x > 0")],
                represents: vec![Clause::informal("B = lst")],
                ..SpecBlock::default()
            }),
            internal_spec: Some(SpecBlock::default()),
            body: Some(" return; ".into()),
        }
    }

    fn doc() -> MasterDocument {
        let mut class = ClassUnit::new("A");
        class.members.push(method("f", Visibility::Public));
        class.members.push(method("g", Visibility::Private));
        let mut doc = MasterDocument::new("A.java");
        doc.classes.push(class);
        doc
    }

    #[test]
    fn external_strips_everything_private() {
        let v = project(&doc(), ViewKind::External);
        let members = &v.classes[0].members;
        assert_eq!(members.len(), 1);
        let f = &members[0];
        assert!(f.internal_spec.is_none() && f.body.is_none());
        assert!(f.external_spec.as_ref().unwrap().represents.is_empty());
    }

    #[test]
    fn internal_drops_bodies_only() {
        let v = project(&doc(), ViewKind::Internal);
        assert_eq!(v.classes[0].members.len(), 2);
        assert!(v.classes[0].members.iter().all(|m| m.body.is_none() && m.internal_spec.is_some()));
    }

    #[test]
    fn empty_document_renders_empty() {
        let v = project(&MasterDocument::new("x"), ViewKind::Code);
        assert!(v.classes.is_empty());
        assert_eq!(render(&v), "");
    }

    #[test]
    fn diff_kind_mismatch() {
        let d = doc();
        let err = diff_views(&project(&d, ViewKind::External), &project(&d, ViewKind::Internal)).unwrap_err();
        assert_eq!(err, ViewError::KindMismatch { expected: ViewKind::External, actual: ViewKind::Internal });
    }

    #[test]
    fn diff_reports_removed_requires() {
        let d = doc();
        let expected = project(&d, ViewKind::External);
        let mut actual = expected.clone();
        actual.classes[0].members[0].external_spec.as_mut().unwrap().requires.clear();
        let deltas = diff_views(&expected, &actual).unwrap();
        assert_eq!(deltas.len(), 1);
        assert_eq!(deltas[0].member.as_deref(), Some("f"));
        assert_eq!(deltas[0].field, "requires");
        assert_eq!(deltas[0].change, Change::Removed);
    }

    #[test]
    fn diff_flags_private_member_in_external() {
        let d = doc();
        let expected = project(&d, ViewKind::External);
        let mut actual = expected.clone();
        actual.classes[0].members.push(Member { body: None, internal_spec: None, ..method("g", Visibility::Private) });
        let deltas = diff_views(&expected, &actual).unwrap();
        assert_eq!(deltas.len(), 1);
        assert_eq!(deltas[0].change, Change::NotPermitted);
        assert_eq!(deltas[0].member.as_deref(), Some("g"));
    }

    #[test]
    fn diff_sees_member_reordering() {
        let d = doc();
        let expected = project(&d, ViewKind::Internal);
        let mut actual = expected.clone();
        actual.classes[0].members.reverse();
        let deltas = diff_views(&expected, &actual).unwrap();
        assert_eq!(deltas.len(), 1);
        assert_eq!(deltas[0].field, "members.order");
    }

    #[test]
    fn rendering_is_stable() {
        let v = project(&doc(), ViewKind::Code);
        assert_eq!(render(&v), render(&v));
    }
}
