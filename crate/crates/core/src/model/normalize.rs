use super::{Clause, ClassUnit, MasterDocument, Member, SignalClause, SpecBlock, SubSpec, UnknownTag};

/// Trim and collapse runs of whitespace to a single space.
pub fn normalize_text(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Canonical form of a document: clause text trimmed and whitespace
/// collapsed, labels and targets trimmed, line endings in opaque bodies
/// converted to LF. Idempotent.
pub fn normalize(doc: &MasterDocument) -> MasterDocument {
    MasterDocument {
        source_name: doc.source_name.clone(),
        classes: doc.classes.iter().map(normalize_class).collect(),
        source_spans: doc.source_spans.clone(),
    }
}

fn normalize_class(class: &ClassUnit) -> ClassUnit {
    ClassUnit {
        name: class.name.trim().to_string(),
        visibility: class.visibility,
        type_params: class.type_params.iter().map(|t| normalize_text(t)).collect(),
        external_spec: normalize_block(&class.external_spec),
        internal_spec: class.internal_spec.as_ref().map(normalize_block),
        members: class.members.iter().map(normalize_member).collect(),
    }
}

fn normalize_member(member: &Member) -> Member {
    Member {
        external_spec: member.external_spec.as_ref().map(normalize_block),
        internal_spec: member.internal_spec.as_ref().map(normalize_block),
        body: member.body.as_ref().map(|b| normalize_body(b)),
        ..member.clone()
    }
}

fn normalize_body(body: &str) -> String {
    body.replace("\r\n", "\n").replace('\r', "\n")
}

pub(crate) fn normalize_block(block: &SpecBlock) -> SpecBlock {
    SpecBlock {
        desc: block.desc.as_ref().map(normalize_clause),
        invariants: clauses(&block.invariants),
        requires: clauses(&block.requires),
        ensures: clauses(&block.ensures),
        signals: block.signals.iter().map(normalize_signal).collect(),
        assignable: targets(&block.assignable),
        pure: block.pure,
        represents: clauses(&block.represents),
        subspecs: block.subspecs.iter().map(normalize_subspec).collect(),
        unknown: block
            .unknown
            .iter()
            .map(|u| UnknownTag { tag: u.tag.clone(), payload: normalize_text(&u.payload) })
            .collect(),
    }
}

fn normalize_subspec(sub: &SubSpec) -> SubSpec {
    SubSpec {
        label: normalize_text(&sub.label),
        requires: clauses(&sub.requires),
        ensures: clauses(&sub.ensures),
        signals: sub.signals.iter().map(normalize_signal).collect(),
        assignable: targets(&sub.assignable),
    }
}

fn normalize_signal(signal: &SignalClause) -> SignalClause {
    SignalClause {
        exception_type: signal.exception_type.trim().to_string(),
        message: signal.message.clone(),
        condition: signal.condition.as_ref().map(normalize_clause),
    }
}

pub(crate) fn normalize_clause(clause: &Clause) -> Clause {
    Clause { raw: normalize_text(&clause.raw), ..clause.clone() }
}

fn clauses(list: &[Clause]) -> Vec<Clause> {
    list.iter().map(normalize_clause).collect()
}

fn targets(list: &[String]) -> Vec<String> {
    list.iter().map(|t| normalize_text(t)).collect()
}
