//! Structural consistency rules and refinement obligations.

mod interval;
mod obligations;

use std::collections::HashSet;

pub use interval::{check_disjoint_interval, Disjointness};
pub use obligations::{discharge_trivial, refinement_obligations, Obligation, Rule, Status};

use crate::diagnostics::{Code, Diagnostic, Subject};
use crate::model::{BinaryOp, Clause, ClauseExpr, MasterDocument, NodeId, Span, SpecBlock};

/// All checker diagnostics for `doc`, in document order.
pub fn check(doc: &MasterDocument) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for (ci, class) in doc.classes.iter().enumerate() {
        let mut emit = |code: Code, span: Span, subject: Subject, message: String| {
            out.push(Diagnostic::new(code, span, message).with_subject(subject));
        };
        let span = doc.span(NodeId::Class(ci));
        let subject = Subject::class(&class.name);
        if !class.external_spec.represents.is_empty() {
            emit(Code::E003, span, subject.clone(), "external class specification declares @represents".into());
        }
        for (level, block) in [("external", Some(&class.external_spec)), ("internal", class.internal_spec.as_ref())] {
            if let Some(block) = block {
                block_rules(block, level, &mut |code, msg| emit(code, span, subject.clone(), msg));
            }
        }

        for (mi, member) in class.members.iter().enumerate() {
            let span = doc.span(NodeId::Member(ci, mi));
            let subject = Subject::member(&class.name, member.name());
            let mut emit = |code: Code, message: String| emit(code, span, subject.clone(), message);
            let ext = member.external_spec.as_ref();
            let int = member.internal_spec.as_ref();
            if member.is_public() {
                if ext.and_then(|s| s.desc.as_ref()).is_none() {
                    emit(Code::E001, format!("public member `{}` has no external @desc", member.name()));
                }
                if member.is_callable() && ext.is_some() && int.is_none() {
                    emit(
                        Code::W002,
                        format!("`{}` has no internal specification; the external one is taken as is", member.name()),
                    );
                }
            } else if member.specs().all(|s| s.desc.is_none()) {
                emit(Code::W001, format!("non-public member `{}` has no @desc", member.name()));
            }
            let pure = member.specs().any(|s| s.pure);
            let assigns = member
                .specs()
                .any(|s| !s.assignable.is_empty() || s.subspecs.iter().any(|sub| !sub.assignable.is_empty()));
            if pure && assigns {
                emit(Code::E002, format!("`{}` is @pure but declares @assignable targets", member.name()));
            }
            if ext.is_some_and(|s| !s.represents.is_empty()) {
                emit(Code::E003, format!("external specification of `{}` declares @represents", member.name()));
            }
            for (level, block) in [("external", ext), ("internal", int)] {
                if let Some(block) = block {
                    block_rules(block, level, &mut emit);
                }
            }
            if let (Some(e), Some(i)) = (ext, int) {
                if !e.subspecs.is_empty() && !i.subspecs.is_empty() {
                    for (from, to, a, b) in [("external", "internal", e, i), ("internal", "external", i, e)] {
                        for sub in &a.subspecs {
                            if b.subspec(&sub.label).is_none() {
                                emit(
                                    Code::W004,
                                    format!("{from} subspecification \"{}\" has no {to} counterpart", sub.label),
                                );
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Rules that look at one specification block in isolation.
fn block_rules(block: &SpecBlock, level: &str, emit: &mut dyn FnMut(Code, String)) {
    if (!block.requires.is_empty() || !block.ensures.is_empty()) && !block.subspecs.is_empty() {
        emit(Code::E005, format!("{level} specification mixes flat @requires/@ensures with @sub blocks"));
    }
    let mut seen = HashSet::new();
    for sub in &block.subspecs {
        if !seen.insert(sub.label.as_str()) {
            emit(Code::E006, format!("{level} subspecification label \"{}\" is used twice", sub.label));
        }
        if sub.requires.is_empty() {
            if sub.signals.is_empty() {
                emit(Code::W006, format!("{level} subspecification \"{}\" has no @requires", sub.label));
            } else {
                emit(Code::E004, format!("{level} subspecification \"{}\" signals without a @requires", sub.label));
            }
        }
    }
    let pre = block
        .invariants
        .iter()
        .chain(&block.requires)
        .chain(&block.represents)
        .chain(block.subspecs.iter().flat_map(|s| &s.requires));
    for clause in pre {
        if mentions_old(clause) {
            emit(Code::W005, format!("{level} clause `{}` uses \\old outside a postcondition", clause.raw));
        }
    }
    for (i, a) in block.subspecs.iter().enumerate() {
        for b in &block.subspecs[i + 1..] {
            let verdict = match (conjunction(&a.requires), conjunction(&b.requires)) {
                (Some(x), Some(y)) => check_disjoint_interval(&x, &y),
                _ => Disjointness::Unknown,
            };
            if verdict != Disjointness::Disjoint {
                emit(
                    Code::W003,
                    format!(
                        "{level} subspecifications \"{}\" and \"{}\" are not shown disjoint ({})",
                        a.label,
                        b.label,
                        if verdict == Disjointness::Overlapping { "they overlap" } else { "outside the decidable fragment" }
                    ),
                );
            }
        }
    }
}

fn mentions_old(clause: &Clause) -> bool {
    match &clause.expr {
        Some(e) => e.mentions_old(),
        None => clause.raw.contains("\\old"),
    }
}

fn conjunction(clauses: &[Clause]) -> Option<ClauseExpr> {
    let mut exprs = clauses.iter().map(|c| c.expr.clone());
    let first = exprs.next()??;
    exprs.try_fold(first, |acc, e| Some(ClauseExpr::binary(BinaryOp::And, acc, e?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_master;

    fn codes(src: &str) -> Vec<Code> {
        let (doc, diags) = parse_master(src, "t.java");
        assert!(diags.is_empty(), "{diags:?}");
        check(&doc).into_iter().map(|d| d.code).collect()
    }

    #[test]
    fn clean_member() {
        assert!(codes("class A {\n  /** @desc f */\n  public void f()\n  /** @desc g */\n}\n").is_empty());
    }

    #[test]
    fn each_rule_fires() {
        assert_eq!(codes("class A {\n  public void f()\n  /** @desc x */\n}\n"), vec![Code::E001]);
        assert_eq!(codes("class A {\n  /** @desc f @pure @assignable x */\n  public void f()\n  /** */\n}\n"), vec![Code::E002]);
        assert_eq!(codes("class A {\n  /** @desc f @represents a = b */\n  public int f;\n}\n"), vec![Code::E003]);
        assert_eq!(codes("class A {\n  private void f()\n}\n"), vec![Code::W001]);
        assert_eq!(codes("class A {\n  /** @desc f */\n  public void f()\n}\n"), vec![Code::W002]);
        assert_eq!(codes("class A {\n  /** @desc f @requires \\old(x) > 0 */\n  public void f()\n  /** */\n}\n"), vec![Code::W005]);
    }

    #[test]
    fn subspec_rules() {
        let src = "class A {\n  /**\n   * @desc f\n   * @requires t > 0\n   * @sub a { @requires t > 0 }\n   * @sub a { @signals E }\n   * @sub b { @ensures t = 0 }\n   */\n  public void f(int t)\n  /** */\n}\n";
        let got = codes(src);
        for code in [Code::E005, Code::E006, Code::E004, Code::W006, Code::W003] {
            assert!(got.contains(&code), "{code} missing from {got:?}");
        }
    }

    #[test]
    fn unmatched_labels_warn() {
        let src = "class A {\n  /** @desc f @sub a { @requires t > 0 } @sub b { @requires t <= 0 } */\n  public void f(int t)\n  /** @sub a { @requires t > 0 } @sub c { @requires t <= 0 } */\n}\n";
        assert_eq!(codes(src), vec![Code::W004, Code::W004]);
    }
}
