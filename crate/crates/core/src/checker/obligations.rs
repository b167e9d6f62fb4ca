use serde::Serialize;

use crate::diagnostics::Subject;
use crate::model::{normalize_text, Clause, ClassUnit, Member, SpecBlock};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Rule {
    /// represents and internal invariants imply the external invariants.
    #[serde(rename = "R1_invariant")]
    R1Invariant,
    /// represents and external preconditions imply the internal ones.
    #[serde(rename = "R2_precondition")]
    R2Precondition,
    /// represents and internal postconditions imply the external ones.
    #[serde(rename = "R3_postcondition")]
    R3Postcondition,
}

impl Rule {
    pub fn as_str(self) -> &'static str {
        match self {
            Rule::R1Invariant => "R1_invariant",
            Rule::R2Precondition => "R2_precondition",
            Rule::R3Postcondition => "R3_postcondition",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    TriviallyDischarged,
    Manual,
}

/// One implication to be proven: the conjunction of `antecedents` implies
/// every clause of `consequent`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Obligation {
    pub rule: Rule,
    pub subject: Subject,
    /// Subspecification label when the obligation covers one case.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case_label: Option<String>,
    pub antecedents: Vec<Clause>,
    pub consequent: Vec<Clause>,
    pub status: Status,
}

/// Mark `ob` discharged when every consequent clause appears among the
/// antecedents, compared as whitespace-normalized text.
pub fn discharge_trivial(ob: Obligation) -> Obligation {
    let have: Vec<String> = ob.antecedents.iter().map(|c| normalize_text(&c.raw)).collect();
    let trivial = ob.consequent.iter().all(|c| have.contains(&normalize_text(&c.raw)));
    Obligation { status: if trivial { Status::TriviallyDischarged } else { Status::Manual }, ..ob }
}

/// Preconditions and postconditions of one case at one level.
struct Case<'a> {
    requires: Vec<&'a Clause>,
    ensures: Vec<&'a Clause>,
}

fn flat(block: &SpecBlock) -> Case<'_> {
    Case { requires: block.requires.iter().collect(), ensures: block.ensures.iter().collect() }
}

/// Cases of a block keyed by label; `None` is the single unlabeled case.
fn cases(block: &SpecBlock) -> Vec<(Option<&str>, Case<'_>)> {
    if block.subspecs.is_empty() {
        return vec![(None, flat(block))];
    }
    block
        .subspecs
        .iter()
        .map(|s| {
            let mut case = flat(block);
            case.requires.extend(&s.requires);
            case.ensures.extend(&s.ensures);
            (Some(s.label.as_str()), case)
        })
        .collect()
}

/// Pair external and internal cases: by label when both levels have
/// subspecifications, otherwise each case with the other level's flat case.
fn paired<'a>(ext: &'a SpecBlock, int: &'a SpecBlock) -> Vec<(Option<&'a str>, Case<'a>, Case<'a>)> {
    match (ext.subspecs.is_empty(), int.subspecs.is_empty()) {
        (false, false) => cases(ext)
            .into_iter()
            .filter_map(|(label, e)| {
                let (_, i) = cases(int).into_iter().find(|(l, _)| *l == label)?;
                Some((label, e, i))
            })
            .collect(),
        (true, false) => cases(int).into_iter().map(|(label, i)| (label, flat(ext), i)).collect(),
        _ => cases(ext).into_iter().map(|(label, e)| (label, e, flat(int))).collect(),
    }
}

fn owned(list: &[&Clause]) -> Vec<Clause> {
    list.iter().map(|c| (*c).clone()).collect()
}

/// All refinement obligations of one class, each passed through
/// [`discharge_trivial`].
pub fn refinement_obligations(cls: &ClassUnit) -> Vec<Obligation> {
    let represents: Vec<Clause> = cls.represents().into_iter().cloned().collect();
    let mut out = Vec::new();

    let mut antecedents = represents.clone();
    if let Some(internal) = &cls.internal_spec {
        antecedents.extend(internal.invariants.iter().cloned());
    }
    out.push(Obligation {
        rule: Rule::R1Invariant,
        subject: Subject::class(&cls.name),
        case_label: None,
        antecedents,
        consequent: cls.external_spec.invariants.clone(),
        status: Status::Manual,
    });

    for member in cls.members.iter().filter(|m| m.is_public() && m.is_callable()) {
        member_obligations(cls, member, &represents, &mut out);
    }
    out.into_iter().map(discharge_trivial).collect()
}

fn member_obligations(cls: &ClassUnit, member: &Member, represents: &[Clause], out: &mut Vec<Obligation>) {
    let Some(ext) = &member.external_spec else { return };
    // Without an internal level the external one is its own refinement.
    let (int, rep) = match &member.internal_spec {
        Some(int) => (int, represents),
        None => (ext, &[][..]),
    };
    let subject = Subject::member(&cls.name, member.name());
    for (label, e, i) in paired(ext, int) {
        let mut pre = rep.to_vec();
        pre.extend(owned(&e.requires));
        out.push(Obligation {
            rule: Rule::R2Precondition,
            subject: subject.clone(),
            case_label: label.map(String::from),
            antecedents: pre,
            consequent: owned(&i.requires),
            status: Status::Manual,
        });
        let mut post = rep.to_vec();
        post.extend(owned(&i.ensures));
        out.push(Obligation {
            rule: Rule::R3Postcondition,
            subject: subject.clone(),
            case_label: label.map(String::from),
            antecedents: post,
            consequent: owned(&e.ensures),
            status: Status::Manual,
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ob(ante: &[&str], cons: &[&str]) -> Obligation {
        Obligation {
            rule: Rule::R2Precondition,
            subject: Subject::member("A", "f"),
            case_label: None,
            antecedents: ante.iter().map(|s| Clause::informal(*s)).collect(),
            consequent: cons.iter().map(|s| Clause::informal(*s)).collect(),
            status: Status::Manual,
        }
    }

    #[test]
    fn syntactic_subset_discharges() {
        assert_eq!(discharge_trivial(ob(&["x > 0"], &["x  >  0"])).status, Status::TriviallyDischarged);
        assert_eq!(discharge_trivial(ob(&[], &[])).status, Status::TriviallyDischarged);
        assert_eq!(discharge_trivial(ob(&["x > 0"], &["x >= 1"])).status, Status::Manual);
    }
}
