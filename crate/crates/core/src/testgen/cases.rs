use std::collections::{HashMap, HashSet};

use serde::Serialize;

use super::model::{subject_member, Observation, Partition, TestModel};
use crate::diagnostics::{Code, Diagnostic};
use crate::model::{Clause, Member, Span, SpecBlock, ViewDocument, ViewKind};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Expectation {
    /// Observations to assert after the call. Empty means the model gave
    /// no values and the skeleton carries TODO stubs instead.
    Observations { observations: Vec<Observation> },
    Exception {
        #[serde(rename = "type")]
        exception_type: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        message: Option<String>,
        #[serde(skip_serializing_if = "Vec::is_empty")]
        observations: Vec<Observation>,
    },
}

impl Expectation {
    pub fn is_exception(&self) -> bool {
        matches!(self, Expectation::Exception { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TestCase {
    pub name: String,
    pub fixture: Option<String>,
    /// Argument literals in parameter order.
    pub inputs: Vec<String>,
    /// Labels of the partitions combined in this case, in domain order.
    pub partitions: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_subspec: Option<String>,
    pub expectation: Expectation,
    /// Postconditions governing the case, quoted by TODO stubs.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub ensures: Vec<String>,
}

/// Uppercase the first letter of each alphanumeric run and drop the rest.
fn upper_camel(text: &str) -> String {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(|w| {
            let mut chars = w.chars();
            let first = chars.next().unwrap();
            first.to_uppercase().chain(chars).collect::<String>()
        })
        .collect()
}

/// `test` + member + case label, both in UpperCamel.
pub fn test_name(member: &str, case_label: &str) -> String {
    format!("test{}{}", upper_camel(member), upper_camel(case_label))
}

/// Hands out unique names: the second use of a base name gets `2`, and so on.
#[derive(Debug, Default)]
pub struct Namer {
    used: HashSet<String>,
    next: HashMap<String, usize>,
}

impl Namer {
    pub fn name(&mut self, base: String) -> String {
        let mut n = self.next.get(&base).copied().unwrap_or(1);
        loop {
            let candidate = if n == 1 { base.clone() } else { format!("{base}{n}") };
            n += 1;
            if self.used.insert(candidate.clone()) {
                self.next.insert(base, n);
                return candidate;
            }
        }
    }
}

/// The block whose cases drive derivation for this view.
fn governing(member: &Member, kind: ViewKind) -> Option<&SpecBlock> {
    match kind {
        ViewKind::External => member.external_spec.as_ref(),
        _ => member.internal_spec.as_ref().or(member.external_spec.as_ref()),
    }
}

fn texts(clauses: &[Clause]) -> Vec<String> {
    clauses.iter().map(|c| c.raw.clone()).collect()
}

/// All combinations of the model's partitions, one case each.
pub fn enumerate_cases(model: &TestModel, view: &ViewDocument) -> (Vec<TestCase>, Vec<Diagnostic>) {
    let mut diags = Vec::new();
    let Some(member) = subject_member(model, view) else {
        return (Vec::new(), diags);
    };
    let block = governing(member, view.kind);
    let fallback = member.external_spec.as_ref();
    let find_sub = |label: &str| {
        block.and_then(|b| b.subspec(label)).or_else(|| fallback.and_then(|b| b.subspec(label)))
    };

    // Receiver domain first, then parameters in signature order.
    let mut axes: Vec<Vec<&Partition>> = Vec::new();
    let receiver = model.domain("this").map(|d| d.partitions_for(view.kind).collect::<Vec<_>>());
    if let Some(r) = &receiver {
        axes.push(r.clone());
    }
    for param in &member.signature.params {
        axes.push(model.domain(&param.name).map(|d| d.partitions_for(view.kind).collect()).unwrap_or_default());
    }

    let mut combos: Vec<Vec<&Partition>> = vec![Vec::new()];
    for axis in &axes {
        combos = combos
            .into_iter()
            .flat_map(|prefix| {
                axis.iter().map(move |p| {
                    let mut next = prefix.clone();
                    next.push(p);
                    next
                })
            })
            .collect();
    }

    let default_fixture = model.fixtures.first().map(|f| f.name.clone());
    let mut namer = Namer::default();
    let mut cases = Vec::new();
    for combo in combos {
        let (fixture, args) = match receiver {
            Some(_) => (Some(combo[0].representative.clone()), &combo[1..]),
            None => (default_fixture.clone(), &combo[..]),
        };
        let mut bound: Option<&str> = None;
        for p in &combo {
            let Some(label) = p.maps_to_subspec.as_deref() else { continue };
            match bound {
                Some(b) if b != label => diags.push(Diagnostic::new(
                    Code::T007,
                    Span::point(p.line, 1),
                    format!("partition \"{}\" maps to \"{label}\" but the case is already bound to \"{b}\"", p.label),
                )),
                Some(_) => {}
                None => {
                    if find_sub(label).is_some() {
                        bound = Some(label);
                    } else if !diags.iter().any(|d: &Diagnostic| d.code == Code::T003 && d.span.start.line == p.line) {
                        diags.push(
                            Diagnostic::new(
                                Code::T003,
                                Span::point(p.line, 1),
                                format!("`{}` has no subspecification \"{label}\"", model.member),
                            )
                            .with_subject(model.subject()),
                        );
                    }
                }
            }
        }
        let observations: Vec<Observation> = combo.iter().flat_map(|p| p.expect.iter().cloned()).collect();
        let mut ensures = block.map(|b| texts(&b.ensures)).unwrap_or_default();
        let sub = bound.and_then(find_sub);
        if let Some(sub) = sub {
            ensures.extend(texts(&sub.ensures));
        }
        let expectation = match sub.and_then(|s| s.signals.first()) {
            Some(signal) => Expectation::Exception {
                exception_type: signal.exception_type.clone(),
                message: signal.message.clone(),
                observations,
            },
            None => Expectation::Observations { observations },
        };
        let labels: Vec<String> = combo.iter().map(|p| p.label.clone()).collect();
        let case_label = match bound {
            Some(label) => label.to_string(),
            None => labels.join(" "),
        };
        cases.push(TestCase {
            name: namer.name(test_name(&model.member, &case_label)),
            fixture,
            inputs: args.iter().map(|p| p.representative.clone()).collect(),
            partitions: labels,
            bound_subspec: bound.map(String::from),
            expectation,
            ensures,
        });
    }
    (cases, diags)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names() {
        assert_eq!(test_name("remove", "elem is not present"), "testRemoveElemIsNotPresent");
        assert_eq!(test_name("add", ""), "testAdd");
        assert_eq!(test_name("size", "x-y_z 9"), "testSizeXYZ9");
    }

    #[test]
    fn collisions_get_ordinals() {
        let mut n = Namer::default();
        let got: Vec<String> = ["Dup", "Dup", "Dup2", "Dup"].iter().map(|s| n.name(format!("testFoo{s}"))).collect();
        assert_eq!(got, ["testFooDup", "testFooDup2", "testFooDup22", "testFooDup3"]);
    }
}
