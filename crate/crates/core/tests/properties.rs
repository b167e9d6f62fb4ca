mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use good_core::checker::{check, discharge_trivial, refinement_obligations, Status};
use good_core::diagnostics::has_errors;
use good_core::model::{
    member_view_membership, normalize, normalize_text, Clause, MasterDocument, MemberKind, ViewDocument, ViewKind,
};
use good_core::parser::parse_master;
use good_core::projector::{diff_views, project, render};
use good_core::testgen::{derive_suite, parse_test_model, Expectation};
use good_core::workflow::{all_violations, default_graph, ProjectState, Relation, Status as Progress};

fn keys(view: &ViewDocument) -> BTreeSet<(String, String)> {
    view.classes
        .iter()
        .flat_map(|c| {
            c.members.iter().map(move |m| {
                let key = match m.kind {
                    MemberKind::Attribute => m.name().to_string(),
                    _ => m.signature.key(),
                };
                (c.name.clone(), key)
            })
        })
        .collect()
}

fn reparse(text: &str) -> MasterDocument {
    let (doc, diags) = parse_master(text, "random.java");
    assert!(!has_errors(&diags), "{diags:#?}\n{text}");
    doc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn views_are_nested(doc in common::document()) {
        let ext = project(&doc, ViewKind::External);
        let int = project(&doc, ViewKind::Internal);
        let code = project(&doc, ViewKind::Code);
        prop_assert!(keys(&ext).is_subset(&keys(&int)));
        prop_assert!(keys(&int).is_subset(&keys(&code)));
        for class in &doc.classes {
            for m in &class.members {
                let in_ext = ext.class(&class.name).unwrap().members.iter().any(|x| x.signature == m.signature && x.kind == m.kind);
                prop_assert_eq!(in_ext, member_view_membership(m, ViewKind::External));
            }
        }
    }

    #[test]
    fn external_view_carries_no_internal_detail(doc in common::document()) {
        let ext = project(&doc, ViewKind::External);
        for class in &ext.classes {
            prop_assert!(class.internal_spec.is_none());
            prop_assert!(class.external_spec.represents.is_empty());
            for m in &class.members {
                prop_assert!(m.internal_spec.is_none() && m.body.is_none());
                prop_assert!(m.external_spec.as_ref().is_none_or(|s| s.represents.is_empty()));
            }
        }
    }

    #[test]
    fn render_parse_is_a_fixpoint(doc in common::document()) {
        for kind in ViewKind::ALL {
            let view = project(&doc, kind);
            let text = render(&view);
            let again = project(&reparse(&text), kind);
            prop_assert_eq!(&again, &view, "{}\n{}", kind, text);
            prop_assert_eq!(render(&again), text);
        }
    }

    #[test]
    fn rendering_is_injective(a in common::document(), b in common::document()) {
        let (va, vb) = (project(&a, ViewKind::Code), project(&b, ViewKind::Code));
        if render(&va) == render(&vb) {
            prop_assert_eq!(va, vb);
        }
    }

    #[test]
    fn projecting_the_code_view_again_changes_nothing(doc in common::document()) {
        let code = project(&doc, ViewKind::Code).to_document();
        for kind in ViewKind::ALL {
            prop_assert_eq!(project(&code, kind), project(&doc, kind));
            let v = project(&doc, kind);
            prop_assert_eq!(diff_views(&v, &v).unwrap(), vec![]);
        }
    }

    #[test]
    fn diff_is_empty_iff_equal(a in common::document(), b in common::document()) {
        for kind in ViewKind::ALL {
            let (va, vb) = (project(&a, kind), project(&b, kind));
            let deltas = diff_views(&va, &vb).unwrap();
            prop_assert_eq!(deltas.is_empty(), va.classes == vb.classes, "{:?}", deltas);
        }
    }

    #[test]
    fn normalize_is_idempotent(doc in common::document(), pad in "[ \t\n]{0,3}") {
        let mut noisy = doc.clone();
        for class in &mut noisy.classes {
            for m in &mut class.members {
                for block in m.external_spec.iter_mut().chain(m.internal_spec.iter_mut()) {
                    for c in block.requires.iter_mut().chain(block.ensures.iter_mut()) {
                        c.raw = format!("{pad}{}{pad}", c.raw.replace(' ', &format!(" {pad}")));
                    }
                }
            }
        }
        let once = normalize(&noisy);
        prop_assert_eq!(normalize(&once), once.clone());
        prop_assert!(once.structurally_eq(&doc));
    }

    #[test]
    fn checker_is_deterministic_and_discharge_is_sound(doc in common::document()) {
        prop_assert_eq!(check(&doc), check(&doc.clone()));
        for class in &doc.classes {
            let obs = refinement_obligations(class);
            prop_assert_eq!(obs.iter().filter(|o| o.subject.member.is_none()).count(), 1);
            for o in obs {
                if o.status == Status::TriviallyDischarged {
                    let have: Vec<String> = o.antecedents.iter().map(|c| normalize_text(&c.raw)).collect();
                    prop_assert!(o.consequent.iter().all(|c| have.contains(&normalize_text(&c.raw))));
                }
                prop_assert_eq!(discharge_trivial(o.clone()), o);
            }
        }
    }

    #[test]
    fn all_combinations_law(sizes in prop::collection::vec(1usize..=4, 1..=3), with_receiver in any::<bool>(), receivers in 1usize..=3) {
        let params: Vec<String> = (0..sizes.len()).map(|i| format!("p{i}")).collect();
        let decl = params.iter().map(|p| format!("int {p}")).collect::<Vec<_>>().join(", ");
        let src = format!("class C {{\n  /** @desc f @sub hit {{ @requires p0 > 0 @signals Oops(\"no\") }} */\n  public void f({decl})\n}}\n");
        let (doc, _) = parse_master(&src, "C.java");
        let view = project(&doc, ViewKind::External);
        let mut model = String::from("subject C#f\n");
        for r in 0..receivers {
            model.push_str(&format!("fixture r{r}: f(1)\n"));
        }
        if with_receiver {
            for r in 0..receivers {
                model.push_str(&format!("domain this: equivalence \"state {r}\" = r{r}\n"));
            }
        }
        for (p, &n) in params.iter().zip(&sizes) {
            for i in 0..n {
                let map = if i == 0 { " -> subspec \"hit\"" } else { "" };
                model.push_str(&format!("domain {p}: boundary \"v{i}\" = {i}{map}\n"));
            }
        }
        let (m, diags) = parse_test_model(&model);
        prop_assert!(diags.is_empty());
        let (suite, diags) = derive_suite(&m, &view);
        prop_assert!(diags.is_empty(), "{:?}", diags);
        let expected: usize = sizes.iter().product::<usize>() * if with_receiver { receivers } else { 1 };
        prop_assert_eq!(suite.cases.len(), expected);
        let names: BTreeSet<_> = suite.cases.iter().map(|c| c.name.clone()).collect();
        prop_assert_eq!(names.len(), suite.cases.len());
        for case in &suite.cases {
            let bound = case.bound_subspec.is_some();
            prop_assert_eq!(case.expectation.is_exception(), bound);
            if !bound {
                let is_obs = matches!(case.expectation, Expectation::Observations { .. });
                prop_assert!(is_obs);
            }
        }
    }

    #[test]
    fn upgrading_a_status_only_adds_violations_about_that_node(
        seed in prop::collection::vec(0u8..3, 21),
        pick in 0usize..21,
    ) {
        let graph = default_graph();
        let level = |v: u8| [Progress::Absent, Progress::Draft, Progress::Complete][v as usize];
        let mut state = ProjectState::default();
        for (node, &v) in graph.nodes.iter().zip(&seed) {
            state.statuses.insert(node.id.clone(), level(v));
        }
        let node = &graph.nodes[pick];
        let current = state.status(&node.id);
        prop_assume!(current != Progress::Complete);
        let pairs = |s: &ProjectState| -> BTreeSet<(String, String)> {
            all_violations(&graph, s).into_iter().map(|v| (v.dependent, v.needed)).collect()
        };
        let before = pairs(&state);
        let mut up = state.clone();
        up.statuses.insert(node.id.clone(), level(current as u8 + 1));
        let after = pairs(&up);
        let producers: Vec<&str> = graph
            .edges(Relation::ResultsIn)
            .filter(|e| e.to == node.id)
            .map(|e| e.from.as_str())
            .collect();
        for (dependent, needed) in after.difference(&before) {
            prop_assert!(
                *dependent == node.id || producers.contains(&dependent.as_str()),
                "{} -> {} after upgrading {}", dependent, needed, node.id
            );
        }
    }
}

#[test]
fn informal_clauses_stay_text() {
    let c: Clause = good_core::parser::classify_clause("the list is sorted");
    assert!(c.expr.is_none());
}
