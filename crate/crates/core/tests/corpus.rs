use std::path::PathBuf;

use good_core::model::{MasterDocument, ViewKind};
use good_core::parser::parse_master;
use good_core::projector::{diff_views, project, render};

fn corpus(name: &str) -> (String, PathBuf) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus/bag").join(name);
    (std::fs::read_to_string(&path).unwrap(), path)
}

fn parse_clean(name: &str) -> MasterDocument {
    let (text, _) = corpus(name);
    let (doc, diags) = parse_master(&text, name);
    assert!(diags.is_empty(), "{name}: {diags:#?}");
    doc
}

#[test]
fn corpus_files_parse_without_diagnostics() {
    for name in ["Bag.java", "BagRobust.java", "Bag.external.java", "Bag.internal.java"] {
        parse_clean(name);
    }
}

#[test]
fn projections_match_golden_views() {
    let master = parse_clean("Bag.java");
    for (kind, golden) in [(ViewKind::External, "Bag.external.java"), (ViewKind::Internal, "Bag.internal.java")] {
        let expected = project(&parse_clean(golden), kind);
        let actual = project(&master, kind);
        assert_eq!(diff_views(&expected, &actual).unwrap(), vec![], "{kind}");
    }
}

#[test]
fn views_round_trip_through_render() {
    for name in ["Bag.java", "BagRobust.java"] {
        let master = parse_clean(name);
        for kind in ViewKind::ALL {
            let view = project(&master, kind);
            let text = render(&view);
            let (again, diags) = parse_master(&text, name);
            assert!(diags.is_empty(), "{name} {kind}: {diags:#?}\n{text}");
            assert_eq!(project(&again, kind), view, "{name} {kind}\n{text}");
        }
    }
}

#[test]
fn corpus_checks_clean() {
    use good_core::checker::check;
    for name in ["Bag.java", "BagRobust.java"] {
        let diags = check(&parse_clean(name));
        assert!(diags.is_empty(), "{name}: {diags:#?}");
    }
}

#[test]
fn remove_model_derives_three_cases() {
    use good_core::testgen::{derive_suite, load_test_model};
    let view = project(&parse_clean("BagRobust.java"), ViewKind::External);
    let (text, _) = corpus("remove.model");
    let (model, diags) = load_test_model(&text, &view);
    assert!(diags.is_empty(), "{diags:#?}");
    let (suite, diags) = derive_suite(&model, &view);
    assert!(diags.is_empty(), "{diags:#?}");
    assert_eq!(suite.cases.len(), 3);
}
