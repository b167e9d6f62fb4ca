//! Random well-formed documents for property tests.

#![allow(dead_code)]

use proptest::collection::{btree_set, vec};
use proptest::option;
use proptest::prelude::*;

use good_core::model::{
    ClassUnit, Clause, MasterDocument, Member, MemberKind, Param, SignalClause, Signature, SpecBlock, SubSpec,
    TypeRef, UnknownTag, Visibility,
};
use good_core::parser::classify_clause;

const CLAUSES: &[&str] = &[
    "x > 0",
    "size() >= 0",
    "B(elem) = \\old(B(elem)) + 1",
    "\\forall e: T | e != elem :: B(e) = \\old(B(e))",
    "\\result = \\num_of i: int | 0 <= i < lst.size() :: lst[i] = elem",
    "lst.size() = \\old(lst.size()) - 1",
    "the list is sorted",
    "every element occurs at most once in lst",
    "mult(elem) = \\old(mult(elem) - 1",
    "count <= capacity && capacity < 100",
    "name != null",
];

const WORDS: &[&str] = &["adds", "an", "element", "the", "bag", "counts", "returns", "list", "of", "items", "size"];
const TYPES: &[&str] = &["int", "T", "List<T>", "String[]", "Map<K, List<V>>", "boolean"];
const NAMES: &[&str] = &["add", "remove", "size", "mult", "clear", "get", "put", "count", "lst", "items"];
const TYPE_PARAMS: &[&[&str]] = &[&[], &["T"], &["K", "V extends Comparable<V>"]];
const PARAMS: &[&str] = &["elem", "index", "key", "value", "n"];

fn clause() -> impl Strategy<Value = Clause> {
    prop::sample::select(CLAUSES).prop_map(classify_clause)
}

fn words(max: usize) -> impl Strategy<Value = String> {
    vec(prop::sample::select(WORDS), 1..=max).prop_map(|w| w.join(" "))
}

fn signal() -> impl Strategy<Value = SignalClause> {
    (
        prop::sample::select(&["ArgumentNotFoundException", "IllegalStateException", "java.io.IOException"][..]),
        option::of(prop_oneof![words(4), Just("say \"no\" \\ twice".to_string())]),
        option::of(clause()),
    )
        .prop_map(|(t, message, condition)| SignalClause { exception_type: t.into(), message, condition })
}

fn subspecs() -> impl Strategy<Value = Vec<SubSpec>> {
    btree_set(words(3), 0..3).prop_flat_map(|labels| {
        let n = labels.len();
        (
            Just(labels.into_iter().collect::<Vec<_>>()),
            vec((vec(clause(), 0..2), vec(clause(), 0..2), vec(signal(), 0..2), vec(prop::sample::select(NAMES), 0..2)), n),
        )
            .prop_map(|(labels, parts)| {
                labels
                    .into_iter()
                    .zip(parts)
                    .map(|(label, (requires, ensures, signals, assignable))| SubSpec {
                        label,
                        requires,
                        ensures,
                        signals,
                        assignable: assignable.into_iter().map(String::from).collect(),
                    })
                    .collect()
            })
    })
}

fn unknown() -> impl Strategy<Value = UnknownTag> {
    (prop::sample::select(&["author", "since", "todo"][..]), words(3))
        .prop_map(|(tag, payload)| UnknownTag { tag: tag.into(), payload })
}

/// A spec block; `conditions` allows requires/ensures/signals/subs.
pub fn spec_block(conditions: bool) -> impl Strategy<Value = SpecBlock> {
    let c = if conditions { 2 } else { 0 };
    (
        option::of(words(6).prop_map(Clause::informal)),
        vec(clause(), 0..2),
        vec(clause(), 0..=c),
        vec(clause(), 0..=c),
        vec(signal(), 0..=c.min(1)),
        vec(prop::sample::select(NAMES), 0..2),
        any::<bool>(),
        vec(clause(), 0..2),
        if conditions { subspecs().boxed() } else { Just(Vec::new()).boxed() },
        vec(unknown(), 0..2),
    )
        .prop_map(|(desc, invariants, requires, ensures, signals, assignable, pure, represents, subspecs, unknown)| {
            SpecBlock {
                desc,
                invariants,
                requires,
                ensures,
                signals,
                assignable: assignable.into_iter().map(String::from).collect(),
                pure,
                represents,
                subspecs,
                unknown,
            }
        })
}

fn body() -> impl Strategy<Value = String> {
    prop::sample::select(&[
        " return; ",
        "\n    lst.add(elem);\n  ",
        "\n    if (x > 0) { x--; } else { throw new IllegalStateException(\"}\"); }\n  ",
        "\n    // keep going\n    int n = 0; /* plain */ return n;\n  ",
        "",
    ][..])
    .prop_map(String::from)
}

fn visibility() -> impl Strategy<Value = Visibility> {
    prop_oneof![Just(Visibility::Public), Just(Visibility::Private), Just(Visibility::Package)]
}

fn member(class: String) -> impl Strategy<Value = Member> {
    (
        prop_oneof![Just(MemberKind::Method), Just(MemberKind::Attribute), Just(MemberKind::Constructor)],
        visibility(),
        prop::sample::subsequence(&["static", "final"][..], 0..=2),
        prop::sample::select(NAMES),
        btree_set(prop::sample::select(PARAMS), 0..3),
        vec(prop::sample::select(TYPES), 3),
        option::of(prop::sample::select(TYPES)),
        option::of(spec_block(true)),
        option::of(spec_block(true)),
        option::of(body()),
        any::<bool>(),
    )
        .prop_map(move |(kind, visibility, mods, name, params, tys, ret, ext, int, body, throws)| {
            let public = visibility == Visibility::Public;
            let attribute = kind == MemberKind::Attribute;
            let strip = |s: SpecBlock| if attribute { SpecBlock { requires: vec![], ensures: vec![], signals: vec![], subspecs: vec![], ..s } } else { s };
            let signature = match kind {
                MemberKind::Attribute => Signature {
                    name: name.into(),
                    declared_type: Some(TypeRef::new(tys[0])),
                    ..Signature::default()
                },
                _ => Signature {
                    name: if kind == MemberKind::Constructor { class.clone() } else { name.into() },
                    type_args: None,
                    params: params.into_iter().zip(tys).map(|(p, t)| Param { name: p.into(), ty: TypeRef::new(t) }).collect(),
                    return_type: if kind == MemberKind::Method { Some(TypeRef::new(ret.unwrap_or("void"))) } else { None },
                    declared_type: None,
                    throws: if throws { vec![TypeRef::new("ArgumentNotFoundException")] } else { vec![] },
                },
            };
            Member {
                kind,
                visibility,
                modifiers: if kind == MemberKind::Constructor { vec![] } else { mods.into_iter().map(String::from).collect() },
                signature,
                external_spec: if public { ext.map(strip) } else { None },
                internal_spec: int.map(strip),
                body: match (attribute, body) {
                    (true, Some(_)) => Some("new ArrayList<>()".into()),
                    (_, b) => b,
                },
            }
        })
}

fn class(name: &'static str) -> impl Strategy<Value = ClassUnit> {
    (
        prop_oneof![Just(Visibility::Public), Just(Visibility::Package)],
        prop::sample::select(TYPE_PARAMS),
        spec_block(false),
        option::of(spec_block(false)),
        vec(member(name.to_string()), 0..6),
    )
        .prop_map(move |(visibility, params, ext, int, members)| {
            let mut class = ClassUnit::new(name);
            class.visibility = visibility;
            class.type_params = params.iter().map(|p| p.to_string()).collect();
            class.external_spec = ext;
            class.internal_spec = int;
            let mut keys = std::collections::HashSet::new();
            for m in members {
                let key = match m.kind {
                    MemberKind::Attribute => format!("a {}", m.name()),
                    _ => format!("c {}", m.signature.key()),
                };
                if keys.insert(key) {
                    class.members.push(m);
                }
            }
            class
        })
}

/// A document with one to three uniquely named classes.
pub fn document() -> impl Strategy<Value = MasterDocument> {
    prop::sample::subsequence(&["Bag", "Stack", "Account"][..], 1..=3)
        .prop_flat_map(|names| names.into_iter().map(class).collect::<Vec<_>>())
        .prop_map(|classes| MasterDocument { source_name: "random.java".into(), classes, source_spans: Default::default() })
}
