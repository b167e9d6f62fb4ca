use std::fmt::Write;

use serde::Serialize;

use super::cases::{enumerate_cases, Expectation, TestCase};
use super::model::{subject_member, validate_model, Fixture, TestModel};
use crate::diagnostics::Diagnostic;
use crate::model::{MemberKind, ViewDocument, ViewKind};

pub const MANIFEST_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SkeletonStyle {
    #[default]
    JUnit,
}

/// Everything needed to print one test class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestSuite {
    pub class: String,
    pub member: String,
    pub view: ViewKind,
    /// Receiver type as written in test code, e.g. `Bag<Integer>`.
    pub receiver_type: String,
    pub constructor: bool,
    pub fixtures: Vec<Fixture>,
    pub cases: Vec<TestCase>,
}

impl TestSuite {
    pub fn suite_name(&self) -> String {
        let member = super::cases::test_name(&self.member, "");
        let member = member.trim_start_matches("test");
        let level = if self.view == ViewKind::External { "" } else { "Internal" };
        format!("{}{member}{level}Test", self.class)
    }
}

/// Validate `model` against `view` and enumerate its cases.
pub fn derive_suite(model: &TestModel, view: &ViewDocument) -> (TestSuite, Vec<Diagnostic>) {
    let mut diags = validate_model(model, view);
    let (cases, more) = enumerate_cases(model, view);
    diags.extend(more);
    let class = view.class(&model.class);
    let params: Vec<&str> = class
        .map(|c| c.type_params.iter().map(|p| p.split_whitespace().next().unwrap_or("")).collect())
        .unwrap_or_default();
    let bound: Vec<&str> = params
        .iter()
        .filter_map(|p| model.bindings.iter().find(|(name, _)| name == p).map(|(_, ty)| ty.as_str()))
        .collect();
    let receiver_type = if !params.is_empty() && bound.len() == params.len() {
        format!("{}<{}>", model.class, bound.join(", "))
    } else {
        model.class.clone()
    };
    let constructor = subject_member(model, view).is_some_and(|m| m.kind == MemberKind::Constructor);
    let suite = TestSuite {
        class: model.class.clone(),
        member: model.member.clone(),
        view: view.kind,
        receiver_type,
        constructor,
        fixtures: model.fixtures.clone(),
        cases,
    };
    (suite, diags)
}

#[derive(Serialize)]
struct Manifest<'a> {
    schema_version: u32,
    suite: String,
    class: &'a str,
    member: &'a str,
    view: ViewKind,
    fixtures: &'a [Fixture],
    cases: &'a [TestCase],
}

/// Machine-readable case table (JSON).
pub fn emit_manifest(suite: &TestSuite) -> String {
    let manifest = Manifest {
        schema_version: MANIFEST_SCHEMA_VERSION,
        suite: suite.suite_name(),
        class: &suite.class,
        member: &suite.member,
        view: suite.view,
        fixtures: &suite.fixtures,
        cases: &suite.cases,
    };
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest is plain data");
    text.push('\n');
    text
}

fn java_string(s: &str) -> String {
    let mut out = String::from('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn diamond(receiver_type: &str) -> String {
    match receiver_type.find('<') {
        Some(i) => format!("{}<>", &receiver_type[..i]),
        None => receiver_type.to_string(),
    }
}

/// One test class with one `@Test` method per case.
pub fn emit_skeletons(suite: &TestSuite, style: SkeletonStyle) -> String {
    let SkeletonStyle::JUnit = style;
    let ty = &suite.receiver_type;
    let new = format!("new {}()", diamond(ty));
    let mut out = String::new();
    out.push_str("import static org.junit.jupiter.api.Assertions.*;\n\n");
    out.push_str("import org.junit.jupiter.api.Test;\n\n");
    let _ = writeln!(out, "class {} {{", suite.suite_name());

    for fixture in &suite.fixtures {
        let name = &fixture.name;
        let _ = writeln!(out, "\n  private static {ty} {name}() {{");
        let _ = writeln!(out, "    {ty} {name} = {new};");
        for op in &fixture.ops {
            let _ = writeln!(out, "    {name}.{op};");
        }
        let _ = writeln!(out, "    return {name};\n  }}");
    }

    for case in &suite.cases {
        let _ = writeln!(out, "\n  @Test\n  void {}() {{", case.name);
        let _ = writeln!(out, "    // partitions: {}", case.partitions.join(", "));
        let args = case.inputs.join(", ");
        let (recv, call) = if suite.constructor {
            ("created".to_string(), format!("new {}({args})", diamond(ty)))
        } else {
            let recv = case.fixture.clone().unwrap_or_else(|| "subject".into());
            match &case.fixture {
                Some(f) => {
                    let _ = writeln!(out, "    {ty} {recv} = {f}();");
                }
                None => {
                    let _ = writeln!(out, "    {ty} {recv} = {new};");
                }
            }
            let call = format!("{recv}.{}({args})", suite.member);
            (recv, call)
        };
        let observations = match &case.expectation {
            Expectation::Exception { exception_type, message, observations } => {
                let _ = writeln!(
                    out,
                    "    {exception_type} thrown = assertThrows({exception_type}.class, () -> {call});"
                );
                if let Some(msg) = message {
                    let _ = writeln!(out, "    assertEquals({}, thrown.getMessage());", java_string(msg));
                }
                observations
            }
            Expectation::Observations { observations } => {
                let wants_result = observations.iter().any(|o| o.is_result());
                if suite.constructor {
                    let _ = writeln!(out, "    {ty} {recv} = {call};");
                } else if wants_result {
                    let _ = writeln!(out, "    var result = {call};");
                } else {
                    let _ = writeln!(out, "    {call};");
                }
                if observations.is_empty() {
                    if case.ensures.is_empty() {
                        let _ = writeln!(out, "    // TODO assert the expected outcome");
                    }
                    for clause in &case.ensures {
                        let _ = writeln!(out, "    // TODO assert: {clause}");
                    }
                }
                observations
            }
        };
        for o in observations {
            let actual = if o.is_result() { "result".to_string() } else { format!("{recv}.{}", o.call) };
            let _ = writeln!(out, "    assertEquals({}, {actual});", o.expected);
        }
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    out
}
