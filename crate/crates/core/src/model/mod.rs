//! Document, specification and view data model.
//!
//! Everything here is plain immutable data: the parser builds it, the
//! projector filters it, the checker and test deriver read it.

mod expr;
mod normalize;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use expr::{BinaryOp, Binder, ClauseExpr, Quantifier, UnaryOp};
pub use normalize::{normalize, normalize_text};

/// 1-based line and column.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Position {
    pub line: u32,
    pub column: u32,
}

impl Position {
    pub fn new(line: u32, column: u32) -> Self {
        Self { line, column }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Span {
    pub start: Position,
    pub end: Position,
}

impl Span {
    pub fn new(start: Position, end: Position) -> Self {
        Self { start, end }
    }

    pub fn point(line: u32, column: u32) -> Self {
        let p = Position::new(line, column);
        Self { start: p, end: p }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.start.line, self.start.column)
    }
}

/// Addresses a class, or a member of a class, by position in the document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeId {
    Class(usize),
    Member(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Visibility {
    Public,
    Private,
    /// No access modifier.
    Package,
}

impl Visibility {
    pub fn keyword(self) -> Option<&'static str> {
        match self {
            Visibility::Public => Some("public"),
            Visibility::Private => Some("private"),
            Visibility::Package => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MemberKind {
    Constructor,
    Method,
    Attribute,
}

/// A type as written in the source, with whitespace canonicalized
/// (`Map<K, V>`, `List<T>`, `int[]`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TypeRef(pub String);

impl TypeRef {
    pub fn new(text: impl Into<String>) -> Self {
        TypeRef(text.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_void(&self) -> bool {
        self.0 == "void"
    }
}

impl fmt::Display for TypeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Param {
    pub name: String,
    pub ty: TypeRef,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub name: String,
    /// Type arguments written directly after a constructor name, as in
    /// `public Bag<T>()`. Kept verbatim so the declaration renders back as
    /// written.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub type_args: Option<String>,
    pub params: Vec<Param>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub return_type: Option<TypeRef>,
    /// Attributes only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub declared_type: Option<TypeRef>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub throws: Vec<TypeRef>,
}

impl Signature {
    pub fn param_types(&self) -> Vec<&TypeRef> {
        self.params.iter().map(|p| &p.ty).collect()
    }

    /// `name(T1, T2)`, the overload-distinguishing key.
    pub fn key(&self) -> String {
        let types: Vec<&str> = self.params.iter().map(|p| p.ty.as_str()).collect();
        format!("{}({})", self.name, types.join(", "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Formality {
    Informal,
    Formal,
    Mixed,
}

/// One specification clause. `raw` is the payload text; `expr` is present
/// when the payload parses in the clause expression grammar.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Clause {
    pub raw: String,
    pub formality: Formality,
    #[serde(skip)]
    pub expr: Option<ClauseExpr>,
}

impl Clause {
    pub fn informal(raw: impl Into<String>) -> Self {
        Self { raw: raw.into(), formality: Formality::Informal, expr: None }
    }

    pub fn formal(raw: impl Into<String>, expr: ClauseExpr) -> Self {
        Self { raw: raw.into(), formality: Formality::Formal, expr: Some(expr) }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.raw)
    }
}

/// `@signals Type("message") [condition]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SignalClause {
    pub exception_type: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition: Option<Clause>,
}

/// A tag the parser did not recognise. Kept so nothing in a comment is
/// silently lost.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct UnknownTag {
    pub tag: String,
    pub payload: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
pub struct SubSpec {
    pub label: String,
    pub requires: Vec<Clause>,
    pub ensures: Vec<Clause>,
    pub signals: Vec<SignalClause>,
    pub assignable: Vec<String>,
}

impl SubSpec {
    pub fn new(label: impl Into<String>) -> Self {
        Self { label: label.into(), ..Self::default() }
    }
}

/// All tags of one doc comment.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
pub struct SpecBlock {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub desc: Option<Clause>,
    pub invariants: Vec<Clause>,
    pub requires: Vec<Clause>,
    pub ensures: Vec<Clause>,
    pub signals: Vec<SignalClause>,
    pub assignable: Vec<String>,
    pub pure: bool,
    pub represents: Vec<Clause>,
    pub subspecs: Vec<SubSpec>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub unknown: Vec<UnknownTag>,
}

impl SpecBlock {
    pub fn is_empty(&self) -> bool {
        *self == SpecBlock::default()
    }

    /// Flat (non-subspec) requires/ensures/signals present.
    pub fn has_flat_conditions(&self) -> bool {
        !self.requires.is_empty() || !self.ensures.is_empty() || !self.signals.is_empty()
    }

    pub fn subspec(&self, label: &str) -> Option<&SubSpec> {
        self.subspecs.iter().find(|s| s.label == label)
    }

    /// Copy without `@represents` clauses.
    pub fn without_represents(&self) -> SpecBlock {
        SpecBlock { represents: Vec::new(), ..self.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Member {
    pub kind: MemberKind,
    pub visibility: Visibility,
    /// Non-access modifiers such as `static` or `final`, in source order.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub modifiers: Vec<String>,
    pub signature: Signature,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub external_spec: Option<SpecBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub internal_spec: Option<SpecBlock>,
    /// Method body between the braces, or an attribute initializer.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub body: Option<String>,
}

impl Member {
    pub fn name(&self) -> &str {
        &self.signature.name
    }

    pub fn is_public(&self) -> bool {
        self.visibility == Visibility::Public
    }

    /// Constructors and methods.
    pub fn is_callable(&self) -> bool {
        self.kind != MemberKind::Attribute
    }

    pub fn specs(&self) -> impl Iterator<Item = &SpecBlock> {
        self.external_spec.iter().chain(self.internal_spec.iter())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ClassUnit {
    pub name: String,
    pub visibility: Visibility,
    pub type_params: Vec<String>,
    pub external_spec: SpecBlock,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub internal_spec: Option<SpecBlock>,
    pub members: Vec<Member>,
}

impl ClassUnit {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            visibility: Visibility::Public,
            type_params: Vec::new(),
            external_spec: SpecBlock::default(),
            internal_spec: None,
            members: Vec::new(),
        }
    }

    pub fn members_named<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a Member> + 'a {
        self.members.iter().filter(move |m| m.name() == name)
    }

    /// `@represents` clauses from the class-level internal block and from
    /// every attribute.
    pub fn represents(&self) -> Vec<&Clause> {
        let class_level = self.internal_spec.iter().flat_map(|s| s.represents.iter());
        let attribute_level = self
            .members
            .iter()
            .filter(|m| m.kind == MemberKind::Attribute)
            .flat_map(|m| m.specs())
            .flat_map(|s| s.represents.iter());
        class_level.chain(attribute_level).collect()
    }
}

/// The single-source artifact every view is projected from.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MasterDocument {
    pub source_name: String,
    pub classes: Vec<ClassUnit>,
    pub source_spans: BTreeMap<NodeId, Span>,
}

impl MasterDocument {
    pub fn new(source_name: impl Into<String>) -> Self {
        Self { source_name: source_name.into(), ..Self::default() }
    }

    pub fn class(&self, name: &str) -> Option<&ClassUnit> {
        self.classes.iter().find(|c| c.name == name)
    }

    pub fn span(&self, id: NodeId) -> Span {
        self.source_spans.get(&id).copied().unwrap_or_default()
    }

    /// Equal classes after normalization; source name and spans are ignored.
    pub fn structurally_eq(&self, other: &MasterDocument) -> bool {
        normalize(self).classes == normalize(other).classes
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ViewKind {
    External,
    Internal,
    Code,
}

impl ViewKind {
    pub const ALL: [ViewKind; 3] = [ViewKind::External, ViewKind::Internal, ViewKind::Code];

    pub fn as_str(self) -> &'static str {
        match self {
            ViewKind::External => "external",
            ViewKind::Internal => "internal",
            ViewKind::Code => "code",
        }
    }
}

impl fmt::Display for ViewKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ViewKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "external" => Ok(ViewKind::External),
            "internal" => Ok(ViewKind::Internal),
            "code" => Ok(ViewKind::Code),
            other => Err(format!("unknown view `{other}` (expected external, internal or code)")),
        }
    }
}

/// A projection of a master document for one stakeholder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViewDocument {
    pub kind: ViewKind,
    pub classes: Vec<ClassUnit>,
    /// `source_name` of the master document this view came from.
    pub provenance: String,
}

impl ViewDocument {
    pub fn class(&self, name: &str) -> Option<&ClassUnit> {
        self.classes.iter().find(|c| c.name == name)
    }

    /// Reinterpret the view as a document, e.g. to project it again.
    pub fn to_document(&self) -> MasterDocument {
        MasterDocument {
            source_name: self.provenance.clone(),
            classes: self.classes.clone(),
            source_spans: BTreeMap::new(),
        }
    }
}

/// Whether `member` appears in a projection of the given kind.
pub fn member_view_membership(member: &Member, kind: ViewKind) -> bool {
    match kind {
        ViewKind::External => member.visibility == Visibility::Public,
        ViewKind::Internal | ViewKind::Code => true,
    }
}
