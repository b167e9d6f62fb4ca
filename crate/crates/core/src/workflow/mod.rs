//! The activity/artifact graph and progress linting.
//!
//! Three relations connect nodes: `input_for` (an activity can start once
//! its inputs exist at least as drafts), `results_in` (an activity produces
//! an artifact) and `needs` (the dependent may only be called complete when
//! what it needs is complete). Nothing is ever blocked: the report only
//! lists what can start and which completion claims are premature.

use std::collections::{BTreeMap, HashMap, HashSet};

use petgraph::algo::is_cyclic_directed;
use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Activity,
    Artifact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Column {
    External,
    Internal,
    Code,
    Tests,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Row {
    Analysis,
    Design,
    Specification,
    Test,
    View,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    InputFor,
    Needs,
    ResultsIn,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub id: String,
    pub kind: NodeKind,
    pub column: Column,
    pub row: Row,
}

/// `from` is input for / needs / results in `to`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub from: String,
    pub to: String,
    pub relation: Relation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActivityGraph {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
}

fn schema_version() -> u32 {
    SCHEMA_VERSION
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WorkflowError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("invalid graph: {}", .0.join("; "))]
    InvalidGraph(Vec<String>),
}

const DEFAULT_GRAPH: &str = include_str!("../../data/default_graph.json");

/// The shipped graph: Analysis, Design, Specification and Tests activities
/// for the External, Internal and Code columns.
pub fn default_graph() -> ActivityGraph {
    ActivityGraph::from_json(DEFAULT_GRAPH).expect("shipped graph is valid")
}

impl ActivityGraph {
    /// Parse and validate.
    pub fn from_json(text: &str) -> Result<Self, WorkflowError> {
        let graph: ActivityGraph = serde_json::from_str(text).map_err(|e| WorkflowError::Json(e.to_string()))?;
        graph.validate()?;
        Ok(graph)
    }

    pub fn node(&self, id: &str) -> Option<&Node> {
        self.nodes.iter().find(|n| n.id == id)
    }

    pub fn edges(&self, relation: Relation) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.relation == relation)
    }

    /// Unique ids, known endpoints, `results_in` from activity to artifact,
    /// and no cycle through `input_for` and `results_in`.
    pub fn validate(&self) -> Result<(), WorkflowError> {
        let mut problems = Vec::new();
        let mut index = HashMap::new();
        let mut g = DiGraph::<(), ()>::new();
        for node in &self.nodes {
            if index.insert(node.id.as_str(), g.add_node(())).is_some() {
                problems.push(format!("node `{}` is declared twice", node.id));
            }
        }
        for edge in &self.edges {
            let (Some(from), Some(to)) = (self.node(&edge.from), self.node(&edge.to)) else {
                problems.push(format!("edge {} -> {} names an unknown node", edge.from, edge.to));
                continue;
            };
            if edge.relation == Relation::ResultsIn && (from.kind, to.kind) != (NodeKind::Activity, NodeKind::Artifact) {
                problems.push(format!("results_in edge {} -> {} must go from an activity to an artifact", edge.from, edge.to));
            }
            if edge.relation != Relation::Needs {
                g.add_edge(index[from.id.as_str()], index[to.id.as_str()], ());
            }
        }
        if is_cyclic_directed(&g) {
            problems.push("input_for and results_in edges form a cycle".into());
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(WorkflowError::InvalidGraph(problems))
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    #[default]
    Absent,
    Draft,
    Complete,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Absent => "absent",
            Status::Draft => "draft",
            Status::Complete => "complete",
        })
    }
}

/// A progress snapshot. Nodes without an entry are absent. Activities only
/// need an entry when they produce no artifact (the analyses).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectState {
    #[serde(default)]
    pub statuses: BTreeMap<String, Status>,
    /// Present once the robustness pass over the same graph has begun.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub robustness: Option<Box<ProjectState>>,
}

impl ProjectState {
    /// Parse, rejecting node ids the graph does not know.
    pub fn from_json(text: &str, graph: &ActivityGraph) -> Result<Self, WorkflowError> {
        let state: ProjectState = serde_json::from_str(text).map_err(|e| WorkflowError::Json(e.to_string()))?;
        let mut pass = Some(&state);
        while let Some(p) = pass {
            if let Some(id) = p.statuses.keys().find(|id| graph.node(id).is_none()) {
                return Err(WorkflowError::UnknownNode(id.clone()));
            }
            pass = p.robustness.as_deref();
        }
        Ok(state)
    }

    pub fn status(&self, id: &str) -> Status {
        self.statuses.get(id).copied().unwrap_or_default()
    }
}

/// A dependent claimed complete while something it needs is not.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub dependent: String,
    pub needed: String,
    pub needed_status: Status,
}

struct Eval<'g> {
    graph: &'g ActivityGraph,
    state: &'g ProjectState,
}

impl Eval<'_> {
    /// An activity's status follows its artifacts when it has any.
    fn status(&self, id: &str) -> Status {
        let produced: Vec<Status> = self
            .graph
            .edges(Relation::ResultsIn)
            .filter(|e| e.from == id)
            .map(|e| self.state.status(&e.to))
            .collect();
        if produced.is_empty() {
            self.state.status(id)
        } else {
            produced.into_iter().min().unwrap()
        }
    }

    fn violations<'e>(&self, edges: impl Iterator<Item = &'e Edge>) -> Vec<Violation> {
        edges
            .filter(|e| e.relation == Relation::Needs)
            .filter(|e| self.status(&e.from) == Status::Complete && self.status(&e.to) != Status::Complete)
            .map(|e| Violation { dependent: e.from.clone(), needed: e.to.clone(), needed_status: self.status(&e.to) })
            .collect()
    }

    fn pass(&self) -> PassReport {
        let startable = self
            .graph
            .nodes
            .iter()
            .filter(|n| n.kind == NodeKind::Activity && self.status(&n.id) != Status::Complete)
            .filter(|n| {
                self.graph
                    .edges(Relation::InputFor)
                    .filter(|e| e.to == n.id)
                    .all(|e| self.status(&e.from) >= Status::Draft)
            })
            .map(|n| n.id.clone())
            .collect();
        let in_progress = self
            .graph
            .nodes
            .iter()
            .filter(|n| n.kind == NodeKind::Artifact && self.state.status(&n.id) == Status::Draft)
            .map(|n| n.id.clone())
            .collect();
        PassReport { startable, in_progress, violations: self.violations(self.graph.edges.iter()) }
    }
}

/// Completion-rule violations that involve `artifact`, either as the thing
/// needed or through the activity that produces it.
pub fn completion_check(
    graph: &ActivityGraph,
    state: &ProjectState,
    artifact: &str,
) -> Result<Vec<Violation>, WorkflowError> {
    if graph.node(artifact).is_none() {
        return Err(WorkflowError::UnknownNode(artifact.to_string()));
    }
    let producers: HashSet<&str> = graph
        .edges(Relation::ResultsIn)
        .filter(|e| e.to == artifact)
        .map(|e| e.from.as_str())
        .collect();
    let eval = Eval { graph, state };
    Ok(eval.violations(
        graph.edges.iter().filter(|e| e.to == artifact || e.from == artifact || producers.contains(e.from.as_str())),
    ))
}

/// Every completion-rule violation in the snapshot.
pub fn all_violations(graph: &ActivityGraph, state: &ProjectState) -> Vec<Violation> {
    Eval { graph, state }.violations(graph.edges.iter())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PassReport {
    /// Activities not yet complete whose inputs all exist at least as drafts.
    pub startable: Vec<String>,
    /// Artifacts in draft.
    pub in_progress: Vec<String>,
    pub violations: Vec<Violation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WorkflowReport {
    pub schema_version: u32,
    #[serde(flatten)]
    pub main: PassReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub robustness: Option<PassReport>,
}

impl WorkflowReport {
    pub fn violation_count(&self) -> usize {
        self.main.violations.len() + self.robustness.as_ref().map_or(0, |r| r.violations.len())
    }
}

pub fn status(graph: &ActivityGraph, state: &ProjectState) -> WorkflowReport {
    WorkflowReport {
        schema_version: SCHEMA_VERSION,
        main: Eval { graph, state }.pass(),
        robustness: state.robustness.as_deref().map(|r| Eval { graph, state: r }.pass()),
    }
}
