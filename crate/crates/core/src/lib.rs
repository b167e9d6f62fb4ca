//! Tooling for GOOD-annotated Java sources: parse a single master file,
//! project it onto External, Internal and Code views, check specification
//! structure and emit refinement obligations, derive test cases from
//! subspecifications and partition models, and lint project progress
//! against the activity graph.

pub mod checker;
pub mod cli;
pub mod diagnostics;
pub mod model;
pub mod parser;
pub mod projector;
pub mod testgen;
pub mod workflow;

pub use diagnostics::{Code, Diagnostic, Severity, Subject};
