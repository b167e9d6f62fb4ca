//! The `good` command line.
//!
//! Exit codes: 0 clean, 1 findings (error diagnostics, test-model errors,
//! workflow violations), 2 parse or usage errors, 3 I/O errors. When
//! several apply the highest wins.

use std::ffi::OsString;
use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::checker::{check, refinement_obligations, Obligation, Status};
use crate::diagnostics::{has_errors, Diagnostic, Severity};
use crate::model::{MasterDocument, ViewKind};
use crate::parser::parse_master;
use crate::projector::{project, render_class, view_file_name};
use crate::testgen::{derive_suite, emit_manifest, emit_skeletons, parse_test_model, SkeletonStyle};
use crate::workflow::{default_graph, status, ActivityGraph, ProjectState};

pub const REPORT_SCHEMA_VERSION: u32 = 1;
pub const CONFIG_FILE: &str = "good.toml";

#[derive(Debug, Parser)]
#[command(name = "good", version, about = "Views, checks and test skeletons for GOOD-annotated Java")]
struct Cli {
    /// Config file with defaults for `view`, `out` and `format`.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write External, Internal and/or Code views of master files.
    Project {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        /// One view; all three when omitted.
        #[arg(long, value_enum)]
        view: Option<ViewArg>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report diagnostics and refinement obligations.
    Check {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Derive test cases from a partition model.
    GenTests {
        path: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_enum)]
        view: Option<ViewArg>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lint a progress snapshot against the activity graph.
    Workflow {
        #[command(subcommand)]
        action: WorkflowAction,
    },
}

#[derive(Debug, Subcommand)]
enum WorkflowAction {
    Status {
        /// Progress snapshot; an empty project when omitted.
        state: Option<PathBuf>,
        /// Graph file replacing the shipped one.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum ViewArg {
    External,
    Internal,
    Code,
}

impl From<ViewArg> for ViewKind {
    fn from(v: ViewArg) -> Self {
        match v {
            ViewArg::External => ViewKind::External,
            ViewArg::Internal => ViewKind::Internal,
            ViewArg::Code => ViewKind::Code,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    #[default]
    Human,
    Machine,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Config {
    view: Option<ViewArg>,
    out: Option<PathBuf>,
    format: Option<Format>,
}

/// Worst outcome seen so far, as an exit code.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Exit(i32);

impl Exit {
    const FINDINGS: Exit = Exit(1);
    const PARSE: Exit = Exit(2);
    const IO: Exit = Exit(3);

    fn raise(&mut self, other: Exit) {
        *self = (*self).max(other);
    }
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    color: bool,
}

impl Io<'_> {
    fn log(&mut self, msg: impl std::fmt::Display) {
        let _ = writeln!(self.err, "good: {msg}");
    }

    fn diagnostic(&mut self, path: &Path, d: &Diagnostic, to_stdout: bool) {
        let code = if self.color {
            let tint = if d.severity == Severity::Error { "31" } else { "33" };
            format!("\x1b[{tint}m{}\x1b[0m", d.code)
        } else {
            d.code.to_string()
        };
        let mut line = format!("{}:{} {code} {}", path.display(), d.span, d.message);
        if let Some(subject) = &d.subject {
            line.push_str(&format!(" [{subject}]"));
        }
        let sink: &mut dyn Write = if to_stdout { &mut *self.out } else { &mut *self.err };
        let _ = writeln!(sink, "{line}");
    }
}

fn load_config(explicit: Option<&Path>) -> Result<Config, (Exit, String)> {
    let path = match explicit {
        Some(p) => p.to_path_buf(),
        None if Path::new(CONFIG_FILE).is_file() => PathBuf::from(CONFIG_FILE),
        None => return Ok(Config::default()),
    };
    let text = std::fs::read_to_string(&path).map_err(|e| (Exit::IO, format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| (Exit::PARSE, format!("{}: {e}", path.display())))
}

struct Parsed {
    path: PathBuf,
    result: Result<(MasterDocument, Vec<Diagnostic>), String>,
}

/// Read and parse files concurrently; results keep input order.
fn parse_all(paths: &[PathBuf]) -> Vec<Parsed> {
    paths
        .par_iter()
        .map(|path| Parsed {
            path: path.clone(),
            result: std::fs::read_to_string(path)
                .map(|text| parse_master(&text, &path.display().to_string()))
                .map_err(|e| e.to_string()),
        })
        .collect()
}

/// Run the command line; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                Exit::PARSE.0
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    let color = std::env::var_os("GOOD_NO_COLOR").is_none() && std::io::stdout().is_terminal();
    let mut io = Io { out, err, color };
    let config = match load_config(cli.config.as_deref()) {
        Ok(c) => c,
        Err((code, msg)) => {
            io.log(msg);
            return code.0;
        }
    };
    let exit = match cli.command {
        Command::Project { paths, view, out } => {
            let views = match view.or(config.view) {
                Some(v) => vec![v.into()],
                None => ViewKind::ALL.to_vec(),
            };
            cmd_project(&mut io, &paths, &views, &out.or(config.out).unwrap_or_else(|| PathBuf::from(".")))
        }
        Command::Check { paths, format } => cmd_check(&mut io, &paths, format.or(config.format).unwrap_or_default()),
        Command::GenTests { path, model, view, out } => {
            let view = view.or(config.view).map_or(ViewKind::External, ViewKind::from);
            cmd_gen_tests(&mut io, &path, &model, view, &out.or(config.out).unwrap_or_else(|| PathBuf::from(".")))
        }
        Command::Workflow { action: WorkflowAction::Status { state, graph, format } } => cmd_workflow(
            &mut io,
            state.as_deref(),
            graph.as_deref(),
            format.or(config.format).unwrap_or_default(),
        ),
    };
    exit.0
}

fn write_file(io: &mut Io, path: &Path, text: &str) -> Exit {
    let result = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .map_or(Ok(()), std::fs::create_dir_all)
        .and_then(|()| std::fs::write(path, text));
    match result {
        Ok(()) => {
            let _ = writeln!(io.out, "{}", path.display());
            Exit::default()
        }
        Err(e) => {
            io.log(format!("{}: {e}", path.display()));
            Exit::IO
        }
    }
}

fn cmd_project(io: &mut Io, paths: &[PathBuf], views: &[ViewKind], out: &Path) -> Exit {
    let mut exit = Exit::default();
    for parsed in parse_all(paths) {
        let (doc, diags) = match parsed.result {
            Ok(ok) => ok,
            Err(e) => {
                io.log(format!("{}: {e}", parsed.path.display()));
                exit.raise(Exit::IO);
                continue;
            }
        };
        for d in &diags {
            io.diagnostic(&parsed.path, d, false);
        }
        if has_errors(&diags) {
            exit.raise(Exit::PARSE);
        }
        for &kind in views {
            for class in project(&doc, kind).classes {
                exit.raise(write_file(io, &out.join(view_file_name(&class.name, kind)), &render_class(&class)));
            }
        }
    }
    exit
}

#[derive(Serialize)]
struct FileReport<'a> {
    path: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    io_error: Option<&'a str>,
    diagnostics: &'a [Diagnostic],
    obligations: &'a [Obligation],
}

#[derive(Serialize, Default)]
struct Summary {
    errors: usize,
    warnings: usize,
    obligations: usize,
    manual: usize,
}

#[derive(Serialize)]
struct CheckReport<'a> {
    schema_version: u32,
    files: Vec<FileReport<'a>>,
    summary: Summary,
}

/// Diagnostics and obligations of one file, or why it could not be read.
type FileResult = Result<(Vec<Diagnostic>, Vec<Obligation>), String>;

fn cmd_check(io: &mut Io, paths: &[PathBuf], format: Format) -> Exit {
    let mut exit = Exit::default();
    let results: Vec<(PathBuf, FileResult)> = parse_all(paths)
        .into_par_iter()
        .map(|parsed| {
            let result = parsed.result.map(|(doc, mut diags)| {
                diags.extend(check(&doc));
                let obligations = doc.classes.iter().flat_map(refinement_obligations).collect();
                (diags, obligations)
            });
            (parsed.path, result)
        })
        .collect();

    let mut summary = Summary::default();
    for (_, result) in &results {
        match result {
            Ok((diags, obligations)) => {
                if diags.iter().any(|d| d.is_error() && d.code.as_str().starts_with('P')) {
                    exit.raise(Exit::PARSE);
                }
                if diags.iter().any(|d| d.is_error()) {
                    exit.raise(Exit::FINDINGS);
                }
                summary.errors += diags.iter().filter(|d| d.is_error()).count();
                summary.warnings += diags.iter().filter(|d| !d.is_error()).count();
                summary.obligations += obligations.len();
                summary.manual += obligations.iter().filter(|o| o.status == Status::Manual).count();
            }
            Err(_) => exit.raise(Exit::IO),
        }
    }

    match format {
        Format::Machine => {
            let files = results
                .iter()
                .map(|(path, result)| match result {
                    Ok((d, o)) => FileReport { path: path.display().to_string(), io_error: None, diagnostics: d, obligations: o },
                    Err(e) => FileReport { path: path.display().to_string(), io_error: Some(e), diagnostics: &[], obligations: &[] },
                })
                .collect();
            let report = CheckReport { schema_version: REPORT_SCHEMA_VERSION, files, summary };
            let _ = writeln!(io.out, "{}", serde_json::to_string_pretty(&report).expect("report is plain data"));
        }
        Format::Human => {
            for (path, result) in &results {
                match result {
                    Ok((diags, obligations)) => {
                        for d in diags {
                            io.diagnostic(path, d, true);
                        }
                        for o in obligations {
                            human_obligation(io, path, o);
                        }
                    }
                    Err(e) => io.log(format!("{}: {e}", path.display())),
                }
            }
            let _ = writeln!(
                io.out,
                "{} error(s), {} warning(s), {} obligation(s) ({} manual)",
                summary.errors, summary.warnings, summary.obligations, summary.manual
            );
        }
    }
    exit
}

fn human_obligation(io: &mut Io, path: &Path, o: &Obligation) {
    let status = match o.status {
        Status::TriviallyDischarged => "trivially discharged",
        Status::Manual => "manual",
    };
    let case = o.case_label.as_ref().map(|l| format!(" (\"{l}\")")).unwrap_or_default();
    let _ = writeln!(io.out, "{}: {} {}{case}: {status}", path.display(), o.rule.as_str(), o.subject);
    if o.status == Status::Manual {
        for a in &o.antecedents {
            let _ = writeln!(io.out, "    assume {}", a.raw);
        }
        for c in &o.consequent {
            let _ = writeln!(io.out, "    show   {}", c.raw);
        }
    }
}

fn cmd_gen_tests(io: &mut Io, path: &Path, model_path: &Path, view: ViewKind, out: &Path) -> Exit {
    let mut exit = Exit::default();
    let model_text = match std::fs::read_to_string(model_path) {
        Ok(t) => t,
        Err(e) => {
            io.log(format!("{}: {e}", model_path.display()));
            return Exit::IO;
        }
    };
    let Some(parsed) = parse_all(&[path.to_path_buf()]).pop() else { return Exit::IO };
    let (doc, diags) = match parsed.result {
        Ok(ok) => ok,
        Err(e) => {
            io.log(format!("{}: {e}", path.display()));
            return Exit::IO;
        }
    };
    for d in &diags {
        io.diagnostic(path, d, false);
    }
    if has_errors(&diags) {
        exit.raise(Exit::PARSE);
    }
    let view_doc = project(&doc, view);
    let (model, mut model_diags) = parse_test_model(&model_text);
    let (suite, more) = derive_suite(&model, &view_doc);
    model_diags.extend(more);
    for d in &model_diags {
        io.diagnostic(model_path, d, false);
    }
    if has_errors(&model_diags) {
        exit.raise(Exit::FINDINGS);
    }
    let name = suite.suite_name();
    exit.raise(write_file(io, &out.join(format!("{name}.java")), &emit_skeletons(&suite, SkeletonStyle::JUnit)));
    exit.raise(write_file(io, &out.join(format!("{name}.json")), &emit_manifest(&suite)));
    exit
}

fn cmd_workflow(io: &mut Io, state: Option<&Path>, graph: Option<&Path>, format: Format) -> Exit {
    let read = |io: &mut Io, p: &Path| {
        std::fs::read_to_string(p).map_err(|e| {
            io.log(format!("{}: {e}", p.display()));
            Exit::IO
        })
    };
    let graph = match graph {
        None => default_graph(),
        Some(p) => match read(io, p).map(|t| ActivityGraph::from_json(&t)) {
            Ok(Ok(g)) => g,
            Ok(Err(e)) => {
                io.log(format!("{}: {e}", p.display()));
                return Exit::PARSE;
            }
            Err(code) => return code,
        },
    };
    let state = match state {
        None => ProjectState::default(),
        Some(p) => match read(io, p).map(|t| ProjectState::from_json(&t, &graph)) {
            Ok(Ok(s)) => s,
            Ok(Err(e)) => {
                io.log(format!("{}: {e}", p.display()));
                return Exit::PARSE;
            }
            Err(code) => return code,
        },
    };
    let report = status(&graph, &state);
    match format {
        Format::Machine => {
            let _ = writeln!(io.out, "{}", serde_json::to_string_pretty(&report).expect("report is plain data"));
        }
        Format::Human => {
            let passes = std::iter::once(("", &report.main)).chain(report.robustness.as_ref().map(|r| ("robustness: ", r)));
            for (prefix, pass) in passes {
                for a in &pass.startable {
                    let _ = writeln!(io.out, "{prefix}startable: {a}");
                }
                for a in &pass.in_progress {
                    let _ = writeln!(io.out, "{prefix}in progress: {a}");
                }
                for v in &pass.violations {
                    let _ = writeln!(
                        io.out,
                        "{prefix}violation: {} is complete but needs {} ({})",
                        v.dependent, v.needed, v.needed_status
                    );
                }
            }
        }
    }
    if report.violation_count() > 0 {
        Exit::FINDINGS
    } else {
        Exit::default()
    }
}
