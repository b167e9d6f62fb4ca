//! Stable diagnostic codes and the shared diagnostic record.
//!
//! `P` codes come from the parser, `E`/`W` from the checker and `T` from
//! the test-model loader. The catalog is mirrored in `docs/diagnostics.md`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::model::Span;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

macro_rules! codes {
    ($($variant:ident => ($id:literal, $sev:ident, $summary:literal),)*) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum Code {
            $($variant,)*
        }

        impl Code {
            pub const ALL: &'static [Code] = &[$(Code::$variant,)*];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(Code::$variant => $id,)*
                }
            }

            pub fn severity(self) -> Severity {
                match self {
                    $(Code::$variant => Severity::$sev,)*
                }
            }

            pub fn summary(self) -> &'static str {
                match self {
                    $(Code::$variant => $summary,)*
                }
            }
        }
    };
}

codes! {
    P001 => ("P001", Error, "unterminated comment"),
    P002 => ("P002", Error, "malformed declaration"),
    P003 => ("P003", Error, "@sub block with unbalanced braces"),
    P004 => ("P004", Warning, "unknown tag"),
    P005 => ("P005", Warning, "condition tag in an attribute specification"),
    P006 => ("P006", Warning, "doc comment not attached to a declaration"),
    P007 => ("P007", Warning, "class body not closed before end of file"),
    P008 => ("P008", Warning, "misplaced or repeated tag"),
    P009 => ("P009", Warning, "unsupported modifier"),
    P010 => ("P010", Error, "duplicate class name"),
    P011 => ("P011", Error, "duplicate member signature"),
    P012 => ("P012", Warning, "malformed tag payload"),
    E001 => ("E001", Error, "public member without external @desc"),
    E002 => ("E002", Error, "@pure together with @assignable"),
    E003 => ("E003", Error, "@represents in an external specification"),
    E004 => ("E004", Error, "@signals in a subspecification without @requires"),
    E005 => ("E005", Error, "flat conditions mixed with @sub blocks"),
    E006 => ("E006", Error, "duplicate subspecification label"),
    W001 => ("W001", Warning, "non-public member without @desc"),
    W002 => ("W002", Warning, "public method without internal specification"),
    W003 => ("W003", Warning, "subspecification preconditions not shown disjoint"),
    W004 => ("W004", Warning, "subspecification label without counterpart"),
    W005 => ("W005", Warning, "\\old outside a postcondition"),
    W006 => ("W006", Warning, "subspecification without @requires"),
    T001 => ("T001", Error, "unknown test subject"),
    T002 => ("T002", Error, "parameter without partitions"),
    T003 => ("T003", Error, "partition maps to unknown subspecification"),
    T004 => ("T004", Error, "malformed test-model line"),
    T005 => ("T005", Error, "unknown parameter or fixture"),
    T006 => ("T006", Error, "duplicate partition label"),
    T007 => ("T007", Error, "conflicting subspecification mappings in one case"),
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Code {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

/// The class (and optionally member) a diagnostic is about.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Subject {
    pub class: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub member: Option<String>,
}

impl Subject {
    pub fn class(class: &str) -> Self {
        Self { class: class.to_string(), member: None }
    }

    pub fn member(class: &str, member: &str) -> Self {
        Self { class: class.to_string(), member: Some(member.to_string()) }
    }
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.member {
            Some(m) => write!(f, "{}.{}", self.class, m),
            None => f.write_str(&self.class),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Diagnostic {
    pub code: Code,
    pub severity: Severity,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subject: Option<Subject>,
    pub message: String,
    pub span: Span,
}

impl Diagnostic {
    pub fn new(code: Code, span: Span, message: impl Into<String>) -> Self {
        Self { code, severity: code.severity(), subject: None, message: message.into(), span }
    }

    pub fn with_subject(mut self, subject: Subject) -> Self {
        self.subject = Some(subject);
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.code, self.message)?;
        if let Some(subject) = &self.subject {
            write!(f, " [{subject}]")?;
        }
        Ok(())
    }
}

pub fn has_errors(diagnostics: &[Diagnostic]) -> bool {
    diagnostics.iter().any(Diagnostic::is_error)
}
