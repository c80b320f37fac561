//! Concrete syntaxes: Turtle (canonical storage), the RDF/XML subset written
//! by concept-map ontology editors ("naive OWL"), and CXL concept maps.

mod cxl;
mod owl;
mod phrases;
mod turtle;

use std::fmt;

use thiserror::Error;

use crate::rdf::TermError;

pub use cxl::{conceptmap_to_graph, parse_cxl, slugify, ConceptMap, Connection, MapNode};
pub use owl::{parse_coe_owl, parse_coe_owl_with_base};
pub use phrases::PhraseTable;
pub use turtle::{parse_turtle, serialize_turtle};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Warning => "warning",
            Severity::Error => "error",
        })
    }
}

/// A located message from one of the readers. Lines are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseDiagnostic {
    pub severity: Severity,
    pub line: usize,
    pub message: String,
}

impl ParseDiagnostic {
    pub fn error(line: usize, message: impl Into<String>) -> Self {
        ParseDiagnostic {
            severity: Severity::Error,
            line: line.max(1),
            message: message.into(),
        }
    }

    pub fn warning(line: usize, message: impl Into<String>) -> Self {
        ParseDiagnostic {
            severity: Severity::Warning,
            line: line.max(1),
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}: {}", self.line, self.severity, self.message)
    }
}

/// A parse result together with the non-fatal diagnostics raised on the way.
#[derive(Clone, Debug)]
pub struct Parsed<T> {
    pub value: T,
    pub warnings: Vec<ParseDiagnostic>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown prefix `{prefix}`")]
    UnknownPrefix { line: usize, prefix: String },
    #[error("line {line}: unsupported construct: {construct}")]
    Unsupported { line: usize, construct: String },
    #[error("line {line}: {source}")]
    Term { line: usize, source: TermError },
    #[error("slug collision: labels {first:?} and {second:?} both map to `{slug}`")]
    SlugCollision {
        slug: String,
        first: String,
        second: String,
    },
}

impl SyntaxError {
    /// Source line of the failure, when there is one.
    pub fn line(&self) -> Option<usize> {
        match self {
            SyntaxError::Syntax { line, .. }
            | SyntaxError::UnknownPrefix { line, .. }
            | SyntaxError::Unsupported { line, .. }
            | SyntaxError::Term { line, .. } => Some(*line),
            SyntaxError::SlugCollision { .. } => None,
        }
    }

    pub fn to_diagnostic(&self) -> ParseDiagnostic {
        ParseDiagnostic::error(self.line().unwrap_or(1), self.to_string())
    }

    pub(crate) fn syntax(line: usize, message: impl Into<String>) -> Self {
        SyntaxError::Syntax {
            line,
            message: message.into(),
        }
    }
}

/// Input document formats. Chosen explicitly, never sniffed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Owl,
    Cxl,
    Turtle,
}

impl Format {
    /// `owl`/`rdf`/`xml`, `cxl`, `ttl`/`turtle`, case-insensitive.
    pub fn from_name(name: &str) -> Option<Format> {
        match name.trim().to_ascii_lowercase().as_str() {
            "owl" | "rdf" | "xml" => Some(Format::Owl),
            "cxl" => Some(Format::Cxl),
            "ttl" | "turtle" => Some(Format::Turtle),
            _ => None,
        }
    }

    /// Format named by a file extension.
    pub fn from_path(path: &std::path::Path) -> Option<Format> {
        path.extension().and_then(|e| e.to_str()).and_then(Format::from_name)
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Owl => "owl",
            Format::Cxl => "cxl",
            Format::Turtle => "ttl",
        })
    }
}

/// Reads a document into a raw graph. Relative OWL references and CXL
/// concepts land in the local-concept namespace.
pub fn read_document(
    text: &str,
    format: Format,
    phrases: &PhraseTable,
    vocab: &crate::Vocab,
) -> Result<Parsed<crate::rdf::Graph>, SyntaxError> {
    match format {
        Format::Owl => Ok(Parsed {
            value: parse_coe_owl_with_base(text, &vocab.ns.local)?,
            warnings: Vec::new(),
        }),
        Format::Turtle => Ok(Parsed {
            value: parse_turtle(text, &crate::rdf::PrefixMap::with_builtins(&vocab.ns))?,
            warnings: Vec::new(),
        }),
        Format::Cxl => {
            let cm = parse_cxl(text)?;
            let mut g = conceptmap_to_graph(&cm.value, phrases, vocab, &vocab.ns.local)?;
            let mut warnings = cm.warnings;
            warnings.append(&mut g.warnings);
            Ok(Parsed {
                value: g.value,
                warnings,
            })
        }
    }
}
