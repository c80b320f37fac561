//! Document conversion shared by the `convert` command and `POST /convert`,
//! so both produce the same bytes for the same input and registry.

use sesforge_core::normalize::NormalizeError;
use sesforge_core::rdf::Iri;
use sesforge_core::sescore::ValidationReport;
use sesforge_core::store::{PreparedCase, Registry, StoreError};
use sesforge_core::syntax::{read_document, serialize_turtle, Format, PhraseTable, SyntaxError};
use thiserror::Error;

/// Separates the Turtle document from the commented report.
pub const REPORT_DELIMITER: &str = "#--- report ---";

#[derive(Debug, Error)]
pub enum ConvertError {
    #[error("{0}")]
    Parse(#[from] SyntaxError),
    #[error("{0}")]
    Normalize(#[from] NormalizeError),
    #[error("{0}")]
    Store(StoreError),
}

impl From<StoreError> for ConvertError {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::Normalize(n) => ConvertError::Normalize(n),
            other => ConvertError::Store(other),
        }
    }
}

/// A normalized document rendered for output.
#[derive(Debug)]
pub struct Conversion {
    pub prepared: PreparedCase,
    pub validation: ValidationReport,
    /// Canonical Turtle, the delimiter line, then the report with every line
    /// commented out.
    pub output: String,
}

impl Conversion {
    pub fn has_errors(&self) -> bool {
        self.validation.has_errors()
    }
}

/// Parses, normalizes against `reg` and validates the result as if it were
/// added, without changing `reg`.
pub fn convert_document(
    reg: &Registry,
    text: &str,
    format: Format,
    phrases: &PhraseTable,
    case_id: &str,
    links: &[(Iri, Iri)],
) -> Result<Conversion, ConvertError> {
    let parsed = read_document(text, format, phrases, reg.vocab())?;
    let mut prepared = reg.prepare_case(case_id, &parsed.value, links)?;
    let mut warnings: Vec<String> = parsed.warnings.iter().map(|w| w.to_string()).collect();
    warnings.append(&mut prepared.report.warnings);
    prepared.report.warnings = warnings;

    let validation = reg.validate_prepared(&prepared);
    let pm = reg.prefixes();
    let mut output = serialize_turtle(&prepared.graph, &pm);
    output.push_str(REPORT_DELIMITER);
    output.push('\n');
    output.push_str(&prepared.report.render(&pm));
    for line in validation.to_string().lines() {
        output.push_str("# ");
        output.push_str(line);
        output.push('\n');
    }
    Ok(Conversion {
        prepared,
        validation,
        output,
    })
}
