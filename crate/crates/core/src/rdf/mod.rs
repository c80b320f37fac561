//! RDF data model: terms, triples, an indexed graph and prefix handling.

mod graph;
mod prefix;
mod term;

use thiserror::Error;

pub use graph::{Graph, IndexKind};
pub use prefix::{is_local_name, is_prefix_name, PrefixMap, OWL, RDF, RDFS, SKOS, XSD};
pub use term::{escape_string, Iri, Literal, Term, Triple, Variable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("invalid IRI `{0}`: {1}")]
    InvalidIri(String, &'static str),
    #[error("invalid language tag `{0}`")]
    InvalidLanguageTag(String),
    #[error("invalid variable name `{0}`")]
    InvalidVariable(String),
    #[error("variable {0} cannot appear in a stored triple")]
    VariableInTriple(String),
    #[error("`{0}` is not a curie")]
    NotACurie(String),
    #[error("unknown prefix `{0}`")]
    UnknownPrefix(String),
}
