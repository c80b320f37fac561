//! Knowledge-graph toolkit for social-ecological-system (SES) cases and
//! frameworks.
//!
//! The crate covers the whole ingest path: an indexed in-memory RDF graph
//! ([`rdf`]), readers and writers for Turtle, concept-map OWL exports and CXL
//! ([`syntax`]), the SES-core vocabulary with its seed frameworks and
//! conformance rules ([`sescore`]), the concept-map normalization pipeline
//! ([`normalize`]), and a persistent case registry with query and search
//! ([`store`]).

pub mod normalize;
pub mod rdf;
pub mod sescore;
pub mod store;
pub mod syntax;
mod vocab;

pub use vocab::Vocab;

/// Default namespace for SES-core classes and properties.
pub const DEFAULT_SESCORE_BASE: &str = "http://sescore.example/ontology#";

/// The namespaces the toolkit mints IRIs in.
///
/// Only the SES-core namespace is configured directly; the others hang off
/// its authority (`<root>global/`, `<root>ses/`, `<root>skolem/`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Namespaces {
    /// SES-core T-Box classes and properties.
    pub sescore: String,
    /// Minted global concepts.
    pub global: String,
    /// Local concepts, studies and concept graphs of frameworks and cases.
    pub local: String,
    /// Skolemized blank nodes.
    pub skolem: String,
}

impl Namespaces {
    pub fn from_base(base: &str) -> Self {
        let trimmed = base.trim_end_matches(['#', '/']);
        let root = match trimmed.rfind('/') {
            Some(i) if i > trimmed.find("//").map_or(0, |j| j + 1) => &trimmed[..=i],
            _ => trimmed,
        };
        let root = if root.ends_with('/') {
            root.to_string()
        } else {
            format!("{root}/")
        };
        Namespaces {
            sescore: base.to_string(),
            global: format!("{root}global/"),
            local: format!("{root}concept/"),
            skolem: format!("{root}skolem/"),
        }
    }
}

impl Default for Namespaces {
    fn default() -> Self {
        Self::from_base(DEFAULT_SESCORE_BASE)
    }
}
