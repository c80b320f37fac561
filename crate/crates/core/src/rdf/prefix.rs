use std::collections::BTreeMap;

use super::term::Iri;
use super::TermError;
use crate::Namespaces;

pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const OWL: &str = "http://www.w3.org/2002/07/owl#";
pub const SKOS: &str = "http://www.w3.org/2004/02/skos/core#";
pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";

/// Prefix to namespace bindings used for curie expansion and compaction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixMap {
    mappings: BTreeMap<String, String>,
}

impl PrefixMap {
    pub fn empty() -> Self {
        PrefixMap {
            mappings: BTreeMap::new(),
        }
    }

    /// The built-in bindings: `rdf`, `rdfs`, `owl`, `skos`, `xsd`, and the
    /// configured `sescore`, `global` and `ses` (local concept) namespaces.
    pub fn with_builtins(ns: &Namespaces) -> Self {
        let mut pm = Self::empty();
        for (prefix, iri) in [
            ("rdf", RDF),
            ("rdfs", RDFS),
            ("owl", OWL),
            ("skos", SKOS),
            ("xsd", XSD),
            ("sescore", ns.sescore.as_str()),
            ("global", ns.global.as_str()),
            ("ses", ns.local.as_str()),
        ] {
            pm.mappings.insert(prefix.to_string(), iri.to_string());
        }
        pm
    }

    /// Binds `prefix`, replacing any previous binding of the same prefix.
    pub fn insert(&mut self, prefix: impl Into<String>, namespace: impl Into<String>) {
        self.mappings.insert(prefix.into(), namespace.into());
    }

    pub fn get(&self, prefix: &str) -> Option<&str> {
        self.mappings.get(prefix).map(String::as_str)
    }

    /// Bindings sorted by prefix.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.mappings.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn expand(&self, curie: &str) -> Result<Iri, TermError> {
        let (prefix, local) = curie
            .split_once(':')
            .ok_or_else(|| TermError::NotACurie(curie.to_string()))?;
        let ns = self
            .get(prefix)
            .ok_or_else(|| TermError::UnknownPrefix(prefix.to_string()))?;
        Iri::new(format!("{ns}{local}"))
    }

    /// The curie for `iri` under the longest matching namespace whose
    /// remainder is a plain local name; otherwise `None`.
    pub fn try_compact(&self, iri: &Iri) -> Option<String> {
        let s = iri.as_str();
        self.mappings
            .iter()
            .filter(|(_, ns)| s.starts_with(ns.as_str()))
            .filter(|(_, ns)| is_local_name(&s[ns.len()..]))
            .max_by(|a, b| a.1.len().cmp(&b.1.len()).then_with(|| b.0.cmp(a.0)))
            .map(|(prefix, ns)| format!("{prefix}:{}", &s[ns.len()..]))
    }

    /// Curie when possible, the bare IRI string otherwise.
    pub fn compact(&self, iri: &Iri) -> String {
        self.try_compact(iri).unwrap_or_else(|| iri.as_str().to_string())
    }
}

/// Local names the Turtle reader accepts unquoted: ASCII letters, digits,
/// `_`, `-` and `.`, not starting with `-` or `.` and not ending with `.`.
pub fn is_local_name(s: &str) -> bool {
    let Some(first) = s.chars().next() else {
        return false;
    };
    (first.is_ascii_alphanumeric() || first == '_')
        && !s.ends_with('.')
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

pub fn is_prefix_name(s: &str) -> bool {
    s.is_empty()
        || (s.starts_with(|c: char| c.is_ascii_alphabetic())
            && s.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-')))
}
