use std::collections::BTreeMap;

use super::SyntaxError;
use crate::rdf::{Iri, PrefixMap};

/// Maps concept-map linking phrases to predicate IRIs.
///
/// Lookup is case-insensitive with whitespace collapsed. A phrase that is
/// not in the table but is itself a curie under a known prefix (the template
/// edges are labelled `sescore:described_by`, `skos:member`, ...) expands to
/// that IRI.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhraseTable {
    entries: BTreeMap<String, String>,
}

pub const DEFAULT_PHRASES: &str = "\
# linking phrase -> predicate
described_by -> sescore:described_by
described by -> sescore:described_by
member -> skos:member
has member -> skos:member
narrower -> skos:narrower
has subconcept -> skos:narrower
broader -> skos:broader
refers_to -> sescore:refers_to
refers to -> sescore:refers_to
related_to -> sescore:related_to
";

fn key(phrase: &str) -> String {
    phrase.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
}

impl PhraseTable {
    /// Parses `phrase -> curie` lines; `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self, SyntaxError> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (phrase, curie) = line
                .split_once("->")
                .ok_or_else(|| SyntaxError::syntax(i + 1, "expected `phrase -> curie`"))?;
            let (phrase, curie) = (key(phrase), curie.trim());
            if phrase.is_empty() || curie.is_empty() {
                return Err(SyntaxError::syntax(i + 1, "empty phrase or predicate"));
            }
            entries.insert(phrase, curie.to_string());
        }
        Ok(PhraseTable { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Predicate for `phrase`, or `None` when the phrase is unmapped.
    pub fn lookup(&self, phrase: &str, pm: &PrefixMap) -> Result<Option<Iri>, SyntaxError> {
        let k = key(phrase);
        if let Some(curie) = self.entries.get(&k) {
            let iri = if curie.starts_with('<') && curie.ends_with('>') {
                Iri::new(&curie[1..curie.len() - 1])
            } else {
                pm.expand(curie)
            };
            return iri.map(Some).map_err(|source| SyntaxError::Term { line: 1, source });
        }
        let trimmed = phrase.trim();
        if let Some((prefix, _)) = trimmed.split_once(':') {
            if pm.get(prefix).is_some() {
                if let Ok(iri) = pm.expand(trimmed) {
                    return Ok(Some(iri));
                }
            }
        }
        Ok(None)
    }
}

impl Default for PhraseTable {
    fn default() -> Self {
        Self::parse(DEFAULT_PHRASES).expect("default phrase table parses")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Namespaces;

    #[test]
    fn defaults_and_curie_fallback() {
        let pm = PrefixMap::with_builtins(&Namespaces::default());
        let t = PhraseTable::default();
        assert_eq!(t.len(), 10);
        assert_eq!(
            t.lookup("Has  Subconcept", &pm).unwrap(),
            Some(pm.expand("skos:narrower").unwrap())
        );
        assert_eq!(
            t.lookup("skos:broader", &pm).unwrap(),
            Some(pm.expand("skos:broader").unwrap())
        );
        assert_eq!(t.lookup("influences", &pm).unwrap(), None);
    }

    #[test]
    fn parse_errors_name_the_line() {
        let err = PhraseTable::parse("member -> skos:member\nbroken line\n").unwrap_err();
        assert_eq!(err.line(), Some(2));
    }
}
