//! The SES-core T-Box, seed framework vocabularies, and conformance rules.

mod seed;
mod validate;

use thiserror::Error;

use crate::rdf::{Graph, Iri, Literal, TermError, Triple, RDFS};
use crate::Vocab;

pub use seed::{camel_slug, seed_framework, seed_framework_from, FrameworkSeed, TierEntry, BUILTIN_FRAMEWORKS};
pub use validate::{validate, Finding, Rule, ValidationReport};

pub use crate::syntax::Severity;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeedError {
    #[error("unknown framework `{0}`")]
    UnknownFramework(String),
    #[error("seed table line {line}: {message}")]
    Table { line: usize, message: String },
    #[error(transparent)]
    Global(#[from] GlobalError),
    #[error(transparent)]
    Term(#[from] TermError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GlobalError {
    #[error("global concept IRI {0} is already used by a node that is not a GlobalConcept")]
    Collision(Iri),
    #[error("cannot mint a global concept for base `{0}`: {1}")]
    Term(String, TermError),
}

/// The SES-core T-Box: the eight classes, the two subclass links, and the
/// three SES-core properties.
pub fn seed_tbox(v: &Vocab) -> Graph {
    let mut g = Graph::new();
    let labels = [
        (&v.concept, "Concept"),
        (&v.global_concept, "Global concept"),
        (&v.local_concept, "Local concept"),
        (&v.framework, "Framework"),
        (&v.concept_graph, "Concept graph"),
        (&v.study, "Study"),
        (&v.publication, "Publication"),
        (&v.author, "Author"),
    ];
    for (class, label) in labels {
        g.insert(Triple::link(class, &v.rdf_type, &v.owl_class));
        g.insert(Triple::labelled(class, &v.rdfs_label, Literal::simple(label)));
    }
    g.insert(Triple::link(&v.global_concept, &v.rdfs_sub_class_of, &v.concept));
    g.insert(Triple::link(&v.local_concept, &v.rdfs_sub_class_of, &v.concept));

    let domain = Iri::new(format!("{RDFS}domain")).expect("rdfs:domain");
    let range = Iri::new(format!("{RDFS}range")).expect("rdfs:range");
    for (prop, label, dom, rng) in [
        (&v.refers_to, "refers to", &v.local_concept, &v.global_concept),
        (&v.described_by, "described by", &v.study, &v.concept_graph),
        (&v.related_to, "related to", &v.concept, &v.concept),
    ] {
        g.insert(Triple::link(prop, &v.rdf_type, &v.owl_object_property));
        g.insert(Triple::labelled(prop, &v.rdfs_label, Literal::simple(label)));
        g.insert(Triple::link(prop, &domain, dom));
        g.insert(Triple::link(prop, &range, rng));
    }
    g
}

/// Finds the GlobalConcept whose IRI local name is `base`, minting
/// `global:<base>` into `registry` when there is none.
///
/// Returns the IRI and whether it was minted.
pub fn resolve_global(registry: &mut Graph, base: &str, v: &Vocab) -> Result<(Iri, bool), GlobalError> {
    if let Some(existing) = find_global(registry, base, v) {
        return Ok((existing, false));
    }
    let iri = v.global(base).map_err(|e| GlobalError::Term(base.to_string(), e))?;
    if registry.mentions(&iri) {
        return Err(GlobalError::Collision(iri));
    }
    registry.insert(Triple::link(&iri, &v.rdf_type, &v.global_concept));
    registry.insert(Triple::labelled(
        &iri,
        &v.rdfs_label,
        Literal::simple(base.replace('_', " ")),
    ));
    Ok((iri, true))
}

/// The GlobalConcept in `registry` whose local name is `base`, if any.
pub fn find_global(registry: &Graph, base: &str, v: &Vocab) -> Option<Iri> {
    registry
        .subjects_of(&v.rdf_type, &v.global_concept.clone().into())
        .into_iter()
        .find(|g| g.local_name() == base)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tbox_declares_subclasses_and_properties() {
        let v = Vocab::default();
        let g = seed_tbox(&v);
        assert!(g.has(&v.local_concept, &v.rdfs_sub_class_of, &v.concept));
        assert!(g.has(&v.global_concept, &v.rdfs_sub_class_of, &v.concept));
        assert!(g.has(&v.refers_to, &v.rdf_type, &v.owl_object_property));
        assert!(g.has(&v.described_by, &v.rdf_type, &v.owl_object_property));
        let classes = g.subjects_of(&v.rdf_type, &v.owl_class.clone().into());
        assert_eq!(classes.len(), 8);
        assert_eq!(seed_tbox(&v), g);
    }

    #[test]
    fn globals_are_minted_once() {
        let v = Vocab::default();
        let mut reg = Graph::new();
        let (a, minted) = resolve_global(&mut reg, "ResourceSystem", &v).unwrap();
        assert!(minted);
        let (b, minted) = resolve_global(&mut reg, "ResourceSystem", &v).unwrap();
        assert!(!minted);
        assert_eq!(a, b);
        assert_eq!(a.as_str(), "http://sescore.example/global/ResourceSystem");
        assert_eq!(reg.len(), 2);
    }

    #[test]
    fn minting_over_a_foreign_node_is_a_collision() {
        let v = Vocab::default();
        let iri = v.global("Water").unwrap();
        let mut reg: Graph = [Triple::link(&iri, &v.rdf_type, &v.local_concept)]
            .into_iter()
            .collect();
        assert_eq!(resolve_global(&mut reg, "Water", &v), Err(GlobalError::Collision(iri)));
    }
}
