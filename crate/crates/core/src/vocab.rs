use crate::rdf::{Iri, OWL, RDF, RDFS, SKOS};
use crate::Namespaces;

/// Resolved IRIs for every vocabulary term the toolkit reads or writes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vocab {
    pub ns: Namespaces,

    pub rdf_type: Iri,
    pub rdfs_label: Iri,
    pub rdfs_sub_class_of: Iri,
    pub owl_class: Iri,
    pub owl_object_property: Iri,
    pub owl_datatype_property: Iri,
    pub owl_annotation_property: Iri,
    pub owl_ontology: Iri,

    pub skos_member: Iri,
    pub skos_narrower: Iri,
    pub skos_broader: Iri,
    pub skos_notation: Iri,

    pub concept: Iri,
    pub global_concept: Iri,
    pub local_concept: Iri,
    pub framework: Iri,
    pub concept_graph: Iri,
    pub study: Iri,
    pub publication: Iri,
    pub author: Iri,

    pub refers_to: Iri,
    pub described_by: Iri,
    pub related_to: Iri,
}

fn iri(ns: &str, local: &str) -> Iri {
    Iri::new(format!("{ns}{local}")).expect("vocabulary IRIs are valid")
}

impl Vocab {
    pub fn new(ns: &Namespaces) -> Self {
        let ses = ns.sescore.as_str();
        Vocab {
            ns: ns.clone(),
            rdf_type: iri(RDF, "type"),
            rdfs_label: iri(RDFS, "label"),
            rdfs_sub_class_of: iri(RDFS, "subClassOf"),
            owl_class: iri(OWL, "Class"),
            owl_object_property: iri(OWL, "ObjectProperty"),
            owl_datatype_property: iri(OWL, "DatatypeProperty"),
            owl_annotation_property: iri(OWL, "AnnotationProperty"),
            owl_ontology: iri(OWL, "Ontology"),
            skos_member: iri(SKOS, "member"),
            skos_narrower: iri(SKOS, "narrower"),
            skos_broader: iri(SKOS, "broader"),
            skos_notation: iri(SKOS, "notation"),
            concept: iri(ses, "Concept"),
            global_concept: iri(ses, "GlobalConcept"),
            local_concept: iri(ses, "LocalConcept"),
            framework: iri(ses, "Framework"),
            concept_graph: iri(ses, "ConceptGraph"),
            study: iri(ses, "Study"),
            publication: iri(ses, "Publication"),
            author: iri(ses, "Author"),
            refers_to: iri(ses, "refers_to"),
            described_by: iri(ses, "described_by"),
            related_to: iri(ses, "related_to"),
        }
    }

    /// The eight SES-core classes, in declaration order.
    pub fn classes(&self) -> [&Iri; 8] {
        [
            &self.concept,
            &self.global_concept,
            &self.local_concept,
            &self.framework,
            &self.concept_graph,
            &self.study,
            &self.publication,
            &self.author,
        ]
    }

    /// The SES-core object properties.
    pub fn properties(&self) -> [&Iri; 3] {
        [&self.refers_to, &self.described_by, &self.related_to]
    }

    pub fn is_tbox_class(&self, iri: &Iri) -> bool {
        self.classes().contains(&iri)
    }

    /// `true` for IRIs in the SES-core or SKOS namespaces.
    pub fn is_sescore_or_skos(&self, iri: &Iri) -> bool {
        iri.as_str().starts_with(self.ns.sescore.as_str()) || iri.as_str().starts_with(SKOS)
    }

    /// Global concept IRI for a base name.
    pub fn global(&self, base: &str) -> Result<Iri, crate::rdf::TermError> {
        Iri::new(format!("{}{}", self.ns.global, base))
    }

    /// Local-namespace IRI for a node name.
    pub fn local(&self, name: &str) -> Result<Iri, crate::rdf::TermError> {
        Iri::new(format!("{}{}", self.ns.local, name))
    }
}

impl Default for Vocab {
    fn default() -> Self {
        Self::new(&Namespaces::default())
    }
}
