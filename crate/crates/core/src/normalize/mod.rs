//! Concept-map normalization: rewrites a raw ingested graph, where every
//! diagram node was exported as an `owl:Class`, into a SES-core case graph.
//!
//! The rules run in a fixed order:
//!
//! 1. role inference from the template positions (study, concept graph,
//!    concepts reachable through `skos:member` / `skos:narrower`);
//! 2. class demotion of every classified node;
//! 3. instance typing per role;
//! 4. hierarchy canonicalization (`skos:member` between concepts becomes
//!    `skos:narrower`, inverses are added both ways);
//! 5. global linking, minting GlobalConcepts into the registry as needed.
//!
//! Every change lands in a [`NormalizationReport`], which can be replayed
//! against the raw graph to reproduce the output.

mod report;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::rdf::{Graph, Iri, PrefixMap, Term, TermError, Triple, OWL, RDF, RDFS, SKOS};
use crate::sescore::{resolve_global, GlobalError};
use crate::Vocab;

pub use report::{replay, NormalizationReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalizeError {
    #[error("not an SES case graph: no study, concept graph or concept could be identified")]
    NotSesCase,
    #[error("node {node} plays conflicting roles: {first} and {second}")]
    RoleConflict {
        node: Iri,
        first: &'static str,
        second: &'static str,
    },
    #[error("cannot derive a global concept name from {0}")]
    EmptyBase(Iri),
    #[error(transparent)]
    Global(#[from] GlobalError),
    #[error("{0} is not typed LocalConcept")]
    NotLocalConcept(Iri),
    #[error("cannot contextualize {0} under itself")]
    SelfLink(Iri),
    #[error("links line {line}: {message}")]
    Links { line: usize, message: String },
    #[error(transparent)]
    Term(#[from] TermError),
}

/// A local concept name split into its context-free base and its
/// author-year context tag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NameSplit {
    pub base: String,
    pub context: Option<String>,
}

fn is_context_tag(s: &str) -> bool {
    let letters = s.chars().take_while(|c| c.is_ascii_alphabetic()).count();
    let rest = &s[letters..];
    letters > 0 && rest.len() == 4 && rest.chars().all(|c| c.is_ascii_digit())
}

/// `ResourceSystem_Ostrom2009` → base `ResourceSystem`, context `Ostrom2009`.
///
/// The context is the text after the final underscore when it looks like an
/// author-year tag (`[A-Za-z]+[0-9]{4}`); otherwise the whole name is the base.
pub fn split_name(local_name: &str) -> NameSplit {
    if let Some((base, tail)) = local_name.rsplit_once('_') {
        if !base.is_empty() && is_context_tag(tail) {
            return NameSplit {
                base: base.to_string(),
                context: Some(tail.to_string()),
            };
        }
    }
    NameSplit {
        base: local_name.to_string(),
        context: None,
    }
}

fn is_vocabulary(iri: &Iri, v: &Vocab) -> bool {
    let s = iri.as_str();
    v.is_tbox_class(iri) || v.properties().contains(&iri) || [RDF, RDFS, OWL, SKOS].iter().any(|ns| s.starts_with(ns))
}

#[derive(Default)]
struct Roles {
    studies: BTreeSet<Iri>,
    graphs: BTreeSet<Iri>,
    concepts: BTreeSet<Iri>,
}

impl Roles {
    fn role_of(&self, node: &Iri) -> Option<&'static str> {
        if self.studies.contains(node) {
            Some("Study")
        } else if self.graphs.contains(node) {
            Some("ConceptGraph")
        } else if self.concepts.contains(node) {
            Some("Concept")
        } else {
            None
        }
    }

    fn check_disjoint(&self) -> Result<(), NormalizeError> {
        let pairs = [
            (&self.studies, "Study", &self.graphs, "ConceptGraph"),
            (&self.studies, "Study", &self.concepts, "Concept"),
            (&self.graphs, "ConceptGraph", &self.concepts, "Concept"),
        ];
        for (a, an, b, bn) in pairs {
            if let Some(node) = a.intersection(b).next() {
                return Err(NormalizeError::RoleConflict {
                    node: node.clone(),
                    first: an,
                    second: bn,
                });
            }
        }
        Ok(())
    }
}

fn typed_in(g: &Graph, class: &Iri, v: &Vocab) -> Vec<Iri> {
    g.subjects_of(&v.rdf_type, &Term::Iri(class.clone()))
}

fn infer_roles(raw: &Graph, v: &Vocab) -> Roles {
    let mut roles = Roles::default();
    let usable = |iri: &Iri| !is_vocabulary(iri, v);
    for t in raw.matching(None, Some(&v.described_by), None) {
        roles.studies.insert(t.subject().clone());
        if let Some(o) = t.object().as_iri() {
            roles.graphs.insert(o.clone());
        }
    }
    roles.studies.extend(typed_in(raw, &v.study, v));
    roles.graphs.extend(typed_in(raw, &v.concept_graph, v));
    roles.studies.retain(|i| usable(i));
    roles.graphs.retain(|i| usable(i));

    let mut frontier: Vec<Iri> = roles
        .graphs
        .iter()
        .flat_map(|g| raw.object_iris(g, &v.skos_member))
        .chain(typed_in(raw, &v.local_concept, v))
        .filter(|i| usable(i))
        .collect();
    while let Some(c) = frontier.pop() {
        if !roles.concepts.insert(c.clone()) {
            continue;
        }
        let children = raw
            .object_iris(&c, &v.skos_narrower)
            .into_iter()
            .chain(raw.object_iris(&c, &v.skos_member))
            .chain(raw.subjects_of(&v.skos_broader, &Term::Iri(c.clone())));
        frontier.extend(children.filter(|i| usable(i) && !roles.concepts.contains(i)));
    }
    roles
}

/// Nodes of `raw` that no template role reaches and that are not references
/// into the registry: they are kept and typed LocalConcept, with a warning.
fn unreachable_nodes(raw: &Graph, registry: &Graph, roles: &Roles, v: &Vocab) -> BTreeSet<Iri> {
    let properties: BTreeSet<Iri> = raw
        .predicates()
        .cloned()
        .chain(
            [
                &v.owl_object_property,
                &v.owl_datatype_property,
                &v.owl_annotation_property,
            ]
            .into_iter()
            .flat_map(|p| typed_in(raw, p, v)),
        )
        .collect();
    let mut nodes: BTreeSet<Iri> = raw.subjects().cloned().collect();
    for t in raw.iter() {
        if *t.predicate() == v.rdf_type || *t.predicate() == v.refers_to {
            continue;
        }
        if let Some(o) = t.object().as_iri() {
            nodes.insert(o.clone());
        }
    }
    let is_global =
        |n: &Iri| raw.has(n, &v.rdf_type, &v.global_concept) || registry.has(n, &v.rdf_type, &v.global_concept);
    let is_external = |n: &Iri| raw.objects(n, &v.rdf_type).is_empty() && !registry.objects(n, &v.rdf_type).is_empty();
    nodes
        .into_iter()
        .filter(|n| {
            roles.role_of(n).is_none()
                && !properties.contains(n)
                && !is_vocabulary(n, v)
                && !is_global(n)
                && !is_external(n)
        })
        .collect()
}

/// Runs the normalization rules over `raw`.
///
/// `registry` is searched for existing GlobalConcepts and for typed nodes
/// the case refers to; globals minted along the way are inserted into it.
/// `case_id` is carried into the report.
pub fn normalize(
    raw: &Graph,
    registry: &mut Graph,
    case_id: &str,
    v: &Vocab,
) -> Result<(Graph, NormalizationReport), NormalizeError> {
    let mut out = raw.clone();
    let mut report = NormalizationReport {
        case_id: case_id.to_string(),
        ..Default::default()
    };

    // Edge labels exported as property declarations are not case content.
    for class in [
        &v.owl_object_property,
        &v.owl_datatype_property,
        &v.owl_annotation_property,
    ] {
        for prop in typed_in(raw, class, v) {
            let t = Triple::link(&prop, &v.rdf_type, class);
            out.remove(&t);
            report.warnings.push(format!(
                "dropped property declaration {} a {}",
                prop.as_str(),
                class.local_name()
            ));
            report.dropped.push(t);
        }
    }

    // R1
    let mut roles = infer_roles(raw, v);
    roles.check_disjoint()?;
    if roles.studies.is_empty() && roles.graphs.is_empty() && roles.concepts.is_empty() {
        return Err(NormalizeError::NotSesCase);
    }
    for node in unreachable_nodes(raw, registry, &roles, v) {
        report.warnings.push(format!(
            "{} is not reachable from the study/concept-graph template; kept as LocalConcept",
            node.as_str()
        ));
        roles.concepts.insert(node);
    }

    // R2
    let classified: BTreeSet<&Iri> = roles
        .studies
        .iter()
        .chain(&roles.graphs)
        .chain(&roles.concepts)
        .collect();
    for node in &classified {
        if out.remove(&Triple::link(node, &v.rdf_type, &v.owl_class)) {
            report.demotions.push((*node).clone());
        }
    }

    // R3
    let mut assert_type = |out: &mut Graph, node: &Iri, class: &Iri| {
        if out.insert(Triple::link(node, &v.rdf_type, class)) {
            report.typed.push((node.clone(), class.clone()));
        }
    };
    for study in &roles.studies {
        assert_type(&mut out, study, &v.study);
        if study.local_name().to_ascii_lowercase().contains("framework") {
            assert_type(&mut out, study, &v.framework);
        }
    }
    for graph in &roles.graphs {
        assert_type(&mut out, graph, &v.concept_graph);
    }
    for concept in &roles.concepts {
        assert_type(&mut out, concept, &v.local_concept);
    }

    // R4
    for t in out.matching(None, Some(&v.skos_member), None) {
        let Some(child) = t.object().as_iri() else { continue };
        if roles.concepts.contains(t.subject()) && roles.concepts.contains(child) {
            out.remove(&t);
            out.insert(Triple::link(t.subject(), &v.skos_narrower, child));
            report.rewritten.push((t.subject().clone(), child.clone()));
        }
    }
    for (pred, inverse) in [(&v.skos_narrower, &v.skos_broader), (&v.skos_broader, &v.skos_narrower)] {
        for t in out.matching(None, Some(pred), None) {
            let Some(o) = t.object().as_iri() else { continue };
            let inv = Triple::link(o, inverse, t.subject());
            if out.insert(inv.clone()) {
                report.inverses.push(inv);
            }
        }
    }

    // R5
    for concept in &roles.concepts {
        if !out.objects(concept, &v.refers_to).is_empty() {
            continue;
        }
        let split = split_name(concept.local_name());
        if split.base.is_empty() {
            return Err(NormalizeError::EmptyBase(concept.clone()));
        }
        let (global, minted) = resolve_global(registry, &split.base, v)?;
        if minted {
            report.minted_globals.push(global.clone());
        }
        out.insert(Triple::link(concept, &v.refers_to, &global));
        report.linked.push((concept.clone(), global));
    }

    Ok((out, report))
}

/// Records that `case_local` specializes `framework_local`: asserts
/// `case_local skos:broader framework_local` and the narrower inverse in
/// `case`. Both nodes must be typed LocalConcept in `case` or `context`.
pub fn contextualize_link(
    case_local: &Iri,
    framework_local: &Iri,
    case: &mut Graph,
    context: &Graph,
    v: &Vocab,
) -> Result<(), NormalizeError> {
    if case_local == framework_local {
        return Err(NormalizeError::SelfLink(case_local.clone()));
    }
    for node in [case_local, framework_local] {
        let typed = case.has(node, &v.rdf_type, &v.local_concept) || context.has(node, &v.rdf_type, &v.local_concept);
        if !typed {
            return Err(NormalizeError::NotLocalConcept(node.clone()));
        }
    }
    case.insert(Triple::link(case_local, &v.skos_broader, framework_local));
    case.insert(Triple::link(framework_local, &v.skos_narrower, case_local));
    Ok(())
}

/// Parses `case_local -> framework_local` lines. Terms are curies,
/// `<absolute IRIs>`, or bare names in the local-concept namespace.
pub fn parse_links(text: &str, pm: &PrefixMap, v: &Vocab) -> Result<Vec<(Iri, Iri)>, NormalizeError> {
    let resolve = |term: &str, line: usize| -> Result<Iri, NormalizeError> {
        let err = |e: TermError| NormalizeError::Links {
            line,
            message: e.to_string(),
        };
        if let Some(inner) = term.strip_prefix('<').and_then(|t| t.strip_suffix('>')) {
            Iri::new(inner).map_err(err)
        } else if term.contains(':') {
            pm.expand(term).map_err(err)
        } else {
            v.local(term).map_err(err)
        }
    };
    let mut links = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (a, b) = line.split_once("->").ok_or(NormalizeError::Links {
            line: i + 1,
            message: "expected `case_local -> framework_local`".into(),
        })?;
        links.push((resolve(a.trim(), i + 1)?, resolve(b.trim(), i + 1)?));
    }
    Ok(links)
}
