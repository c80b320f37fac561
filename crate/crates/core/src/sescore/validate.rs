use std::collections::BTreeSet;
use std::fmt;

use super::Severity;
use crate::rdf::{Graph, Iri, Term};
use crate::Vocab;

/// SES-core conformance rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    /// Every LocalConcept has exactly one `refers_to`.
    V1,
    /// Every `refers_to` object is a GlobalConcept.
    V2,
    /// Every ConceptGraph has at least one `skos:member`.
    V3,
    /// Every Study is `described_by` at least one ConceptGraph.
    V4,
    /// `skos:narrower` and `skos:broader` are mutual inverses.
    V5,
    /// Only T-Box classes are declared `owl:Class`.
    V6,
    /// Every node in a SES-core or SKOS statement has an `rdf:type`.
    V7,
}

impl Rule {
    pub const ALL: [Rule; 7] = [Rule::V1, Rule::V2, Rule::V3, Rule::V4, Rule::V5, Rule::V6, Rule::V7];
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Finding {
    pub rule: Rule,
    pub severity: Severity,
    pub subject: Iri,
    pub message: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}\t{}\t{}\t{}",
            self.rule,
            self.severity,
            self.subject.as_str(),
            self.message
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_conformant(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn errors(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.severity == Severity::Error)
    }

    pub fn has_errors(&self) -> bool {
        self.errors().next().is_some()
    }

    pub fn rules(&self) -> BTreeSet<Rule> {
        self.findings.iter().map(|f| f.rule).collect()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for finding in &self.findings {
            writeln!(f, "{finding}")?;
        }
        let n = self.findings.len();
        writeln!(f, "{n} finding{}", if n == 1 { "" } else { "s" })
    }
}

/// Checks `g` against rules V1 to V7. Findings come back sorted.
pub fn validate(g: &Graph, v: &Vocab) -> ValidationReport {
    let mut findings = Vec::new();
    let mut push = |rule, severity, subject: &Iri, message: String| {
        findings.push(Finding {
            rule,
            severity,
            subject: subject.clone(),
            message,
        })
    };
    let typed = |class: &Iri| g.subjects_of(&v.rdf_type, &Term::Iri(class.clone()));

    for local in typed(&v.local_concept) {
        match g.objects(&local, &v.refers_to).len() {
            0 => push(
                Rule::V1,
                Severity::Error,
                &local,
                "LocalConcept has no refers_to".into(),
            ),
            1 => {}
            n => push(
                Rule::V1,
                Severity::Warning,
                &local,
                format!("LocalConcept has {n} refers_to targets, expected one"),
            ),
        }
    }

    for t in g.matching(None, Some(&v.refers_to), None) {
        let ok = t
            .object()
            .as_iri()
            .is_some_and(|o| g.has(o, &v.rdf_type, &v.global_concept));
        if !ok {
            push(
                Rule::V2,
                Severity::Error,
                t.subject(),
                format!("refers_to target {} is not a GlobalConcept", t.object()),
            );
        }
    }

    for cg in typed(&v.concept_graph) {
        if g.objects(&cg, &v.skos_member).is_empty() {
            push(Rule::V3, Severity::Error, &cg, "ConceptGraph has no skos:member".into());
        }
    }

    for study in typed(&v.study) {
        let described = g
            .object_iris(&study, &v.described_by)
            .iter()
            .any(|o| g.has(o, &v.rdf_type, &v.concept_graph));
        if !described {
            push(
                Rule::V4,
                Severity::Error,
                &study,
                "Study is not described_by any ConceptGraph".into(),
            );
        }
    }

    for (pred, inverse) in [(&v.skos_narrower, &v.skos_broader), (&v.skos_broader, &v.skos_narrower)] {
        for t in g.matching(None, Some(pred), None) {
            let ok = t.object().as_iri().is_some_and(|o| g.has(o, inverse, t.subject()));
            if !ok {
                push(
                    Rule::V5,
                    Severity::Error,
                    t.subject(),
                    format!(
                        "{} {} has no inverse {}",
                        pred.local_name(),
                        t.object(),
                        inverse.local_name()
                    ),
                );
            }
        }
    }

    for node in typed(&v.owl_class) {
        if !v.is_tbox_class(&node) {
            push(
                Rule::V6,
                Severity::Error,
                &node,
                "node outside the T-Box is declared owl:Class".into(),
            );
        }
    }

    let mut untyped = BTreeSet::new();
    for pred in g.predicates().filter(|p| v.is_sescore_or_skos(p)) {
        for t in g.matching(None, Some(pred), None) {
            for node in std::iter::once(t.subject()).chain(t.object().as_iri()) {
                if g.objects(node, &v.rdf_type).is_empty() {
                    untyped.insert(node.clone());
                }
            }
        }
    }
    for node in untyped {
        push(
            Rule::V7,
            Severity::Error,
            &node,
            "node used in a SES-core/SKOS statement has no rdf:type".into(),
        );
    }

    findings.sort();
    ValidationReport { findings }
}
