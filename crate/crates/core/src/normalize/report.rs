use std::fmt::Write as _;

use crate::rdf::{Graph, Iri, PrefixMap, Triple};
use crate::Vocab;

/// Everything one normalization run changed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NormalizationReport {
    pub case_id: String,
    /// Property declarations removed from the raw graph.
    pub dropped: Vec<Triple>,
    /// Nodes whose `rdf:type owl:Class` was removed.
    pub demotions: Vec<Iri>,
    /// `skos:member` edges between concepts rewritten to `skos:narrower`.
    pub rewritten: Vec<(Iri, Iri)>,
    /// Asserted `(node, class)` typings.
    pub typed: Vec<(Iri, Iri)>,
    /// Inverse hierarchy edges added.
    pub inverses: Vec<Triple>,
    pub minted_globals: Vec<Iri>,
    /// `(local, global)` pairs linked with `refers_to`.
    pub linked: Vec<(Iri, Iri)>,
    pub warnings: Vec<String>,
}

impl NormalizationReport {
    /// Number of hierarchy repairs: rewritten member edges plus added inverses.
    pub fn hierarchy_fixed(&self) -> usize {
        self.rewritten.len() + self.inverses.len()
    }

    /// True when the run changed nothing.
    pub fn is_noop(&self) -> bool {
        self.dropped.is_empty()
            && self.demotions.is_empty()
            && self.rewritten.is_empty()
            && self.typed.is_empty()
            && self.inverses.is_empty()
            && self.minted_globals.is_empty()
            && self.linked.is_empty()
    }

    /// Tab-separated `ACTION\tsubject\tobject` lines with full IRIs.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        let mut line = |action: &str, s: &str, o: &str| {
            let _ = writeln!(out, "{action}\t{s}\t{o}");
        };
        let object = |t: &Triple| {
            t.object()
                .as_iri()
                .map_or_else(|| t.object().to_string(), |i| i.as_str().to_string())
        };
        for t in &self.dropped {
            line("DROP", t.subject().as_str(), &object(t));
        }
        for d in &self.demotions {
            line("DEMOTE", d.as_str(), "owl:Class");
        }
        for (a, b) in &self.rewritten {
            line("REWRITE", a.as_str(), b.as_str());
        }
        for (n, c) in &self.typed {
            line("TYPE", n.as_str(), c.as_str());
        }
        for t in &self.inverses {
            let action = if t.predicate().local_name() == "broader" {
                "ADD_BROADER"
            } else {
                "ADD_NARROWER"
            };
            line(action, t.subject().as_str(), &object(t));
        }
        for g in &self.minted_globals {
            line("MINT", g.as_str(), "GlobalConcept");
        }
        for (l, g) in &self.linked {
            line("LINK", l.as_str(), g.as_str());
        }
        for w in &self.warnings {
            line("WARN", "-", w);
        }
        out
    }

    /// Human-readable summary. Every line starts with `# ` so the text can
    /// follow a Turtle document without breaking it.
    pub fn render(&self, pm: &PrefixMap) -> String {
        let c = |i: &Iri| pm.compact(i);
        let mut body = String::new();
        let _ = writeln!(body, "normalization report for case `{}`", self.case_id);
        let _ = writeln!(
            body,
            "demoted {}, typed {}, minted {}, linked {}, hierarchy fixes {}, dropped {}, warnings {}",
            self.demotions.len(),
            self.typed.len(),
            self.minted_globals.len(),
            self.linked.len(),
            self.hierarchy_fixed(),
            self.dropped.len(),
            self.warnings.len()
        );
        for t in &self.dropped {
            let o = t.object().as_iri().map(c).unwrap_or_else(|| t.object().to_string());
            let _ = writeln!(body, "drop    {} a {}", c(t.subject()), o);
        }
        for d in &self.demotions {
            let _ = writeln!(body, "demote  {}", c(d));
        }
        for (a, b) in &self.rewritten {
            let _ = writeln!(body, "rewrite {} skos:member {} -> skos:narrower", c(a), c(b));
        }
        for (n, cl) in &self.typed {
            let _ = writeln!(body, "type    {} a {}", c(n), c(cl));
        }
        for t in &self.inverses {
            let o = t.object().as_iri().map(c).unwrap_or_else(|| t.object().to_string());
            let _ = writeln!(body, "inverse {} {} {}", c(t.subject()), c(t.predicate()), o);
        }
        for g in &self.minted_globals {
            let _ = writeln!(body, "mint    {}", c(g));
        }
        for (l, g) in &self.linked {
            let _ = writeln!(body, "link    {} refers_to {}", c(l), c(g));
        }
        for w in &self.warnings {
            let _ = writeln!(body, "warning {w}");
        }
        body.lines().map(|l| format!("# {l}\n")).collect()
    }
}

/// Applies the recorded changes to `raw`. For a report produced by
/// normalizing `raw`, the result equals the normalized graph.
pub fn replay(raw: &Graph, report: &NormalizationReport, v: &Vocab) -> Graph {
    let mut g = raw.clone();
    for t in &report.dropped {
        g.remove(t);
    }
    for d in &report.demotions {
        g.remove(&Triple::link(d, &v.rdf_type, &v.owl_class));
    }
    for (n, c) in &report.typed {
        g.insert(Triple::link(n, &v.rdf_type, c));
    }
    for (a, b) in &report.rewritten {
        g.remove(&Triple::link(a, &v.skos_member, b));
        g.insert(Triple::link(a, &v.skos_narrower, b));
    }
    for t in &report.inverses {
        g.insert(t.clone());
    }
    for (l, gl) in &report.linked {
        g.insert(Triple::link(l, &v.refers_to, gl));
    }
    g
}
