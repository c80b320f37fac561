//! CXL concept maps: concepts joined through linking phrases.

use std::collections::{BTreeMap, HashMap};

use roxmltree::{Document, Node};

use super::{ParseDiagnostic, Parsed, PhraseTable, SyntaxError};
use crate::rdf::{Graph, Iri, Literal, PrefixMap, Triple};
use crate::Vocab;

/// A concept or linking phrase.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapNode {
    pub id: String,
    pub label: String,
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connection {
    pub from: String,
    pub to: String,
    pub line: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConceptMap {
    pub nodes: Vec<MapNode>,
    pub linking_phrases: Vec<MapNode>,
    pub connections: Vec<Connection>,
}

impl ConceptMap {
    fn phrase_sides(&self) -> HashMap<&str, (Vec<&str>, Vec<&str>)> {
        let concepts: std::collections::HashSet<&str> = self.nodes.iter().map(|n| n.id.as_str()).collect();
        let mut sides: HashMap<&str, (Vec<&str>, Vec<&str>)> = self
            .linking_phrases
            .iter()
            .map(|p| (p.id.as_str(), (Vec::new(), Vec::new())))
            .collect();
        for c in &self.connections {
            if concepts.contains(c.from.as_str()) {
                if let Some((incoming, _)) = sides.get_mut(c.to.as_str()) {
                    incoming.push(c.from.as_str());
                }
            }
            if concepts.contains(c.to.as_str()) {
                if let Some((_, outgoing)) = sides.get_mut(c.from.as_str()) {
                    outgoing.push(c.to.as_str());
                }
            }
        }
        sides
    }
}

fn line_of(doc: &Document, node: Node) -> usize {
    doc.text_pos_at(node.range().start).row as usize
}

fn required<'a>(doc: &Document, node: Node<'a, '_>, attr: &str) -> Result<&'a str, SyntaxError> {
    node.attribute(attr).ok_or_else(|| {
        SyntaxError::syntax(
            line_of(doc, node),
            format!("<{}> is missing the `{attr}` attribute", node.tag_name().name()),
        )
    })
}

/// Parses a CXL document. Elements are matched by local name, so the CXL
/// namespace may or may not be declared.
pub fn parse_cxl(text: &str) -> Result<Parsed<ConceptMap>, SyntaxError> {
    let doc = Document::parse(text).map_err(|e| SyntaxError::Syntax {
        line: e.pos().row as usize,
        message: format!("malformed XML: {e}"),
    })?;
    let root = doc.root_element();
    if root.tag_name().name() != "cmap" {
        return Err(SyntaxError::syntax(
            line_of(&doc, root),
            format!("root element must be <cmap>, found <{}>", root.tag_name().name()),
        ));
    }

    let mut cm = ConceptMap::default();
    let mut ids: HashMap<String, usize> = HashMap::new();
    for el in root.descendants().filter(Node::is_element) {
        let line = line_of(&doc, el);
        let target = match el.tag_name().name() {
            "concept" => &mut cm.nodes,
            "linking-phrase" => &mut cm.linking_phrases,
            "connection" => {
                cm.connections.push(Connection {
                    from: required(&doc, el, "from-id")?.to_string(),
                    to: required(&doc, el, "to-id")?.to_string(),
                    line,
                });
                continue;
            }
            _ => continue,
        };
        let id = required(&doc, el, "id")?.to_string();
        if let Some(prev) = ids.insert(id.clone(), line) {
            return Err(SyntaxError::syntax(
                line,
                format!("duplicate id `{id}` (first defined on line {prev})"),
            ));
        }
        target.push(MapNode {
            id,
            label: el.attribute("label").unwrap_or("").trim().to_string(),
            line,
        });
    }

    let concepts: std::collections::HashSet<&str> = cm.nodes.iter().map(|n| n.id.as_str()).collect();
    let mut warnings = Vec::new();
    for c in &cm.connections {
        for end in [&c.from, &c.to] {
            if !ids.contains_key(end) {
                return Err(SyntaxError::syntax(
                    c.line,
                    format!("connection references unknown id `{end}`"),
                ));
            }
        }
        let (from_concept, to_concept) = (concepts.contains(c.from.as_str()), concepts.contains(c.to.as_str()));
        if from_concept && to_concept {
            warnings.push(ParseDiagnostic::warning(
                c.line,
                format!(
                    "connection `{}` -> `{}` joins two concepts without a linking phrase; ignored",
                    c.from, c.to
                ),
            ));
        } else if !from_concept && !to_concept {
            warnings.push(ParseDiagnostic::warning(
                c.line,
                format!(
                    "connection `{}` -> `{}` joins two linking phrases; ignored",
                    c.from, c.to
                ),
            ));
        }
    }
    let sides = cm.phrase_sides();
    for phrase in &cm.linking_phrases {
        let (incoming, outgoing) = &sides[phrase.id.as_str()];
        if incoming.is_empty() || outgoing.is_empty() {
            let missing = match (incoming.is_empty(), outgoing.is_empty()) {
                (true, true) => "incoming and outgoing connections",
                (true, false) => "an incoming connection",
                _ => "an outgoing connection",
            };
            warnings.push(ParseDiagnostic::warning(
                phrase.line,
                format!("linking phrase `{}` ({}) lacks {missing}", phrase.label, phrase.id),
            ));
        }
    }
    Ok(Parsed { value: cm, warnings })
}

/// Node label to IRI local name: spaces become underscores and anything
/// outside `[A-Za-z0-9_]` is dropped.
pub fn slugify(label: &str) -> String {
    label
        .trim()
        .chars()
        .filter_map(|c| match c {
            c if c.is_whitespace() => Some('_'),
            c if c.is_ascii_alphanumeric() || c == '_' => Some(c),
            _ => None,
        })
        .collect()
}

/// Converts a concept map to RDF. Every concept becomes `case_ns + slug` with
/// an `rdfs:label`; every concept → phrase → concept chain becomes one triple
/// whose predicate comes from `phrases` (unmapped phrases fall back to
/// `sescore:related_to` with a warning).
pub fn conceptmap_to_graph(
    cm: &ConceptMap,
    phrases: &PhraseTable,
    vocab: &Vocab,
    case_ns: &str,
) -> Result<Parsed<Graph>, SyntaxError> {
    let pm = PrefixMap::with_builtins(&vocab.ns);
    let mut slugs: BTreeMap<String, &MapNode> = BTreeMap::new();
    let mut node_iris: HashMap<&str, Iri> = HashMap::new();
    let mut graph = Graph::new();
    for node in &cm.nodes {
        let slug = slugify(&node.label);
        if slug.is_empty() {
            return Err(SyntaxError::syntax(
                node.line,
                format!("concept `{}` has a label with no usable characters", node.id),
            ));
        }
        if let Some(prev) = slugs.get(&slug) {
            return Err(SyntaxError::SlugCollision {
                slug,
                first: prev.label.clone(),
                second: node.label.clone(),
            });
        }
        let iri = Iri::new(format!("{case_ns}{slug}")).map_err(|source| SyntaxError::Term {
            line: node.line,
            source,
        })?;
        graph.insert(Triple::labelled(
            &iri,
            &vocab.rdfs_label,
            Literal::simple(node.label.clone()),
        ));
        slugs.insert(slug, node);
        node_iris.insert(node.id.as_str(), iri);
    }

    let mut warnings = Vec::new();
    let sides = cm.phrase_sides();
    for phrase in &cm.linking_phrases {
        let predicate = match phrases.lookup(&phrase.label, &pm)? {
            Some(p) => p,
            None => {
                warnings.push(ParseDiagnostic::warning(
                    phrase.line,
                    format!("unmapped linking phrase `{}`; using sescore:related_to", phrase.label),
                ));
                vocab.related_to.clone()
            }
        };
        let (incoming, outgoing) = &sides[phrase.id.as_str()];
        for from in incoming {
            for to in outgoing {
                graph.insert(Triple::link(&node_iris[from], &predicate, &node_iris[to]));
            }
        }
    }
    Ok(Parsed { value: graph, warnings })
}
