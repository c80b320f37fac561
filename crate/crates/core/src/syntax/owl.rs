//! Reader for the RDF/XML subset that node-and-edge ontology editors export.
//!
//! Accepted shape: an `rdf:RDF` root whose children are node elements
//! (`owl:Class`, `rdf:Description`, or any typed element) identified by
//! `rdf:about` (or `rdf:ID`). Their children are property elements pointing at
//! other nodes via `rdf:resource`, or carrying text content as a literal.
//! Containers, reification, `rdf:parseType` and nested anonymous nodes are
//! rejected by name.

use roxmltree::{Document, Node, ParsingOptions};

use super::SyntaxError;
use crate::rdf::{Graph, Iri, Literal, Term, Triple, RDF};
use crate::Namespaces;

const XML_NS: &str = "http://www.w3.org/XML/1998/namespace";
const OWL_ONTOLOGY: (&str, &str) = ("http://www.w3.org/2002/07/owl#", "Ontology");

/// Parses a naive-OWL document. Relative references resolve against the
/// document's `xml:base`, or the default local-concept namespace.
pub fn parse_coe_owl(text: &str) -> Result<Graph, SyntaxError> {
    parse_coe_owl_with_base(text, &Namespaces::default().local)
}

pub fn parse_coe_owl_with_base(text: &str, default_base: &str) -> Result<Graph, SyntaxError> {
    let opts = ParsingOptions {
        allow_dtd: true,
        ..ParsingOptions::default()
    };
    let doc = Document::parse_with_options(text, opts).map_err(|e| SyntaxError::Syntax {
        line: e.pos().row as usize,
        message: format!("malformed XML: {e}"),
    })?;
    let reader = Reader { doc: &doc };
    let root = doc.root_element();
    if !reader.is(root, RDF, "RDF") {
        return Err(SyntaxError::syntax(
            reader.line(root),
            format!("root element must be rdf:RDF, found <{}>", root.tag_name().name()),
        ));
    }
    let base = match root.attribute((XML_NS, "base")) {
        Some(b) if b.ends_with('#') || b.ends_with('/') => b.to_string(),
        Some(b) => format!("{b}#"),
        None => default_base.to_string(),
    };
    let mut graph = Graph::new();
    for node in root.children().filter(Node::is_element) {
        reader.node_element(node, &base, &mut graph)?;
    }
    Ok(graph)
}

struct Reader<'a, 'input> {
    doc: &'a Document<'input>,
}

impl Reader<'_, '_> {
    fn line(&self, node: Node) -> usize {
        self.doc.text_pos_at(node.range().start).row as usize
    }

    fn is(&self, node: Node, ns: &str, local: &str) -> bool {
        node.tag_name().namespace() == Some(ns) && node.tag_name().name() == local
    }

    fn element_iri(&self, node: Node) -> Result<Iri, SyntaxError> {
        let line = self.line(node);
        let ns = node.tag_name().namespace().ok_or_else(|| SyntaxError::Unsupported {
            line,
            construct: format!("unqualified element <{}>", node.tag_name().name()),
        })?;
        Iri::new(format!("{ns}{}", node.tag_name().name())).map_err(|source| SyntaxError::Term { line, source })
    }

    fn resolve(&self, node: Node, value: &str, base: &str) -> Result<Iri, SyntaxError> {
        let line = self.line(node);
        let absolute = value
            .find(':')
            .is_some_and(|i| !value[..i].contains(['/', '#', '?']) && i > 0);
        let iri = if absolute {
            value.to_string()
        } else {
            let local = value.strip_prefix('#').unwrap_or(value);
            if local.is_empty() {
                return Err(SyntaxError::syntax(line, "empty resource reference"));
            }
            format!("{base}{local}")
        };
        Iri::new(iri).map_err(|source| SyntaxError::Term { line, source })
    }

    fn reject_rdf_attrs(&self, node: Node, names: &[&str]) -> Result<(), SyntaxError> {
        for attr in node.attributes() {
            if attr.namespace() == Some(RDF) && names.contains(&attr.name()) {
                let construct = match attr.name() {
                    "parseType" => format!("rdf:parseType=\"{}\"", attr.value()),
                    "ID" => "reification (rdf:ID on a property element)".to_string(),
                    "nodeID" => "blank node reference (rdf:nodeID)".to_string(),
                    other => format!("rdf:{other} attribute"),
                };
                return Err(SyntaxError::Unsupported {
                    line: self.line(node),
                    construct,
                });
            }
        }
        Ok(())
    }

    fn node_element(&self, node: Node, base: &str, graph: &mut Graph) -> Result<(), SyntaxError> {
        let line = self.line(node);
        let name = node.tag_name().name();
        if node.tag_name().namespace() == Some(OWL_ONTOLOGY.0) && name == OWL_ONTOLOGY.1 {
            // Ontology header (imports, version info) carries no case content.
            return Ok(());
        }
        if node.tag_name().namespace() == Some(RDF) {
            match name {
                "Description" => {}
                "Bag" | "Seq" | "Alt" | "List" => {
                    return Err(SyntaxError::Unsupported {
                        line,
                        construct: format!("container rdf:{name}"),
                    })
                }
                "Statement" => {
                    return Err(SyntaxError::Unsupported {
                        line,
                        construct: "reification (rdf:Statement)".into(),
                    })
                }
                _ => {}
            }
        }
        self.reject_rdf_attrs(node, &["nodeID", "parseType"])?;
        let subject = if let Some(about) = node.attribute((RDF, "about")) {
            self.resolve(node, about, base)?
        } else if let Some(id) = node.attribute((RDF, "ID")) {
            self.resolve(node, id, base)?
        } else {
            return Err(SyntaxError::Unsupported {
                line,
                construct: format!("anonymous node <{name}> without rdf:about"),
            });
        };
        if !self.is(node, RDF, "Description") {
            let class = self.element_iri(node)?;
            graph.insert(Triple::link(&subject, &rdf_type(), &class));
        }
        for attr in node.attributes() {
            match attr.namespace() {
                Some(RDF) | Some(XML_NS) | None => continue,
                Some(ns) => {
                    let predicate = Iri::new(format!("{ns}{}", attr.name()))
                        .map_err(|source| SyntaxError::Term { line, source })?;
                    graph.insert(Triple::labelled(&subject, &predicate, Literal::simple(attr.value())));
                }
            }
        }
        for child in node.children().filter(Node::is_element) {
            self.property_element(&subject, child, base, graph)?;
        }
        Ok(())
    }

    fn property_element(&self, subject: &Iri, prop: Node, base: &str, graph: &mut Graph) -> Result<(), SyntaxError> {
        let line = self.line(prop);
        if self.is(prop, RDF, "li")
            || prop.tag_name().name().starts_with('_') && prop.tag_name().namespace() == Some(RDF)
        {
            return Err(SyntaxError::Unsupported {
                line,
                construct: "container membership property".into(),
            });
        }
        self.reject_rdf_attrs(prop, &["ID", "nodeID", "parseType", "bagID"])?;
        let predicate = self.element_iri(prop)?;
        if let Some(nested) = prop.children().find(Node::is_element) {
            return Err(SyntaxError::Unsupported {
                line: self.line(nested),
                construct: format!("nested anonymous node <{}>", nested.tag_name().name()),
            });
        }
        let object = if let Some(target) = prop.attribute((RDF, "resource")) {
            Term::Iri(self.resolve(prop, target, base)?)
        } else {
            let text: String = prop.children().filter_map(|c| c.text()).collect();
            let literal = if let Some(dt) = prop.attribute((RDF, "datatype")) {
                Literal::typed(text, self.resolve(prop, dt, base)?)
            } else if let Some(lang) = prop.attribute((XML_NS, "lang")) {
                Literal::with_language(text, lang).map_err(|source| SyntaxError::Term { line, source })?
            } else {
                Literal::simple(text)
            };
            Term::Literal(literal)
        };
        graph.insert(Triple::new(subject.clone(), predicate, object).expect("ground object"));
        Ok(())
    }
}

fn rdf_type() -> Iri {
    Iri::new(format!("{RDF}type")).expect("rdf:type")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Vocab;

    const HEAD: &str = r#"<?xml version="1.0"?>
<rdf:RDF xmlns:rdf="http://www.w3.org/1999/02/22-rdf-syntax-ns#"
         xmlns:rdfs="http://www.w3.org/2000/01/rdf-schema#"
         xmlns:owl="http://www.w3.org/2002/07/owl#"
         xmlns:skos="http://www.w3.org/2004/02/skos/core#"
         xmlns:sescore="http://sescore.example/ontology#">
"#;

    fn doc(body: &str) -> String {
        format!("{HEAD}{body}\n</rdf:RDF>\n")
    }

    #[test]
    fn single_class_declaration() {
        let g = parse_coe_owl(&doc(r##"<owl:Class rdf:about="#ResourceSystem_Ostrom2007"/>"##)).unwrap();
        let v = Vocab::default();
        let node = v.local("ResourceSystem_Ostrom2007").unwrap();
        assert_eq!(g.len(), 1);
        assert!(g.has(&node, &v.rdf_type, &v.owl_class));
    }

    #[test]
    fn empty_root_is_empty_graph() {
        assert!(parse_coe_owl(&doc("")).unwrap().is_empty());
    }

    #[test]
    fn edges_labels_and_base() {
        let text = r##"<rdf:RDF xmlns:rdf="http://www.w3.org/1999/02/22-rdf-syntax-ns#"
            xmlns:rdfs="http://www.w3.org/2000/01/rdf-schema#"
            xmlns:skos="http://www.w3.org/2004/02/skos/core#"
            xmlns:owl="http://www.w3.org/2002/07/owl#"
            xml:base="http://case.example/taos">
          <owl:Ontology rdf:about=""/>
          <owl:Class rdf:about="#A">
            <rdfs:label xml:lang="en">A node</rdfs:label>
            <skos:narrower rdf:resource="#B"/>
          </owl:Class>
          <rdf:Description rdf:about="http://elsewhere.example/C">
            <skos:member rdf:resource="B"/>
          </rdf:Description>
        </rdf:RDF>"##;
        let g = parse_coe_owl(text).unwrap();
        assert_eq!(g.len(), 4);
        let v = Vocab::default();
        let a = Iri::new("http://case.example/taos#A").unwrap();
        let b = Iri::new("http://case.example/taos#B").unwrap();
        let c = Iri::new("http://elsewhere.example/C").unwrap();
        assert!(g.has(&a, &v.skos_narrower, &b));
        assert!(g.has(&c, &v.skos_member, &b));
    }

    #[test]
    fn malformed_xml_reports_line() {
        let err = parse_coe_owl(&format!("{HEAD}<owl:Class rdf:about=\"#A\">\n")).unwrap_err();
        assert!(err.line().is_some_and(|l| l >= 1));
        assert!(err.to_string().contains("malformed XML"));
    }

    #[test]
    fn unsupported_constructs_are_named() {
        for (body, needle) in [
            (r##"<rdf:Bag rdf:about="#X"/>"##, "container"),
            (
                r##"<owl:Class rdf:about="#A"><skos:member><owl:Class rdf:about="#B"/></skos:member></owl:Class>"##,
                "nested anonymous node",
            ),
            (r#"<owl:Class><rdfs:label>x</rdfs:label></owl:Class>"#, "anonymous node"),
            (
                r##"<owl:Class rdf:about="#A"><skos:member rdf:ID="s1" rdf:resource="#B"/></owl:Class>"##,
                "reification",
            ),
            (
                r##"<rdf:Description rdf:about="#A"><rdf:li rdf:resource="#B"/></rdf:Description>"##,
                "container",
            ),
        ] {
            let err = parse_coe_owl(&doc(body)).unwrap_err();
            assert!(matches!(err, SyntaxError::Unsupported { .. }), "{body}: {err}");
            assert!(err.to_string().contains(needle), "{err}");
        }
    }

    #[test]
    fn non_rdf_root_is_rejected() {
        assert!(parse_coe_owl("<cmap/>").is_err());
    }
}
