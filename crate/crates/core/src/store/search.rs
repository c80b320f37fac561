use std::collections::{BTreeMap, BTreeSet};

use crate::rdf::{Graph, Iri};
use crate::Vocab;

/// Lowercased whitespace-separated tokens, deduplicated.
pub fn tokens(text: &str) -> BTreeSet<String> {
    text.split_whitespace().map(str::to_lowercase).collect()
}

/// Ranks every node that is the subject of some triple by how many query
/// tokens occur (case-insensitively, as substrings) in its IRI local name or
/// its `rdfs:label` values. Higher scores first, ties by IRI.
pub fn keyword_search(g: &Graph, text: &str, v: &Vocab) -> Vec<(Iri, usize)> {
    let tokens = tokens(text);
    if tokens.is_empty() {
        return Vec::new();
    }
    let mut haystacks: BTreeMap<&Iri, String> = BTreeMap::new();
    for node in g.subjects() {
        haystacks
            .entry(node)
            .or_insert_with(|| node.local_name().to_lowercase());
    }
    for t in g.matching(None, Some(&v.rdfs_label), None) {
        if let (Some(h), Some(lit)) = (haystacks.get_mut(t.subject()), t.object().as_literal()) {
            h.push('\n');
            h.push_str(&lit.lexical().to_lowercase());
        }
    }
    let mut hits: Vec<(Iri, usize)> = haystacks
        .into_iter()
        .filter_map(|(node, hay)| {
            let score = tokens.iter().filter(|t| hay.contains(t.as_str())).count();
            (score > 0).then(|| (node.clone(), score))
        })
        .collect();
    hits.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    hits
}
