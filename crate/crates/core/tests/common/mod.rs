//! Random generators and brute-force oracles shared by the property and
//! acceptance suites. Everything is driven by a seeded `StdRng` so runs are
//! reproducible.

#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;
use sesforge_core::rdf::{Graph, Iri, Literal, Term, Triple, Variable, XSD};
use sesforge_core::store::{QueryPattern, Registry, Row, TriplePattern};
use sesforge_core::Vocab;

const PALETTE: &[char] = &[
    'a', 'b', 'Z', '0', '9', ' ', '"', '\\', '\n', '\t', '\r', '#', '@', '^', ';', '.', ',', '<', '>', ':', '_', '\'',
    'é', 'ß', '中', '🌊',
];

pub fn random_text(rng: &mut StdRng, max: usize) -> String {
    let n = rng.gen_range(0..=max);
    (0..n).map(|_| *PALETTE.choose(rng).unwrap()).collect()
}

/// A pool of IRIs in assorted shapes: curie-compactable, dotted, hashed,
/// URNs, and ones that only serialize in `<...>` form.
pub fn iri_pool(v: &Vocab, n: usize) -> Vec<Iri> {
    (0..n)
        .map(|i| {
            let s = match i % 7 {
                0 => format!("{}Node{i}_Cox2014", v.ns.local),
                1 => format!("{}Base{i}", v.ns.global),
                2 => format!("http://example.org/x/a.b-{i}"),
                3 => format!("http://example.org/h#frag{i}"),
                4 => format!("urn:x:{i}"),
                5 => format!("http://example.org/p/{i}/"),
                _ => format!("http://example.org/odd/%41{i}~é"),
            };
            Iri::new(s).expect("pool IRI")
        })
        .collect()
}

pub fn random_literal(rng: &mut StdRng) -> Literal {
    let lexical = random_text(rng, 12);
    match rng.gen_range(0..4) {
        0 => Literal::simple(lexical),
        1 => Literal::with_language(lexical, *["en", "en-US", "de", "x-ses"].choose(rng).unwrap()).unwrap(),
        2 => Literal::typed(lexical, Iri::new(format!("{XSD}integer")).unwrap()),
        _ => Literal::typed(lexical, Iri::new("http://example.org/dt#custom").unwrap()),
    }
}

/// A random graph of up to `max` triples over small node and predicate
/// pools, so subjects, predicates and objects repeat and joins are dense.
pub fn random_graph(rng: &mut StdRng, v: &Vocab, max: usize) -> Graph {
    let nodes = iri_pool(v, rng.gen_range(1..=30));
    let mut preds = iri_pool(v, rng.gen_range(1..=6));
    preds.push(v.rdf_type.clone());
    let target = rng.gen_range(0..=max);
    let mut g = Graph::new();
    for _ in 0..target {
        let s = nodes.choose(rng).unwrap();
        let p = preds.choose(rng).unwrap();
        let o: Term = if rng.gen_bool(0.7) {
            Term::Iri(nodes.choose(rng).unwrap().clone())
        } else {
            Term::Literal(random_literal(rng))
        };
        g.insert(Triple::new(s.clone(), p.clone(), o).unwrap());
    }
    g
}

const BASES: &[&str] = &[
    "ResourceSystem",
    "ResourceUnit",
    "GovernanceSystem",
    "User",
    "Water",
    "IrrigationSystem",
    "RS1_Sector",
    "RS9_Location",
    "Canal",
    "Aquifer",
];

/// A naive concept-map export shaped like the study template: a study
/// described by a concept graph with member concepts, sub-concepts joined by
/// member/narrower/broader edges, every node declared `owl:Class`, and some
/// labels, property declarations and stray nodes.
pub fn template_graph(rng: &mut StdRng, v: &Vocab, tag: &str) -> Graph {
    let node = |name: String| v.local(&name).unwrap();
    let mut g = Graph::new();
    let study = node(format!("{tag}_Study"));
    let cg = node(format!("ConceptGraph_{tag}"));
    g.insert(Triple::link(&study, &v.described_by, &cg));
    let mut all = vec![study.clone(), cg.clone()];
    let mut concepts: Vec<Iri> = Vec::new();
    let n = rng.gen_range(1..=8);
    for i in 0..n {
        let base = BASES.choose(rng).unwrap();
        let name = match rng.gen_range(0..3) {
            0 => format!("{base}_{tag}"),
            1 => format!("{base}{i}_{tag}"),
            _ => format!("{base}{i}"),
        };
        let c = node(name);
        if concepts.contains(&c) {
            continue;
        }
        if concepts.is_empty() || rng.gen_bool(0.5) {
            g.insert(Triple::link(&cg, &v.skos_member, &c));
        } else {
            let parent = concepts.choose(rng).unwrap().clone();
            match rng.gen_range(0..3) {
                0 => g.insert(Triple::link(&parent, &v.skos_member, &c)),
                1 => g.insert(Triple::link(&parent, &v.skos_narrower, &c)),
                _ => g.insert(Triple::link(&c, &v.skos_broader, &parent)),
            };
        }
        concepts.push(c.clone());
        all.push(c);
    }
    if rng.gen_bool(0.2) {
        let stray = node(format!("Stray_{tag}"));
        all.push(stray);
    }
    if rng.gen_bool(0.3) {
        g.insert(Triple::link(&v.described_by, &v.rdf_type, &v.owl_object_property));
    }
    for x in &all {
        if rng.gen_bool(0.9) {
            g.insert(Triple::link(x, &v.rdf_type, &v.owl_class));
        }
        if rng.gen_bool(0.5) {
            g.insert(Triple::labelled(x, &v.rdfs_label, random_literal(rng)));
        }
    }
    g
}

/// A registry with some built-in frameworks and a few random cases.
pub fn random_registry(rng: &mut StdRng) -> Registry {
    let mut reg = Registry::default();
    for fw in ["Ostrom2007", "Ostrom2009", "McGinnisOstrom2014"] {
        if rng.gen_bool(0.5) {
            reg.seed_framework(fw).unwrap();
        }
    }
    for i in 0..rng.gen_range(0..4) {
        let tag = format!("Case{}", 2000 + i);
        let raw = template_graph(rng, reg.vocab(), &tag);
        reg.ingest(&format!("case-{i}"), &raw, &[]).unwrap();
    }
    reg
}

fn pick_term(rng: &mut StdRng, terms: &[Term], vars: &[&str]) -> Term {
    if terms.is_empty() || rng.gen_bool(0.55) {
        Term::Variable(Variable::new(*vars.choose(rng).unwrap()).unwrap())
    } else {
        terms.choose(rng).unwrap().clone()
    }
}

/// One to three patterns over variables `?a`..`?d` and constants taken from
/// `g` (plus the occasional constant that is not in it).
pub fn random_pattern(rng: &mut StdRng, g: &Graph) -> QueryPattern {
    let triples: Vec<Triple> = g.iter().collect();
    let subjects: Vec<Term> = triples.iter().map(|t| Term::Iri(t.subject().clone())).collect();
    let predicates: Vec<Term> = triples.iter().map(|t| Term::Iri(t.predicate().clone())).collect();
    let mut objects: Vec<Term> = triples.iter().map(|t| t.object().clone()).collect();
    objects.push(Term::Iri(Iri::new("http://example.org/absent").unwrap()));
    let vars = ["a", "b", "c", "d"];
    let patterns = (0..rng.gen_range(1..=3))
        .map(|_| {
            TriplePattern::new(
                pick_term(rng, &subjects, &vars),
                pick_term(rng, &predicates, &vars),
                pick_term(rng, &objects, &vars),
            )
        })
        .collect();
    QueryPattern { patterns }
}

fn unify(slot: &Term, value: &Term, row: &mut Row) -> bool {
    match slot {
        Term::Variable(v) => match row.get(v.name()) {
            Some(bound) => bound == value,
            None => {
                row.insert(v.name().to_string(), value.clone());
                true
            }
        },
        constant => constant == value,
    }
}

/// Nested-loop join: every combination of triples, one per pattern, that
/// agrees on shared variables.
pub fn brute_force(g: &Graph, q: &QueryPattern) -> Vec<Row> {
    brute_force_bounded(g, q, usize::MAX).expect("unbounded")
}

/// As [`brute_force`], giving up with `None` once an intermediate result
/// holds more than `limit` rows.
pub fn brute_force_bounded(g: &Graph, q: &QueryPattern, limit: usize) -> Option<Vec<Row>> {
    let triples: Vec<Triple> = g.iter().collect();
    let mut rows = vec![Row::new()];
    for p in &q.patterns {
        let mut next = Vec::new();
        for row in &rows {
            for t in &triples {
                let mut r = row.clone();
                let ok = unify(&p.subject, &Term::Iri(t.subject().clone()), &mut r)
                    && unify(&p.predicate, &Term::Iri(t.predicate().clone()), &mut r)
                    && unify(&p.object, t.object(), &mut r);
                if ok {
                    next.push(r);
                }
            }
            if next.len() > limit {
                return None;
            }
        }
        rows = next;
    }
    rows.sort();
    Some(rows)
}

/// Recounts keyword scores by scanning every subject and its labels.
pub fn brute_force_search(g: &Graph, text: &str, v: &Vocab) -> Vec<(Iri, usize)> {
    let mut tokens: Vec<String> = text.split_whitespace().map(|t| t.to_lowercase()).collect();
    tokens.sort();
    tokens.dedup();
    let mut texts: BTreeMap<Iri, Vec<String>> = BTreeMap::new();
    for t in g.iter() {
        let entry = texts
            .entry(t.subject().clone())
            .or_insert_with(|| vec![t.subject().local_name().to_lowercase()]);
        if t.predicate() == &v.rdfs_label {
            if let Some(l) = t.object().as_literal() {
                entry.push(l.lexical().to_lowercase());
            }
        }
    }
    let mut hits: Vec<(Iri, usize)> = texts
        .into_iter()
        .map(|(iri, texts)| {
            let score = tokens
                .iter()
                .filter(|tok| texts.iter().any(|t| t.contains(tok.as_str())))
                .count();
            (iri, score)
        })
        .filter(|(_, s)| *s > 0)
        .collect();
    hits.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    hits
}
