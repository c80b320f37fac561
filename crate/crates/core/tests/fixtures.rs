//! End-to-end checks on the bundled concept-map exports.

use sesforge_core::normalize::{normalize, parse_links, replay};
use sesforge_core::rdf::Graph;
use sesforge_core::sescore::{seed_tbox, validate};
use sesforge_core::store::Registry;
use sesforge_core::syntax::{read_document, Format, PhraseTable};
use sesforge_core::Vocab;

const OSTROM_OWL: &str = include_str!("../fixtures/ostrom2007.owl");
const OSTROM_CXL: &str = include_str!("../fixtures/ostrom2007.cxl");
const COX_CXL: &str = include_str!("../fixtures/cox2014.cxl");
const COX_LINKS: &str = include_str!("../fixtures/cox2014.links");

fn read(text: &str, format: Format, v: &Vocab) -> Graph {
    read_document(text, format, &PhraseTable::default(), v).unwrap().value
}

#[test]
fn owl_and_cxl_exports_normalize_to_the_same_graph() {
    let v = Vocab::default();
    let mut reg_a = seed_tbox(&v);
    let mut reg_b = seed_tbox(&v);
    let (from_owl, owl_report) = normalize(&read(OSTROM_OWL, Format::Owl, &v), &mut reg_a, "ostrom2007", &v).unwrap();
    let (from_cxl, _) = normalize(&read(OSTROM_CXL, Format::Cxl, &v), &mut reg_b, "ostrom2007", &v).unwrap();

    let strip_labels = |g: &Graph| -> Graph { g.iter().filter(|t| t.predicate() != &v.rdfs_label).collect() };
    assert_eq!(strip_labels(&from_owl), strip_labels(&from_cxl));
    assert_eq!(reg_a, reg_b);

    assert_eq!(owl_report.dropped.len(), 3);
    assert_eq!(owl_report.demotions.len(), 7);
    assert_eq!(owl_report.minted_globals.len(), 5);
    assert_eq!(owl_report.linked.len(), 5);
}

#[test]
fn ostrom2007_report_replays_and_validates() {
    let v = Vocab::default();
    let raw = read(OSTROM_OWL, Format::Owl, &v);
    let mut registry = seed_tbox(&v);
    let (out, report) = normalize(&raw, &mut registry, "ostrom2007", &v).unwrap();
    assert_eq!(replay(&raw, &report, &v), out);

    let mut union = out.clone();
    union.merge(&registry);
    let findings = validate(&union, &v);
    assert!(findings.is_conformant(), "{findings}");
    assert!(validate(&raw, &v).rules().contains(&sesforge_core::sescore::Rule::V6));

    let tsv = report.to_tsv();
    assert!(tsv.lines().all(|l| l.split('\t').count() == 3), "{tsv}");
    assert!(tsv
        .lines()
        .any(|l| l.starts_with("MINT\t") && l.ends_with("\tGlobalConcept")));
    assert!(report
        .render(&registry_prefixes(&v))
        .lines()
        .all(|l| l.starts_with("# ")));
}

fn registry_prefixes(v: &Vocab) -> sesforge_core::rdf::PrefixMap {
    sesforge_core::rdf::PrefixMap::with_builtins(&v.ns)
}

#[test]
fn cox2014_mints_once_then_reuses_globals() {
    let v = Vocab::default();
    let raw = read(COX_CXL, Format::Cxl, &v);
    let mut registry = seed_tbox(&v);
    let (out, first) = normalize(&raw, &mut registry, "cox2014", &v).unwrap();
    assert_eq!(first.minted_globals.len(), 4);
    let water = v.local("Water_Cox2014").unwrap();
    assert!(out.has(&water, &v.refers_to, &v.global("Water").unwrap()));

    let before = registry.clone();
    let (_, second) = normalize(&raw, &mut registry, "cox2014-again", &v).unwrap();
    assert!(second.minted_globals.is_empty());
    assert_eq!(second.linked.len(), 4);
    assert_eq!(registry, before);
}

#[test]
fn cox2014_contextualized_against_mcginnis_ostrom() {
    let mut reg = Registry::default();
    reg.seed_framework("McGinnisOstrom2014").unwrap();
    let v = reg.vocab().clone();
    let links = parse_links(COX_LINKS, &reg.prefixes(), &v).unwrap();
    assert_eq!(links.len(), 4);
    reg.ingest("cox2014", &read(COX_CXL, Format::Cxl, &v), &links).unwrap();
    assert!(!reg.validate().has_errors(), "{}", reg.validate());

    let rs = v.local("ResourceSystems_McGinnisOstrom2014").unwrap();
    let case = reg.case("cox2014").unwrap();
    for name in [
        "IrrigationSystem_Cox2014",
        "AquiferSystem_Cox2014",
        "LandSystem_Cox2014",
    ] {
        let local = v.local(name).unwrap();
        assert!(case.has(&rs, &v.skos_narrower, &local), "{name}");
        assert!(case.has(&local, &v.skos_broader, &rs), "{name}");
    }
}
