mod common;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use sesforge_core::normalize::{normalize, replay, split_name};
use sesforge_core::rdf::{Graph, IndexKind, Iri, PrefixMap, Term, Triple};
use sesforge_core::sescore::{find_global, seed_tbox, validate};
use sesforge_core::store::{evaluate, keyword_search, traverse, Direction, Registry};
use sesforge_core::syntax::{parse_coe_owl, parse_cxl, parse_turtle, serialize_turtle};
use sesforge_core::Vocab;

use common::*;

fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn turtle_round_trip(seed in any::<u64>()) {
        let v = Vocab::default();
        let pm = PrefixMap::with_builtins(&v.ns);
        let g = random_graph(&mut rng(seed), &v, 500);
        let text = serialize_turtle(&g, &pm);
        let back = parse_turtle(&text, &pm).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(serialize_turtle(&back, &pm), text);
    }

    #[test]
    fn turtle_round_trip_without_builtin_prefixes(seed in any::<u64>()) {
        let v = Vocab::default();
        let g = random_graph(&mut rng(seed), &v, 100);
        let text = serialize_turtle(&g, &PrefixMap::empty());
        prop_assert_eq!(parse_turtle(&text, &PrefixMap::empty()).unwrap(), g);
    }

    #[test]
    fn term_order_follows_serialized_form(seed in any::<u64>()) {
        let v = Vocab::default();
        let mut r = rng(seed);
        let g = random_graph(&mut r, &v, 60);
        let mut terms: Vec<Term> = g.iter().flat_map(|t| [Term::Iri(t.subject().clone()), t.object().clone()]).collect();
        terms.push(Term::Variable(sesforge_core::rdf::Variable::new("x").unwrap()));
        for a in &terms {
            for b in terms.iter().take(20) {
                prop_assert_eq!(a.cmp(b), a.to_string().cmp(&b.to_string()), "{} vs {}", a, b);
            }
        }
    }

    #[test]
    fn indexes_agree(seed in any::<u64>()) {
        let v = Vocab::default();
        let mut r = rng(seed);
        let mut g = random_graph(&mut r, &v, 1500);
        let mut all: Vec<Triple> = g.iter().collect();
        for t in all.iter().take(r.gen_range(0..50)) {
            g.remove(t);
        }
        all = g.iter().collect();
        prop_assert_eq!(all.len(), g.len());
        let probe = all.first().cloned();
        let absent = Iri::new("http://example.org/absent").unwrap();
        let subjects = [None, probe.as_ref().map(|t| t.subject().clone()), Some(absent.clone())];
        let predicates = [None, probe.as_ref().map(|t| t.predicate().clone()), Some(absent.clone())];
        let objects = [None, probe.as_ref().map(|t| t.object().clone()), Some(Term::Iri(absent))];
        for s in &subjects {
            for p in &predicates {
                for o in &objects {
                    let mut expected: Vec<Triple> = all
                        .iter()
                        .filter(|t| s.as_ref().is_none_or(|s| t.subject() == s)
                            && p.as_ref().is_none_or(|p| t.predicate() == p)
                            && o.as_ref().is_none_or(|o| t.object() == o))
                        .cloned()
                        .collect();
                    expected.sort();
                    for kind in [IndexKind::Subject, IndexKind::Predicate, IndexKind::Object] {
                        prop_assert_eq!(&g.matching_via(kind, s.as_ref(), p.as_ref(), o.as_ref()), &expected);
                    }
                    prop_assert_eq!(g.count_matching(s.as_ref(), p.as_ref(), o.as_ref()), expected.len());
                }
            }
        }
    }

    #[test]
    fn readers_never_panic(text in "\\PC{0,200}") {
        let pm = PrefixMap::with_builtins(&Vocab::default().ns);
        let _ = parse_turtle(&text, &pm);
        let _ = parse_coe_owl(&text);
        let _ = parse_cxl(&text);
    }

    #[test]
    fn turtle_reader_never_panics_on_mangled_documents(seed in any::<u64>(), cut in any::<prop::sample::Index>(), junk in "[ .;,<>\"@^_:a-z]{0,5}") {
        let v = Vocab::default();
        let pm = PrefixMap::with_builtins(&v.ns);
        let text = serialize_turtle(&random_graph(&mut rng(seed), &v, 30), &pm);
        let chars: Vec<char> = text.chars().collect();
        let at = cut.index(chars.len() + 1);
        let mangled: String = chars[..at].iter().chain(junk.chars().collect::<Vec<_>>().iter()).chain(chars[at..].iter()).collect();
        if let Err(e) = parse_turtle(&mangled, &pm) {
            let lines = mangled.lines().count().max(1);
            prop_assert!(e.line().is_some_and(|l| l >= 1 && l <= lines + 1), "{e}");
        }
    }

    #[test]
    fn normalization_is_idempotent_and_replayable(seed in any::<u64>()) {
        let v = Vocab::default();
        let mut r = rng(seed);
        let raw = template_graph(&mut r, &v, "Case2014");
        let mut registry = seed_tbox(&v);
        let (out, report) = normalize(&raw, &mut registry, "c", &v).unwrap();

        prop_assert_eq!(&replay(&raw, &report, &v), &out);
        for g in &report.minted_globals {
            prop_assert!(report.linked.iter().any(|(_, target)| target == g));
        }
        for d in &report.demotions {
            prop_assert!(!v.is_tbox_class(d));
        }

        let mut union = out.clone();
        union.merge(&registry);
        let findings = validate(&union, &v);
        prop_assert!(!findings.has_errors(), "{}", findings);

        let before = registry.clone();
        let (again, second) = normalize(&out, &mut registry, "c", &v).unwrap();
        prop_assert_eq!(&again, &out);
        prop_assert!(second.is_noop(), "{:?}", second);
        prop_assert_eq!(registry, before);
    }

    #[test]
    fn globals_stay_unique_across_ingests(seed in any::<u64>()) {
        let reg = random_registry(&mut rng(seed));
        let v = reg.vocab();
        let union = reg.union();
        let globals = union.subjects_of(&v.rdf_type, &Term::Iri(v.global_concept.clone()));
        let mut names: Vec<&str> = globals.iter().map(|g| g.local_name()).collect();
        let n = names.len();
        names.sort();
        names.dedup();
        prop_assert_eq!(names.len(), n);
        for g in &globals {
            let found = find_global(&union, g.local_name(), v);
            prop_assert_eq!(found.as_ref(), Some(g));
        }
        prop_assert!(!reg.validate().has_errors());
    }

    #[test]
    fn bgp_matches_nested_loop_join(seed in any::<u64>()) {
        let v = Vocab::default();
        let mut r = rng(seed);
        let g = random_graph(&mut r, &v, 300);
        for _ in 0..5 {
            let q = random_pattern(&mut r, &g);
            let got = evaluate(&g, &q);
            prop_assert_eq!(&got.rows, &brute_force(&g, &q));
            for row in &got.rows {
                let mut keys: Vec<&String> = row.keys().collect();
                keys.sort();
                let mut vars = q.variables();
                vars.sort();
                prop_assert_eq!(keys, vars.iter().collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn search_scores_match_recount(seed in any::<u64>()) {
        let mut r = rng(seed);
        let reg = random_registry(&mut r);
        let words = ["resource", "system", "water", "ZZZ", "rs1", "case", "é", "sector", "u"];
        let n = r.gen_range(1..=3);
        let text: Vec<&str> = (0..n).map(|_| words[r.gen_range(0..words.len())]).collect();
        let text = text.join(" ");
        prop_assert_eq!(reg.keyword_search(&text), brute_force_search(&reg.union(), &text, reg.vocab()));
    }

    #[test]
    fn save_load_identity(seed in any::<u64>()) {
        let reg = random_registry(&mut rng(seed));
        let dir = tempfile::tempdir().unwrap();
        reg.save(dir.path()).unwrap();
        let back = Registry::load(dir.path(), Vocab::default()).unwrap();
        prop_assert_eq!(back, reg);
    }

    #[test]
    fn hierarchy_terminates_on_cycles(seed in any::<u64>()) {
        let v = Vocab::default();
        let mut r = rng(seed);
        let nodes = iri_pool(&v, 12);
        let mut g = Graph::new();
        for _ in 0..r.gen_range(0..60) {
            let a = &nodes[r.gen_range(0..nodes.len())];
            let b = &nodes[r.gen_range(0..nodes.len())];
            g.insert(Triple::link(a, &v.skos_narrower, b));
        }
        let root = &nodes[0];
        let out = traverse(&g, root, Direction::Narrower, &v);
        let mut dedup = out.clone();
        dedup.sort();
        dedup.dedup();
        prop_assert_eq!(dedup.len(), out.len());
        prop_assert!(!out.contains(root));
        prop_assert!(out.len() < nodes.len());
    }

    #[test]
    fn split_name_reassembles(base in "[A-Za-z][A-Za-z0-9_]{0,12}", ctx in proptest::option::of("[A-Za-z]{1,8}[0-9]{4}")) {
        let name = match &ctx {
            Some(c) => format!("{base}_{c}"),
            None => base.clone(),
        };
        let split = split_name(&name);
        match &split.context {
            Some(c) => prop_assert_eq!(format!("{}_{}", split.base, c), name),
            None => prop_assert_eq!(split.base, name),
        }
        if ctx.is_some() {
            prop_assert_eq!(split.context, ctx);
        }
    }
}

#[test]
fn search_ranks_full_matches_first() {
    let mut reg = Registry::default();
    reg.seed_framework("Ostrom2009").unwrap();
    let hits = keyword_search(&reg.union(), "resource system", reg.vocab());
    let first_single = hits.iter().position(|(_, s)| *s == 1).unwrap();
    assert!(hits[..first_single].iter().all(|(_, s)| *s == 2));
    assert!(hits[first_single..].iter().all(|(_, s)| *s == 1));
    let rs = reg.vocab().local("ResourceSystems_Ostrom2009").unwrap();
    assert!(hits[..first_single].iter().any(|(i, _)| *i == rs));
}
