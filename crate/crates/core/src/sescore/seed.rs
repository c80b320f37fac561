use std::collections::BTreeMap;

use super::{resolve_global, SeedError};
use crate::rdf::{Graph, Iri, Literal, Triple};
use crate::Vocab;

/// Built-in framework tables, keyed by framework id.
pub const BUILTIN_FRAMEWORKS: [(&str, &str); 3] = [
    ("Ostrom2007", include_str!("../../data/Ostrom2007.txt")),
    ("Ostrom2009", include_str!("../../data/Ostrom2009.txt")),
    ("McGinnisOstrom2014", include_str!("../../data/McGinnisOstrom2014.txt")),
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TierEntry {
    pub code: String,
    pub label: String,
    pub parent: Option<String>,
}

/// One framework's tiered variable table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameworkSeed {
    pub framework_id: String,
    pub tiers: Vec<TierEntry>,
}

impl FrameworkSeed {
    pub fn builtin(framework_id: &str) -> Result<Self, SeedError> {
        let (_, text) = BUILTIN_FRAMEWORKS
            .iter()
            .find(|(id, _)| *id == framework_id)
            .ok_or_else(|| SeedError::UnknownFramework(framework_id.to_string()))?;
        Self::parse(framework_id, text)
    }

    /// Parses `code | label | parent` lines. Blank lines and `#` comments are
    /// skipped; an empty parent column marks a first-tier entry.
    pub fn parse(framework_id: &str, text: &str) -> Result<Self, SeedError> {
        let mut tiers: Vec<TierEntry> = Vec::new();
        let mut lines: BTreeMap<String, usize> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('|').map(str::trim).collect();
            if !(2..=3).contains(&cols.len()) || cols[0].is_empty() || cols[1].is_empty() {
                return Err(SeedError::Table {
                    line: i + 1,
                    message: "expected `code | label | parent`".into(),
                });
            }
            if !cols[0].chars().all(|c| c.is_ascii_alphanumeric()) {
                return Err(SeedError::Table {
                    line: i + 1,
                    message: format!("code `{}` must be alphanumeric", cols[0]),
                });
            }
            if lines.insert(cols[0].to_string(), i + 1).is_some() {
                return Err(SeedError::Table {
                    line: i + 1,
                    message: format!("duplicate code `{}`", cols[0]),
                });
            }
            tiers.push(TierEntry {
                code: cols[0].to_string(),
                label: cols[1].to_string(),
                parent: cols.get(2).filter(|p| !p.is_empty()).map(|p| p.to_string()),
            });
        }
        for entry in &tiers {
            if let Some(parent) = &entry.parent {
                if !lines.contains_key(parent) {
                    return Err(SeedError::Table {
                        line: lines[&entry.code],
                        message: format!("parent `{parent}` of `{}` is not defined", entry.code),
                    });
                }
            }
        }
        Ok(FrameworkSeed {
            framework_id: framework_id.to_string(),
            tiers,
        })
    }

    pub fn first_tier(&self) -> impl Iterator<Item = &TierEntry> {
        self.tiers.iter().filter(|t| t.parent.is_none())
    }

    pub fn children<'a>(&'a self, code: &'a str) -> impl Iterator<Item = &'a TierEntry> + 'a {
        self.tiers.iter().filter(move |t| t.parent.as_deref() == Some(code))
    }

    /// Context-free base name: `<LabelSlug>` for first-tier entries,
    /// `<Code>_<LabelSlug>` below that.
    pub fn base_name(&self, entry: &TierEntry) -> String {
        match entry.parent {
            None => camel_slug(&entry.label),
            Some(_) => format!("{}_{}", entry.code, camel_slug(&entry.label)),
        }
    }

    /// Base name of the GlobalConcept an entry refers to. First-tier
    /// categories are printed in the plural in some framework versions
    /// ("Resource systems") and the singular in others; the global is the
    /// singular so every version meets at one hub.
    pub fn global_base(&self, entry: &TierEntry) -> String {
        let base = self.base_name(entry);
        match entry.parent {
            None => singular(&base),
            Some(_) => base,
        }
    }

    /// Local concept name: base name suffixed with the framework id.
    pub fn local_name(&self, entry: &TierEntry) -> String {
        format!("{}_{}", self.base_name(entry), self.framework_id)
    }
}

/// CamelCase slug of a label. Parenthesised text is dropped and words are
/// split on anything that is not an ASCII letter or digit.
pub fn camel_slug(label: &str) -> String {
    let mut depth = 0usize;
    let mut kept = String::new();
    for c in label.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            c if depth == 0 => kept.push(c),
            _ => {}
        }
    }
    kept.split(|c: char| !c.is_ascii_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(|w| {
            let mut chars = w.chars();
            let first = chars.next().map(|c| c.to_ascii_uppercase()).unwrap_or_default();
            std::iter::once(first).chain(chars).collect::<String>()
        })
        .collect()
}

fn singular(camel: &str) -> String {
    let last_word = camel.rfind(|c: char| c.is_ascii_uppercase()).unwrap_or(0);
    let word = &camel[last_word..];
    if word.len() > 3 && word.ends_with('s') && !word.ends_with("ss") {
        camel[..camel.len() - 1].to_string()
    } else {
        camel.to_string()
    }
}

/// Seeds a built-in framework. See [`seed_framework_from`].
pub fn seed_framework(framework_id: &str, registry: &mut Graph, v: &Vocab) -> Result<Graph, SeedError> {
    seed_framework_from(&FrameworkSeed::builtin(framework_id)?, registry, v)
}

/// Builds a framework graph from its table.
///
/// The framework node `<id>_SESFramework` is typed Framework and Study and is
/// `described_by` the concept graph `ConceptGraph_<id>`. Every table entry
/// becomes a LocalConcept; first-tier entries are `skos:member`s of the
/// concept graph, children hang off their parent via `skos:narrower` /
/// `skos:broader`. Each local concept `refers_to` a GlobalConcept, minted into
/// `registry` if it does not exist yet.
pub fn seed_framework_from(seed: &FrameworkSeed, registry: &mut Graph, v: &Vocab) -> Result<Graph, SeedError> {
    let id = &seed.framework_id;
    let mut g = Graph::new();
    let framework = v.local(&format!("{id}_SESFramework"))?;
    let cgraph = v.local(&format!("ConceptGraph_{id}"))?;

    g.insert(Triple::link(&framework, &v.rdf_type, &v.framework));
    g.insert(Triple::link(&framework, &v.rdf_type, &v.study));
    g.insert(Triple::labelled(
        &framework,
        &v.rdfs_label,
        Literal::simple(format!("{id} SES framework")),
    ));
    g.insert(Triple::link(&framework, &v.described_by, &cgraph));
    g.insert(Triple::link(&cgraph, &v.rdf_type, &v.concept_graph));
    g.insert(Triple::labelled(
        &cgraph,
        &v.rdfs_label,
        Literal::simple(format!("{id} concept graph")),
    ));

    let mut iris: BTreeMap<&str, Iri> = BTreeMap::new();
    for entry in &seed.tiers {
        let local = v.local(&seed.local_name(entry))?;
        g.insert(Triple::link(&local, &v.rdf_type, &v.local_concept));
        g.insert(Triple::labelled(
            &local,
            &v.rdfs_label,
            Literal::simple(entry.label.clone()),
        ));
        g.insert(Triple::labelled(
            &local,
            &v.skos_notation,
            Literal::simple(entry.code.clone()),
        ));
        let (global, _) = resolve_global(registry, &seed.global_base(entry), v)?;
        g.insert(Triple::link(&local, &v.refers_to, &global));
        iris.insert(entry.code.as_str(), local);
    }
    for entry in &seed.tiers {
        let node = &iris[entry.code.as_str()];
        match &entry.parent {
            None => {
                g.insert(Triple::link(&cgraph, &v.skos_member, node));
            }
            Some(parent) => {
                let parent = &iris[parent.as_str()];
                g.insert(Triple::link(parent, &v.skos_narrower, node));
                g.insert(Triple::link(node, &v.skos_broader, parent));
            }
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normalize::split_name;

    #[test]
    fn ostrom2009_tier_counts() {
        let seed = FrameworkSeed::builtin("Ostrom2009").unwrap();
        let first: Vec<_> = seed.first_tier().map(|t| t.code.as_str()).collect();
        assert_eq!(first, ["RS", "RU", "GS", "U"]);
        let counts: Vec<usize> = first.iter().map(|c| seed.children(c).count()).collect();
        assert_eq!(counts, [9, 7, 8, 8]);
    }

    #[test]
    fn mcginnis_ostrom2014_tier_counts() {
        let seed = FrameworkSeed::builtin("McGinnisOstrom2014").unwrap();
        let first: Vec<_> = seed.first_tier().map(|t| t.code.as_str()).collect();
        assert_eq!(first, ["S", "RS", "GS", "RU"]);
        let counts: Vec<usize> = first.iter().map(|c| seed.children(c).count()).collect();
        assert_eq!(counts, [7, 9, 8, 4]);
    }

    #[test]
    fn ostrom2007_names() {
        let seed = FrameworkSeed::builtin("Ostrom2007").unwrap();
        let names: Vec<String> = seed.tiers.iter().map(|t| seed.local_name(t)).collect();
        assert_eq!(
            names,
            [
                "ResourceSystem_Ostrom2007",
                "RS1_Sector_Ostrom2007",
                "RS9_Location_Ostrom2007",
                "GovernanceSystem_Ostrom2007",
                "User_Ostrom2007"
            ]
        );
        for t in &seed.tiers {
            let split = split_name(&seed.local_name(t));
            assert_eq!(split.base, seed.base_name(t));
            assert_eq!(split.context.as_deref(), Some("Ostrom2007"));
        }
    }

    #[test]
    fn first_tier_globals_are_singular() {
        let v = Vocab::default();
        let mut reg = Graph::new();
        let g = seed_framework("Ostrom2009", &mut reg, &v).unwrap();
        let rs = v.local("ResourceSystems_Ostrom2009").unwrap();
        assert!(g.has(&rs, &v.refers_to, &v.global("ResourceSystem").unwrap()));
        let users = v.local("Users_Ostrom2009").unwrap();
        assert!(g.has(&users, &v.refers_to, &v.global("User").unwrap()));
        let sector = v.local("RS1_Sector_Ostrom2009").unwrap();
        assert!(g.has(&sector, &v.refers_to, &v.global("RS1_Sector").unwrap()));
        assert_eq!(
            singular("SocialEconomicAndPoliticalSettings"),
            "SocialEconomicAndPoliticalSetting"
        );
        assert_eq!(singular("Process"), "Process");
    }

    #[test]
    fn camel_slugs() {
        assert_eq!(camel_slug("Sector (e.g., water, forests, pasture, fish)"), "Sector");
        assert_eq!(
            camel_slug("Social, economic, and political settings"),
            "SocialEconomicAndPoliticalSettings"
        );
        assert_eq!(camel_slug("Knowledge of SES/mental model"), "KnowledgeOfSESMentalModel");
        assert_eq!(camel_slug("Property-rights systems"), "PropertyRightsSystems");
    }

    #[test]
    fn table_errors() {
        assert!(matches!(
            FrameworkSeed::parse("X", "A | a |\nA | b |"),
            Err(SeedError::Table { line: 2, .. })
        ));
        assert!(matches!(
            FrameworkSeed::parse("X", "A1 | a | Z"),
            Err(SeedError::Table { line: 1, .. })
        ));
        assert!(matches!(
            FrameworkSeed::parse("X", "just text"),
            Err(SeedError::Table { .. })
        ));
        assert!(matches!(
            seed_framework("Ostrom1990", &mut Graph::new(), &Vocab::default()),
            Err(SeedError::UnknownFramework(_))
        ));
    }

    #[test]
    fn seeded_hierarchy_is_inverse_closed() {
        let v = Vocab::default();
        let mut reg = Graph::new();
        let g = seed_framework("Ostrom2009", &mut reg, &v).unwrap();
        let narrower = g.matching(None, Some(&v.skos_narrower), None);
        let broader = g.matching(None, Some(&v.skos_broader), None);
        assert_eq!(narrower.len(), 32);
        assert_eq!(broader.len(), 32);
        for t in narrower {
            let child = t.object().as_iri().unwrap();
            assert!(g.has(child, &v.skos_broader, t.subject()));
        }
    }
}
