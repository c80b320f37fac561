//! The case registry: T-Box, seeded frameworks, ingested cases and the
//! shared GlobalConcepts, with querying and on-disk persistence.

mod persist;
mod query;
mod search;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::path::PathBuf;

use thiserror::Error;

use crate::normalize::{contextualize_link, normalize, NormalizationReport, NormalizeError};
use crate::rdf::{Graph, Iri, PrefixMap, Triple};
use crate::sescore::{self, seed_tbox, validate, Finding, SeedError, ValidationReport};
use crate::Vocab;

pub use persist::{manifest_digest, MANIFEST};
pub use query::{evaluate, BindingSet, QueryError, QueryPattern, Row, TriplePattern};
pub use search::{keyword_search, tokens};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StoreError {
    #[error("invalid case id `{0}`: use letters, digits, `-` and `_`, starting with a letter or digit")]
    InvalidCaseId(String),
    #[error("case `{0}` already exists")]
    DuplicateCase(String),
    #[error("unknown case `{0}`")]
    UnknownCase(String),
    #[error("{} is not in the registry", .0.as_str())]
    UnknownNode(Iri),
    #[error("registry would stop validating:\n{0}")]
    Validation(ValidationReport),
    #[error(transparent)]
    Normalize(#[from] NormalizeError),
    #[error(transparent)]
    Seed(#[from] SeedError),
    #[error("{}:{line}: {message}", .file.display())]
    Corrupt {
        file: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{}: {message}", .path.display())]
    Io { path: PathBuf, message: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Narrower,
    Broader,
}

/// A normalized case that has not been committed yet.
#[derive(Clone, Debug)]
pub struct PreparedCase {
    pub case_id: String,
    pub graph: Graph,
    pub report: NormalizationReport,
    /// The registry's globals plus any minted for this case.
    pub globals: Graph,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Registry {
    vocab: Vocab,
    tbox: Graph,
    frameworks: BTreeMap<String, Graph>,
    cases: BTreeMap<String, Graph>,
    globals: Graph,
}

impl Default for Registry {
    fn default() -> Self {
        Self::new(Vocab::default())
    }
}

pub fn is_case_id(id: &str) -> bool {
    id.len() <= 128
        && id.chars().next().is_some_and(|c| c.is_ascii_alphanumeric())
        && id.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
}

impl Registry {
    /// An empty registry holding only the T-Box.
    pub fn new(vocab: Vocab) -> Self {
        Registry {
            tbox: seed_tbox(&vocab),
            vocab,
            frameworks: BTreeMap::new(),
            cases: BTreeMap::new(),
            globals: Graph::new(),
        }
    }

    pub fn vocab(&self) -> &Vocab {
        &self.vocab
    }

    pub fn prefixes(&self) -> PrefixMap {
        PrefixMap::with_builtins(&self.vocab.ns)
    }

    pub fn tbox(&self) -> &Graph {
        &self.tbox
    }

    pub fn globals(&self) -> &Graph {
        &self.globals
    }

    pub fn frameworks(&self) -> &BTreeMap<String, Graph> {
        &self.frameworks
    }

    pub fn cases(&self) -> &BTreeMap<String, Graph> {
        &self.cases
    }

    pub fn case(&self, id: &str) -> Option<&Graph> {
        self.cases.get(id)
    }

    /// All member graphs merged.
    pub fn union(&self) -> Graph {
        let mut g = self.tbox.clone();
        g.merge(&self.globals);
        for part in self.frameworks.values().chain(self.cases.values()) {
            g.merge(part);
        }
        g
    }

    pub fn validate(&self) -> ValidationReport {
        validate(&self.union(), &self.vocab)
    }

    /// Error findings present in `after` but not in the current registry.
    fn regressions(&self, after: &Graph) -> ValidationReport {
        let before: BTreeSet<Finding> = self.validate().errors().cloned().collect();
        ValidationReport {
            findings: validate(after, &self.vocab)
                .errors()
                .filter(|f| !before.contains(f))
                .cloned()
                .collect(),
        }
    }

    /// Seeds a built-in framework. Returns `false` when it is already present.
    pub fn seed_framework(&mut self, framework_id: &str) -> Result<bool, StoreError> {
        if self.frameworks.contains_key(framework_id) {
            return Ok(false);
        }
        let mut globals = self.globals.clone();
        let g = sescore::seed_framework(framework_id, &mut globals, &self.vocab)?;
        let mut after = self.union();
        after.merge(&g);
        after.merge(&globals);
        let regressions = self.regressions(&after);
        if regressions.has_errors() {
            return Err(StoreError::Validation(regressions));
        }
        self.frameworks.insert(framework_id.to_string(), g);
        self.globals = globals;
        Ok(true)
    }

    /// Normalizes `raw` against the registry and applies `links` as
    /// contextualization edges. Nothing is committed.
    pub fn prepare_case(&self, case_id: &str, raw: &Graph, links: &[(Iri, Iri)]) -> Result<PreparedCase, StoreError> {
        let mut context = self.union();
        let (mut graph, report) = normalize(raw, &mut context, case_id, &self.vocab)?;
        let mut globals = self.globals.clone();
        for minted in &report.minted_globals {
            globals.extend(context.matching(Some(minted), None, None));
        }
        context.merge(&graph);
        for (case_local, framework_local) in links {
            contextualize_link(case_local, framework_local, &mut graph, &context, &self.vocab)?;
        }
        Ok(PreparedCase {
            case_id: case_id.to_string(),
            graph,
            report,
            globals,
        })
    }

    /// Validation of the registry as it would be after committing `case`.
    pub fn validate_prepared(&self, case: &PreparedCase) -> ValidationReport {
        let mut after = self.union();
        after.merge(&case.graph);
        after.merge(&case.globals);
        validate(&after, &self.vocab)
    }

    /// Adds a prepared case. Rejected, leaving the registry unchanged, when
    /// the id is taken or invalid or the union would gain error findings.
    pub fn commit(&mut self, case: PreparedCase) -> Result<(), StoreError> {
        if !is_case_id(&case.case_id) {
            return Err(StoreError::InvalidCaseId(case.case_id));
        }
        if self.cases.contains_key(&case.case_id) {
            return Err(StoreError::DuplicateCase(case.case_id));
        }
        let mut after = self.union();
        after.merge(&case.graph);
        after.merge(&case.globals);
        let regressions = self.regressions(&after);
        if regressions.has_errors() {
            return Err(StoreError::Validation(regressions));
        }
        self.cases.insert(case.case_id, case.graph);
        self.globals = case.globals;
        Ok(())
    }

    /// Normalizes and commits in one step.
    pub fn ingest(
        &mut self,
        case_id: &str,
        raw: &Graph,
        links: &[(Iri, Iri)],
    ) -> Result<NormalizationReport, StoreError> {
        if !is_case_id(case_id) {
            return Err(StoreError::InvalidCaseId(case_id.to_string()));
        }
        if self.cases.contains_key(case_id) {
            return Err(StoreError::DuplicateCase(case_id.to_string()));
        }
        let prepared = self.prepare_case(case_id, raw, links)?;
        let report = prepared.report.clone();
        self.commit(prepared)?;
        Ok(report)
    }

    /// Adds an already normalized case graph as is.
    pub fn add_case(&mut self, case_id: &str, g: Graph) -> Result<(), StoreError> {
        self.commit(PreparedCase {
            case_id: case_id.to_string(),
            graph: g,
            report: NormalizationReport::default(),
            globals: self.globals.clone(),
        })
    }

    pub fn remove_case(&mut self, case_id: &str) -> Result<Graph, StoreError> {
        self.cases
            .remove(case_id)
            .ok_or_else(|| StoreError::UnknownCase(case_id.to_string()))
    }

    pub fn bgp_query(&self, q: &QueryPattern) -> BindingSet {
        evaluate(&self.union(), q)
    }

    pub fn keyword_search(&self, text: &str) -> Vec<(Iri, usize)> {
        keyword_search(&self.union(), text, &self.vocab)
    }

    /// Nodes reachable from `root` along `skos:narrower` or `skos:broader`,
    /// breadth-first, each once, excluding `root`.
    pub fn hierarchy(&self, root: &Iri, direction: Direction) -> Result<Vec<Iri>, StoreError> {
        let g = self.union();
        if !g.mentions(root) {
            return Err(StoreError::UnknownNode(root.clone()));
        }
        Ok(traverse(&g, root, direction, &self.vocab))
    }

    /// Replaces a stored case graph wholesale, bypassing validation. Meant
    /// for loading and for tests that build deliberately broken registries.
    pub(crate) fn insert_raw(&mut self, kind: persist::Part, id: &str, g: Graph) {
        match kind {
            persist::Part::Tbox => self.tbox = g,
            persist::Part::Globals => self.globals = g,
            persist::Part::Framework => {
                self.frameworks.insert(id.to_string(), g);
            }
            persist::Part::Case => {
                self.cases.insert(id.to_string(), g);
            }
        }
    }
}

/// Breadth-first closure over `skos:narrower` / `skos:broader` with a
/// visited set, so cycles terminate.
pub fn traverse(g: &Graph, root: &Iri, direction: Direction, v: &Vocab) -> Vec<Iri> {
    let pred = match direction {
        Direction::Narrower => &v.skos_narrower,
        Direction::Broader => &v.skos_broader,
    };
    let mut seen: BTreeSet<Iri> = BTreeSet::from([root.clone()]);
    let mut queue = VecDeque::from([root.clone()]);
    let mut out = Vec::new();
    while let Some(node) = queue.pop_front() {
        for next in g.object_iris(&node, pred) {
            if seen.insert(next.clone()) {
                out.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    out
}

/// Every triple of `g` whose subject is `node`.
pub fn describe(g: &Graph, node: &Iri) -> Vec<Triple> {
    g.matching(Some(node), None, None)
}
