use std::collections::{BTreeMap, BTreeSet};

use super::term::{Iri, Term, Triple};

type Spo = BTreeMap<Iri, BTreeMap<Iri, BTreeSet<Term>>>;
type Pos = BTreeMap<Iri, BTreeMap<Term, BTreeSet<Iri>>>;
type Osp = BTreeMap<Term, BTreeMap<Iri, BTreeSet<Iri>>>;

/// Which of the three permutation indexes a lookup goes through.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexKind {
    Subject,
    Predicate,
    Object,
}

/// An indexed set of triples.
///
/// Every triple is stored in three permutation indexes (SPO, POS, OSP). All
/// mutation goes through [`Graph::insert`] and [`Graph::remove`], which keep
/// the three in step.
#[derive(Clone, Default, Debug)]
pub struct Graph {
    spo: Spo,
    pos: Pos,
    osp: Osp,
    len: usize,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len && self.spo == other.spo
    }
}

impl Eq for Graph {}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Inserts a triple. Returns `false` if it was already present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        let (s, p, o) = triple.into_parts();
        let added = self
            .spo
            .entry(s.clone())
            .or_default()
            .entry(p.clone())
            .or_default()
            .insert(o.clone());
        if !added {
            return false;
        }
        self.pos
            .entry(p.clone())
            .or_default()
            .entry(o.clone())
            .or_default()
            .insert(s.clone());
        self.osp.entry(o).or_default().entry(s).or_default().insert(p);
        self.len += 1;
        true
    }

    /// Removes a triple. Returns `false` if it was absent.
    pub fn remove(&mut self, triple: &Triple) -> bool {
        let (s, p, o) = (triple.subject(), triple.predicate(), triple.object());
        if !remove_nested(&mut self.spo, s, p, o) {
            return false;
        }
        remove_nested(&mut self.pos, p, o, s);
        remove_nested(&mut self.osp, o, s, p);
        self.len -= 1;
        true
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.spo
            .get(triple.subject())
            .and_then(|m| m.get(triple.predicate()))
            .is_some_and(|set| set.contains(triple.object()))
    }

    pub fn extend<I: IntoIterator<Item = Triple>>(&mut self, triples: I) {
        for t in triples {
            self.insert(t);
        }
    }

    /// Set union; `self` gains every triple of `other`.
    pub fn merge(&mut self, other: &Graph) {
        self.extend(other.iter());
    }

    /// All triples in canonical (S, P, O) order.
    pub fn iter(&self) -> impl Iterator<Item = Triple> + '_ {
        self.spo.iter().flat_map(|(s, pm)| {
            pm.iter().flat_map(move |(p, os)| {
                os.iter()
                    .map(move |o| Triple::new_unchecked(s.clone(), p.clone(), o.clone()))
            })
        })
    }

    /// Distinct subjects in canonical order.
    pub fn subjects(&self) -> impl Iterator<Item = &Iri> {
        self.spo.keys()
    }

    /// Distinct predicates in canonical order.
    pub fn predicates(&self) -> impl Iterator<Item = &Iri> {
        self.pos.keys()
    }

    /// Distinct IRIs occurring as subject or object.
    pub fn nodes(&self) -> BTreeSet<Iri> {
        let mut out: BTreeSet<Iri> = self.spo.keys().cloned().collect();
        out.extend(self.osp.keys().filter_map(|t| t.as_iri().cloned()));
        out
    }

    /// Objects of `(subject, predicate, ?)`.
    pub fn objects(&self, subject: &Iri, predicate: &Iri) -> Vec<Term> {
        self.spo
            .get(subject)
            .and_then(|m| m.get(predicate))
            .map(|set| set.iter().cloned().collect())
            .unwrap_or_default()
    }

    /// IRI objects of `(subject, predicate, ?)`.
    pub fn object_iris(&self, subject: &Iri, predicate: &Iri) -> Vec<Iri> {
        self.spo
            .get(subject)
            .and_then(|m| m.get(predicate))
            .map(|set| set.iter().filter_map(|t| t.as_iri().cloned()).collect())
            .unwrap_or_default()
    }

    /// Subjects of `(?, predicate, object)`.
    pub fn subjects_of(&self, predicate: &Iri, object: &Term) -> Vec<Iri> {
        self.pos
            .get(predicate)
            .and_then(|m| m.get(object))
            .map(|set| set.iter().cloned().collect())
            .unwrap_or_default()
    }

    /// `true` if the IRI-objected triple is present.
    pub fn has(&self, subject: &Iri, predicate: &Iri, object: &Iri) -> bool {
        self.spo
            .get(subject)
            .and_then(|m| m.get(predicate))
            .is_some_and(|set| set.contains(&Term::Iri(object.clone())))
    }

    pub fn mentions(&self, node: &Iri) -> bool {
        self.spo.contains_key(node) || self.osp.contains_key(&Term::Iri(node.clone()))
    }

    /// Triples agreeing with every bound position, in canonical order.
    pub fn matching(&self, s: Option<&Iri>, p: Option<&Iri>, o: Option<&Term>) -> Vec<Triple> {
        let kind = if s.is_some() {
            IndexKind::Subject
        } else if p.is_some() {
            IndexKind::Predicate
        } else if o.is_some() {
            IndexKind::Object
        } else {
            IndexKind::Subject
        };
        self.matching_via(kind, s, p, o)
    }

    /// Same contract as [`Graph::matching`] but forced through one index.
    pub fn matching_via(&self, kind: IndexKind, s: Option<&Iri>, p: Option<&Iri>, o: Option<&Term>) -> Vec<Triple> {
        let mut out = Vec::new();
        match kind {
            IndexKind::Subject => {
                for (ts, pm) in bound_or_all(&self.spo, s) {
                    for (tp, os) in bound_or_all(pm, p) {
                        for to in set_bound_or_all(os, o) {
                            out.push(Triple::new_unchecked(ts.clone(), tp.clone(), to.clone()));
                        }
                    }
                }
            }
            IndexKind::Predicate => {
                for (tp, om) in bound_or_all(&self.pos, p) {
                    for (to, ss) in bound_or_all(om, o) {
                        for ts in set_bound_or_all(ss, s) {
                            out.push(Triple::new_unchecked(ts.clone(), tp.clone(), to.clone()));
                        }
                    }
                }
            }
            IndexKind::Object => {
                for (to, sm) in bound_or_all(&self.osp, o) {
                    for (ts, ps) in bound_or_all(sm, s) {
                        for tp in set_bound_or_all(ps, p) {
                            out.push(Triple::new_unchecked(ts.clone(), tp.clone(), to.clone()));
                        }
                    }
                }
            }
        }
        if kind != IndexKind::Subject {
            out.sort_unstable();
        }
        out
    }

    /// Number of triples agreeing with the bound positions, without
    /// materializing them.
    pub fn count_matching(&self, s: Option<&Iri>, p: Option<&Iri>, o: Option<&Term>) -> usize {
        match (s, p, o) {
            (None, None, None) => self.len,
            (Some(s), None, None) => self.spo.get(s).map_or(0, |m| m.values().map(BTreeSet::len).sum()),
            (None, Some(p), None) => self.pos.get(p).map_or(0, |m| m.values().map(BTreeSet::len).sum()),
            (None, None, Some(o)) => self.osp.get(o).map_or(0, |m| m.values().map(BTreeSet::len).sum()),
            _ => self.matching(s, p, o).len(),
        }
    }
}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        let mut g = Graph::new();
        g.extend(iter);
        g
    }
}

fn bound_or_all<'a, K: Ord, V>(
    map: &'a BTreeMap<K, V>,
    key: Option<&K>,
) -> Box<dyn Iterator<Item = (&'a K, &'a V)> + 'a> {
    match key {
        Some(k) => Box::new(map.get_key_value(k).into_iter()),
        None => Box::new(map.iter()),
    }
}

fn set_bound_or_all<'a, K: Ord>(set: &'a BTreeSet<K>, key: Option<&K>) -> Box<dyn Iterator<Item = &'a K> + 'a> {
    match key {
        Some(k) => Box::new(set.get(k).into_iter()),
        None => Box::new(set.iter()),
    }
}

fn remove_nested<A: Ord, B: Ord, C: Ord>(map: &mut BTreeMap<A, BTreeMap<B, BTreeSet<C>>>, a: &A, b: &B, c: &C) -> bool {
    let Some(inner) = map.get_mut(a) else {
        return false;
    };
    let Some(set) = inner.get_mut(b) else {
        return false;
    };
    if !set.remove(c) {
        return false;
    }
    if set.is_empty() {
        inner.remove(b);
    }
    if inner.is_empty() {
        map.remove(a);
    }
    true
}
