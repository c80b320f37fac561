//! Conjunctive basic-graph-pattern queries.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::rdf::{Graph, Iri, Literal, PrefixMap, Term, Variable};
use crate::Vocab;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("query line {line}: {message}")]
pub struct QueryError {
    pub line: usize,
    pub message: String,
}

/// One triple pattern; any position may hold a variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriplePattern {
    pub subject: Term,
    pub predicate: Term,
    pub object: Term,
}

impl TriplePattern {
    pub fn new(subject: Term, predicate: Term, object: Term) -> Self {
        TriplePattern {
            subject,
            predicate,
            object,
        }
    }

    fn slots(&self) -> [&Term; 3] {
        [&self.subject, &self.predicate, &self.object]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryPattern {
    pub patterns: Vec<TriplePattern>,
}

impl QueryPattern {
    /// Variables in order of first appearance.
    pub fn variables(&self) -> Vec<String> {
        let mut seen = Vec::new();
        for p in &self.patterns {
            for slot in p.slots() {
                if let Term::Variable(v) = slot {
                    if !seen.iter().any(|s| s == v.name()) {
                        seen.push(v.name().to_string());
                    }
                }
            }
        }
        seen
    }

    /// Parses query text: one `s p o` pattern per line, or several on a line
    /// separated by ` . `. Terms are `?vars`, `<IRIs>`, curies, `a`,
    /// quoted literals, or bare names. A bare name that is a SES-core term
    /// (`refers_to`, `LocalConcept`) resolves into the SES-core namespace,
    /// anything else into the local-concept namespace.
    pub fn parse(text: &str, pm: &PrefixMap, v: &Vocab) -> Result<Self, QueryError> {
        let mut patterns = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let err = |message: String| QueryError { line: line_no, message };
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let tokens = tokenize(line).map_err(err)?;
            for group in tokens.split(|t| t == ".") {
                if group.is_empty() {
                    continue;
                }
                if group.len() != 3 {
                    return Err(err(format!(
                        "expected subject, predicate and object, found {} term(s)",
                        group.len()
                    )));
                }
                let terms: Vec<Term> = group
                    .iter()
                    .map(|t| parse_term(t, pm, v))
                    .collect::<Result<_, _>>()
                    .map_err(err)?;
                if terms[0].as_literal().is_some() || terms[1].as_literal().is_some() {
                    return Err(err("literals are only allowed in object position".into()));
                }
                let [s, p, o]: [Term; 3] = terms.try_into().expect("three terms");
                patterns.push(TriplePattern::new(s, p, o));
            }
        }
        if patterns.is_empty() {
            return Err(QueryError {
                line: 0,
                message: "query has no patterns".into(),
            });
        }
        Ok(QueryPattern { patterns })
    }
}

fn tokenize(line: &str) -> Result<Vec<String>, String> {
    let mut tokens = Vec::new();
    let mut chars = line.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let mut tok = String::new();
        if c == '"' {
            tok.push(chars.next().unwrap());
            let mut closed = false;
            while let Some(c) = chars.next() {
                tok.push(c);
                if c == '\\' {
                    if let Some(e) = chars.next() {
                        tok.push(e);
                    }
                } else if c == '"' {
                    closed = true;
                    break;
                }
            }
            if !closed {
                return Err("unterminated string literal".into());
            }
        }
        while let Some(&c) = chars.peek() {
            if c.is_whitespace() {
                break;
            }
            tok.push(c);
            chars.next();
        }
        tokens.push(tok);
    }
    Ok(tokens)
}

fn unescape(body: &str) -> Result<String, String> {
    let mut out = String::new();
    let mut chars = body.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        out.push(match chars.next() {
            Some('n') => '\n',
            Some('t') => '\t',
            Some('r') => '\r',
            Some('"') => '"',
            Some('\\') => '\\',
            other => {
                return Err(format!(
                    "bad escape `\\{}`",
                    other.map(String::from).unwrap_or_default()
                ))
            }
        });
    }
    Ok(out)
}

fn parse_term(tok: &str, pm: &PrefixMap, v: &Vocab) -> Result<Term, String> {
    if let Some(name) = tok.strip_prefix('?') {
        return Variable::new(name).map(Term::Variable).map_err(|e| e.to_string());
    }
    if tok == "a" {
        return Ok(Term::Iri(v.rdf_type.clone()));
    }
    if let Some(inner) = tok.strip_prefix('<').and_then(|t| t.strip_suffix('>')) {
        return Iri::new(inner).map(Term::Iri).map_err(|e| e.to_string());
    }
    if let Some(rest) = tok.strip_prefix('"') {
        let close = rest.rfind('"').ok_or("unterminated string literal")?;
        let lexical = unescape(&rest[..close])?;
        let suffix = &rest[close + 1..];
        let lit = if let Some(lang) = suffix.strip_prefix('@') {
            Literal::with_language(lexical, lang).map_err(|e| e.to_string())?
        } else if let Some(dt) = suffix.strip_prefix("^^") {
            match parse_term(dt, pm, v)? {
                Term::Iri(dt) => Literal::typed(lexical, dt),
                _ => return Err(format!("bad datatype `{dt}`")),
            }
        } else if suffix.is_empty() {
            Literal::simple(lexical)
        } else {
            return Err(format!("unexpected `{suffix}` after literal"));
        };
        return Ok(Term::Literal(lit));
    }
    if tok.contains(':') {
        return pm.expand(tok).map(Term::Iri).map_err(|e| e.to_string());
    }
    let sescore = Iri::new(format!("{}{tok}", v.ns.sescore)).map_err(|e| e.to_string())?;
    if v.is_tbox_class(&sescore) || v.properties().contains(&&sescore) {
        Ok(Term::Iri(sescore))
    } else {
        v.local(tok).map(Term::Iri).map_err(|e| e.to_string())
    }
}

pub type Row = BTreeMap<String, Term>;

/// Solutions of a query: one row per match, each binding every variable.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BindingSet {
    pub variables: Vec<String>,
    pub rows: Vec<Row>,
}

impl BindingSet {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Header of `?var` names, then one tab-separated row per solution.
    /// IRIs are compacted with `pm` where possible.
    pub fn to_tsv(&self, pm: &PrefixMap) -> String {
        let mut out = String::new();
        let header: Vec<String> = self.variables.iter().map(|v| format!("?{v}")).collect();
        let _ = writeln!(out, "{}", header.join("\t"));
        for row in &self.rows {
            let cells: Vec<String> = self
                .variables
                .iter()
                .map(|v| match &row[v] {
                    Term::Iri(i) => pm.compact(i),
                    other => other.to_string(),
                })
                .collect();
            let _ = writeln!(out, "{}", cells.join("\t"));
        }
        out
    }
}

fn resolve<'a>(slot: &'a Term, row: &'a Row) -> Option<&'a Term> {
    match slot {
        Term::Variable(v) => row.get(v.name()),
        t => Some(t),
    }
}

/// Bound IRIs for subject/predicate; `Err` when a bound value can never
/// match that position (a literal subject, say).
fn bound_iri(slot: Option<&Term>) -> Result<Option<&Iri>, ()> {
    match slot {
        None => Ok(None),
        Some(Term::Iri(i)) => Ok(Some(i)),
        Some(_) => Err(()),
    }
}

fn extend(g: &Graph, pattern: &TriplePattern, row: &Row, out: &mut Vec<Row>) {
    let (Ok(s), Ok(p)) = (
        bound_iri(resolve(&pattern.subject, row)),
        bound_iri(resolve(&pattern.predicate, row)),
    ) else {
        return;
    };
    let o = resolve(&pattern.object, row);
    'triples: for t in g.matching(s, p, o) {
        let mut next = row.clone();
        let values = [
            Term::Iri(t.subject().clone()),
            Term::Iri(t.predicate().clone()),
            t.object().clone(),
        ];
        for (slot, value) in pattern.slots().into_iter().zip(values) {
            if let Term::Variable(v) = slot {
                match next.get(v.name()) {
                    Some(existing) if *existing != value => continue 'triples,
                    Some(_) => {}
                    None => {
                        next.insert(v.name().to_string(), value);
                    }
                }
            }
        }
        out.push(next);
    }
}

fn selectivity(g: &Graph, p: &TriplePattern) -> usize {
    let constant = |t: &Term| match t {
        Term::Variable(_) => None,
        t => Some(t.clone()),
    };
    let (s, pr, o) = (constant(&p.subject), constant(&p.predicate), constant(&p.object));
    match (&s, &pr) {
        (Some(Term::Iri(_)) | None, Some(Term::Iri(_)) | None) => {}
        _ => return 0,
    }
    g.count_matching(
        s.as_ref().and_then(Term::as_iri),
        pr.as_ref().and_then(Term::as_iri),
        o.as_ref(),
    )
}

/// Evaluates `q` over `g`. The most selective pattern seeds the bindings;
/// the rest extend them in query order. Rows come back sorted.
pub fn evaluate(g: &Graph, q: &QueryPattern) -> BindingSet {
    let seed = (0..q.patterns.len())
        .min_by_key(|&i| (selectivity(g, &q.patterns[i]), i))
        .unwrap_or(0);
    let order = std::iter::once(seed).chain((0..q.patterns.len()).filter(|&i| i != seed));
    let mut rows = vec![Row::new()];
    for i in order {
        let mut next = Vec::new();
        for row in &rows {
            extend(g, &q.patterns[i], row, &mut next);
        }
        rows = next;
        if rows.is_empty() {
            break;
        }
    }
    rows.sort();
    BindingSet {
        variables: q.variables(),
        rows,
    }
}
