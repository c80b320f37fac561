use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use super::TermError;

/// An absolute IRI.
///
/// Cheap to clone. Ordering follows the canonical `<iri>` form so that
/// graphs sort the same way their serialization does.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Iri(Arc<str>);

impl Iri {
    pub fn new(value: impl AsRef<str>) -> Result<Self, TermError> {
        let value = value.as_ref();
        validate_iri(value)?;
        Ok(Iri(Arc::from(value)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The part after the last `#` or `/`, or the whole IRI if neither occurs.
    pub fn local_name(&self) -> &str {
        let s = self.as_str();
        match s.rfind(['#', '/']) {
            Some(i) => &s[i + 1..],
            None => s,
        }
    }

    fn canonical_chars(&self) -> impl Iterator<Item = char> + '_ {
        std::iter::once('<').chain(self.0.chars()).chain(std::iter::once('>'))
    }
}

fn validate_iri(value: &str) -> Result<(), TermError> {
    let colon = value
        .find(':')
        .ok_or_else(|| TermError::InvalidIri(value.to_string(), "missing scheme"))?;
    let scheme = &value[..colon];
    let mut chars = scheme.chars();
    let scheme_ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'));
    if !scheme_ok {
        return Err(TermError::InvalidIri(value.to_string(), "invalid scheme"));
    }
    if let Some(c) = value.chars().find(|c| {
        c.is_whitespace() || c.is_control() || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\')
    }) {
        let what = if c.is_whitespace() {
            "contains whitespace"
        } else {
            "contains a forbidden character"
        };
        return Err(TermError::InvalidIri(value.to_string(), what));
    }
    Ok(())
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

impl fmt::Debug for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

impl Ord for Iri {
    fn cmp(&self, other: &Self) -> Ordering {
        // Byte order of UTF-8 is code point order, so this agrees with
        // comparing the `<...>` strings, with no allocation.
        let (a, b) = (self.0.as_bytes(), other.0.as_bytes());
        let common = a.iter().zip(b).take_while(|(x, y)| x == y).count();
        match (a.get(common), b.get(common)) {
            (Some(x), Some(y)) => x.cmp(y),
            (None, None) => Ordering::Equal,
            (None, Some(y)) => b'>'.cmp(y),
            (Some(x), None) => x.cmp(&b'>'),
        }
    }
}

impl PartialOrd for Iri {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A literal: lexical form with either a language tag, a datatype, or neither.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Literal {
    lexical: String,
    language: Option<String>,
    datatype: Option<Iri>,
}

impl Literal {
    pub fn simple(lexical: impl Into<String>) -> Self {
        Literal {
            lexical: lexical.into(),
            language: None,
            datatype: None,
        }
    }

    pub fn with_language(lexical: impl Into<String>, language: impl Into<String>) -> Result<Self, TermError> {
        let language = language.into();
        let mut parts = language.split('-');
        let first_ok = parts
            .next()
            .is_some_and(|p| !p.is_empty() && p.len() <= 8 && p.chars().all(|c| c.is_ascii_alphabetic()));
        let rest_ok = parts.all(|p| !p.is_empty() && p.len() <= 8 && p.chars().all(|c| c.is_ascii_alphanumeric()));
        if !(first_ok && rest_ok) {
            return Err(TermError::InvalidLanguageTag(language));
        }
        Ok(Literal {
            lexical: lexical.into(),
            language: Some(language),
            datatype: None,
        })
    }

    pub fn typed(lexical: impl Into<String>, datatype: Iri) -> Self {
        Literal {
            lexical: lexical.into(),
            language: None,
            datatype: Some(datatype),
        }
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn language(&self) -> Option<&str> {
        self.language.as_deref()
    }

    pub fn datatype(&self) -> Option<&Iri> {
        self.datatype.as_ref()
    }
}

impl Literal {
    /// The N-Triples form, character by character.
    fn canonical_chars(&self) -> impl Iterator<Item = char> + '_ {
        std::iter::once('"')
            .chain(escaped_chars(&self.lexical))
            .chain(std::iter::once('"'))
            .chain(self.language.iter().flat_map(|l| std::iter::once('@').chain(l.chars())))
            .chain(
                self.datatype
                    .iter()
                    .flat_map(|d| "^^".chars().chain(d.canonical_chars())),
            )
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("\"")?;
        f.write_str(&escape_string(&self.lexical))?;
        f.write_str("\"")?;
        if let Some(lang) = &self.language {
            write!(f, "@{lang}")?;
        } else if let Some(dt) = &self.datatype {
            write!(f, "^^{dt}")?;
        }
        Ok(())
    }
}

fn escape_char(c: char) -> ([char; 6], usize) {
    let pair = |e| (['\\', e, '\0', '\0', '\0', '\0'], 2);
    match c {
        '"' => pair('"'),
        '\\' => pair('\\'),
        '\n' => pair('n'),
        '\r' => pair('r'),
        '\t' => pair('t'),
        c if c.is_control() => {
            let hex = |shift: u32| {
                char::from_digit((c as u32 >> shift) & 0xF, 16)
                    .unwrap_or('0')
                    .to_ascii_uppercase()
            };
            (['\\', 'u', hex(12), hex(8), hex(4), hex(0)], 6)
        }
        c => ([c, '\0', '\0', '\0', '\0', '\0'], 1),
    }
}

fn escaped_chars(s: &str) -> impl Iterator<Item = char> + '_ {
    s.chars().flat_map(|c| {
        let (buf, n) = escape_char(c);
        buf.into_iter().take(n)
    })
}

/// Escapes a lexical form for use inside a double-quoted string.
pub fn escape_string(s: &str) -> String {
    escaped_chars(s).collect()
}

/// A query variable, written `?name`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Variable(String);

impl Variable {
    pub fn new(name: impl Into<String>) -> Result<Self, TermError> {
        let name = name.into();
        let name = name.strip_prefix('?').map(str::to_string).unwrap_or(name);
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(TermError::InvalidVariable(name));
        }
        Ok(Variable(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?{}", self.0)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Term {
    Iri(Iri),
    Literal(Literal),
    Variable(Variable),
}

impl Term {
    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(lit) => Some(lit),
            _ => None,
        }
    }

    pub fn is_variable(&self) -> bool {
        matches!(self, Term::Variable(_))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(iri) => iri.fmt(f),
            Term::Literal(lit) => lit.fmt(f),
            Term::Variable(var) => var.fmt(f),
        }
    }
}

impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        // Serialized forms start with `"`, `<` and `?` respectively.
        fn rank(t: &Term) -> u8 {
            match t {
                Term::Literal(_) => 0,
                Term::Iri(_) => 1,
                Term::Variable(_) => 2,
            }
        }
        match (self, other) {
            (Term::Iri(a), Term::Iri(b)) => a.cmp(b),
            (Term::Literal(a), Term::Literal(b)) => a.canonical_chars().cmp(b.canonical_chars()),
            (Term::Variable(a), Term::Variable(b)) => a.cmp(b),
            _ => rank(self).cmp(&rank(other)),
        }
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Iri> for Term {
    fn from(iri: Iri) -> Self {
        Term::Iri(iri)
    }
}

impl From<Literal> for Term {
    fn from(lit: Literal) -> Self {
        Term::Literal(lit)
    }
}

impl From<Variable> for Term {
    fn from(var: Variable) -> Self {
        Term::Variable(var)
    }
}

/// A ground statement. Subject and predicate are IRIs; the object is an IRI
/// or a literal, never a variable.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Triple {
    subject: Iri,
    predicate: Iri,
    object: Term,
}

impl Triple {
    pub fn new(subject: Iri, predicate: Iri, object: impl Into<Term>) -> Result<Self, TermError> {
        let object = object.into();
        if let Term::Variable(v) = &object {
            return Err(TermError::VariableInTriple(v.to_string()));
        }
        Ok(Triple {
            subject,
            predicate,
            object,
        })
    }

    pub(crate) fn new_unchecked(subject: Iri, predicate: Iri, object: Term) -> Self {
        debug_assert!(!object.is_variable());
        Triple {
            subject,
            predicate,
            object,
        }
    }

    /// Triple with an IRI object; infallible.
    pub fn link(subject: &Iri, predicate: &Iri, object: &Iri) -> Self {
        Triple {
            subject: subject.clone(),
            predicate: predicate.clone(),
            object: Term::Iri(object.clone()),
        }
    }

    pub fn subject(&self) -> &Iri {
        &self.subject
    }

    pub fn predicate(&self) -> &Iri {
        &self.predicate
    }

    pub fn object(&self) -> &Term {
        &self.object
    }

    pub fn into_parts(self) -> (Iri, Iri, Term) {
        (self.subject, self.predicate, self.object)
    }

    pub fn labelled(subject: &Iri, predicate: &Iri, literal: Literal) -> Self {
        Triple {
            subject: subject.clone(),
            predicate: predicate.clone(),
            object: Term::Literal(literal),
        }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

impl Ord for Triple {
    fn cmp(&self, other: &Self) -> Ordering {
        self.subject
            .cmp(&other.subject)
            .then_with(|| self.predicate.cmp(&other.predicate))
            .then_with(|| self.object.cmp(&other.object))
    }
}

impl PartialOrd for Triple {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
