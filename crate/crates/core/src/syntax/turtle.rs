//! Turtle subset reader and canonical writer.
//!
//! Supported: `@prefix` directives, prefixed names, `<absolute IRIs>`,
//! `"strings"` / `'strings'` with language tag or datatype, the `a` keyword,
//! predicate lists (`;`), object lists (`,`), labelled blank nodes (skolemized)
//! and `#` comments. Blank-node property lists and collections are rejected.

use std::fmt::Write as _;
use std::iter::Peekable;
use std::str::Chars;

use super::SyntaxError;
use crate::rdf::{is_prefix_name, Graph, Iri, Literal, PrefixMap, Term, Triple, RDF};
use crate::Namespaces;

#[derive(Clone, Debug, PartialEq)]
enum Token {
    IriRef(String),
    PName(String, String),
    Blank(String),
    Str(String),
    LangTag(String),
    Carets,
    Dot,
    Semicolon,
    Comma,
    PrefixKw,
    A,
}

struct Lexer<'a> {
    chars: Peekable<Chars<'a>>,
    line: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next();
        if c == Some('\n') {
            self.line += 1;
        }
        c
    }

    fn skip_trivia(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(&c) = self.chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    /// Next token and the line it starts on, or `None` at end of input.
    fn next_token(&mut self) -> Result<Option<(Token, usize)>, SyntaxError> {
        self.skip_trivia();
        let line = self.line;
        let Some(&c) = self.chars.peek() else {
            return Ok(None);
        };
        let tok = match c {
            '<' => {
                self.bump();
                let mut iri = String::new();
                loop {
                    match self.bump() {
                        Some('>') => break,
                        Some('\\') => iri.push(self.unicode_escape(line)?),
                        Some('\n') => return Err(SyntaxError::syntax(line, "unterminated IRI")),
                        Some(c) => iri.push(c),
                        None => return Err(SyntaxError::syntax(line, "unterminated IRI")),
                    }
                }
                Token::IriRef(iri)
            }
            '"' | '\'' => {
                self.bump();
                Token::Str(self.string_body(c, line)?)
            }
            '@' => {
                self.bump();
                let word = self.take_while(|c| c.is_ascii_alphanumeric() || c == '-');
                if word == "prefix" {
                    Token::PrefixKw
                } else if word.is_empty() {
                    return Err(SyntaxError::syntax(line, "empty `@` keyword or language tag"));
                } else if word == "base" {
                    return Err(SyntaxError::Unsupported {
                        line,
                        construct: "@base directive".into(),
                    });
                } else {
                    Token::LangTag(word)
                }
            }
            '^' => {
                self.bump();
                if self.bump() != Some('^') {
                    return Err(SyntaxError::syntax(line, "expected `^^`"));
                }
                Token::Carets
            }
            '.' => {
                self.bump();
                Token::Dot
            }
            ';' => {
                self.bump();
                Token::Semicolon
            }
            ',' => {
                self.bump();
                Token::Comma
            }
            '_' => {
                self.bump();
                if self.bump() != Some(':') {
                    return Err(SyntaxError::syntax(line, "expected `_:` blank node label"));
                }
                let label = self.name_chars();
                if label.is_empty() {
                    return Err(SyntaxError::syntax(line, "empty blank node label"));
                }
                Token::Blank(label)
            }
            '[' => {
                return Err(SyntaxError::Unsupported {
                    line,
                    construct: "blank node property list".into(),
                })
            }
            '(' => {
                return Err(SyntaxError::Unsupported {
                    line,
                    construct: "collection".into(),
                })
            }
            c if c.is_ascii_alphabetic() || c == ':' => {
                let prefix = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-');
                if self.chars.peek() == Some(&':') {
                    self.bump();
                    let local = self.name_chars();
                    Token::PName(prefix, local)
                } else if prefix == "a" {
                    Token::A
                } else if prefix.eq_ignore_ascii_case("prefix") {
                    return Err(SyntaxError::Unsupported {
                        line,
                        construct: "SPARQL-style PREFIX".into(),
                    });
                } else if prefix == "true" || prefix == "false" {
                    return Err(SyntaxError::Unsupported {
                        line,
                        construct: "boolean literal".into(),
                    });
                } else {
                    return Err(SyntaxError::syntax(line, format!("unexpected word `{prefix}`")));
                }
            }
            c if c.is_ascii_digit() || c == '+' || c == '-' => {
                return Err(SyntaxError::Unsupported {
                    line,
                    construct: "numeric literal".into(),
                })
            }
            c => return Err(SyntaxError::syntax(line, format!("unexpected character `{c}`"))),
        };
        Ok(Some((tok, line)))
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let mut out = String::new();
        while let Some(&c) = self.chars.peek() {
            if !pred(c) {
                break;
            }
            out.push(c);
            self.bump();
        }
        out
    }

    /// Local-name characters. A trailing `.` terminates the statement rather
    /// than belonging to the name, so dots are only consumed when followed by
    /// another name character.
    fn name_chars(&mut self) -> String {
        let mut out = String::new();
        loop {
            match self.chars.peek() {
                Some(&c) if c.is_ascii_alphanumeric() || c == '_' || c == '-' => {
                    out.push(c);
                    self.bump();
                }
                Some('.') => {
                    let mut ahead = self.chars.clone();
                    let mut dots = 0;
                    while ahead.peek() == Some(&'.') {
                        ahead.next();
                        dots += 1;
                    }
                    if !ahead
                        .peek()
                        .is_some_and(|&c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
                    {
                        break;
                    }
                    for _ in 0..dots {
                        out.push('.');
                        self.bump();
                    }
                }
                _ => break,
            }
        }
        out
    }

    fn string_body(&mut self, quote: char, line: usize) -> Result<String, SyntaxError> {
        let mut out = String::new();
        loop {
            match self.bump() {
                Some(c) if c == quote => return Ok(out),
                Some('\\') => match self.bump() {
                    Some('n') => out.push('\n'),
                    Some('r') => out.push('\r'),
                    Some('t') => out.push('\t'),
                    Some('b') => out.push('\u{8}'),
                    Some('f') => out.push('\u{c}'),
                    Some('"') => out.push('"'),
                    Some('\'') => out.push('\''),
                    Some('\\') => out.push('\\'),
                    Some('u') => out.push(self.hex_char(4, line)?),
                    Some('U') => out.push(self.hex_char(8, line)?),
                    _ => return Err(SyntaxError::syntax(line, "invalid string escape")),
                },
                Some('\n') | Some('\r') | None => return Err(SyntaxError::syntax(line, "unterminated string literal")),
                Some(c) => out.push(c),
            }
        }
    }

    fn unicode_escape(&mut self, line: usize) -> Result<char, SyntaxError> {
        match self.bump() {
            Some('u') => self.hex_char(4, line),
            Some('U') => self.hex_char(8, line),
            _ => Err(SyntaxError::syntax(line, "invalid escape in IRI")),
        }
    }

    fn hex_char(&mut self, digits: usize, line: usize) -> Result<char, SyntaxError> {
        let mut value: u32 = 0;
        for _ in 0..digits {
            let d = self
                .bump()
                .and_then(|c| c.to_digit(16))
                .ok_or_else(|| SyntaxError::syntax(line, "invalid unicode escape"))?;
            value = value * 16 + d;
        }
        char::from_u32(value).ok_or_else(|| SyntaxError::syntax(line, "invalid unicode code point"))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    peeked: Option<Option<(Token, usize)>>,
    prefixes: PrefixMap,
    skolem: String,
    graph: Graph,
}

impl<'a> Parser<'a> {
    fn peek(&mut self) -> Result<Option<&(Token, usize)>, SyntaxError> {
        if self.peeked.is_none() {
            self.peeked = Some(self.lexer.next_token()?);
        }
        Ok(self.peeked.as_ref().and_then(|t| t.as_ref()))
    }

    fn next(&mut self) -> Result<Option<(Token, usize)>, SyntaxError> {
        match self.peeked.take() {
            Some(t) => Ok(t),
            None => self.lexer.next_token(),
        }
    }

    fn expect_next(&mut self, what: &str) -> Result<(Token, usize), SyntaxError> {
        self.next()?
            .ok_or_else(|| SyntaxError::syntax(self.lexer.line, format!("unexpected end of input, expected {what}")))
    }

    fn document(&mut self) -> Result<(), SyntaxError> {
        while let Some((tok, line)) = self.next()? {
            match tok {
                Token::PrefixKw => self.prefix_directive(line)?,
                tok => {
                    let subject = self.subject(tok, line)?;
                    self.predicate_object_list(&subject)?;
                    match self.expect_next("`.`")? {
                        (Token::Dot, _) => {}
                        (_, line) => return Err(SyntaxError::syntax(line, "expected `.` after statement")),
                    }
                }
            }
        }
        Ok(())
    }

    fn prefix_directive(&mut self, line: usize) -> Result<(), SyntaxError> {
        let prefix = match self.expect_next("prefix name")? {
            (Token::PName(prefix, local), _) if local.is_empty() && is_prefix_name(&prefix) => prefix,
            (_, line) => return Err(SyntaxError::syntax(line, "expected `prefix:` after @prefix")),
        };
        let ns = match self.expect_next("namespace IRI")? {
            (Token::IriRef(iri), _) => iri,
            (_, line) => return Err(SyntaxError::syntax(line, "expected <namespace> after prefix name")),
        };
        match self.expect_next("`.`")? {
            (Token::Dot, _) => {}
            (_, l) => return Err(SyntaxError::syntax(l, "expected `.` after @prefix directive")),
        }
        Iri::new(&ns).map_err(|source| SyntaxError::Term { line, source })?;
        self.prefixes.insert(prefix, ns);
        Ok(())
    }

    fn iri_token(&self, tok: Token, line: usize) -> Result<Option<Iri>, SyntaxError> {
        match tok {
            Token::IriRef(iri) => Iri::new(iri)
                .map(Some)
                .map_err(|source| SyntaxError::Term { line, source }),
            Token::PName(prefix, local) => {
                let ns = self.prefixes.get(&prefix).ok_or(SyntaxError::UnknownPrefix {
                    line,
                    prefix: prefix.clone(),
                })?;
                Iri::new(format!("{ns}{local}"))
                    .map(Some)
                    .map_err(|source| SyntaxError::Term { line, source })
            }
            Token::Blank(label) => Iri::new(format!("{}{}", self.skolem, label))
                .map(Some)
                .map_err(|source| SyntaxError::Term { line, source }),
            _ => Ok(None),
        }
    }

    fn subject(&mut self, tok: Token, line: usize) -> Result<Iri, SyntaxError> {
        self.iri_token(tok, line)?
            .ok_or_else(|| SyntaxError::syntax(line, "expected subject IRI"))
    }

    fn predicate_object_list(&mut self, subject: &Iri) -> Result<(), SyntaxError> {
        loop {
            let (tok, line) = self.expect_next("predicate")?;
            let predicate = match tok {
                Token::A => Iri::new(format!("{RDF}type")).expect("rdf:type"),
                Token::Blank(_) => return Err(SyntaxError::syntax(line, "blank node cannot be a predicate")),
                tok => self
                    .iri_token(tok, line)?
                    .ok_or_else(|| SyntaxError::syntax(line, "expected predicate"))?,
            };
            loop {
                let object = self.object()?;
                self.graph
                    .insert(Triple::new(subject.clone(), predicate.clone(), object).expect("ground object"));
                if matches!(self.peek()?, Some((Token::Comma, _))) {
                    self.next()?;
                } else {
                    break;
                }
            }
            if matches!(self.peek()?, Some((Token::Semicolon, _))) {
                while matches!(self.peek()?, Some((Token::Semicolon, _))) {
                    self.next()?;
                }
                // A trailing `;` before the final `.` is allowed.
                if matches!(self.peek()?, Some((Token::Dot, _))) {
                    return Ok(());
                }
            } else {
                return Ok(());
            }
        }
    }

    fn object(&mut self) -> Result<Term, SyntaxError> {
        let (tok, line) = self.expect_next("object")?;
        match tok {
            Token::Str(lexical) => match self.peek()? {
                Some((Token::LangTag(_), _)) => {
                    let Some((Token::LangTag(tag), _)) = self.next()? else {
                        unreachable!()
                    };
                    Literal::with_language(lexical, tag)
                        .map(Term::Literal)
                        .map_err(|source| SyntaxError::Term { line, source })
                }
                Some((Token::Carets, _)) => {
                    self.next()?;
                    let (tok, line) = self.expect_next("datatype IRI")?;
                    let dt = match tok {
                        Token::Blank(_) => None,
                        tok => self.iri_token(tok, line)?,
                    }
                    .ok_or_else(|| SyntaxError::syntax(line, "expected datatype IRI after `^^`"))?;
                    Ok(Term::Literal(Literal::typed(lexical, dt)))
                }
                _ => Ok(Term::Literal(Literal::simple(lexical))),
            },
            tok => self
                .iri_token(tok, line)?
                .map(Term::Iri)
                .ok_or_else(|| SyntaxError::syntax(line, "expected object")),
        }
    }
}

/// Parses a Turtle document. Document `@prefix` directives extend (and may
/// override) `pm` for the duration of the parse. Blank nodes become IRIs
/// under the skolem namespace derived from the `sescore` binding.
pub fn parse_turtle(text: &str, pm: &PrefixMap) -> Result<Graph, SyntaxError> {
    let ns = pm.get("sescore").map(Namespaces::from_base).unwrap_or_default();
    let mut parser = Parser {
        lexer: Lexer::new(text),
        peeked: None,
        prefixes: pm.clone(),
        skolem: ns.skolem,
        graph: Graph::new(),
    };
    parser.document()?;
    Ok(parser.graph)
}

fn write_iri(out: &mut String, pm: &PrefixMap, iri: &Iri) {
    match pm.try_compact(iri) {
        Some(curie) => out.push_str(&curie),
        None => {
            let _ = write!(out, "{iri}");
        }
    }
}

fn write_term(out: &mut String, pm: &PrefixMap, term: &Term) {
    match term {
        Term::Iri(iri) => write_iri(out, pm, iri),
        Term::Literal(lit) => {
            out.push('"');
            out.push_str(&crate::rdf::escape_string(lit.lexical()));
            out.push('"');
            if let Some(lang) = lit.language() {
                out.push('@');
                out.push_str(lang);
            } else if let Some(dt) = lit.datatype() {
                out.push_str("^^");
                write_iri(out, pm, dt);
            }
        }
        Term::Variable(v) => {
            let _ = write!(out, "{v}");
        }
    }
}

/// Canonical Turtle: every binding of `pm` as a sorted `@prefix` header, then
/// one block per subject in canonical order, predicates and objects sorted.
pub fn serialize_turtle(g: &Graph, pm: &PrefixMap) -> String {
    let mut out = String::new();
    for (prefix, ns) in pm.iter() {
        let _ = writeln!(out, "@prefix {prefix}: <{ns}> .");
    }
    let rdf_type = Iri::new(format!("{RDF}type")).expect("rdf:type");
    for subject in g.subjects() {
        out.push('\n');
        write_iri(&mut out, pm, subject);
        let triples = g.matching(Some(subject), None, None);
        let mut first_pred = true;
        let mut i = 0;
        while i < triples.len() {
            let predicate = triples[i].predicate();
            out.push_str(if first_pred { " " } else { " ;\n    " });
            first_pred = false;
            if *predicate == rdf_type {
                out.push('a');
            } else {
                write_iri(&mut out, pm, predicate);
            }
            let mut first_obj = true;
            while i < triples.len() && triples[i].predicate() == predicate {
                out.push_str(if first_obj { " " } else { ", " });
                first_obj = false;
                write_term(&mut out, pm, triples[i].object());
                i += 1;
            }
        }
        out.push_str(" .\n");
    }
    out
}
