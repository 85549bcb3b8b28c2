//! Line-oriented ontology text format.
//!
//! ```text
//! layer: application
//! system: Aingeru
//! A-VitalSignQueryRef EquivalentTo Inquiry and (hasContent some VitalSignInfGive)
//! force Request base=Directive mode={'polite'} degree=0
//! ```

use std::collections::BTreeSet;

use super::force::{ForceDescriptor, Primitive};
use super::{AxiomKind, ClassExpr, Layer, Ontology, OntologyError, TBoxAxiom};
use crate::symbol::Symbol;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Quoted(String),
    Open,
    Close,
    LBrace,
    RBrace,
    Comma,
    Eq,
}

/// Constructors outside the supported fragment.
const UNSUPPORTED_WORDS: [&str; 10] = [
    "or", "not", "only", "value", "min", "max", "exactly", "that", "inverse", "Self",
];

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '-' | '_' | '.' | ':' | '/' | '+')
}

fn lex(line: &str, lineno: usize) -> Result<Vec<(Tok, usize)>, OntologyError> {
    let mut out = Vec::new();
    let mut chars = line.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        let col = line[..i].chars().count() + 1;
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '#' => break,
            '(' | ')' | '{' | '}' | ',' | '=' => {
                chars.next();
                out.push((
                    match c {
                        '(' => Tok::Open,
                        ')' => Tok::Close,
                        '{' => Tok::LBrace,
                        '}' => Tok::RBrace,
                        ',' => Tok::Comma,
                        _ => Tok::Eq,
                    },
                    col,
                ));
            }
            '\'' => {
                chars.next();
                let mut s = String::new();
                let mut closed = false;
                while let Some((_, ch)) = chars.next() {
                    match ch {
                        '\'' => {
                            closed = true;
                            break;
                        }
                        '\\' => {
                            if let Some((_, e)) = chars.next() {
                                s.push(e);
                            }
                        }
                        ch => s.push(ch),
                    }
                }
                if !closed {
                    return Err(OntologyError::Syntax {
                        line: lineno,
                        column: col,
                        expected: "closing quote".into(),
                    });
                }
                out.push((Tok::Quoted(s), col));
            }
            c if is_word_char(c) => {
                let mut s = String::new();
                while let Some(&(_, ch)) = chars.peek() {
                    if !is_word_char(ch) {
                        break;
                    }
                    s.push(ch);
                    chars.next();
                }
                out.push((Tok::Word(s), col));
            }
            _ => {
                return Err(OntologyError::Syntax {
                    line: lineno,
                    column: col,
                    expected: "a name or delimiter".into(),
                })
            }
        }
    }
    Ok(out)
}

struct Cursor<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    line: usize,
    text: &'a str,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn next(&mut self) -> Option<&'a Tok> {
        let t = self.peek();
        self.pos += 1;
        t
    }

    fn column(&self) -> usize {
        self.toks
            .get(self.pos)
            .map_or(self.text.trim_end().chars().count() + 1, |(_, c)| *c)
    }

    fn error(&self, expected: &str) -> OntologyError {
        OntologyError::Syntax {
            line: self.line,
            column: self.column(),
            expected: expected.into(),
        }
    }

    fn unsupported(&self) -> OntologyError {
        OntologyError::UnsupportedAxiomShape {
            line: self.line,
            text: self.text.trim().to_string(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), OntologyError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(what))
        }
    }

    fn word(&mut self, what: &str) -> Result<&'a str, OntologyError> {
        match self.peek() {
            Some(Tok::Word(w)) => {
                self.pos += 1;
                Ok(w)
            }
            _ => Err(self.error(what)),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    // conj := unit ('and' unit)*
    fn conjunction(&mut self) -> Result<ClassExpr, OntologyError> {
        let mut parts = vec![self.unit()?];
        loop {
            match self.peek() {
                Some(Tok::Word(w)) if w == "and" => {
                    self.pos += 1;
                    parts.push(self.unit()?);
                }
                Some(Tok::Word(w)) if UNSUPPORTED_WORDS.contains(&w.as_str()) => {
                    return Err(self.unsupported())
                }
                _ => return Ok(ClassExpr::and(parts)),
            }
        }
    }

    // unit := '(' conj ')' | name | name 'some' unit
    fn unit(&mut self) -> Result<ClassExpr, OntologyError> {
        match self.peek() {
            Some(Tok::Open) => {
                self.pos += 1;
                let e = self.conjunction()?;
                self.expect(Tok::Close, "')'")?;
                Ok(e)
            }
            Some(Tok::Word(w)) if UNSUPPORTED_WORDS.contains(&w.as_str()) => {
                Err(self.unsupported())
            }
            Some(Tok::Word(w)) if w == "and" || w == "some" => {
                Err(self.error("a class or property name"))
            }
            Some(Tok::Word(w)) => {
                self.pos += 1;
                match self.peek() {
                    Some(Tok::Word(k)) if k == "some" => {
                        self.pos += 1;
                        Ok(ClassExpr::some(w.as_str(), self.unit()?))
                    }
                    Some(Tok::Word(k)) if UNSUPPORTED_WORDS.contains(&k.as_str()) => {
                        Err(self.unsupported())
                    }
                    _ => Ok(ClassExpr::atomic(w.as_str())),
                }
            }
            _ => Err(self.error("a class expression")),
        }
    }

    fn label_set(&mut self) -> Result<BTreeSet<String>, OntologyError> {
        self.expect(Tok::LBrace, "'{'")?;
        let mut out = BTreeSet::new();
        if self.peek() == Some(&Tok::RBrace) {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            match self.next() {
                Some(Tok::Quoted(s)) | Some(Tok::Word(s)) => {
                    out.insert(s.clone());
                }
                _ => {
                    self.pos -= 1;
                    return Err(self.error("a label"));
                }
            }
            match self.next() {
                Some(Tok::Comma) => continue,
                Some(Tok::RBrace) => return Ok(out),
                _ => {
                    self.pos -= 1;
                    return Err(self.error("',' or '}'"));
                }
            }
        }
    }
}

pub(super) fn parse(text: &str) -> Result<Ontology, OntologyError> {
    let mut onto = Ontology::new();
    let mut layer = Layer::Common;
    let mut system: Option<Symbol> = None;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks = lex(raw, line)?;
        if toks.is_empty() {
            continue;
        }
        let mut cur = Cursor {
            toks: &toks,
            pos: 0,
            line,
            text: raw,
        };
        let head = cur.word("an axiom, pragma or force line")?;
        match head {
            "layer:" => {
                let w = cur.word("a layer name")?;
                layer = w
                    .parse()
                    .map_err(|_| cur_error(&cur, "common, application, domain or action"))?;
                if layer == Layer::Common {
                    system = None;
                }
            }
            "system:" => system = Some(Symbol::new(cur.word("a system name")?)),
            "force" => {
                let class = Symbol::new(cur.word("a class name")?);
                let fd = force_line(&mut cur)?;
                onto.forces.insert(class, fd);
            }
            lhs => {
                let kind = match cur.next() {
                    Some(Tok::Word(k)) if k == "SubClassOf" => AxiomKind::SubClassOf,
                    Some(Tok::Word(k)) if k == "EquivalentTo" => AxiomKind::EquivalentTo,
                    Some(Tok::Word(_)) => return Err(cur.unsupported()),
                    _ => {
                        cur.pos -= 1;
                        return Err(cur.error("SubClassOf or EquivalentTo"));
                    }
                };
                let rhs = cur.conjunction()?;
                if !cur.at_end() {
                    return Err(match cur.peek() {
                        Some(Tok::Word(_)) => cur.unsupported(),
                        _ => cur.error("end of line"),
                    });
                }
                if layer == Layer::Application && system.is_none() {
                    return Err(OntologyError::MissingSystem { line });
                }
                onto.add(TBoxAxiom {
                    kind,
                    lhs: Symbol::new(lhs),
                    rhs,
                    layer,
                    system: system.clone(),
                });
            }
        }
        if !cur.at_end() {
            return Err(cur.error("end of line"));
        }
    }
    Ok(onto)
}

fn cur_error(cur: &Cursor<'_>, expected: &str) -> OntologyError {
    OntologyError::Syntax {
        line: cur.line,
        column: cur.toks[cur.pos - 1].1,
        expected: expected.into(),
    }
}

fn force_line(cur: &mut Cursor<'_>) -> Result<ForceDescriptor, OntologyError> {
    let mut fd: Option<ForceDescriptor> = None;
    let mut pending = Vec::new();
    while !cur.at_end() {
        let key = cur.word("a force field")?;
        cur.expect(Tok::Eq, "'='")?;
        match key {
            "base" => {
                let w = cur.word("a primitive force")?;
                let p: Primitive = w
                    .parse()
                    .map_err(|_| cur_error(cur, "one of the five primitive forces"))?;
                fd = Some(ForceDescriptor::primitive(p));
            }
            "degree" => {
                let w = cur.word("an integer")?;
                let n: i64 = w.parse().map_err(|_| cur_error(cur, "an integer"))?;
                pending.push((key, None, n));
            }
            "mode" | "content" | "preparatory" | "sincerity" => {
                let set = cur.label_set()?;
                pending.push((key, Some(set), 0));
            }
            _ => {
                cur.pos -= 2;
                return Err(cur.error("base, mode, degree, content, preparatory or sincerity"));
            }
        }
    }
    let mut fd = fd.ok_or_else(|| cur.error("base=<Primitive>"))?;
    for (key, set, n) in pending {
        match (key, set) {
            ("degree", _) => fd.degree = n,
            ("mode", Some(s)) => fd.mode = s,
            ("content", Some(s)) => fd.content = s,
            ("preparatory", Some(s)) => fd.preparatory = s,
            ("sincerity", Some(s)) => fd.sincerity = s,
            _ => unreachable!(),
        }
    }
    Ok(fd)
}

pub(super) fn parse_class_expr(text: &str) -> Result<ClassExpr, OntologyError> {
    let toks = lex(text, 1)?;
    let mut cur = Cursor {
        toks: &toks,
        pos: 0,
        line: 1,
        text,
    };
    let e = cur.conjunction()?;
    if !cur.at_end() {
        return Err(cur.error("end of expression"));
    }
    Ok(e)
}
