//! Line-oriented assertion syntax.
//!
//! One `subject predicate object` triple per line, whitespace separated.
//! `rdf:type` marks a class assertion; single-quoted objects are literals.
//! `@prefix p: <iri>` lines declare prefixes, and `p:name` is read as the local
//! name `name`. `#` starts a comment outside of literals.
//!
//! As a message syntax, triples about the root individual form the envelope
//! (`rdf:type` is the performative, `hasSender`, `hasReceiver`, `hasLanguage`
//! name the fixed fields, other literal-valued predicates are parameters), and
//! the content sits in a block:
//!
//! ```text
//! Message01 hasContent FIR01 {
//!   FIR01 rdf:type FIPA-Inform-Ref
//! }
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use super::message::{AssertionContent, Content, Envelope, StructuredMessage};
use super::{CodecError, Position};
use crate::abox::{ABox, Assertion, Value, RDF_TYPE};
use crate::symbol::Symbol;

pub const HAS_SENDER: &str = "hasSender";
pub const HAS_RECEIVER: &str = "hasReceiver";
pub const HAS_CONTENT: &str = "hasContent";
pub const HAS_LANGUAGE: &str = "hasLanguage";

const RDF_NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Name(String),
    Literal(String),
    Open,
    Close,
}

struct Line<'a> {
    offset: usize,
    text: &'a str,
}

type Tokens = Vec<(Token, usize)>;

fn tokenize(src: &str, line: &Line<'_>) -> Result<Tokens, CodecError> {
    let mut tokens = Vec::new();
    let text = line.text;
    let mut chars = text.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        let at = line.offset + i;
        if c.is_whitespace() {
            chars.next();
        } else if c == '#' {
            break;
        } else if c == '{' {
            chars.next();
            tokens.push((Token::Open, at));
        } else if c == '}' {
            chars.next();
            tokens.push((Token::Close, at));
        } else if c == '\'' {
            chars.next();
            let mut s = String::new();
            loop {
                match chars.next() {
                    None => {
                        return Err(CodecError::Syntax {
                            position: Position::at(src, line.offset + text.len()),
                            expected: "closing quote".into(),
                        })
                    }
                    Some((_, '\'')) => break,
                    Some((_, '\\')) => match chars.next() {
                        Some((_, 'n')) => s.push('\n'),
                        Some((_, e)) => s.push(e),
                        None => {
                            return Err(CodecError::Syntax {
                                position: Position::at(src, line.offset + text.len()),
                                expected: "escaped character".into(),
                            })
                        }
                    },
                    Some((_, ch)) => s.push(ch),
                }
            }
            tokens.push((Token::Literal(s), at));
        } else {
            let start = i;
            let mut end = i;
            while let Some(&(j, ch)) = chars.peek() {
                if ch.is_whitespace() || matches!(ch, '{' | '}' | '\'') {
                    break;
                }
                end = j + ch.len_utf8();
                chars.next();
            }
            tokens.push((Token::Name(text[start..end].to_string()), at));
        }
    }
    Ok(tokens)
}

fn lines(src: &str) -> impl Iterator<Item = Line<'_>> {
    let mut offset = 0;
    src.split('\n').map(move |text| {
        let l = Line { offset, text };
        offset += text.len() + 1;
        l
    })
}

#[derive(Default)]
struct Prefixes(BTreeSet<String>);

impl Prefixes {
    fn declare(&mut self, tokens: &[(Token, usize)], src: &str) -> Result<(), CodecError> {
        match tokens {
            [(Token::Name(_), _), (Token::Name(p), _), (Token::Name(iri), _)]
                if p.ends_with(':') && iri.starts_with('<') && iri.ends_with('>') =>
            {
                self.0.insert(p.trim_end_matches(':').to_string());
                Ok(())
            }
            _ => Err(CodecError::Syntax {
                position: Position::at(src, tokens.first().map(|t| t.1).unwrap_or(0)),
                expected: "@prefix name: <iri>".into(),
            }),
        }
    }

    fn resolve(&self, name: &str, at: usize, src: &str) -> Result<Symbol, CodecError> {
        if name == RDF_TYPE {
            return Ok(Symbol::new(RDF_TYPE));
        }
        match name.split_once(':') {
            None => Ok(Symbol::new(name)),
            Some((p, local)) if self.0.contains(p) && !local.is_empty() => Ok(Symbol::new(local)),
            Some(_) => Err(CodecError::Syntax {
                position: Position::at(src, at),
                expected: "a declared prefix".into(),
            }),
        }
    }
}

fn triple(
    tokens: &[(Token, usize)],
    prefixes: &Prefixes,
    src: &str,
) -> Result<Assertion, CodecError> {
    let err = |at: usize, what: &str| CodecError::Syntax {
        position: Position::at(src, at),
        expected: what.into(),
    };
    let [s, p, o] = tokens else {
        let at = tokens.get(3).or(tokens.last()).map(|t| t.1).unwrap_or(0);
        let what = if tokens.len() > 3 {
            "end of line after object"
        } else {
            "subject predicate object"
        };
        return Err(err(at, what));
    };
    let subject = match &s.0 {
        Token::Name(n) => prefixes.resolve(n, s.1, src)?,
        _ => return Err(err(s.1, "subject name")),
    };
    let predicate = match &p.0 {
        Token::Name(n) => prefixes.resolve(n, p.1, src)?,
        _ => return Err(err(p.1, "predicate name")),
    };
    let object = match &o.0 {
        Token::Name(n) => Value::Individual(prefixes.resolve(n, o.1, src)?),
        Token::Literal(l) => Value::Literal(l.clone()),
        _ => return Err(err(o.1, "object name or literal")),
    };
    if predicate == RDF_TYPE {
        match object {
            Value::Individual(class) => Ok(Assertion::Class {
                class,
                individual: subject,
            }),
            Value::Literal(_) => Err(err(o.1, "class name after rdf:type")),
        }
    } else {
        Ok(Assertion::Property {
            property: predicate,
            subject,
            object,
        })
    }
}

/// Reads a plain assertion file (no envelope, no blocks).
pub fn parse_abox(src: &str) -> Result<ABox, CodecError> {
    let mut prefixes = Prefixes::default();
    let mut out = ABox::new();
    for line in lines(src) {
        let t = tokenize(src, &line)?;
        if t.is_empty() {
            continue;
        }
        if matches!(&t[0].0, Token::Name(n) if n == "@prefix") {
            prefixes.declare(&t, src)?;
            continue;
        }
        out.insert(triple(&t, &prefixes, src)?);
    }
    Ok(out)
}

/// Writes an assertion file with the `rdf:` prefix header.
pub fn write_abox(abox: &ABox) -> String {
    let mut out = format!("@prefix rdf: <{RDF_NS}>\n");
    for a in abox {
        let _ = writeln!(out, "{a}");
    }
    out
}

pub(crate) fn parse_message(src: &str) -> Result<StructuredMessage, CodecError> {
    let mut prefixes = Prefixes::default();
    let mut root: Option<Symbol> = None;
    let mut types: Vec<Symbol> = Vec::new();
    let mut fields: BTreeMap<Symbol, (String, usize)> = BTreeMap::new();
    let mut content: Option<AssertionContent> = None;
    let mut in_block = false;

    for line in lines(src) {
        let t = tokenize(src, &line)?;
        let mut tokens = t.as_slice();
        if tokens.is_empty() {
            continue;
        }
        if in_block {
            if let [(Token::Close, _)] = tokens {
                in_block = false;
                continue;
            }
            let a = triple(tokens, &prefixes, src)?;
            content.as_mut().expect("block open").assertions.push(a);
            continue;
        }
        if matches!(&tokens[0].0, Token::Name(n) if n == "@prefix") {
            prefixes.declare(tokens, src)?;
            continue;
        }
        // `S hasContent C {` opens a block; `{}` closes it on the same line.
        let mut opens = false;
        let mut closes = false;
        if let Some((Token::Close, _)) = tokens.last() {
            if tokens.len() >= 2 && tokens[tokens.len() - 2].0 == Token::Open {
                opens = true;
                closes = true;
                tokens = &tokens[..tokens.len() - 2];
            }
        }
        if !opens {
            if let Some((Token::Open, _)) = tokens.last() {
                opens = true;
                tokens = &tokens[..tokens.len() - 1];
            }
        }
        let a = triple(tokens, &prefixes, src)?;
        let subject = a.subject().clone();
        match &root {
            None => root = Some(subject.clone()),
            Some(r) if *r != subject => {
                return Err(CodecError::Syntax {
                    position: Position::at(src, tokens[0].1),
                    expected: format!("envelope triple about {r} or a content block"),
                })
            }
            _ => {}
        }
        match a {
            Assertion::Class { class, .. } => {
                if opens {
                    return Err(CodecError::Syntax {
                        position: Position::at(src, tokens[2].1),
                        expected: "content block after hasContent".into(),
                    });
                }
                types.push(class)
            }
            Assertion::Property {
                property, object, ..
            } if property == HAS_CONTENT => {
                let Value::Individual(croot) = object else {
                    return Err(CodecError::Syntax {
                        position: Position::at(src, tokens[2].1),
                        expected: "content individual".into(),
                    });
                };
                if content.is_some() {
                    return Err(CodecError::Syntax {
                        position: Position::at(src, tokens[1].1),
                        expected: "a single content block".into(),
                    });
                }
                if !opens {
                    return Err(CodecError::Syntax {
                        position: Position::at(src, line.offset + line.text.len()),
                        expected: "'{'".into(),
                    });
                }
                content = Some(AssertionContent {
                    root: croot,
                    assertions: Vec::new(),
                });
                in_block = !closes;
            }
            Assertion::Property {
                property, object, ..
            } => {
                if opens {
                    return Err(CodecError::Syntax {
                        position: Position::at(src, tokens[1].1),
                        expected: "hasContent before '{'".into(),
                    });
                }
                let v = match object {
                    Value::Literal(l) => l,
                    Value::Individual(i) => i.to_string(),
                };
                if fields.insert(property.clone(), (v, tokens[1].1)).is_some() {
                    return Err(CodecError::Syntax {
                        position: Position::at(src, tokens[1].1),
                        expected: format!("a single {property} triple"),
                    });
                }
            }
        }
    }
    if in_block {
        return Err(CodecError::Syntax {
            position: Position::at(src, src.len()),
            expected: "'}'".into(),
        });
    }
    let id = root.ok_or_else(|| CodecError::MissingField("performative".into()))?;
    let performative = match types.as_slice() {
        [] => return Err(CodecError::MissingField("performative".into())),
        [p] => p.clone(),
        _ => {
            return Err(CodecError::Syntax {
                position: Position::at(src, 0),
                expected: "a single rdf:type triple for the message".into(),
            })
        }
    };
    let sender = fields
        .remove(HAS_SENDER)
        .ok_or_else(|| CodecError::MissingField("sender".into()))?
        .0;
    let receiver = fields
        .remove(HAS_RECEIVER)
        .ok_or_else(|| CodecError::MissingField("receiver".into()))?
        .0;
    let language = fields.remove(HAS_LANGUAGE).map(|(l, _)| Symbol::from(l));
    let params = fields.into_iter().map(|(k, (v, _))| (k, v)).collect();
    Ok(StructuredMessage {
        envelope: Envelope {
            id,
            performative,
            sender: sender.into(),
            receiver: receiver.into(),
            language,
            params,
        },
        content: match content {
            None => Content::Empty,
            Some(c) => Content::Assertions(c),
        },
    })
}

pub(crate) fn serialize_message(msg: &StructuredMessage) -> String {
    let env = &msg.envelope;
    let id = &env.id;
    let mut out = format!("@prefix rdf: <{RDF_NS}>\n");
    let _ = writeln!(out, "{id} {RDF_TYPE} {}", env.performative);
    let _ = writeln!(
        out,
        "{}",
        Assertion::literal(HAS_SENDER, id.clone(), env.sender.as_str())
    );
    let _ = writeln!(
        out,
        "{}",
        Assertion::literal(HAS_RECEIVER, id.clone(), env.receiver.as_str())
    );
    if let Some(l) = &env.language {
        let _ = writeln!(
            out,
            "{}",
            Assertion::literal(HAS_LANGUAGE, id.clone(), l.as_str())
        );
    }
    for (k, v) in &env.params {
        let _ = writeln!(
            out,
            "{}",
            Assertion::literal(k.clone(), id.clone(), v.as_str())
        );
    }
    if let Content::Assertions(c) = &msg.content {
        if c.assertions.is_empty() {
            let _ = writeln!(out, "{id} {HAS_CONTENT} {} {{}}", c.root);
        } else {
            let _ = writeln!(out, "{id} {HAS_CONTENT} {} {{", c.root);
            for a in &c.assertions {
                let _ = writeln!(out, "  {a}");
            }
            out.push_str("}\n");
        }
    }
    out
}

/// Names reserved by the envelope layout of this syntax.
pub(crate) fn is_reserved_predicate(p: &str) -> bool {
    matches!(
        p,
        HAS_SENDER | HAS_RECEIVER | HAS_CONTENT | HAS_LANGUAGE | RDF_TYPE
    )
}
