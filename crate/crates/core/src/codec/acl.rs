//! FIPA-ACL and KQML message syntax: `(performative :key value ...)`.
//!
//! The two differ only in how agents are written. FIPA-ACL wraps them as
//! `(agent-identifier :name X)` and the receiver additionally in `(set ...)`;
//! KQML uses bare names. Both readers accept either form.

use std::collections::BTreeMap;

use sha2::{Digest, Sha256};

use super::message::{Content, Envelope, StructuredMessage, Syntax};
use super::sexp::Sexp;
use super::{CodecError, Position};
use crate::symbol::Symbol;

pub(crate) const KEY_SENDER: &str = "sender";
pub(crate) const KEY_RECEIVER: &str = "receiver";
pub(crate) const KEY_CONTENT: &str = "content";
pub(crate) const KEY_LANGUAGE: &str = "language";
pub(crate) const KEY_MESSAGE_ID: &str = "message-id";

const RESERVED: [&str; 5] = [
    KEY_SENDER,
    KEY_RECEIVER,
    KEY_CONTENT,
    KEY_LANGUAGE,
    KEY_MESSAGE_ID,
];

pub(crate) fn is_reserved_key(k: &str) -> bool {
    RESERVED.contains(&k)
}

pub(crate) fn parse(text: &str) -> Result<StructuredMessage, CodecError> {
    let top = Sexp::parse(text)?;
    let items = match &top {
        Sexp::List(items) => items,
        _ => return Err(syntax(text, 0, "'(' opening a message")),
    };
    let performative = match items.first() {
        Some(Sexp::Atom(a)) if !a.starts_with(':') => Symbol::new(a),
        _ => return Err(CodecError::MissingField("performative".into())),
    };

    let mut fields: BTreeMap<String, &Sexp> = BTreeMap::new();
    let mut rest = items[1..].iter();
    while let Some(k) = rest.next() {
        let key = match k {
            Sexp::Atom(a) if a.starts_with(':') && a.len() > 1 => &a[1..],
            _ => return Err(syntax(text, locate(text, k), "parameter keyword")),
        };
        let v = rest
            .next()
            .ok_or_else(|| syntax(text, text.trim_end().len(), &format!("value for :{key}")))?;
        if fields.insert(key.to_string(), v).is_some() {
            return Err(syntax(
                text,
                locate(text, k),
                &format!("a single :{key} parameter"),
            ));
        }
    }

    let sender = agent_name(fields.remove(KEY_SENDER), KEY_SENDER, text)?;
    let receiver = agent_name(fields.remove(KEY_RECEIVER), KEY_RECEIVER, text)?;
    let content = match fields.remove(KEY_CONTENT) {
        None => Content::Empty,
        Some(e) if e.is_empty_list() => Content::Empty,
        Some(e) => Content::Sexp(e.clone()),
    };
    let language = fields
        .remove(KEY_LANGUAGE)
        .map(|v| Symbol::from(value_text(v)));
    let id = match fields.remove(KEY_MESSAGE_ID) {
        Some(v) => Symbol::from(value_text(v)),
        None => derived_id(text),
    };
    let params = fields
        .into_iter()
        .map(|(k, v)| (Symbol::from(k), value_text(v)))
        .collect();

    Ok(StructuredMessage {
        envelope: Envelope {
            id,
            performative,
            sender,
            receiver,
            language,
            params,
        },
        content,
    })
}

pub(crate) fn serialize(msg: &StructuredMessage, syntax: Syntax) -> String {
    let env = &msg.envelope;
    let mut out = format!("({}", env.performative);
    out.push_str(&format!(
        "\n  :{KEY_MESSAGE_ID} {}",
        value_sexp(env.id.as_str())
    ));
    let (sender, receiver) = match syntax {
        Syntax::FipaAcl => (
            format!(
                "(agent-identifier :name {})",
                value_sexp(env.sender.as_str())
            ),
            format!(
                "(set (agent-identifier :name {}))",
                value_sexp(env.receiver.as_str())
            ),
        ),
        _ => (
            value_sexp(env.sender.as_str()).to_string(),
            value_sexp(env.receiver.as_str()).to_string(),
        ),
    };
    out.push_str(&format!("\n  :{KEY_SENDER} {sender}"));
    out.push_str(&format!("\n  :{KEY_RECEIVER} {receiver}"));
    if let Content::Sexp(body) = &msg.content {
        out.push_str(&format!("\n  :{KEY_CONTENT} {body}"));
    }
    if let Some(lang) = &env.language {
        out.push_str(&format!(
            "\n  :{KEY_LANGUAGE} {}",
            value_sexp(lang.as_str())
        ));
    }
    for (k, v) in &env.params {
        out.push_str(&format!("\n  :{k} {}", value_sexp(v)));
    }
    out.push_str(")\n");
    out
}

fn syntax(text: &str, offset: usize, expected: &str) -> CodecError {
    CodecError::Syntax {
        position: Position::at(text, offset),
        expected: expected.to_string(),
    }
}

/// Best-effort offset of an already-parsed element, for error reporting.
fn locate(text: &str, e: &Sexp) -> usize {
    text.find(&e.to_string()).unwrap_or(0)
}

fn value_sexp(v: &str) -> Sexp {
    if Sexp::is_atom_text(v) && !v.starts_with(':') {
        Sexp::Atom(v.to_string())
    } else {
        Sexp::Str(v.to_string())
    }
}

fn value_text(v: &Sexp) -> String {
    match v {
        Sexp::Atom(a) => a.clone(),
        Sexp::Str(s) => s.clone(),
        l @ Sexp::List(_) => l.to_string(),
    }
}

fn agent_name(v: Option<&Sexp>, field: &str, text: &str) -> Result<Symbol, CodecError> {
    let v = v.ok_or_else(|| CodecError::MissingField(field.to_string()))?;
    match v {
        Sexp::Atom(a) if !a.starts_with(':') => Ok(Symbol::new(a)),
        Sexp::Str(s) if !s.is_empty() => Ok(Symbol::new(s)),
        Sexp::List(items) => match items.first().and_then(Sexp::as_atom) {
            Some("agent-identifier") => {
                let mut it = items[1..].iter();
                while let Some(k) = it.next() {
                    let val = it.next();
                    if k.as_atom() == Some(":name") {
                        if let Some(Sexp::Atom(n) | Sexp::Str(n)) = val {
                            return Ok(Symbol::new(n));
                        }
                    }
                }
                Err(syntax(
                    text,
                    locate(text, v),
                    "':name' inside agent-identifier",
                ))
            }
            Some("set") if items.len() == 2 => agent_name(items.get(1), field, text),
            Some("set") => Err(syntax(
                text,
                locate(text, v),
                "exactly one agent in receiver set",
            )),
            _ => Err(syntax(
                text,
                locate(text, v),
                "agent name or (agent-identifier :name ...)",
            )),
        },
        _ => Err(syntax(text, locate(text, v), "agent name")),
    }
}

/// Identifier used when a message carries no `:message-id`. Stable for a
/// given text.
fn derived_id(text: &str) -> Symbol {
    let digest = Sha256::digest(text.as_bytes());
    let hex: String = digest.iter().take(4).map(|b| format!("{b:02x}")).collect();
    Symbol::from(format!("msg-{hex}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    const QUERY: &str = r#"(query-ref
  :message-id Message01
  :sender (agent-identifier :name ConditionsChecker)
  :receiver (set (agent-identifier :name VitalSignAgent))
  :content ((iota ?x (vital-sign Helen ?x)))
  :language fipa-sl0
  :ontology vital-signs)"#;

    #[test]
    fn envelope_fields_are_extracted() {
        let m = parse(QUERY).unwrap();
        assert_eq!(m.envelope.performative, "query-ref");
        assert_eq!(m.envelope.sender, "ConditionsChecker");
        assert_eq!(m.envelope.receiver, "VitalSignAgent");
        assert_eq!(m.envelope.language.as_ref().unwrap(), "fipa-sl0");
        assert_eq!(
            m.envelope.params.get("ontology").map(String::as_str),
            Some("vital-signs")
        );
        assert_eq!(m.envelope.id, "Message01");
        assert!(matches!(m.content, Content::Sexp(_)));
    }

    #[test]
    fn kqml_bare_agents() {
        let m = parse("(ask-one :sender a :receiver b :content (price x))").unwrap();
        assert_eq!(m.envelope.sender, "a");
        assert_eq!(m.envelope.receiver, "b");
        assert!(m.envelope.id.as_str().starts_with("msg-"));
    }

    #[test]
    fn missing_fields() {
        assert_eq!(
            parse("(inform :receiver b)").unwrap_err(),
            CodecError::MissingField("sender".into())
        );
        assert_eq!(
            parse("(:sender a)").unwrap_err(),
            CodecError::MissingField("performative".into())
        );
        assert_eq!(
            parse("()").unwrap_err(),
            CodecError::MissingField("performative".into())
        );
    }

    #[test]
    fn malformed_parameters() {
        assert!(matches!(
            parse("(inform :sender)"),
            Err(CodecError::Syntax { .. })
        ));
        assert!(matches!(
            parse("(inform sender a)"),
            Err(CodecError::Syntax { .. })
        ));
        assert!(matches!(
            parse("(inform :sender a :sender b :receiver c)"),
            Err(CodecError::Syntax { .. })
        ));
        assert!(matches!(
            parse("(inform :sender a :receiver (set b c))"),
            Err(CodecError::Syntax { .. })
        ));
    }

    #[test]
    fn serialization_omits_absent_optional_fields() {
        let m = StructuredMessage::new(Envelope::new("m1", "inform", "a", "b"), Content::Empty);
        let text = serialize(&m, Syntax::Kqml);
        assert!(!text.contains(":content"));
        assert!(!text.contains(":language"));
        assert_eq!(parse(&text).unwrap(), m);
    }
}
