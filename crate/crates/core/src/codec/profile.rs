//! Declarative translators between a system's concrete messages and basic
//! assertions over the shared vocabulary.
//!
//! A profile is data: a performative table (performative name to message
//! class), a parameter table (envelope parameter to literal-valued property),
//! and, for s-expression content, a functor table that turns each
//! `(functor arg ...)` node into a typed individual whose arguments are linked
//! by position.

use std::collections::{BTreeMap, BTreeSet};

use serde::Deserialize;

use super::acl::{KEY_LANGUAGE, KEY_MESSAGE_ID};
use super::block::{HAS_CONTENT, HAS_RECEIVER, HAS_SENDER};
use super::message::{AssertionContent, Content, Envelope, StructuredMessage, Syntax};
use super::sexp::Sexp;
use super::CodecError;
use crate::abox::{ABox, Assertion, Value};
use crate::symbol::Symbol;

pub const HAS_NAME: &str = "hasName";
pub const ACTOR_CLASS: &str = "Actor";
/// Agent name used when an assertion set does not say who sent or receives it.
pub const ANONYMOUS: &str = "anonymous";
const SKIP: &str = "_";
/// Placeholder written for argument positions that carry no property.
const PLACEHOLDER_VAR: &str = "?x";

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TranslatorProfile {
    pub syntax: Syntax,
    /// Content language declared on messages this profile emits when the
    /// assertions do not name one.
    #[serde(default)]
    pub language: Option<Symbol>,
    /// Message class accepted as a root when no performative class matches.
    #[serde(default)]
    pub fallback: Option<Symbol>,
    #[serde(default, rename = "performative")]
    pub performatives: Vec<PerformativeRule>,
    /// Envelope parameter (including `language`) to literal-valued property.
    #[serde(default)]
    pub parameters: BTreeMap<Symbol, Symbol>,
    #[serde(default, rename = "content")]
    pub content_rules: Vec<ContentRule>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerformativeRule {
    pub name: Symbol,
    pub class: Symbol,
    /// Literal-valued properties implied by the performative.
    #[serde(default)]
    pub literals: BTreeMap<Symbol, String>,
    /// Wraps the content expression in an individual of this class.
    #[serde(default)]
    pub content: Option<ContentWrapper>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContentWrapper {
    pub class: Symbol,
    pub prefix: String,
    /// Property linking the wrapper to each content expression.
    pub link: Symbol,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContentRule {
    pub functor: Symbol,
    pub class: Symbol,
    /// Individual-name prefix; names are numbered per prefix, `RE01`, `RE02`, ...
    pub prefix: String,
    /// Property for each argument position; `_` skips the position.
    #[serde(default)]
    pub args: Vec<Symbol>,
}

impl TranslatorProfile {
    pub fn new(syntax: Syntax) -> Self {
        TranslatorProfile {
            syntax,
            language: None,
            fallback: None,
            performatives: Vec::new(),
            parameters: BTreeMap::new(),
            content_rules: Vec::new(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn performative(&self, name: &str) -> Option<&PerformativeRule> {
        self.performatives.iter().find(|r| r.name.as_str() == name)
    }

    fn content_rule(&self, functor: &str) -> Option<&ContentRule> {
        self.content_rules
            .iter()
            .find(|r| r.functor.as_str() == functor)
    }

    /// Every class this profile can emit. These classes, with a system's own
    /// ontology layers, form the vocabulary the system speaks.
    pub fn classes(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        for p in &self.performatives {
            out.insert(p.class.clone());
            if let Some(w) = &p.content {
                out.insert(w.class.clone());
            }
        }
        out.extend(self.content_rules.iter().map(|r| r.class.clone()));
        out
    }

    /// Message classes usable as a root, in priority order.
    fn message_classes(&self) -> Vec<&Symbol> {
        let mut v: Vec<&Symbol> = self.performatives.iter().map(|p| &p.class).collect();
        v.extend(self.fallback.iter());
        v
    }
}

#[derive(Default)]
struct Namer {
    counters: BTreeMap<String, usize>,
    taken: BTreeSet<Symbol>,
}

impl Namer {
    fn fresh(&mut self, prefix: &str) -> Symbol {
        loop {
            let n = self.counters.entry(prefix.to_string()).or_insert(0);
            *n += 1;
            let s = Symbol::from(format!("{prefix}{:02}", *n));
            if self.taken.insert(s.clone()) {
                return s;
            }
        }
    }
}

/// Translates a message into basic assertions over the shared vocabulary.
pub fn to_abox(msg: &StructuredMessage, profile: &TranslatorProfile) -> Result<ABox, CodecError> {
    let env = &msg.envelope;
    let root = env.id.clone();
    let mut out = ABox::new();
    let mut namer = Namer::default();
    namer.taken.insert(root.clone());
    if let Content::Assertions(c) = &msg.content {
        for a in &c.assertions {
            namer.taken.insert(a.subject().clone());
        }
    }

    let rule = profile
        .performative(env.performative.as_str())
        .ok_or_else(|| CodecError::UnmappedConstruct(env.performative.to_string()))?;
    out.insert(Assertion::class(rule.class.clone(), root.clone()));
    for (p, v) in &rule.literals {
        out.insert(Assertion::literal(p.clone(), root.clone(), v.as_str()));
    }

    let sender = namer.fresh(ACTOR_CLASS);
    add_actor(&mut out, &root, HAS_SENDER, &sender, &env.sender);
    let receiver = if env.receiver == env.sender {
        sender
    } else {
        namer.fresh(ACTOR_CLASS)
    };
    add_actor(&mut out, &root, HAS_RECEIVER, &receiver, &env.receiver);

    if let Some(lang) = &env.language {
        let prop = profile
            .parameters
            .get(KEY_LANGUAGE)
            .ok_or_else(|| CodecError::UnmappedConstruct(KEY_LANGUAGE.into()))?;
        out.insert(Assertion::literal(
            prop.clone(),
            root.clone(),
            lang.as_str(),
        ));
    }
    for (k, v) in &env.params {
        let prop = profile
            .parameters
            .get(k)
            .ok_or_else(|| CodecError::UnmappedConstruct(k.to_string()))?;
        out.insert(Assertion::literal(prop.clone(), root.clone(), v.as_str()));
    }

    match &msg.content {
        Content::Empty => {}
        Content::Assertions(c) => {
            out.insert(Assertion::link(HAS_CONTENT, root.clone(), c.root.clone()));
            out.extend(c.assertions.iter().cloned());
        }
        Content::Sexp(body) => {
            let exprs = content_expressions(body)?;
            match &rule.content {
                Some(w) => {
                    let wrapper = namer.fresh(&w.prefix);
                    out.insert(Assertion::class(w.class.clone(), wrapper.clone()));
                    out.insert(Assertion::link(HAS_CONTENT, root.clone(), wrapper.clone()));
                    for e in &exprs {
                        let ind = translate_expr(e, profile, &mut namer, &mut out)?;
                        out.insert(Assertion::link(w.link.clone(), wrapper.clone(), ind));
                    }
                }
                None => match exprs.as_slice() {
                    [] => {}
                    [e] => {
                        let ind = translate_expr(e, profile, &mut namer, &mut out)?;
                        out.insert(Assertion::link(HAS_CONTENT, root.clone(), ind));
                    }
                    _ => return Err(CodecError::UnmappedConstruct("content sequence".into())),
                },
            }
        }
    }
    Ok(out)
}

fn add_actor(out: &mut ABox, root: &Symbol, role: &str, actor: &Symbol, name: &Symbol) {
    out.insert(Assertion::link(role, root.clone(), actor.clone()));
    out.insert(Assertion::class(ACTOR_CLASS, actor.clone()));
    out.insert(Assertion::literal(HAS_NAME, actor.clone(), name.as_str()));
}

/// Splits a content body into its expressions: `(f ...)` is one expression,
/// `((f ...) (g ...))` a sequence, and a string is read as a sequence.
fn content_expressions(body: &Sexp) -> Result<Vec<Sexp>, CodecError> {
    match body {
        Sexp::Str(s) => Sexp::parse_seq(s).map(|v| v.into_iter().flat_map(flatten_seq).collect()),
        other => Ok(flatten_seq(other.clone())),
    }
}

fn flatten_seq(e: Sexp) -> Vec<Sexp> {
    match e {
        Sexp::List(items) if matches!(items.first(), None | Some(Sexp::List(_))) => items,
        e => vec![e],
    }
}

fn translate_expr(
    e: &Sexp,
    profile: &TranslatorProfile,
    namer: &mut Namer,
    out: &mut ABox,
) -> Result<Symbol, CodecError> {
    let (functor, args) = match e {
        Sexp::Atom(a) => (a.as_str(), &[][..]),
        Sexp::List(items) => match items.split_first() {
            Some((Sexp::Atom(f), rest)) => (f.as_str(), rest),
            _ => return Err(CodecError::UnmappedConstruct(e.to_string())),
        },
        Sexp::Str(s) => return Err(CodecError::UnmappedConstruct(format!("\"{s}\""))),
    };
    let rule = profile
        .content_rule(functor)
        .ok_or_else(|| CodecError::UnmappedConstruct(functor.to_string()))?;
    let ind = namer.fresh(&rule.prefix);
    out.insert(Assertion::class(rule.class.clone(), ind.clone()));
    for (i, arg) in args.iter().enumerate() {
        let prop = rule.args.get(i).ok_or_else(|| {
            CodecError::UnmappedConstruct(format!("{functor} argument {}", i + 1))
        })?;
        if prop.as_str() == SKIP {
            continue;
        }
        match arg {
            Sexp::Atom(a) if a.starts_with('?') => {}
            Sexp::Atom(a) => {
                out.insert(Assertion::link(prop.clone(), ind.clone(), a.as_str()));
            }
            Sexp::Str(s) => {
                out.insert(Assertion::literal(prop.clone(), ind.clone(), s.as_str()));
            }
            Sexp::List(_) => {
                let child = translate_expr(arg, profile, namer, out)?;
                out.insert(Assertion::link(prop.clone(), ind.clone(), child));
            }
        }
    }
    Ok(ind)
}

/// Rebuilds a message from assertions: the root is the single individual typed
/// by one of the profile's message classes.
pub fn from_abox(
    abox: &ABox,
    profile: &TranslatorProfile,
) -> Result<StructuredMessage, CodecError> {
    let classes = profile.message_classes();
    let mut roots: BTreeSet<&Symbol> = classes
        .iter()
        .flat_map(|c| abox.members_of(c.as_str()))
        .collect();
    if roots.is_empty() && profile.fallback.is_some() {
        // A message none of whose classes this system knows: its root is
        // whatever has a sender.
        roots = abox
            .iter()
            .filter_map(|a| match a {
                Assertion::Property {
                    property, subject, ..
                } if property.as_str() == HAS_SENDER => Some(subject),
                _ => None,
            })
            .collect();
    }
    let root = match roots.len() {
        1 => (*roots.iter().next().unwrap()).clone(),
        n => return Err(CodecError::AmbiguousRoot { found: n }),
    };
    let rule = profile
        .performatives
        .iter()
        .find(|r| abox.has_type(root.as_str(), r.class.as_str()));
    let performative = match (rule, &profile.fallback) {
        (Some(r), _) => r.name.clone(),
        (None, Some(f)) => f.clone(),
        (None, None) => unreachable!("root found through a message class"),
    };

    let sender = actor_name(abox, &root, HAS_SENDER);
    let receiver = actor_name(abox, &root, HAS_RECEIVER);
    let by_property: BTreeMap<&Symbol, &Symbol> =
        profile.parameters.iter().map(|(k, v)| (v, k)).collect();
    let mut language = None;
    let mut params = BTreeMap::new();
    for (p, v) in abox.properties_of(root.as_str()) {
        let (Some(param), Value::Literal(l)) = (by_property.get(p), v) else {
            continue;
        };
        if param.as_str() == KEY_LANGUAGE {
            language = Some(Symbol::new(l));
        } else if param.as_str() != KEY_MESSAGE_ID {
            params.insert((*param).clone(), l.clone());
        }
    }
    let language = language.or_else(|| profile.language.clone());

    let content = match abox
        .object_of(root.as_str(), HAS_CONTENT)
        .and_then(Value::individual)
    {
        None => Content::Empty,
        Some(c) if profile.syntax == Syntax::AssertionBlock => {
            let reach = abox.reachable_from(c.as_str());
            let assertions = abox
                .iter()
                .filter(|a| reach.contains(a.subject()) && *a.subject() != root)
                .cloned()
                .collect();
            Content::Assertions(AssertionContent {
                root: c.clone(),
                assertions,
            })
        }
        Some(c) => {
            let mut seen = BTreeSet::new();
            let wrapper = rule
                .and_then(|r| r.content.as_ref())
                .filter(|w| abox.has_type(c.as_str(), w.class.as_str()));
            let body = match wrapper {
                Some(w) => {
                    let mut exprs = Vec::new();
                    for (p, v) in abox.properties_of(c.as_str()) {
                        if *p == w.link {
                            if let Value::Individual(i) = v {
                                exprs.push(rebuild_expr(abox, profile, i, &mut seen));
                            }
                        }
                    }
                    Sexp::List(exprs)
                }
                None => rebuild_expr(abox, profile, c, &mut seen),
            };
            if body.is_empty_list() {
                Content::Empty
            } else {
                Content::Sexp(body)
            }
        }
    };

    Ok(StructuredMessage {
        envelope: Envelope {
            id: root,
            performative,
            sender,
            receiver,
            language,
            params,
        },
        content,
    })
}

fn actor_name(abox: &ABox, root: &Symbol, role: &str) -> Symbol {
    match abox.object_of(root.as_str(), role) {
        Some(Value::Literal(l)) => Symbol::new(l),
        Some(Value::Individual(a)) => match abox.object_of(a.as_str(), HAS_NAME) {
            Some(Value::Literal(n)) => Symbol::new(n),
            _ => a.clone(),
        },
        None => Symbol::new(ANONYMOUS),
    }
}

fn rebuild_expr(
    abox: &ABox,
    profile: &TranslatorProfile,
    ind: &Symbol,
    seen: &mut BTreeSet<Symbol>,
) -> Sexp {
    let rule = profile
        .content_rules
        .iter()
        .find(|r| abox.has_type(ind.as_str(), r.class.as_str()));
    let Some(rule) = rule.filter(|_| seen.insert(ind.clone())) else {
        return Sexp::Atom(ind.to_string());
    };
    let mut items = vec![Sexp::Atom(rule.functor.to_string())];
    for prop in &rule.args {
        let arg = if prop.as_str() == SKIP {
            None
        } else {
            abox.object_of(ind.as_str(), prop.as_str())
        };
        items.push(match arg {
            None => Sexp::Atom(PLACEHOLDER_VAR.into()),
            Some(Value::Literal(l)) => Sexp::Str(l.clone()),
            Some(Value::Individual(i)) => rebuild_expr(abox, profile, i, seen),
        });
    }
    if rule.args.is_empty() {
        Sexp::Atom(rule.functor.to_string())
    } else {
        Sexp::List(items)
    }
}
