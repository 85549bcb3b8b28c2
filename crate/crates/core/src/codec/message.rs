use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Deserialize;

use super::sexp::Sexp;
use super::CodecError;
use crate::abox::Assertion;
use crate::symbol::Symbol;

/// Concrete message syntaxes understood by the codec.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Syntax {
    FipaAcl,
    Kqml,
    AssertionBlock,
}

impl Syntax {
    pub const ALL: [Syntax; 3] = [Syntax::FipaAcl, Syntax::Kqml, Syntax::AssertionBlock];

    pub fn name(self) -> &'static str {
        match self {
            Syntax::FipaAcl => "fipa-acl",
            Syntax::Kqml => "kqml",
            Syntax::AssertionBlock => "assertion-block",
        }
    }

    /// Whether the syntax carries s-expression content (as opposed to assertions).
    pub fn is_sexp(self) -> bool {
        !matches!(self, Syntax::AssertionBlock)
    }
}

impl fmt::Display for Syntax {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Syntax {
    type Err = CodecError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Syntax::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| CodecError::UnsupportedSyntax(s.to_string()))
    }
}

/// Message text tagged with the syntax it is written in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawMessage {
    pub syntax: Syntax,
    pub text: String,
}

impl RawMessage {
    pub fn new(syntax: Syntax, text: impl Into<String>) -> Self {
        RawMessage {
            syntax,
            text: text.into(),
        }
    }
}

/// The intention-bearing half of a message.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Envelope {
    /// Identifier of the message individual; unique within one harness run.
    pub id: Symbol,
    pub performative: Symbol,
    pub sender: Symbol,
    pub receiver: Symbol,
    /// Content language tag, when declared.
    pub language: Option<Symbol>,
    pub params: BTreeMap<Symbol, String>,
}

impl Envelope {
    pub fn new(
        id: impl Into<Symbol>,
        performative: impl Into<Symbol>,
        sender: impl Into<Symbol>,
        receiver: impl Into<Symbol>,
    ) -> Self {
        Envelope {
            id: id.into(),
            performative: performative.into(),
            sender: sender.into(),
            receiver: receiver.into(),
            language: None,
            params: BTreeMap::new(),
        }
    }

    pub fn with_language(mut self, language: impl Into<Symbol>) -> Self {
        self.language = Some(language.into());
        self
    }
}

/// Content carried as a set of assertions, rooted at the content individual.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AssertionContent {
    pub root: Symbol,
    pub assertions: Vec<Assertion>,
}

/// The object of the message's intention.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub enum Content {
    #[default]
    Empty,
    Sexp(Sexp),
    Assertions(AssertionContent),
}

impl Content {
    pub fn is_empty(&self) -> bool {
        matches!(self, Content::Empty)
    }

    /// Whether this content can be written in `syntax`.
    pub fn fits(&self, syntax: Syntax) -> bool {
        match self {
            Content::Empty => true,
            Content::Sexp(_) => syntax.is_sexp(),
            Content::Assertions(_) => !syntax.is_sexp(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StructuredMessage {
    pub envelope: Envelope,
    pub content: Content,
}

impl StructuredMessage {
    pub fn new(envelope: Envelope, content: Content) -> Self {
        StructuredMessage { envelope, content }
    }

    pub fn message_id(&self) -> &Symbol {
        &self.envelope.id
    }

    /// Divides the message into envelope and content.
    pub fn split(self) -> (Envelope, Content) {
        (self.envelope, self.content)
    }

    pub fn join(envelope: Envelope, content: Content) -> Self {
        StructuredMessage { envelope, content }
    }
}
