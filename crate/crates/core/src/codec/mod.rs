//! Concrete agent messages: parsing, serialization, envelope/content split,
//! and translation to and from basic assertions.

mod acl;
pub mod block;
mod message;
mod profile;
pub mod sexp;

use std::fmt;

pub use block::{parse_abox, write_abox, HAS_CONTENT, HAS_LANGUAGE, HAS_RECEIVER, HAS_SENDER};
pub use message::{AssertionContent, Content, Envelope, RawMessage, StructuredMessage, Syntax};
pub use profile::{
    from_abox, to_abox, ContentRule, ContentWrapper, PerformativeRule, TranslatorProfile,
    ACTOR_CLASS, ANONYMOUS, HAS_NAME,
};
pub use sexp::Sexp;

/// Location in the source text; line and column are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub offset: usize,
    pub line: usize,
    pub column: usize,
}

impl Position {
    pub fn at(src: &str, offset: usize) -> Self {
        let offset = offset.min(src.len());
        let before = &src[..offset];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        Position {
            offset,
            line,
            column,
        }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodecError {
    #[error("syntax error at {position}: expected {expected}")]
    Syntax {
        position: Position,
        expected: String,
    },
    #[error("missing required field: {0}")]
    MissingField(String),
    #[error("unsupported syntax: {0}")]
    UnsupportedSyntax(String),
    #[error("translator profile has no rule for {0}")]
    UnmappedConstruct(String),
    #[error("expected exactly one message individual, found {found}")]
    AmbiguousRoot { found: usize },
}

/// Parses message text in the syntax it is tagged with.
pub fn parse(raw: &RawMessage) -> Result<StructuredMessage, CodecError> {
    if raw.text.trim().is_empty() {
        return Err(CodecError::Syntax {
            position: Position::at(&raw.text, 0),
            expected: "a message".into(),
        });
    }
    match raw.syntax {
        Syntax::FipaAcl | Syntax::Kqml => acl::parse(&raw.text),
        Syntax::AssertionBlock => block::parse_message(&raw.text),
    }
}

/// Writes a message in `syntax`. Content must be representable there:
/// s-expression content needs FIPA-ACL or KQML, assertion content needs the
/// assertion-block syntax.
pub fn serialize(msg: &StructuredMessage, syntax: Syntax) -> Result<RawMessage, CodecError> {
    if !msg.content.fits(syntax) {
        return Err(CodecError::UnsupportedSyntax(format!(
            "{syntax} cannot carry this content"
        )));
    }
    let text = match syntax {
        Syntax::FipaAcl | Syntax::Kqml => {
            if let Some(k) = msg
                .envelope
                .params
                .keys()
                .find(|k| acl::is_reserved_key(k.as_str()))
            {
                return Err(CodecError::UnsupportedSyntax(format!(
                    "parameter :{k} is reserved in {syntax}"
                )));
            }
            acl::serialize(msg, syntax)
        }
        Syntax::AssertionBlock => {
            if let Some(k) = msg
                .envelope
                .params
                .keys()
                .find(|k| block::is_reserved_predicate(k.as_str()))
            {
                return Err(CodecError::UnsupportedSyntax(format!(
                    "parameter {k} is reserved in {syntax}"
                )));
            }
            block::serialize_message(msg)
        }
    };
    Ok(RawMessage::new(syntax, text))
}

/// Divides a message into its envelope and content.
pub fn split(msg: StructuredMessage) -> (Envelope, Content) {
    msg.split()
}

pub fn join(envelope: Envelope, content: Content) -> StructuredMessage {
    StructuredMessage::join(envelope, content)
}
