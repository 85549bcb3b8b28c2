//! A small s-expression reader and printer for the FIPA-ACL and KQML
//! surface syntaxes.
//!
//! Atoms are runs of non-space characters other than parentheses and double
//! quotes; `:name` atoms are parameter keywords. Strings are double-quoted
//! with `\"` and `\\` escapes. `;` starts a comment running to end of line.

use std::fmt;

use super::{CodecError, Position};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Sexp {
    Atom(String),
    Str(String),
    List(Vec<Sexp>),
}

impl Sexp {
    pub fn atom(s: impl Into<String>) -> Self {
        Sexp::Atom(s.into())
    }

    pub fn list(items: Vec<Sexp>) -> Self {
        Sexp::List(items)
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom(a) => Some(a),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Sexp]> {
        match self {
            Sexp::List(l) => Some(l),
            _ => None,
        }
    }

    pub fn is_keyword(&self) -> bool {
        matches!(self, Sexp::Atom(a) if a.starts_with(':') && a.len() > 1)
    }

    pub fn is_empty_list(&self) -> bool {
        matches!(self, Sexp::List(l) if l.is_empty())
    }

    /// True when `s` can be printed as an atom and reads back as the same atom.
    pub fn is_atom_text(s: &str) -> bool {
        !s.is_empty()
            && s.chars()
                .all(|c| !c.is_whitespace() && !matches!(c, '(' | ')' | '"' | ';'))
    }

    /// Parses exactly one expression, allowing surrounding whitespace and comments.
    pub fn parse(text: &str) -> Result<Sexp, CodecError> {
        let mut r = Reader::new(text);
        r.skip_trivia();
        let e = r.expr()?;
        r.skip_trivia();
        if r.pos < text.len() {
            return Err(r.error("end of input"));
        }
        Ok(e)
    }

    /// Parses a whitespace-separated sequence of expressions.
    pub fn parse_seq(text: &str) -> Result<Vec<Sexp>, CodecError> {
        let mut r = Reader::new(text);
        let mut out = Vec::new();
        loop {
            r.skip_trivia();
            if r.pos >= text.len() {
                return Ok(out);
            }
            out.push(r.expr()?);
        }
    }
}

impl fmt::Display for Sexp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sexp::Atom(a) => f.write_str(a),
            Sexp::Str(s) => {
                f.write_str("\"")?;
                for c in s.chars() {
                    match c {
                        '"' => f.write_str("\\\"")?,
                        '\\' => f.write_str("\\\\")?,
                        c => write!(f, "{c}")?,
                    }
                }
                f.write_str("\"")
            }
            Sexp::List(items) => {
                f.write_str("(")?;
                for (i, it) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{it}")?;
                }
                f.write_str(")")
            }
        }
    }
}

struct Reader<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Reader<'a> {
    fn new(src: &'a str) -> Self {
        Reader { src, pos: 0 }
    }

    fn error(&self, expected: &str) -> CodecError {
        CodecError::Syntax {
            position: Position::at(self.src, self.pos),
            expected: expected.to_string(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == ';' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn expr(&mut self) -> Result<Sexp, CodecError> {
        match self.peek() {
            None => Err(self.error("expression")),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.peek() {
                        None => return Err(self.error("')'")),
                        Some(')') => {
                            self.bump();
                            return Ok(Sexp::List(items));
                        }
                        Some(_) => items.push(self.expr()?),
                    }
                }
            }
            Some(')') => Err(self.error("expression")),
            Some('"') => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        None => return Err(self.error("closing '\"'")),
                        Some('"') => return Ok(Sexp::Str(s)),
                        Some('\\') => match self.bump() {
                            None => return Err(self.error("escaped character")),
                            Some(c) => s.push(c),
                        },
                        Some(c) => s.push(c),
                    }
                }
            }
            Some(_) => {
                let start = self.pos;
                while let Some(c) = self.peek() {
                    if c.is_whitespace() || matches!(c, '(' | ')' | '"' | ';') {
                        break;
                    }
                    self.bump();
                }
                Ok(Sexp::Atom(self.src[start..self.pos].to_string()))
            }
        }
    }
}
