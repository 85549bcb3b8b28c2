//! Wire frames exchanged by managers.
//!
//! ```text
//! CONVERT Message01 MedicalFIPAAgents Aingeru
//! Message01 rdf:type FIPA-Query-Ref
//! ...
//!
//! ```
//!
//! A header line, the saturated assertions one per line, and a blank line.

use std::fmt;
use std::io::{self, BufRead, Write};

use crate::symbol::Symbol;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub message: Symbol,
    pub from: Symbol,
    pub to: Symbol,
    /// Assertion-block text; blank lines are dropped on encoding.
    pub body: String,
}

#[derive(Debug, thiserror::Error)]
pub enum FrameError {
    #[error("bad frame header `{0}`")]
    Header(String),
    #[error("connection closed inside a frame")]
    Truncated,
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Frame {
    pub fn new(
        message: impl Into<Symbol>,
        from: impl Into<Symbol>,
        to: impl Into<Symbol>,
        body: impl Into<String>,
    ) -> Self {
        Frame {
            message: message.into(),
            from: from.into(),
            to: to.into(),
            body: body.into(),
        }
    }

    pub fn encode(&self) -> String {
        self.to_string()
    }

    pub fn write_to(&self, w: &mut impl Write) -> io::Result<()> {
        w.write_all(self.encode().as_bytes())?;
        w.flush()
    }

    /// Reads the next frame; `Ok(None)` at a clean end of stream.
    pub fn read_from(r: &mut impl BufRead) -> Result<Option<Frame>, FrameError> {
        let mut header = String::new();
        loop {
            header.clear();
            if r.read_line(&mut header)? == 0 {
                return Ok(None);
            }
            if !header.trim().is_empty() {
                break;
            }
        }
        let words: Vec<&str> = header.split_whitespace().collect();
        let [keyword, message, from, to] = words.as_slice() else {
            return Err(FrameError::Header(header.trim_end().to_string()));
        };
        if *keyword != "CONVERT" {
            return Err(FrameError::Header(header.trim_end().to_string()));
        }
        let mut body = String::new();
        loop {
            let mut line = String::new();
            if r.read_line(&mut line)? == 0 {
                return Err(FrameError::Truncated);
            }
            if line.trim().is_empty() {
                break;
            }
            body.push_str(line.trim_end_matches(['\r', '\n']));
            body.push('\n');
        }
        Ok(Some(Frame::new(*message, *from, *to, body)))
    }

    pub fn decode(text: &str) -> Result<Frame, FrameError> {
        Frame::read_from(&mut text.as_bytes())?.ok_or(FrameError::Truncated)
    }
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CONVERT {} {} {}", self.message, self.from, self.to)?;
        for line in self.body.lines().filter(|l| !l.trim().is_empty()) {
            writeln!(f, "{line}")?;
        }
        writeln!(f)
    }
}
