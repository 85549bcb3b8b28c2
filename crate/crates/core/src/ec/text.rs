//! Reading observations written as `HoldsAt(f,t0)`, `¬HoldsAt(f,t0+1)` or
//! `ReleasedAt(f,t0)`, one per line, with `#` comments.

use super::{Observation, Observations, Predicate};
use crate::notation::{parse_time, Notation};
use crate::term::Term;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ObservationSyntaxError {
    pub line: usize,
    pub message: String,
}

pub fn parse_observation(text: &str, n: &Notation) -> Result<Observation, ObservationSyntaxError> {
    parse_at(text, 1, n)
}

/// Aliases of `n` are expanded back to full names.
pub fn parse_observations(
    text: &str,
    n: &Notation,
) -> Result<Observations, ObservationSyntaxError> {
    let mut out = Observations::new();
    for (i, line) in text.lines().enumerate() {
        let line_text = line.split_once('#').map_or(line, |(l, _)| l).trim();
        if line_text.is_empty() {
            continue;
        }
        out.insert(parse_at(line_text, i + 1, n)?);
    }
    Ok(out)
}

fn parse_at(text: &str, line: usize, n: &Notation) -> Result<Observation, ObservationSyntaxError> {
    let err = |message: &str| ObservationSyntaxError {
        line,
        message: message.to_string(),
    };
    let mut s = text.trim();
    let mut holds = true;
    for neg in ["¬", "not ", "!"] {
        if let Some(rest) = s.strip_prefix(neg) {
            holds = false;
            s = rest.trim_start();
            break;
        }
    }
    let (predicate, rest) = if let Some(r) = s.strip_prefix("HoldsAt(") {
        (Predicate::HoldsAt, r)
    } else if let Some(r) = s.strip_prefix("ReleasedAt(") {
        (Predicate::ReleasedAt, r)
    } else {
        return Err(err("expected HoldsAt(...) or ReleasedAt(...)"));
    };
    let inner = rest
        .trim_end()
        .strip_suffix(')')
        .ok_or_else(|| err("missing closing ')'"))?;
    let split = last_top_level_comma(inner).ok_or_else(|| err("expected `fluent, time`"))?;
    let fluent = Term::parse(&inner[..split]).map_err(|e| err(&format!("fluent: {e}")))?;
    if !fluent.is_ground() {
        return Err(err("observed fluents must be ground"));
    }
    let time = parse_time(&inner[split + 1..])
        .ok_or_else(|| err("expected a timepoint such as t0 or t0+1"))?;
    Ok(Observation {
        holds,
        predicate,
        fluent: n.expand(&fluent),
        time,
    })
}

fn last_top_level_comma(s: &str) -> Option<usize> {
    let mut depth = 0i32;
    let mut quoted = false;
    let mut found = None;
    for (i, c) in s.char_indices() {
        match c {
            '\'' => quoted = !quoted,
            '(' if !quoted => depth += 1,
            ')' if !quoted => depth -= 1,
            ',' if !quoted && depth == 0 => found = Some(i),
            _ => {}
        }
    }
    found
}
