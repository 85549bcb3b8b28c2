//! Rendering of terms, timepoints and formulas in the compact notation used
//! for dumps and golden files: short aliases for long names, timepoints
//! written relative to `t0`, and `∧` / `→` connectives.

use std::collections::BTreeMap;

use crate::symbol::Symbol;
use crate::term::Term;

pub const AND: &str = " ∧ ";
pub const IMPLIES: &str = " → ";

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Notation {
    aliases: BTreeMap<Symbol, Symbol>,
    reverse: BTreeMap<Symbol, Symbol>,
}

impl Notation {
    pub fn plain() -> Self {
        Self::default()
    }

    /// `pairs` maps a full name to its alias.
    pub fn with_aliases<K: Into<Symbol>, V: Into<Symbol>>(
        pairs: impl IntoIterator<Item = (K, V)>,
    ) -> Self {
        let mut n = Notation::default();
        for (k, v) in pairs {
            let (k, v) = (k.into(), v.into());
            n.reverse.insert(v.clone(), k.clone());
            n.aliases.insert(k, v);
        }
        n
    }

    pub fn aliases(&self) -> impl Iterator<Item = (&Symbol, &Symbol)> {
        self.aliases.iter()
    }

    pub fn symbol(&self, s: &Symbol) -> Symbol {
        self.aliases.get(s).cloned().unwrap_or_else(|| s.clone())
    }

    pub fn term(&self, t: &Term) -> String {
        t.map_symbols(&|s| self.symbol(s)).to_string()
    }

    /// Expands aliases back to full names.
    pub fn expand(&self, t: &Term) -> Term {
        t.map_symbols(&|s| self.reverse.get(s).cloned().unwrap_or_else(|| s.clone()))
    }

    pub fn expand_symbol(&self, s: &str) -> Symbol {
        self.reverse
            .get(s)
            .cloned()
            .unwrap_or_else(|| Symbol::new(s))
    }
}

/// `t0`, `t0+1`, `t0+2`, ...
pub fn time(t: u32) -> String {
    if t == 0 {
        "t0".to_string()
    } else {
        format!("t0+{t}")
    }
}

/// Inverse of [`time`]; a bare integer is also accepted.
pub fn parse_time(s: &str) -> Option<u32> {
    let s = s.trim();
    if s == "t0" {
        return Some(0);
    }
    if let Some(rest) = s.strip_prefix("t0+") {
        return rest.trim().parse().ok();
    }
    s.parse().ok()
}
