//! First-order terms shared by fluents, effect-axiom templates and state
//! constraints.
//!
//! A fluent such as `CC(a02,a01,accept(a02,a01,f01),f01)` is a ground term;
//! templates use variables (`?r`, `?s`, `?P`). Class fluents are unary
//! applications `ReportAct(f01)`, property fluents binary `hasQuery(f01,RE01)`,
//! and an abstract fluent like `k` is a bare symbol.

use std::collections::BTreeMap;
use std::fmt;

use crate::symbol::Symbol;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(Symbol),
    Sym(Symbol),
    Lit(String),
    App(Symbol, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<Symbol>) -> Self {
        Term::Var(name.into())
    }

    pub fn sym(name: impl Into<Symbol>) -> Self {
        Term::Sym(name.into())
    }

    pub fn app(functor: impl Into<Symbol>, args: Vec<Term>) -> Self {
        Term::App(functor.into(), args)
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Sym(_) | Term::Lit(_) => true,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn as_sym(&self) -> Option<&Symbol> {
        match self {
            Term::Sym(s) => Some(s),
            _ => None,
        }
    }

    pub fn functor(&self) -> Option<(&Symbol, usize)> {
        match self {
            Term::App(f, args) => Some((f, args.len())),
            Term::Sym(s) => Some((s, 0)),
            _ => None,
        }
    }

    /// Variables in order of first occurrence.
    pub fn vars(&self) -> Vec<Symbol> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<Symbol>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone())
                }
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
            _ => {}
        }
    }

    /// One-way matching of this pattern against a ground term, extending `b`.
    /// On failure `b` may hold partial bindings; callers clone before trying.
    pub fn match_ground(&self, ground: &Term, b: &mut Bindings) -> bool {
        match (self, ground) {
            (Term::Var(v), g) => match b.get(v) {
                Some(bound) => bound == g,
                None => {
                    b.bind(v.clone(), g.clone());
                    true
                }
            },
            (Term::Sym(a), Term::Sym(g)) => a == g,
            (Term::Lit(a), Term::Lit(g)) => a == g,
            (Term::App(f, args), Term::App(g, gargs)) => {
                f == g
                    && args.len() == gargs.len()
                    && args.iter().zip(gargs).all(|(p, x)| p.match_ground(x, b))
            }
            _ => false,
        }
    }

    /// Replaces bound variables; unbound ones are left in place.
    pub fn substitute(&self, b: &Bindings) -> Term {
        match self {
            Term::Var(v) => b.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::App(f, args) => {
                Term::App(f.clone(), args.iter().map(|a| a.substitute(b)).collect())
            }
            _ => self.clone(),
        }
    }

    /// Applies `f` to every symbol (functors included); used for aliasing.
    pub fn map_symbols(&self, f: &impl Fn(&Symbol) -> Symbol) -> Term {
        match self {
            Term::Var(v) => Term::Var(v.clone()),
            Term::Sym(s) => Term::Sym(f(s)),
            Term::Lit(l) => Term::Lit(l.clone()),
            Term::App(g, args) => Term::App(f(g), args.iter().map(|a| a.map_symbols(f)).collect()),
        }
    }

    pub fn parse(text: &str) -> Result<Term, TermSyntaxError> {
        let mut p = TermParser { src: text, pos: 0 };
        let t = p.term()?;
        p.skip_ws();
        if p.pos != text.len() {
            return Err(p.error("end of term"));
        }
        Ok(t)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "?{v}"),
            Term::Sym(s) => write!(f, "{s}"),
            Term::Lit(l) => crate::abox::write_quoted(f, l),
            Term::App(g, args) => {
                write!(f, "{g}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Variable assignment produced by matching.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Bindings(BTreeMap<Symbol, Term>);

impl Bindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, v: &Symbol) -> Option<&Term> {
        self.0.get(v)
    }

    pub fn bind(&mut self, v: Symbol, t: Term) {
        self.0.insert(v, t);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, &Term)> {
        self.0.iter()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("term syntax error at column {column}: expected {expected}")]
pub struct TermSyntaxError {
    pub column: usize,
    pub expected: String,
}

pub(crate) fn is_name_char(c: char) -> bool {
    c.is_alphanumeric()
        || matches!(
            c,
            '-' | '_' | '.' | ':' | '+' | '*' | '/' | '<' | '>' | '=' | '!' | '#' | '$'
        )
}

pub(crate) struct TermParser<'a> {
    pub(crate) src: &'a str,
    pub(crate) pos: usize,
}

impl<'a> TermParser<'a> {
    pub(crate) fn error(&self, expected: &str) -> TermSyntaxError {
        TermSyntaxError {
            column: self.src[..self.pos].chars().count() + 1,
            expected: expected.to_string(),
        }
    }

    pub(crate) fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    pub(crate) fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    pub(crate) fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    pub(crate) fn name(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if is_name_char(c) {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        (self.pos > start).then(|| &self.src[start..self.pos])
    }

    pub(crate) fn term(&mut self) -> Result<Term, TermSyntaxError> {
        self.skip_ws();
        if self.eat('?') {
            let n = self.name().ok_or_else(|| self.error("variable name"))?;
            return Ok(Term::var(n));
        }
        if self.peek() == Some('\'') {
            return self.literal().map(Term::Lit);
        }
        let n = self
            .name()
            .ok_or_else(|| self.error("name, variable or literal"))?;
        if self.eat('(') {
            let mut args = Vec::new();
            if !self.eat(')') {
                loop {
                    args.push(self.term()?);
                    if self.eat(')') {
                        break;
                    }
                    if !self.eat(',') {
                        return Err(self.error("',' or ')'"));
                    }
                }
            }
            Ok(Term::app(n, args))
        } else {
            Ok(Term::sym(n))
        }
    }

    fn literal(&mut self) -> Result<String, TermSyntaxError> {
        self.pos += 1;
        let mut out = String::new();
        loop {
            let c = self.peek().ok_or_else(|| self.error("closing quote"))?;
            self.pos += c.len_utf8();
            match c {
                '\'' => return Ok(out),
                '\\' => {
                    let e = self.peek().ok_or_else(|| self.error("escape"))?;
                    self.pos += e.len_utf8();
                    out.push(if e == 'n' { '\n' } else { e });
                }
                c => out.push(c),
            }
        }
    }
}
