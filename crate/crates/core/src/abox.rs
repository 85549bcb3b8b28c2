//! Basic assertional axioms: class assertions `C(x)` and property assertions
//! `R(x, y)`, and the assertion sets built from them.

use std::collections::btree_set;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::notation::Notation;
use crate::symbol::Symbol;

/// The predicate token that marks a class assertion in triple form.
pub const RDF_TYPE: &str = "rdf:type";

/// Object position of a property assertion.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Individual(Symbol),
    Literal(String),
}

impl Value {
    pub fn individual(&self) -> Option<&Symbol> {
        match self {
            Value::Individual(s) => Some(s),
            Value::Literal(_) => None,
        }
    }

    pub fn literal(&self) -> Option<&str> {
        match self {
            Value::Literal(s) => Some(s),
            Value::Individual(_) => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Individual(s) => write!(f, "{s}"),
            Value::Literal(s) => write_quoted(f, s),
        }
    }
}

pub(crate) fn write_quoted(f: &mut impl fmt::Write, s: &str) -> fmt::Result {
    f.write_char('\'')?;
    for c in s.chars() {
        match c {
            '\'' => f.write_str("\\'")?,
            '\\' => f.write_str("\\\\")?,
            '\n' => f.write_str("\\n")?,
            c => f.write_char(c)?,
        }
    }
    f.write_char('\'')
}

/// A basic assertion. Only atomic class names ever appear in class assertions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Assertion {
    Class {
        class: Symbol,
        individual: Symbol,
    },
    Property {
        property: Symbol,
        subject: Symbol,
        object: Value,
    },
}

impl Assertion {
    pub fn class(class: impl Into<Symbol>, individual: impl Into<Symbol>) -> Self {
        Assertion::Class {
            class: class.into(),
            individual: individual.into(),
        }
    }

    pub fn link(
        property: impl Into<Symbol>,
        subject: impl Into<Symbol>,
        object: impl Into<Symbol>,
    ) -> Self {
        Assertion::Property {
            property: property.into(),
            subject: subject.into(),
            object: Value::Individual(object.into()),
        }
    }

    pub fn literal(
        property: impl Into<Symbol>,
        subject: impl Into<Symbol>,
        value: impl Into<String>,
    ) -> Self {
        Assertion::Property {
            property: property.into(),
            subject: subject.into(),
            object: Value::Literal(value.into()),
        }
    }

    /// `C(x)` or `R(x,y)` with aliases applied.
    pub fn render(&self, n: &Notation) -> String {
        match self {
            Assertion::Class { class, individual } => {
                format!("{}({})", n.symbol(class), n.symbol(individual))
            }
            Assertion::Property {
                property,
                subject,
                object: Value::Individual(o),
            } => {
                format!(
                    "{}({},{})",
                    n.symbol(property),
                    n.symbol(subject),
                    n.symbol(o)
                )
            }
            Assertion::Property {
                property,
                subject,
                object,
            } => {
                format!("{}({},{object})", n.symbol(property), n.symbol(subject))
            }
        }
    }

    pub fn subject(&self) -> &Symbol {
        match self {
            Assertion::Class { individual, .. } => individual,
            Assertion::Property { subject, .. } => subject,
        }
    }
}

impl fmt::Display for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Assertion::Class { class, individual } => write!(f, "{individual} {RDF_TYPE} {class}"),
            Assertion::Property {
                property,
                subject,
                object,
            } => write!(f, "{subject} {property} {object}"),
        }
    }
}

/// A set of basic assertions (the `M`, `M_der` and `M_sat` of a conversion).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ABox {
    assertions: BTreeSet<Assertion>,
}

impl ABox {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns true when the assertion was not already present.
    pub fn insert(&mut self, a: Assertion) -> bool {
        self.assertions.insert(a)
    }

    pub fn contains(&self, a: &Assertion) -> bool {
        self.assertions.contains(a)
    }

    pub fn len(&self) -> usize {
        self.assertions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assertions.is_empty()
    }

    pub fn iter(&self) -> btree_set::Iter<'_, Assertion> {
        self.assertions.iter()
    }

    pub fn union(&self, other: &ABox) -> ABox {
        self.assertions.union(&other.assertions).cloned().collect()
    }

    pub fn difference(&self, other: &ABox) -> ABox {
        self.assertions
            .difference(&other.assertions)
            .cloned()
            .collect()
    }

    pub fn is_subset(&self, other: &ABox) -> bool {
        self.assertions.is_subset(&other.assertions)
    }

    pub fn has_type(&self, individual: &str, class: &str) -> bool {
        self.assertions
            .contains(&Assertion::class(class, individual))
    }

    /// Classes asserted for `individual`.
    pub fn types_of<'a>(&'a self, individual: &'a str) -> impl Iterator<Item = &'a Symbol> + 'a {
        self.assertions.iter().filter_map(move |a| match a {
            Assertion::Class {
                class,
                individual: i,
            } if i.as_str() == individual => Some(class),
            _ => None,
        })
    }

    /// Individuals asserted to be members of `class`.
    pub fn members_of<'a>(&'a self, class: &'a str) -> impl Iterator<Item = &'a Symbol> + 'a {
        self.assertions.iter().filter_map(move |a| match a {
            Assertion::Class {
                class: c,
                individual,
            } if c.as_str() == class => Some(individual),
            _ => None,
        })
    }

    /// `(property, object)` pairs whose subject is `subject`.
    pub fn properties_of<'a>(
        &'a self,
        subject: &'a str,
    ) -> impl Iterator<Item = (&'a Symbol, &'a Value)> + 'a {
        self.assertions.iter().filter_map(move |a| match a {
            Assertion::Property {
                property,
                subject: s,
                object,
            } if s.as_str() == subject => Some((property, object)),
            _ => None,
        })
    }

    /// First object of `property` on `subject`, if any.
    pub fn object_of(&self, subject: &str, property: &str) -> Option<&Value> {
        self.assertions.iter().find_map(|a| match a {
            Assertion::Property {
                property: p,
                subject: s,
                object,
            } if s.as_str() == subject && p.as_str() == property => Some(object),
            _ => None,
        })
    }

    /// Every individual mentioned in subject or individual-object position.
    pub fn individuals(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        for a in &self.assertions {
            out.insert(a.subject().clone());
            if let Assertion::Property {
                object: Value::Individual(o),
                ..
            } = a
            {
                out.insert(o.clone());
            }
        }
        out
    }

    /// Class assertions grouped by individual.
    pub fn class_index(&self) -> BTreeMap<&Symbol, BTreeSet<&Symbol>> {
        let mut out: BTreeMap<&Symbol, BTreeSet<&Symbol>> = BTreeMap::new();
        for a in &self.assertions {
            if let Assertion::Class { class, individual } = a {
                out.entry(individual).or_default().insert(class);
            }
        }
        out
    }

    /// Individuals reachable from `root` through individual-valued properties,
    /// `root` included.
    pub fn reachable_from(&self, root: &str) -> BTreeSet<Symbol> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![Symbol::new(root)];
        while let Some(x) = stack.pop() {
            if !seen.insert(x.clone()) {
                continue;
            }
            for (_, v) in self.properties_of(x.as_str()) {
                if let Value::Individual(o) = v {
                    if !seen.contains(o) {
                        stack.push(o.clone());
                    }
                }
            }
        }
        seen
    }
}

impl FromIterator<Assertion> for ABox {
    fn from_iter<I: IntoIterator<Item = Assertion>>(iter: I) -> Self {
        ABox {
            assertions: iter.into_iter().collect(),
        }
    }
}

impl Extend<Assertion> for ABox {
    fn extend<I: IntoIterator<Item = Assertion>>(&mut self, iter: I) {
        self.assertions.extend(iter)
    }
}

impl IntoIterator for ABox {
    type Item = Assertion;
    type IntoIter = btree_set::IntoIter<Assertion>;
    fn into_iter(self) -> Self::IntoIter {
        self.assertions.into_iter()
    }
}

impl<'a> IntoIterator for &'a ABox {
    type Item = &'a Assertion;
    type IntoIter = btree_set::Iter<'a, Assertion>;
    fn into_iter(self) -> Self::IntoIter {
        self.assertions.iter()
    }
}

/// One assertion per line, in triple form.
impl fmt::Display for ABox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.assertions {
            writeln!(f, "{a}")?;
        }
        Ok(())
    }
}
