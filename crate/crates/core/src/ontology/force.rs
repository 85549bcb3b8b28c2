//! Illocutionary forces as a primitive plus accumulated operations.
//!
//! Every operation either adds a label to a set or shifts the degree of
//! strength, so a descriptor in canonical form (sets plus summed degree) does
//! not depend on the order the operations were applied in.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Primitive {
    Assertive,
    Directive,
    Commissive,
    Declarative,
    Expressive,
}

impl Primitive {
    pub const ALL: [Primitive; 5] = [
        Primitive::Assertive,
        Primitive::Directive,
        Primitive::Commissive,
        Primitive::Declarative,
        Primitive::Expressive,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Primitive::Assertive => "Assertive",
            Primitive::Directive => "Directive",
            Primitive::Commissive => "Commissive",
            Primitive::Declarative => "Declarative",
            Primitive::Expressive => "Expressive",
        }
    }

    pub fn is_primitive_class(class: &str) -> bool {
        Self::ALL.iter().any(|p| p.name() == class)
    }
}

impl FromStr for Primitive {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("not a primitive force: {s}"))
    }
}

impl fmt::Display for Primitive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ForceDescriptor {
    pub base: Primitive,
    pub mode: BTreeSet<String>,
    pub degree: i64,
    pub content: BTreeSet<String>,
    pub preparatory: BTreeSet<String>,
    pub sincerity: BTreeSet<String>,
}

impl ForceDescriptor {
    /// No special mode of achievement and a neutral degree of strength.
    pub fn primitive(base: Primitive) -> Self {
        ForceDescriptor {
            base,
            mode: BTreeSet::new(),
            degree: 0,
            content: BTreeSet::new(),
            preparatory: BTreeSet::new(),
            sincerity: BTreeSet::new(),
        }
    }

    pub fn apply(&mut self, op: &ForceOp) {
        match op {
            ForceOp::AddContentCondition(l) => {
                self.content.insert(l.clone());
            }
            ForceOp::AddPreparatory(l) => {
                self.preparatory.insert(l.clone());
            }
            ForceOp::AddSincerity(l) => {
                self.sincerity.insert(l.clone());
            }
            ForceOp::RestrictMode(l) => {
                self.mode.insert(l.clone());
            }
            ForceOp::Strengthen(n) => self.degree += i64::from(*n),
            ForceOp::Weaken(n) => self.degree -= i64::from(*n),
        }
    }
}

/// The six force-building operations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ForceOp {
    AddContentCondition(String),
    AddPreparatory(String),
    AddSincerity(String),
    RestrictMode(String),
    Strengthen(u32),
    Weaken(u32),
}

pub fn derive_force(base: &ForceDescriptor, ops: &[ForceOp]) -> ForceDescriptor {
    let mut out = base.clone();
    for op in ops {
        out.apply(op);
    }
    out
}
