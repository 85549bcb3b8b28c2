//! Layered communication-acts ontology: terminology, realization of message
//! assertions, and illocutionary-force descriptors.

mod dsl;
mod force;
mod realize;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::symbol::Symbol;

pub use force::{derive_force, ForceDescriptor, ForceOp, Primitive};
pub use realize::{realize, saturate, Derivation, DerivationRule, Reasoner};

/// Root of the communication-act hierarchy.
pub const COMMUNICATION_ACT: &str = "CommunicationAct";

const SEED_COMMON: &str = include_str!("../../data/common.ont");

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassExpr {
    Atomic(Symbol),
    Conjunction(Vec<ClassExpr>),
    Existential {
        property: Symbol,
        filler: Box<ClassExpr>,
    },
}

impl ClassExpr {
    pub fn atomic(name: impl Into<Symbol>) -> Self {
        ClassExpr::Atomic(name.into())
    }

    pub fn some(property: impl Into<Symbol>, filler: ClassExpr) -> Self {
        ClassExpr::Existential {
            property: property.into(),
            filler: Box::new(filler),
        }
    }

    /// Builds a conjunction, flattening nested conjunctions. A single
    /// conjunct is returned as is.
    pub fn and(parts: impl IntoIterator<Item = ClassExpr>) -> Self {
        let mut flat = Vec::new();
        for p in parts {
            match p {
                ClassExpr::Conjunction(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        if flat.len() == 1 {
            flat.pop().unwrap()
        } else {
            ClassExpr::Conjunction(flat)
        }
    }

    pub fn conjuncts(&self) -> &[ClassExpr] {
        match self {
            ClassExpr::Conjunction(parts) => parts,
            other => std::slice::from_ref(other),
        }
    }

    /// Atomic names that are direct conjuncts (not under an existential).
    pub fn atomic_conjuncts(&self) -> impl Iterator<Item = &Symbol> {
        self.conjuncts().iter().filter_map(|c| match c {
            ClassExpr::Atomic(n) => Some(n),
            _ => None,
        })
    }

    /// Every class name mentioned, at any depth.
    pub fn class_names(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.visit(&mut |e| {
            if let ClassExpr::Atomic(n) = e {
                out.insert(n.clone());
            }
        });
        out
    }

    pub fn property_names(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.visit(&mut |e| {
            if let ClassExpr::Existential { property, .. } = e {
                out.insert(property.clone());
            }
        });
        out
    }

    /// Nesting depth of existential restrictions.
    pub fn depth(&self) -> usize {
        match self {
            ClassExpr::Atomic(_) => 0,
            ClassExpr::Conjunction(parts) => parts.iter().map(ClassExpr::depth).max().unwrap_or(0),
            ClassExpr::Existential { filler, .. } => 1 + filler.depth(),
        }
    }

    fn visit(&self, f: &mut impl FnMut(&ClassExpr)) {
        f(self);
        match self {
            ClassExpr::Atomic(_) => {}
            ClassExpr::Conjunction(parts) => parts.iter().for_each(|p| p.visit(f)),
            ClassExpr::Existential { filler, .. } => filler.visit(f),
        }
    }

    pub fn parse(text: &str) -> Result<ClassExpr, OntologyError> {
        dsl::parse_class_expr(text)
    }
}

impl fmt::Display for ClassExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassExpr::Atomic(n) => write!(f, "{n}"),
            ClassExpr::Conjunction(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" and ")?;
                    }
                    match p {
                        ClassExpr::Conjunction(_) => write!(f, "({p})")?,
                        _ => write!(f, "{p}")?,
                    }
                }
                Ok(())
            }
            ClassExpr::Existential { property, filler } => match **filler {
                ClassExpr::Conjunction(_) => write!(f, "({property} some ({filler}))"),
                _ => write!(f, "({property} some {filler})"),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AxiomKind {
    SubClassOf,
    EquivalentTo,
}

impl AxiomKind {
    pub fn keyword(self) -> &'static str {
        match self {
            AxiomKind::SubClassOf => "SubClassOf",
            AxiomKind::EquivalentTo => "EquivalentTo",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layer {
    Common,
    Application,
    Domain,
    Action,
}

impl Layer {
    pub fn name(self) -> &'static str {
        match self {
            Layer::Common => "common",
            Layer::Application => "application",
            Layer::Domain => "domain",
            Layer::Action => "action",
        }
    }
}

impl FromStr for Layer {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "common" => Ok(Layer::Common),
            "application" => Ok(Layer::Application),
            "domain" => Ok(Layer::Domain),
            "action" => Ok(Layer::Action),
            other => Err(format!("unknown layer '{other}'")),
        }
    }
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TBoxAxiom {
    pub kind: AxiomKind,
    pub lhs: Symbol,
    pub rhs: ClassExpr,
    pub layer: Layer,
    pub system: Option<Symbol>,
}

impl TBoxAxiom {
    pub fn sub_class_of(lhs: impl Into<Symbol>, rhs: ClassExpr) -> Self {
        TBoxAxiom {
            kind: AxiomKind::SubClassOf,
            lhs: lhs.into(),
            rhs,
            layer: Layer::Common,
            system: None,
        }
    }

    pub fn equivalent_to(lhs: impl Into<Symbol>, rhs: ClassExpr) -> Self {
        TBoxAxiom {
            kind: AxiomKind::EquivalentTo,
            lhs: lhs.into(),
            rhs,
            layer: Layer::Common,
            system: None,
        }
    }

    pub fn in_layer(mut self, layer: Layer, system: Option<Symbol>) -> Self {
        self.layer = layer;
        self.system = system;
        self
    }
}

impl fmt::Display for TBoxAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.kind.keyword(), self.rhs)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum OntologyError {
    #[error("line {line}, column {column}: expected {expected}")]
    Syntax {
        line: usize,
        column: usize,
        expected: String,
    },
    #[error("line {line}: unsupported axiom shape: {text}")]
    UnsupportedAxiomShape { line: usize, text: String },
    #[error("line {line}: application-layer axiom without a `system:` pragma")]
    MissingSystem { line: usize },
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// A TBox together with force descriptors for act classes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Ontology {
    tbox: BTreeSet<TBoxAxiom>,
    pub forces: BTreeMap<Symbol, ForceDescriptor>,
}

impl Ontology {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_axioms(axioms: impl IntoIterator<Item = TBoxAxiom>) -> Self {
        Ontology {
            tbox: axioms.into_iter().collect(),
            forces: BTreeMap::new(),
        }
    }

    /// Parses ontology DSL text.
    pub fn parse(text: &str) -> Result<Self, OntologyError> {
        dsl::parse(text)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, OntologyError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| OntologyError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    /// The bundled common layer.
    pub fn seed_common() -> Self {
        Self::parse(SEED_COMMON).expect("bundled common layer parses")
    }

    pub fn add(&mut self, axiom: TBoxAxiom) -> bool {
        self.tbox.insert(axiom)
    }

    /// Axioms in a canonical order.
    pub fn axioms(&self) -> impl Iterator<Item = &TBoxAxiom> {
        self.tbox.iter()
    }

    pub fn len(&self) -> usize {
        self.tbox.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tbox.is_empty() && self.forces.is_empty()
    }

    pub fn merge(&mut self, other: &Ontology) {
        self.tbox.extend(other.tbox.iter().cloned());
        for (k, v) in &other.forces {
            self.forces.insert(k.clone(), v.clone());
        }
    }

    pub fn union(&self, other: &Ontology) -> Ontology {
        let mut out = self.clone();
        out.merge(other);
        out
    }

    /// Names defined (as axiom left-hand sides) in the given layers.
    pub fn defined_in(&self, layers: &[Layer]) -> BTreeSet<Symbol> {
        self.tbox
            .iter()
            .filter(|a| layers.contains(&a.layer))
            .map(|a| a.lhs.clone())
            .collect()
    }

    pub fn class_names(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        for a in &self.tbox {
            out.insert(a.lhs.clone());
            out.extend(a.rhs.class_names());
        }
        out
    }

    /// Direct told superclasses: atomic conjuncts of right-hand sides.
    pub fn told_parents(&self, class: &str) -> BTreeSet<Symbol> {
        self.tbox
            .iter()
            .filter(|a| a.lhs.as_str() == class)
            .flat_map(|a| a.rhs.atomic_conjuncts().cloned())
            .collect()
    }

    /// Reflexive-transitive closure of [`Ontology::told_parents`].
    pub fn told_ancestors(&self, class: &str) -> BTreeSet<Symbol> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![Symbol::new(class)];
        while let Some(c) = stack.pop() {
            if seen.insert(c.clone()) {
                stack.extend(self.told_parents(c.as_str()));
            }
        }
        seen
    }

    pub fn is_told_subclass(&self, sub: &str, sup: &str) -> bool {
        self.told_ancestors(sub).iter().any(|c| c.as_str() == sup)
    }

    /// True for classes below [`COMMUNICATION_ACT`].
    pub fn is_act_class(&self, class: &str) -> bool {
        self.is_told_subclass(class, COMMUNICATION_ACT)
    }
}
