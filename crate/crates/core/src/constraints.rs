//! Compilation of a TBox into event-calculus state constraints and
//! event-occurrence constraints.
//!
//! For `B ⊑ D ⊓ ∃p.E` (or the same shape under an equivalence) each atomic
//! conjunct yields `HoldsAt(B(?m),t) → HoldsAt(D(?m),t)`. For `B ≡ D ⊓ ∃p.E`
//! the right-hand side is flattened into a body, one atom per conjunct and a
//! fresh variable per existential, giving
//! `HoldsAt(D(?m),t) ∧ HoldsAt(p(?m,?o1),t) ∧ HoldsAt(E(?o1),t) → HoldsAt(B(?m),t)`.
//! Atomic subsumptions between act classes also yield
//! `Happens(send(B(?m)),t) → Happens(send(C(?m)),t)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::notation::{Notation, AND, IMPLIES};
use crate::ontology::{AxiomKind, ClassExpr, Ontology, Primitive, TBoxAxiom};
use crate::symbol::Symbol;
use crate::term::{Bindings, Term};

/// Variable standing for the classified individual.
pub const ROOT_VAR: &str = "m";

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateConstraint {
    /// Fluent templates, all read at the same timepoint as the head.
    pub body: Vec<Term>,
    pub head: Term,
    pub source: TBoxAxiom,
}

impl StateConstraint {
    pub fn render(&self, n: &Notation) -> String {
        let body: Vec<String> = self
            .body
            .iter()
            .map(|b| format!("HoldsAt({},t)", n.term(b)))
            .collect();
        format!(
            "{}{IMPLIES}HoldsAt({},t)",
            body.join(AND),
            n.term(&self.head)
        )
    }

    /// All ground instances of the head supported by `facts`, with the body
    /// instance used for each.
    pub fn fire(&self, facts: &FactIndex) -> Vec<(Term, Vec<Term>)> {
        let mut out = Vec::new();
        let mut stack = Vec::new();
        join(
            &self.body,
            facts,
            Bindings::new(),
            &mut stack,
            &mut |b, used| {
                out.push((self.head.substitute(b), used.to_vec()));
            },
        );
        out
    }
}

impl fmt::Display for StateConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&Notation::plain()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EventConstraint {
    pub trigger: Symbol,
    pub implied: Symbol,
    pub source: TBoxAxiom,
}

impl EventConstraint {
    pub fn render(&self, n: &Notation) -> String {
        format!(
            "Happens(send({}(?{ROOT_VAR})),t){IMPLIES}Happens(send({}(?{ROOT_VAR})),t)",
            n.symbol(&self.trigger),
            n.symbol(&self.implied)
        )
    }
}

impl fmt::Display for EventConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&Notation::plain()))
    }
}

/// The constraint collection Ψ of one system (or a union of several).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConstraintSet {
    pub system: Option<Symbol>,
    pub state: BTreeSet<StateConstraint>,
    pub event: BTreeSet<EventConstraint>,
}

impl ConstraintSet {
    pub fn is_empty(&self) -> bool {
        self.state.is_empty() && self.event.is_empty()
    }

    pub fn len(&self) -> usize {
        self.state.len() + self.event.len()
    }

    pub fn union(&self, other: &ConstraintSet) -> ConstraintSet {
        ConstraintSet {
            system: if self.system == other.system {
                self.system.clone()
            } else {
                None
            },
            state: self.state.union(&other.state).cloned().collect(),
            event: self.event.union(&other.event).cloned().collect(),
        }
    }

    /// Least fixpoint of the state constraints over ground fluents at one
    /// timepoint. Returns the closure and, for each new fluent, the constraint
    /// and premises that first produced it.
    pub fn close(&self, facts: impl IntoIterator<Item = Term>) -> (BTreeSet<Term>, Vec<Firing>) {
        let mut index = FactIndex::default();
        for f in facts {
            index.insert(f);
        }
        let mut firings = Vec::new();
        loop {
            let mut fresh = Vec::new();
            for c in &self.state {
                for (head, premises) in c.fire(&index) {
                    if !index.contains(&head)
                        && !fresh.iter().any(|(h, _, _): &(Term, _, _)| h == &head)
                    {
                        fresh.push((head, c.clone(), premises));
                    }
                }
            }
            if fresh.is_empty() {
                break;
            }
            for (head, constraint, premises) in fresh {
                index.insert(head.clone());
                firings.push(Firing {
                    derived: head,
                    constraint,
                    premises,
                });
            }
        }
        (index.into_set(), firings)
    }

    /// Listing in logic notation: event constraints first, then state
    /// constraints, each followed by the axiom it came from.
    pub fn render(&self, n: &Notation) -> String {
        let mut out = String::new();
        for c in &self.event {
            out.push_str(&format!("{}\n    from {}\n", c.render(n), c.source));
        }
        for c in &self.state {
            out.push_str(&format!("{}\n    from {}\n", c.render(n), c.source));
        }
        out
    }
}

/// One application of a state constraint during closure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Firing {
    pub derived: Term,
    pub constraint: StateConstraint,
    pub premises: Vec<Term>,
}

/// Ground fluents grouped by functor and arity.
#[derive(Debug, Clone, Default)]
pub struct FactIndex {
    by_functor: BTreeMap<(Symbol, usize), BTreeSet<Term>>,
}

impl FactIndex {
    pub fn insert(&mut self, t: Term) -> bool {
        let key = match t.functor() {
            Some((f, n)) => (f.clone(), n),
            None => (Symbol::new(""), 0),
        };
        self.by_functor.entry(key).or_default().insert(t)
    }

    pub fn contains(&self, t: &Term) -> bool {
        t.functor().is_some_and(|(f, n)| {
            self.by_functor
                .get(&(f.clone(), n))
                .is_some_and(|s| s.contains(t))
        })
    }

    fn candidates(&self, pattern: &Term) -> impl Iterator<Item = &Term> {
        let key = pattern.functor().map(|(f, n)| (f.clone(), n));
        key.and_then(|k| self.by_functor.get(&k))
            .into_iter()
            .flatten()
    }

    pub fn into_set(self) -> BTreeSet<Term> {
        self.by_functor.into_values().flatten().collect()
    }
}

fn join(
    body: &[Term],
    facts: &FactIndex,
    b: Bindings,
    used: &mut Vec<Term>,
    emit: &mut impl FnMut(&Bindings, &[Term]),
) {
    let Some((first, rest)) = body.split_first() else {
        emit(&b, used);
        return;
    };
    let pattern = first.substitute(&b);
    for fact in facts.candidates(&pattern) {
        let mut b2 = b.clone();
        if pattern.match_ground(fact, &mut b2) {
            used.push(fact.clone());
            join(rest, facts, b2, used, emit);
            used.pop();
        }
    }
}

/// Builds Ψ for an ontology.
pub fn generate(onto: &Ontology) -> ConstraintSet {
    let mut out = ConstraintSet::default();
    for ax in onto.axioms() {
        let root = Term::var(ROOT_VAR);
        for d in ax.rhs.atomic_conjuncts() {
            out.state.insert(StateConstraint {
                body: vec![Term::app(ax.lhs.clone(), vec![root.clone()])],
                head: Term::app(d.clone(), vec![root.clone()]),
                source: ax.clone(),
            });
            if onto.is_act_class(ax.lhs.as_str()) && onto.is_act_class(d.as_str()) {
                out.event.insert(EventConstraint {
                    trigger: ax.lhs.clone(),
                    implied: d.clone(),
                    source: ax.clone(),
                });
            }
        }
        if ax.kind == AxiomKind::EquivalentTo && !Primitive::is_primitive_class(ax.lhs.as_str()) {
            let mut body = Vec::new();
            let mut fresh = 0;
            flatten(&ax.rhs, &root, &mut body, &mut fresh);
            out.state.insert(StateConstraint {
                body,
                head: Term::app(ax.lhs.clone(), vec![root.clone()]),
                source: ax.clone(),
            });
            if let ClassExpr::Atomic(c) = &ax.rhs {
                if onto.is_act_class(ax.lhs.as_str()) && onto.is_act_class(c.as_str()) {
                    out.event.insert(EventConstraint {
                        trigger: c.clone(),
                        implied: ax.lhs.clone(),
                        source: ax.clone(),
                    });
                }
            }
        }
    }
    out
}

fn flatten(e: &ClassExpr, subject: &Term, body: &mut Vec<Term>, fresh: &mut usize) {
    match e {
        ClassExpr::Atomic(c) => body.push(Term::app(c.clone(), vec![subject.clone()])),
        ClassExpr::Conjunction(parts) => {
            parts.iter().for_each(|p| flatten(p, subject, body, fresh))
        }
        ClassExpr::Existential { property, filler } => {
            *fresh += 1;
            let o = Term::var(format!("o{fresh}"));
            body.push(Term::app(
                property.clone(),
                vec![subject.clone(), o.clone()],
            ));
            flatten(filler, &o, body, fresh);
        }
    }
}
