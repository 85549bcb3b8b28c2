//! One-step Discrete Event Calculus over ground fluents.
//!
//! Fluents are ground [`Term`]s. Events are message sends `send(A(m))`
//! whose roles (sender, receiver, content, answered proposition) are read
//! from the message assertions. Happens and the effect predicates are
//! minimized by saturation: only what the narrative, the event constraints
//! and the effect axioms force is taken to hold.

mod engine;
mod text;

use std::collections::BTreeSet;
use std::fmt;

use crate::abox::{ABox, Value};
use crate::codec::{HAS_CONTENT, HAS_RECEIVER, HAS_SENDER};
use crate::notation::{self, Notation};
use crate::symbol::Symbol;
use crate::term::Term;

pub use engine::{
    check_consistent, close_events, entails, ground_effects, step, Entailment, StepInput,
    StepResult, TraceStep,
};
pub use text::{parse_observation, parse_observations, ObservationSyntaxError};

pub type Time = u32;

/// Property linking a responsive act to the proposition it answers.
pub const RESPONDS_TO: &str = "respondsTo";

/// Role variables bound from a message: `?s`, `?r`, `?P`, `?RA`, `?m`.
pub const VAR_SENDER: &str = "s";
pub const VAR_RECEIVER: &str = "r";
pub const VAR_CONTENT: &str = "P";
pub const VAR_ANSWER: &str = "RA";
pub const VAR_MESSAGE: &str = "m";

/// Structural reading of a ground fluent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FluentKind<'a> {
    /// `C(x,y,p)`
    Commitment {
        debtor: &'a Term,
        creditor: &'a Term,
        proposition: &'a Term,
    },
    /// `CC(x,y,c,p)`
    Conditional {
        debtor: &'a Term,
        creditor: &'a Term,
        condition: &'a Term,
        proposition: &'a Term,
    },
    /// `Class(x)`
    Class {
        class: &'a Symbol,
        individual: &'a Term,
    },
    /// `property(x,y)`
    Property {
        property: &'a Symbol,
        subject: &'a Term,
        object: &'a Term,
    },
    /// A bare symbol such as `f`.
    Named(&'a Symbol),
    Other,
}

impl<'a> FluentKind<'a> {
    pub fn of(t: &'a Term) -> Self {
        match t {
            Term::Sym(s) => FluentKind::Named(s),
            Term::App(f, a) if f == "C" && a.len() == 3 => FluentKind::Commitment {
                debtor: &a[0],
                creditor: &a[1],
                proposition: &a[2],
            },
            Term::App(f, a) if f == "CC" && a.len() == 4 => FluentKind::Conditional {
                debtor: &a[0],
                creditor: &a[1],
                condition: &a[2],
                proposition: &a[3],
            },
            Term::App(f, a) if a.len() == 1 => FluentKind::Class {
                class: f,
                individual: &a[0],
            },
            Term::App(f, a) if a.len() == 2 => FluentKind::Property {
                property: f,
                subject: &a[0],
                object: &a[1],
            },
            _ => FluentKind::Other,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Predicate {
    HoldsAt,
    ReleasedAt,
}

impl Predicate {
    pub fn name(self) -> &'static str {
        match self {
            Predicate::HoldsAt => "HoldsAt",
            Predicate::ReleasedAt => "ReleasedAt",
        }
    }
}

/// `[¬]HoldsAt(f,t)` or `[¬]ReleasedAt(f,t)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Observation {
    pub holds: bool,
    pub predicate: Predicate,
    pub fluent: Term,
    pub time: Time,
}

impl Observation {
    pub fn holds_at(fluent: Term, time: Time) -> Self {
        Observation {
            holds: true,
            predicate: Predicate::HoldsAt,
            fluent,
            time,
        }
    }

    pub fn not_holds_at(fluent: Term, time: Time) -> Self {
        Observation {
            holds: false,
            predicate: Predicate::HoldsAt,
            fluent,
            time,
        }
    }

    pub fn released_at(fluent: Term, time: Time) -> Self {
        Observation {
            holds: true,
            predicate: Predicate::ReleasedAt,
            fluent,
            time,
        }
    }

    pub fn render(&self, n: &Notation) -> String {
        format!(
            "{}{}({},{})",
            if self.holds { "" } else { "¬" },
            self.predicate.name(),
            n.term(&self.fluent),
            notation::time(self.time)
        )
    }
}

impl fmt::Display for Observation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&Notation::plain()))
    }
}

pub type Observations = BTreeSet<Observation>;

/// Renders a set one observation per line.
pub fn render_observations(obs: &Observations, n: &Notation) -> String {
    obs.iter().map(|o| format!("{}\n", o.render(n))).collect()
}

/// Positive `HoldsAt` fluents at `t`.
pub fn holding(obs: &Observations, t: Time) -> BTreeSet<Term> {
    obs.iter()
        .filter(|o| o.holds && o.predicate == Predicate::HoldsAt && o.time == t)
        .map(|o| o.fluent.clone())
        .collect()
}

/// `send(A(m))`: message `m` sent as an instance of act class `A`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Event {
    pub act: Symbol,
    pub message: Symbol,
}

impl Event {
    pub fn send(act: impl Into<Symbol>, message: impl Into<Symbol>) -> Self {
        Event {
            act: act.into(),
            message: message.into(),
        }
    }

    pub fn render(&self, n: &Notation) -> String {
        format!("send({}({}))", n.symbol(&self.act), n.symbol(&self.message))
    }

    /// `send(A(s,r,P))`, or `send(A(s,r,P,RA))` when an answered proposition
    /// is present. Falls back to [`Event::render`] without a sender.
    pub fn render_with_roles(&self, roles: &Roles, n: &Notation) -> String {
        let (Some(s), Some(r)) = (&roles.sender, &roles.receiver) else {
            return self.render(n);
        };
        let mut args = vec![n.symbol(s), n.symbol(r)];
        if let Some(p) = &roles.content {
            args.push(n.symbol(p));
        }
        if let Some(ra) = &roles.answer {
            args.push(n.symbol(ra));
        }
        let args: Vec<&str> = args.iter().map(Symbol::as_str).collect();
        format!("send({}({}))", n.symbol(&self.act), args.join(","))
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&Notation::plain()))
    }
}

/// Participants of a message as recorded in its assertions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Roles {
    pub message: Option<Symbol>,
    pub sender: Option<Symbol>,
    pub receiver: Option<Symbol>,
    pub content: Option<Symbol>,
    pub answer: Option<Symbol>,
}

impl Roles {
    pub fn resolve(abox: &ABox, message: &Symbol) -> Self {
        let ind = |p: &str| {
            abox.object_of(message.as_str(), p)
                .and_then(Value::individual)
                .cloned()
        };
        Roles {
            message: Some(message.clone()),
            sender: ind(HAS_SENDER),
            receiver: ind(HAS_RECEIVER),
            content: ind(HAS_CONTENT),
            answer: ind(RESPONDS_TO),
        }
    }

    /// `(variable, value)` for each resolved role.
    pub fn bindings(&self) -> Vec<(&'static str, &Symbol)> {
        [
            (VAR_MESSAGE, &self.message),
            (VAR_SENDER, &self.sender),
            (VAR_RECEIVER, &self.receiver),
            (VAR_CONTENT, &self.content),
            (VAR_ANSWER, &self.answer),
        ]
        .into_iter()
        .filter_map(|(v, s)| s.as_ref().map(|s| (v, s)))
        .collect()
    }

    /// The agent causing a send event.
    pub fn agent(&self) -> Option<&Symbol> {
        self.sender.as_ref()
    }
}

/// Event occurrences Δ.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Narrative {
    pub events: BTreeSet<(Event, Time)>,
}

impl Narrative {
    pub fn singleton(event: Event, t: Time) -> Self {
        Narrative {
            events: BTreeSet::from([(event, t)]),
        }
    }

    pub fn at(&self, t: Time) -> impl Iterator<Item = &Event> {
        self.events
            .iter()
            .filter(move |(_, u)| *u == t)
            .map(|(e, _)| e)
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn contains(&self, e: &Event, t: Time) -> bool {
        self.events.contains(&(e.clone(), t))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EffectKind {
    Initiates,
    Terminates,
    Releases,
}

impl EffectKind {
    pub fn name(self) -> &'static str {
        match self {
            EffectKind::Initiates => "Initiates",
            EffectKind::Terminates => "Terminates",
            EffectKind::Releases => "Releases",
        }
    }
}

/// Context condition of an effect axiom, evaluated at the event's timepoint.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Condition {
    /// The fluent holds in Γ.
    HoldsAt(Term),
    /// The same event initiates the fluent.
    Initiates(Term),
}

/// Which occurring events an axiom applies to.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EventPattern {
    /// Sends of the named act class; role variables bind from the message.
    Send(Symbol),
    /// Any event whose causing agent binds the variable, written `e(?x)`.
    CausedBy(Symbol),
}

/// `γ ⇒ Initiates|Terminates|Releases(e, f, t)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EffectAxiom {
    pub label: Option<String>,
    pub conditions: Vec<Condition>,
    pub event: EventPattern,
    pub effect: EffectKind,
    pub fluent: Term,
}

impl EffectAxiom {
    pub fn on_send(act: impl Into<Symbol>, effect: EffectKind, fluent: Term) -> Self {
        EffectAxiom {
            label: None,
            conditions: Vec::new(),
            event: EventPattern::Send(act.into()),
            effect,
            fluent,
        }
    }

    pub fn when(mut self, c: Condition) -> Self {
        self.conditions.push(c);
        self
    }

    pub fn labeled(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    fn mentions(&self, var: &str) -> bool {
        let in_term = |t: &Term| t.vars().iter().any(|v| v.as_str() == var);
        in_term(&self.fluent)
            || self.conditions.iter().any(|c| match c {
                Condition::HoldsAt(f) | Condition::Initiates(f) => in_term(f),
            })
    }

    pub fn render(&self, n: &Notation) -> String {
        let e = match &self.event {
            EventPattern::Send(a) if engine::uses_roles(self) => {
                let answer = if self.mentions(VAR_ANSWER) {
                    format!(",?{VAR_ANSWER}")
                } else {
                    String::new()
                };
                format!(
                    "send({}(?{VAR_SENDER},?{VAR_RECEIVER},?{VAR_CONTENT}{answer}))",
                    n.symbol(a)
                )
            }
            EventPattern::Send(a) => format!("send({}(?{VAR_MESSAGE}))", n.symbol(a)),
            EventPattern::CausedBy(x) => format!("e(?{x})"),
        };
        let mut conds: Vec<String> = Vec::new();
        for c in &self.conditions {
            conds.push(match c {
                Condition::HoldsAt(f) => format!("HoldsAt({},t)", n.term(f)),
                Condition::Initiates(f) => format!("Initiates({e},{},t)", n.term(f)),
            });
        }
        let head = format!("{}({e},{},t)", self.effect.name(), n.term(&self.fluent));
        if conds.is_empty() {
            head
        } else {
            format!("{} ⇒ {head}", conds.join(notation::AND))
        }
    }
}

impl fmt::Display for EffectAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&Notation::plain()))
    }
}

/// A ground effect fact `Initiates(e,f,t)` and its kin.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EffectFact {
    pub kind: EffectKind,
    pub event: Event,
    pub fluent: Term,
    pub time: Time,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EcError {
    #[error("variable ?{var} of `{axiom}` is unbound for {event}")]
    UnboundVariable {
        var: Symbol,
        axiom: String,
        event: String,
    },
}
