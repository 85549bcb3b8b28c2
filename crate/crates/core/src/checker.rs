//! Deciding whether a converted message is a satisfactory conversion of the
//! original one in a given context.
//!
//! Each side sends its act once at `t`; the resulting observations at `t+1`
//! are compared. The target side must be consistent and, closed under both
//! systems' state constraints, must contain every source observation.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::abox::{ABox, Value};
use crate::codec::HAS_CONTENT;
use crate::constraints::ConstraintSet;
use crate::ec::{
    check_consistent, entails, step, EcError, EffectAxiom, Event, FluentKind, Narrative,
    Observation, Observations, StepInput, Time, TraceStep,
};
use crate::notation::{self, Notation};
use crate::symbol::Symbol;
use crate::term::Term;

/// One system's view of the message.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Side {
    /// Act class the message is sent as.
    pub act: Symbol,
    /// The message assertions as this system understands them.
    pub abox: ABox,
    pub sigma: Vec<EffectAxiom>,
    pub psi: ConstraintSet,
    /// Classes this system speaks; only these surface as content observations.
    pub vocabulary: BTreeSet<Symbol>,
}

impl Side {
    pub fn new(act: impl Into<Symbol>, sigma: Vec<EffectAxiom>, psi: ConstraintSet) -> Self {
        Side {
            act: act.into(),
            abox: ABox::new(),
            sigma,
            psi,
            vocabulary: BTreeSet::new(),
        }
    }

    pub fn with_abox(mut self, abox: ABox, vocabulary: BTreeSet<Symbol>) -> Self {
        self.abox = abox;
        self.vocabulary = vocabulary;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConversionCase {
    pub message: Symbol,
    pub source: Side,
    pub target: Side,
    pub gamma: Observations,
    pub time: Time,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CheckError {
    #[error("the {side} assertions do not mention message {message}")]
    ForeignMessage { side: &'static str, message: Symbol },
    #[error("the context is inconsistent")]
    InconsistentContext,
    #[error(transparent)]
    Engine(#[from] EcError),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReportTrace {
    pub notes: Vec<String>,
    pub source: Vec<TraceStep>,
    pub target: Vec<TraceStep>,
    pub entailment: Vec<TraceStep>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConversionReport {
    pub satisfactory: bool,
    pub phi_source: Observations,
    pub phi_target: Observations,
    pub consistent: bool,
    pub missing: Observations,
    pub gamma: Observations,
    pub time: Time,
    pub source_event: Event,
    pub target_event: Event,
    pub trace: ReportTrace,
}

/// Observations a system makes about the content of `message` at `t`: the
/// vocabulary classes of the content individual and of its direct
/// neighbours, and the content individual's property values.
pub fn content_features(
    abox: &ABox,
    message: &str,
    vocabulary: &BTreeSet<Symbol>,
    t: Time,
) -> Observations {
    let mut out = Observations::new();
    let Some(p) = abox
        .object_of(message, HAS_CONTENT)
        .and_then(Value::individual)
    else {
        return out;
    };
    let typed = |ind: &Symbol, out: &mut Observations| {
        for c in abox
            .types_of(ind.as_str())
            .filter(|c| vocabulary.contains(*c))
        {
            out.insert(Observation::holds_at(
                Term::app(c.clone(), vec![Term::Sym(ind.clone())]),
                t,
            ));
        }
    };
    typed(p, &mut out);
    for (prop, v) in abox.properties_of(p.as_str()) {
        let arg = match v {
            Value::Individual(o) => {
                typed(o, &mut out);
                Term::Sym(o.clone())
            }
            Value::Literal(l) => Term::Lit(l.clone()),
        };
        out.insert(Observation::holds_at(
            Term::app(prop.clone(), vec![Term::Sym(p.clone()), arg]),
            t,
        ));
    }
    out
}

pub fn check(case: &ConversionCase) -> Result<ConversionReport, CheckError> {
    if !check_consistent(&case.gamma) {
        return Err(CheckError::InconsistentContext);
    }
    for (side, s) in [("source", &case.source), ("target", &case.target)] {
        if !s.abox.is_empty() && !s.abox.individuals().contains(&case.message) {
            return Err(CheckError::ForeignMessage {
                side,
                message: case.message.clone(),
            });
        }
    }
    let t = case.time;
    let mut trace = ReportTrace {
        notes: context_notes(case),
        ..Default::default()
    };

    let run =
        |side: &Side, out: &mut Vec<TraceStep>| -> Result<(Event, Observations), CheckError> {
            let event = Event::send(side.act.clone(), case.message.clone());
            let mut gamma = case.gamma.clone();
            gamma.extend(content_features(
                &side.abox,
                case.message.as_str(),
                &side.vocabulary,
                t,
            ));
            let r = step(&StepInput {
                gamma: &gamma,
                narrative: &Narrative::singleton(event.clone(), t),
                sigma: &side.sigma,
                psi: &side.psi,
                abox: &side.abox,
                time: t,
            })?;
            *out = r.trace;
            Ok((event, r.phi))
        };
    let (source_event, phi_source) = run(&case.source, &mut trace.source)?;
    let (target_event, phi_target) = run(&case.target, &mut trace.target)?;

    let consistent = check_consistent(&phi_target);
    let background = case.source.psi.union(&case.target.psi);
    let e = entails(&phi_target, &phi_source, &background);
    trace.entailment = e.trace;
    Ok(ConversionReport {
        satisfactory: consistent && e.missing.is_empty(),
        phi_source,
        phi_target,
        consistent,
        missing: e.missing,
        gamma: case.gamma.clone(),
        time: t,
        source_event,
        target_event,
        trace,
    })
}

/// Flags context observations about classes only one side speaks.
fn context_notes(case: &ConversionCase) -> Vec<String> {
    let mut notes = Vec::new();
    for o in &case.gamma {
        let FluentKind::Class { class, .. } = FluentKind::of(&o.fluent) else {
            continue;
        };
        let (s, t) = (
            case.source.vocabulary.contains(class),
            case.target.vocabulary.contains(class),
        );
        if s != t {
            let who = if s { "source" } else { "target" };
            notes.push(format!(
                "context observation on {class} is in the {who} vocabulary only"
            ));
        }
    }
    notes
}

#[derive(Serialize)]
struct Summary {
    satisfactory: bool,
    consistent: bool,
    time: String,
    source_event: String,
    target_event: String,
    gamma: Vec<String>,
    phi_source: Vec<String>,
    phi_target: Vec<String>,
    missing: Vec<String>,
    notes: Vec<String>,
}

impl ConversionReport {
    /// Key/value form for tooling.
    pub fn to_toml(&self, n: &Notation) -> String {
        let list = |o: &Observations| o.iter().map(|x| x.render(n)).collect();
        let s = Summary {
            satisfactory: self.satisfactory,
            consistent: self.consistent,
            time: notation::time(self.time),
            source_event: self.source_event.render(n),
            target_event: self.target_event.render(n),
            gamma: list(&self.gamma),
            phi_source: list(&self.phi_source),
            phi_target: list(&self.phi_target),
            missing: list(&self.missing),
            notes: self.trace.notes.clone(),
        };
        toml::to_string(&s).expect("report summary serializes")
    }

    /// Observation sets and verdict in logic notation, one observation per
    /// line.
    pub fn render(&self, n: &Notation) -> String {
        let mut out = String::new();
        let t = notation::time(self.time);
        let set = |out: &mut String, title: String, o: &Observations| {
            let _ = writeln!(out, "{title}");
            if o.is_empty() {
                let _ = writeln!(out, "  ∅");
            }
            for x in o {
                let _ = writeln!(out, "  {}", x.render(n));
            }
        };
        set(&mut out, format!("Γ_{t}"), &self.gamma);
        set(
            &mut out,
            format!("Φ source, Happens({},{t})", self.source_event.render(n)),
            &self.phi_source,
        );
        set(
            &mut out,
            format!("Φ target, Happens({},{t})", self.target_event.render(n)),
            &self.phi_target,
        );
        let _ = writeln!(out, "consistent: {}", yes_no(self.consistent));
        set(&mut out, "missing".to_string(), &self.missing);
        let _ = writeln!(out, "satisfactory: {}", yes_no(self.satisfactory));
        out
    }

    /// Every rule firing, grouped by phase.
    pub fn render_trace(&self, n: &Notation) -> String {
        let mut out = String::new();
        for note in &self.trace.notes {
            let _ = writeln!(out, "note: {note}");
        }
        for (title, steps) in [
            ("source", &self.trace.source),
            ("target", &self.trace.target),
            ("entailment", &self.trace.entailment),
        ] {
            let _ = writeln!(out, "[{title}]");
            for s in steps {
                let _ = writeln!(out, "{}", s.render(n));
            }
        }
        out
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
