//! Social commitments as fluents, the commitment dynamics Σ_C and the
//! per-act effect registry Σ_T.
//!
//! `C(x,y,p)`: debtor `x` is committed towards creditor `y` to bring about
//! `p`. `CC(x,y,c,p)`: the same, once condition `c` holds.

use std::collections::BTreeMap;
use std::fmt;

use crate::ec::{
    Condition, EffectAxiom, EffectKind, EventPattern, VAR_ANSWER, VAR_CONTENT, VAR_MESSAGE,
    VAR_RECEIVER, VAR_SENDER,
};
use crate::ontology::Primitive;
use crate::symbol::Symbol;
use crate::term::Term;

pub const COMMITMENT: &str = "C";
pub const CONDITIONAL: &str = "CC";
pub const ACCEPT: &str = "accept";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CommitmentError {
    #[error("an agent cannot be committed towards itself ({0})")]
    SameParty(Symbol),
    #[error("condition and proposition coincide ({0})")]
    TrivialCondition(Term),
    #[error("no effects registered for act class {0}")]
    UnknownActClass(Symbol),
    #[error("effect entry `{text}`: {message}")]
    Syntax { text: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Commitment {
    pub debtor: Symbol,
    pub creditor: Symbol,
    pub proposition: Term,
}

impl Commitment {
    pub fn new(
        debtor: impl Into<Symbol>,
        creditor: impl Into<Symbol>,
        proposition: Term,
    ) -> Result<Self, CommitmentError> {
        let (debtor, creditor) = (debtor.into(), creditor.into());
        if debtor == creditor {
            return Err(CommitmentError::SameParty(debtor));
        }
        Ok(Commitment {
            debtor,
            creditor,
            proposition,
        })
    }

    pub fn fluent(&self) -> Term {
        Term::app(
            COMMITMENT,
            vec![
                Term::Sym(self.debtor.clone()),
                Term::Sym(self.creditor.clone()),
                self.proposition.clone(),
            ],
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConditionalCommitment {
    pub debtor: Symbol,
    pub creditor: Symbol,
    pub condition: Term,
    pub proposition: Term,
}

impl ConditionalCommitment {
    pub fn new(
        debtor: impl Into<Symbol>,
        creditor: impl Into<Symbol>,
        condition: Term,
        proposition: Term,
    ) -> Result<Self, CommitmentError> {
        let (debtor, creditor) = (debtor.into(), creditor.into());
        if debtor == creditor {
            return Err(CommitmentError::SameParty(debtor));
        }
        if condition == proposition {
            return Err(CommitmentError::TrivialCondition(condition));
        }
        Ok(ConditionalCommitment {
            debtor,
            creditor,
            condition,
            proposition,
        })
    }

    pub fn fluent(&self) -> Term {
        Term::app(
            CONDITIONAL,
            vec![
                Term::Sym(self.debtor.clone()),
                Term::Sym(self.creditor.clone()),
                self.condition.clone(),
                self.proposition.clone(),
            ],
        )
    }

    /// The base-level commitment this turns into once the condition holds.
    pub fn base(&self) -> Commitment {
        Commitment {
            debtor: self.debtor.clone(),
            creditor: self.creditor.clone(),
            proposition: self.proposition.clone(),
        }
    }
}

/// `accept(x,y,P)`: `x` accepts the demand of `y` about `P`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AcceptProposition {
    pub accepter: Symbol,
    pub towards: Symbol,
    pub subject: Term,
}

impl AcceptProposition {
    pub fn fluent(&self) -> Term {
        Term::app(
            ACCEPT,
            vec![
                Term::Sym(self.accepter.clone()),
                Term::Sym(self.towards.clone()),
                self.subject.clone(),
            ],
        )
    }
}

fn v(name: &str) -> Term {
    Term::var(name)
}

fn c_xyp() -> Term {
    Term::app(COMMITMENT, vec![v("x"), v("y"), v("p")])
}

fn cc_xycp() -> Term {
    Term::app(CONDITIONAL, vec![v("x"), v("y"), v("c"), v("p")])
}

/// Commitment dynamics. The second formula has two conclusions and is
/// returned as two axioms sharing its label.
pub fn sigma_c() -> Vec<EffectAxiom> {
    let caused_by = |a: &str| EventPattern::CausedBy(Symbol::new(a));
    vec![
        EffectAxiom {
            label: Some("F1".into()),
            conditions: vec![Condition::HoldsAt(c_xyp()), Condition::Initiates(v("p"))],
            event: caused_by("x"),
            effect: EffectKind::Terminates,
            fluent: c_xyp(),
        },
        EffectAxiom {
            label: Some("F2".into()),
            conditions: vec![Condition::HoldsAt(cc_xycp()), Condition::Initiates(v("c"))],
            event: caused_by("y"),
            effect: EffectKind::Initiates,
            fluent: c_xyp(),
        },
        EffectAxiom {
            label: Some("F2".into()),
            conditions: vec![Condition::HoldsAt(cc_xycp()), Condition::Initiates(v("c"))],
            event: caused_by("y"),
            effect: EffectKind::Terminates,
            fluent: cc_xycp(),
        },
        EffectAxiom {
            label: Some("F3".into()),
            conditions: vec![Condition::HoldsAt(cc_xycp()), Condition::Initiates(v("p"))],
            event: caused_by("x"),
            effect: EffectKind::Terminates,
            fluent: cc_xycp(),
        },
    ]
}

/// Role words usable in effect entries and the variables they stand for.
const ROLE_WORDS: [(&str, &str); 5] = [
    ("sender", VAR_SENDER),
    ("receiver", VAR_RECEIVER),
    ("content", VAR_CONTENT),
    ("answer", VAR_ANSWER),
    ("message", VAR_MESSAGE),
];

/// Effect axioms attached to act classes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ActEffects {
    entries: BTreeMap<Symbol, Vec<EffectAxiom>>,
}

impl ActEffects {
    pub fn new() -> Self {
        Self::default()
    }

    /// Entries for `Inquiry` and `Responsive`; the five primitives are
    /// registered with no effects.
    pub fn shipped() -> Self {
        let mut r = ActEffects::new();
        for p in Primitive::ALL {
            r.entries.insert(Symbol::new(p.name()), Vec::new());
        }
        for line in [
            "Inquiry: initiates CC(receiver, sender, accept(receiver, sender, content), content)",
            "Responsive: terminates C(sender, receiver, answer)",
            "Responsive: terminates CC(sender, receiver, accept(sender, receiver, answer), answer)",
            "Responsive: initiates content",
        ] {
            r.add_entry(line).expect("shipped effect entries parse");
        }
        r
    }

    pub fn register(&mut self, act: impl Into<Symbol>, axiom: EffectAxiom) {
        self.entries.entry(act.into()).or_default().push(axiom);
    }

    /// Adds one `Act: [when f, g] initiates|terminates|releases <fluent>`
    /// entry.
    pub fn add_entry(&mut self, text: &str) -> Result<(), CommitmentError> {
        let (act, axiom) = parse_entry(text)?;
        self.register(act, axiom);
        Ok(())
    }

    /// Reads one entry per line; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, CommitmentError> {
        let mut r = ActEffects::new();
        for line in text.lines() {
            let line = line.split_once('#').map_or(line, |(l, _)| l).trim();
            if !line.is_empty() {
                r.add_entry(line)?;
            }
        }
        Ok(r)
    }

    pub fn extend(&mut self, other: &ActEffects) {
        for (act, axioms) in &other.entries {
            let slot = self.entries.entry(act.clone()).or_default();
            for a in axioms {
                if !slot.contains(a) {
                    slot.push(a.clone());
                }
            }
        }
    }

    pub fn lookup(&self, act: &str) -> Result<&[EffectAxiom], CommitmentError> {
        self.entries
            .get(act)
            .map(Vec::as_slice)
            .ok_or_else(|| CommitmentError::UnknownActClass(Symbol::new(act)))
    }

    pub fn acts(&self) -> impl Iterator<Item = &Symbol> {
        self.entries.keys()
    }
}

/// All registered act effects.
pub fn sigma_t(registry: &ActEffects) -> Vec<EffectAxiom> {
    registry.entries.values().flatten().cloned().collect()
}

/// Σ = Σ_C ∪ Σ_T.
pub fn sigma(registry: &ActEffects) -> Vec<EffectAxiom> {
    let mut out = sigma_c();
    out.extend(sigma_t(registry));
    out
}

impl fmt::Display for ActEffects {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in self.entries.values().flatten() {
            writeln!(f, "{a}")?;
        }
        Ok(())
    }
}

fn parse_entry(text: &str) -> Result<(Symbol, EffectAxiom), CommitmentError> {
    let err = |m: &str| CommitmentError::Syntax {
        text: text.to_string(),
        message: m.to_string(),
    };
    let (act, rest) = text
        .split_once(':')
        .ok_or_else(|| err("expected `Act: ...`"))?;
    let act = act.trim();
    if act.is_empty() || act.contains(char::is_whitespace) {
        return Err(err("expected a single act class name before ':'"));
    }
    let rest = rest.trim();
    let (conds_text, rest) = match rest.strip_prefix("when ") {
        Some(r) => {
            let (i, _) = find_effect_keyword(r)
                .ok_or_else(|| err("expected initiates, terminates or releases"))?;
            (Some(&r[..i]), &r[i..])
        }
        None => (None, rest),
    };
    let (i, kind) = find_effect_keyword(rest)
        .ok_or_else(|| err("expected initiates, terminates or releases"))?;
    if i != 0 {
        return Err(err("unexpected text before the effect keyword"));
    }
    let fluent_text = rest[kind.keyword_len()..].trim();
    let fluent = template(fluent_text).map_err(|m| err(&m))?;
    let mut conditions = Vec::new();
    if let Some(ct) = conds_text {
        for part in split_top_level(ct) {
            conditions.push(Condition::HoldsAt(
                template(part.trim()).map_err(|m| err(&m))?,
            ));
        }
        if conditions.is_empty() {
            return Err(err("empty condition list"));
        }
    }
    let mut bound: Vec<Symbol> = ROLE_WORDS.iter().map(|(_, v)| Symbol::new(*v)).collect();
    for c in &conditions {
        let (Condition::HoldsAt(t) | Condition::Initiates(t)) = c;
        bound.extend(t.vars());
    }
    if let Some(u) = fluent.vars().into_iter().find(|x| !bound.contains(x)) {
        return Err(err(&format!(
            "variable ?{u} is not bound by a role or condition"
        )));
    }
    let axiom = EffectAxiom {
        label: None,
        conditions,
        event: EventPattern::Send(Symbol::new(act)),
        effect: kind,
        fluent,
    };
    Ok((Symbol::new(act), axiom))
}

impl EffectKind {
    fn keyword(self) -> &'static str {
        match self {
            EffectKind::Initiates => "initiates",
            EffectKind::Terminates => "terminates",
            EffectKind::Releases => "releases",
        }
    }

    fn keyword_len(self) -> usize {
        self.keyword().len()
    }
}

/// Byte offset of the first top-level effect keyword standing as a word.
fn find_effect_keyword(s: &str) -> Option<(usize, EffectKind)> {
    let mut depth = 0i32;
    let mut at_word_start = true;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if depth == 0 && at_word_start {
            for k in [
                EffectKind::Initiates,
                EffectKind::Terminates,
                EffectKind::Releases,
            ] {
                let kw = k.keyword();
                if s[i..].starts_with(kw) && s[i + kw.len()..].starts_with(char::is_whitespace) {
                    return Some((i, k));
                }
            }
        }
        at_word_start = c.is_whitespace() || c == ',';
    }
    None
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if !s[start..].trim().is_empty() {
        out.push(&s[start..]);
    }
    out
}

/// Parses a fluent template, turning role words into variables.
fn template(text: &str) -> Result<Term, String> {
    let t = Term::parse(text).map_err(|e| e.to_string())?;
    Ok(roles_to_vars(&t))
}

fn roles_to_vars(t: &Term) -> Term {
    match t {
        Term::Sym(s) => match ROLE_WORDS.iter().find(|(w, _)| *w == s.as_str()) {
            Some((_, var)) => Term::var(*var),
            None => t.clone(),
        },
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(roles_to_vars).collect()),
        _ => t.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abox::{ABox, Assertion};
    use crate::codec::{HAS_CONTENT, HAS_RECEIVER, HAS_SENDER};
    use crate::constraints::ConstraintSet;
    use crate::ec::{step, Event, Narrative, Observation, Observations, StepInput, RESPONDS_TO};

    #[test]
    fn invariants() {
        assert!(Commitment::new("a", "a", Term::sym("p")).is_err());
        assert!(ConditionalCommitment::new("a", "b", Term::sym("p"), Term::sym("p")).is_err());
        let cc = ConditionalCommitment::new("a02", "a01", Term::sym("q"), Term::sym("p")).unwrap();
        assert_eq!(cc.fluent().to_string(), "CC(a02,a01,q,p)");
        assert_eq!(cc.base().fluent().to_string(), "C(a02,a01,p)");
    }

    #[test]
    fn shipped_inquiry_entry() {
        let r = ActEffects::shipped();
        let inq = r.lookup("Inquiry").unwrap();
        assert_eq!(inq.len(), 1);
        assert_eq!(
            inq[0].to_string(),
            "Initiates(send(Inquiry(?s,?r,?P)),CC(?r,?s,accept(?r,?s,?P),?P),t)"
        );
        assert_eq!(r.lookup("Responsive").unwrap().len(), 3);
        assert!(r.lookup("Assertive").unwrap().is_empty());
        assert_eq!(
            r.lookup("Promise").unwrap_err(),
            CommitmentError::UnknownActClass(Symbol::new("Promise"))
        );
    }

    #[test]
    fn responsive_rendering_uses_answer_role() {
        let r = ActEffects::shipped();
        let texts: Vec<String> = r
            .lookup("Responsive")
            .unwrap()
            .iter()
            .map(|a| a.to_string())
            .collect();
        assert!(texts
            .contains(&"Terminates(send(Responsive(?s,?r,?P,?RA)),C(?s,?r,?RA),t)".to_string()));
        assert!(texts.contains(&"Initiates(send(Responsive(?s,?r,?P)),?P,t)".to_string()));
    }

    #[test]
    fn conditional_entries() {
        let mut r = ActEffects::new();
        r.add_entry("A1: when f initiates g").unwrap();
        r.add_entry("A1: when f, h(sender) terminates k").unwrap();
        let a = r.lookup("A1").unwrap();
        assert_eq!(
            a[0].to_string(),
            "HoldsAt(f,t) ⇒ Initiates(send(A1(?m)),g,t)"
        );
        assert_eq!(a[1].conditions.len(), 2);
    }

    #[test]
    fn malformed_entries() {
        let mut r = ActEffects::new();
        for bad in [
            "A1 initiates k",
            "A1: starts k",
            "A1: initiates C(?x,sender,k)",
            "A1: when initiates k",
            "A B: initiates k",
        ] {
            assert!(
                matches!(r.add_entry(bad), Err(CommitmentError::Syntax { .. })),
                "{bad}"
            );
        }
    }

    fn message(act_abox: &mut ABox, m: &str, s: &str, r: &str, p: &str) {
        act_abox.insert(Assertion::link(HAS_SENDER, m, s));
        act_abox.insert(Assertion::link(HAS_RECEIVER, m, r));
        act_abox.insert(Assertion::link(HAS_CONTENT, m, p));
    }

    fn run(gamma: &Observations, act: &str, abox: &ABox, m: &str) -> Observations {
        let sigma = sigma(&ActEffects::shipped());
        let narrative = Narrative::singleton(Event::send(act, m), 0);
        step(&StepInput {
            gamma,
            narrative: &narrative,
            sigma: &sigma,
            psi: &ConstraintSet::default(),
            abox,
            time: 0,
        })
        .unwrap()
        .phi
    }

    #[test]
    fn inquiry_then_answer_lifecycle() {
        let mut abox = ABox::new();
        message(&mut abox, "m1", "a01", "a02", "q");
        let phi = run(&Observations::new(), "Inquiry", &abox, "m1");
        let cc = Term::parse("CC(a02,a01,accept(a02,a01,q),q)").unwrap();
        assert!(phi.contains(&Observation::holds_at(cc.clone(), 1)));

        // The creditor's acceptance detaches the conditional commitment.
        let mut gamma: Observations = [Observation::holds_at(cc.clone(), 0)].into();
        let mut abox2 = ABox::new();
        message(&mut abox2, "m2", "a01", "a02", "accept(a02,a01,q)");
        let mut sigma = sigma(&ActEffects::shipped());
        sigma.push(EffectAxiom::on_send(
            "Accept",
            EffectKind::Initiates,
            Term::parse("accept(a02,a01,q)").unwrap(),
        ));
        let narrative = Narrative::singleton(Event::send("Accept", "m2"), 0);
        let phi = step(&StepInput {
            gamma: &gamma,
            narrative: &narrative,
            sigma: &sigma,
            psi: &ConstraintSet::default(),
            abox: &abox2,
            time: 0,
        })
        .unwrap()
        .phi;
        assert!(phi.contains(&Observation::holds_at(
            Term::parse("C(a02,a01,q)").unwrap(),
            1
        )));
        assert!(phi.contains(&Observation::not_holds_at(cc.clone(), 1)));

        // The debtor answering discharges the base commitment.
        gamma = [Observation::holds_at(
            Term::parse("C(a02,a01,q)").unwrap(),
            0,
        )]
        .into();
        let mut abox3 = ABox::new();
        message(&mut abox3, "m3", "a02", "a01", "q");
        abox3.insert(Assertion::link(RESPONDS_TO, "m3", "q"));
        let phi = run(&gamma, "Responsive", &abox3, "m3");
        assert!(phi.contains(&Observation::not_holds_at(
            Term::parse("C(a02,a01,q)").unwrap(),
            1
        )));
        assert!(phi.contains(&Observation::holds_at(Term::sym("q"), 1)));
    }

    #[test]
    fn creditor_cannot_discharge() {
        let gamma: Observations = [Observation::holds_at(
            Term::parse("C(a02,a01,q)").unwrap(),
            0,
        )]
        .into();
        let mut abox = ABox::new();
        message(&mut abox, "m3", "a01", "a02", "q");
        abox.insert(Assertion::link(RESPONDS_TO, "m3", "q"));
        let phi = run(&gamma, "Responsive", &abox, "m3");
        assert!(phi.contains(&Observation::holds_at(
            Term::parse("C(a02,a01,q)").unwrap(),
            1
        )));
    }

    #[test]
    fn parse_file() {
        let r =
            ActEffects::parse("# effects\nA1: initiates f  # note\n\nA2: terminates f\n").unwrap();
        assert_eq!(r.acts().count(), 2);
        assert_eq!(sigma_t(&r).len(), 2);
    }

    #[test]
    fn sigma_c_shapes() {
        let s = sigma_c();
        assert_eq!(s.len(), 4);
        assert_eq!(
            s[0].to_string(),
            "HoldsAt(C(?x,?y,?p),t) ∧ Initiates(e(?x),?p,t) ⇒ Terminates(e(?x),C(?x,?y,?p),t)"
        );
    }
}
