//! The conversion pipeline: split, translate, realize at the source,
//! materialize, realize at the target, emit.

use super::registry::{System, SystemRegistry};
use super::{HarnessError, ManagerState, StageError, StateMachine};
use crate::abox::ABox;
use crate::checker::{check, CheckError, ConversionCase, ConversionReport, Side};
use crate::codec::{self, parse_abox, write_abox, Envelope, RawMessage};
use crate::ec::Observations;
use crate::ontology::{Derivation, Reasoner};
use crate::symbol::Symbol;

/// What the sending side's manager produces.
#[derive(Debug, Clone)]
pub struct SourceOutput {
    pub message: Symbol,
    pub envelope: Envelope,
    pub act: Symbol,
    /// Assertions as translated.
    pub m: ABox,
    /// `m` with everything the source ontology derives.
    pub m_sat: ABox,
    pub derivations: Vec<Derivation>,
    /// `m_sat` in assertion-block form, as sent to the other manager.
    pub payload: String,
}

#[derive(Debug, Clone)]
pub struct TargetOutput {
    pub m_target: ABox,
    pub derivations: Vec<Derivation>,
    /// Set once emitted.
    pub act: Option<Symbol>,
    pub output: Option<RawMessage>,
}

#[derive(Debug, Clone)]
pub struct Conversion {
    pub source: SourceOutput,
    pub target: TargetOutput,
    /// States the pipeline went through.
    pub states: Vec<ManagerState>,
}

impl Conversion {
    pub fn output(&self) -> &RawMessage {
        self.target
            .output
            .as_ref()
            .expect("completed conversion has output")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckPolicy {
    /// Withhold messages whose conversion is not satisfactory.
    pub refuse_unsatisfactory: bool,
}

impl Default for CheckPolicy {
    fn default() -> Self {
        CheckPolicy {
            refuse_unsatisfactory: true,
        }
    }
}

fn stage_err(
    system: &System,
    sm: &mut StateMachine,
    source: impl Into<StageError>,
) -> HarnessError {
    let source = source.into();
    let stage = sm.fail(&source.to_string());
    HarnessError::Stage {
        system: system.id.clone(),
        stage,
        source,
    }
}

/// Runs the sending side: ends in `Dispatching` with the payload ready.
pub fn run_source(
    system: &System,
    raw: &RawMessage,
    sm: &mut StateMachine,
) -> Result<SourceOutput, HarnessError> {
    sm.advance(ManagerState::Splitting);
    let parsed = codec::parse(raw).map_err(|e| stage_err(system, sm, e))?;
    let (envelope, content) = codec::split(parsed);

    sm.advance(ManagerState::Translating);
    let profile = system.profile(raw.syntax).ok_or_else(|| {
        stage_err(
            system,
            sm,
            codec::CodecError::UnsupportedSyntax(raw.syntax.to_string()),
        )
    })?;
    let m = codec::to_abox(&codec::join(envelope.clone(), content), profile)
        .map_err(|e| stage_err(system, sm, e))?;
    let message = envelope.id.clone();
    let act = system
        .act_of(&m, message.as_str())
        .expect("to_abox types the root with a performative class");

    sm.advance(ManagerState::RealizingSource);
    let (derived, derivations) = Reasoner::new(&system.ontology).realize_traced(&m);
    let m_sat = m.union(&derived);

    sm.advance(ManagerState::Materializing);
    let payload = write_abox(&m_sat);
    sm.advance(ManagerState::Dispatching);
    Ok(SourceOutput {
        message,
        envelope,
        act,
        m,
        m_sat,
        derivations,
        payload,
    })
}

/// Reads a received payload and realizes it with the target ontology.
pub fn realize_target(
    system: &System,
    payload: &str,
    sm: &mut StateMachine,
) -> Result<TargetOutput, HarnessError> {
    sm.advance(ManagerState::RealizingTarget);
    let m_sat = parse_abox(payload).map_err(|e| stage_err(system, sm, e))?;
    let (derived, derivations) = Reasoner::new(&system.ontology).realize_traced(&m_sat);
    Ok(TargetOutput {
        m_target: m_sat.union(&derived),
        derivations,
        act: None,
        output: None,
    })
}

/// Writes the target message in the system's own syntax and ends in `Done`.
pub fn emit_target(
    system: &System,
    target: &mut TargetOutput,
    sm: &mut StateMachine,
) -> Result<(), HarnessError> {
    sm.advance(ManagerState::Emitting);
    let profile = system
        .profile(system.syntax)
        .expect("registry guarantees a profile for the system syntax");
    let msg = codec::from_abox(&target.m_target, profile).map_err(|e| stage_err(system, sm, e))?;
    let raw = codec::serialize(&msg, system.syntax).map_err(|e| stage_err(system, sm, e))?;
    target.act = system.act_of(&target.m_target, msg.envelope.id.as_str());
    target.output = Some(raw);
    sm.advance(ManagerState::Done);
    Ok(())
}

/// Translates `raw`, written by an agent of `from`, for the agents of `to`.
pub fn convert(
    registry: &SystemRegistry,
    raw: &RawMessage,
    from: &str,
    to: &str,
) -> Result<Conversion, HarnessError> {
    let (src, dst) = (registry.system(from)?, registry.system(to)?);
    let mut sm = StateMachine::new();
    let source = run_source(src, raw, &mut sm)?;
    let mut target = realize_target(dst, &source.payload, &mut sm)?;
    emit_target(dst, &mut target, &mut sm)?;
    Ok(Conversion {
        source,
        target,
        states: sm.history().to_vec(),
    })
}

/// Checks the conversion of `message`: the source side sees `m_sat` with the
/// act class its translators give the message, the target side sees
/// `m_target` likewise.
pub fn check_conversion(
    from: &System,
    to: &System,
    message: &Symbol,
    m_sat: &ABox,
    m_target: &ABox,
    gamma: &Observations,
) -> Result<ConversionReport, CheckError> {
    let side = |sys: &System, abox: &ABox| {
        let act = sys
            .act_of(abox, message.as_str())
            .unwrap_or_else(|| Symbol::new(crate::ontology::COMMUNICATION_ACT));
        Side::new(act, sys.sigma(), sys.psi.clone()).with_abox(abox.clone(), sys.vocabulary())
    };
    check(&ConversionCase {
        message: message.clone(),
        source: side(from, m_sat),
        target: side(to, m_target),
        gamma: gamma.clone(),
        time: 0,
    })
}

/// As [`convert`], checking the conversion before the message is emitted.
/// With `policy.refuse_unsatisfactory`, an unsatisfactory conversion fails
/// in `Emitting` and nothing is produced.
pub fn convert_and_check(
    registry: &SystemRegistry,
    raw: &RawMessage,
    from: &str,
    to: &str,
    gamma: &Observations,
    policy: CheckPolicy,
) -> Result<(Conversion, ConversionReport), HarnessError> {
    let (src, dst) = (registry.system(from)?, registry.system(to)?);
    let mut sm = StateMachine::new();
    let source = run_source(src, raw, &mut sm)?;
    let mut target = realize_target(dst, &source.payload, &mut sm)?;
    let report = check_conversion(
        src,
        dst,
        &source.message,
        &source.m_sat,
        &target.m_target,
        gamma,
    )
    .map_err(|e| stage_err(dst, &mut sm, e))?;
    if policy.refuse_unsatisfactory && !report.satisfactory {
        sm.advance(ManagerState::Emitting);
        return Err(stage_err(
            dst,
            &mut sm,
            StageError::Unsatisfactory(Box::new(report)),
        ));
    }
    emit_target(dst, &mut target, &mut sm)?;
    Ok((
        Conversion {
            source,
            target,
            states: sm.history().to_vec(),
        },
        report,
    ))
}
