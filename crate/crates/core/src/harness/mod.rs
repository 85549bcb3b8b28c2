//! Running conversions between registered systems: the conversion pipeline,
//! manager agents, the directory service and transports.

mod pipeline;
mod registry;
mod run;
mod scenario;
mod transport;

use std::fmt;

pub use pipeline::{
    check_conversion, convert, convert_and_check, emit_target, realize_target, run_source,
    CheckPolicy, Conversion, SourceOutput, TargetOutput,
};
pub use registry::{RegistryError, System, SystemRegistry};
pub use run::{run_harness, Directory, DirectoryEntry, HarnessOutcome};
pub use scenario::{Scenario, ScenarioStep, TransportKind};
pub use transport::{Frame, FrameError};

use crate::checker::{CheckError, ConversionReport};
use crate::codec::CodecError;
use crate::symbol::Symbol;

/// Where a manager is in handling one message. Conversion runs through the
/// states in declaration order; a receiving manager enters at
/// `RealizingTarget`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ManagerState {
    Idle,
    Splitting,
    Translating,
    RealizingSource,
    Materializing,
    Dispatching,
    RealizingTarget,
    Emitting,
    Done,
    Error(String),
}

impl ManagerState {
    fn rank(&self) -> Option<usize> {
        use ManagerState::*;
        [
            Idle,
            Splitting,
            Translating,
            RealizingSource,
            Materializing,
            Dispatching,
            RealizingTarget,
            Emitting,
            Done,
        ]
        .iter()
        .position(|s| s == self)
    }

    pub fn name(&self) -> &str {
        match self {
            ManagerState::Idle => "Idle",
            ManagerState::Splitting => "Splitting",
            ManagerState::Translating => "Translating",
            ManagerState::RealizingSource => "RealizingSource",
            ManagerState::Materializing => "Materializing",
            ManagerState::Dispatching => "Dispatching",
            ManagerState::RealizingTarget => "RealizingTarget",
            ManagerState::Emitting => "Emitting",
            ManagerState::Done => "Done",
            ManagerState::Error(_) => "Error",
        }
    }

    pub fn allows(&self, next: &ManagerState) -> bool {
        use ManagerState::*;
        match (self, next) {
            (_, Error(_)) => true,
            (Error(_), Idle) | (Done, Idle) | (Dispatching, Idle) | (Idle, RealizingTarget) => true,
            (a, b) => matches!((a.rank(), b.rank()), (Some(i), Some(j)) if j == i + 1),
        }
    }
}

impl fmt::Display for ManagerState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ManagerState::Error(reason) => write!(f, "Error({reason})"),
            s => f.write_str(s.name()),
        }
    }
}

/// A manager's state with the transitions it went through.
#[derive(Debug, Clone)]
pub struct StateMachine {
    state: ManagerState,
    history: Vec<ManagerState>,
}

impl Default for StateMachine {
    fn default() -> Self {
        StateMachine {
            state: ManagerState::Idle,
            history: vec![ManagerState::Idle],
        }
    }
}

impl StateMachine {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn state(&self) -> &ManagerState {
        &self.state
    }

    pub fn history(&self) -> &[ManagerState] {
        &self.history
    }

    /// Panics on a transition outside the fixed order: that is a bug in the
    /// caller, not a runtime condition.
    pub fn advance(&mut self, next: ManagerState) {
        assert!(
            self.state.allows(&next),
            "illegal manager transition {} -> {}",
            self.state,
            next
        );
        tracing::debug!(from = %self.state, to = %next, "manager transition");
        self.history.push(next.clone());
        self.state = next;
    }

    /// Enters `Error` and returns the stage that failed.
    fn fail(&mut self, reason: &str) -> ManagerState {
        let stage = self.state.clone();
        self.advance(ManagerState::Error(reason.to_string()));
        stage
    }

    fn reset(&mut self) {
        if !matches!(self.state, ManagerState::Idle) {
            self.advance(ManagerState::Idle);
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum StageError {
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error("no manager registered for system {0}")]
    DirectoryMiss(Symbol),
    #[error("agent {0} belongs to no registered system")]
    UnknownAgent(Symbol),
    #[error("transport: {0}")]
    Transport(String),
    #[error("refused: not a satisfactory conversion ({} missing)", .0.missing.len())]
    Unsatisfactory(Box<ConversionReport>),
}

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("{system} failed in {stage}: {source}")]
    Stage {
        system: Symbol,
        stage: ManagerState,
        source: StageError,
    },
    #[error(transparent)]
    Registry(#[from] RegistryError),
    #[error("scenario: {0}")]
    Scenario(String),
}

impl HarnessError {
    pub fn stage(&self) -> Option<&ManagerState> {
        match self {
            HarnessError::Stage { stage, .. } => Some(stage),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_order() {
        let mut sm = StateMachine::new();
        for s in [
            ManagerState::Splitting,
            ManagerState::Translating,
            ManagerState::RealizingSource,
            ManagerState::Materializing,
            ManagerState::Dispatching,
            ManagerState::RealizingTarget,
            ManagerState::Emitting,
            ManagerState::Done,
            ManagerState::Idle,
        ] {
            sm.advance(s);
        }
        assert_eq!(sm.history().len(), 10);
        assert!(!ManagerState::Idle.allows(&ManagerState::Translating));
        assert!(!ManagerState::Emitting.allows(&ManagerState::Splitting));
        assert!(ManagerState::Translating.allows(&ManagerState::Error("x".into())));
        assert!(ManagerState::Idle.allows(&ManagerState::RealizingTarget));
    }

    #[test]
    #[should_panic(expected = "illegal manager transition")]
    fn skipping_a_stage_panics() {
        StateMachine::new().advance(ManagerState::Materializing);
    }
}
