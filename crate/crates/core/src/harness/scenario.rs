//! Scripts driving agents in a harness run.
//!
//! ```toml
//! transport = "channel"        # or "tcp"
//! check = true                 # check each conversion before emitting
//! refuse_unsatisfactory = true
//! offline = []                 # systems whose managers never join
//!
//! [[step]]
//! agent = "ConditionsChecker"
//! message = "message01.acl"    # relative to the scenario file
//! syntax = "fipa-acl"          # defaults to the agent's system syntax
//! gamma = "context.obs"        # optional context observations
//! ```

use std::collections::BTreeSet;
use std::path::Path;

use serde::Deserialize;

use super::registry::SystemRegistry;
use super::HarnessError;
use crate::codec::{RawMessage, Syntax};
use crate::ec::{parse_observations, Observations};
use crate::symbol::Symbol;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransportKind {
    #[default]
    Channel,
    Tcp,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    #[serde(default)]
    transport: TransportKind,
    #[serde(default)]
    check: bool,
    #[serde(default = "yes")]
    refuse_unsatisfactory: bool,
    #[serde(default)]
    offline: Vec<String>,
    #[serde(default, rename = "step")]
    steps: Vec<StepFile>,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StepFile {
    agent: String,
    message: String,
    syntax: Option<String>,
    gamma: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioStep {
    /// Sending agent.
    pub agent: Symbol,
    pub message: RawMessage,
    pub gamma: Observations,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub transport: TransportKind,
    pub check: bool,
    pub refuse_unsatisfactory: bool,
    pub offline: BTreeSet<Symbol>,
    pub steps: Vec<ScenarioStep>,
}

impl Scenario {
    pub fn new(steps: Vec<ScenarioStep>) -> Self {
        Scenario {
            transport: TransportKind::Channel,
            check: false,
            refuse_unsatisfactory: true,
            offline: BTreeSet::new(),
            steps,
        }
    }

    /// Reads the script and the files it names. The registry supplies
    /// default syntaxes and the notation for context observations.
    pub fn load(path: impl AsRef<Path>, registry: &SystemRegistry) -> Result<Self, HarnessError> {
        let path = path.as_ref();
        let text = read(path)?;
        let file: ScenarioFile = toml::from_str(&text)
            .map_err(|e| HarnessError::Scenario(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        let mut steps = Vec::new();
        for s in file.steps {
            let syntax = match &s.syntax {
                Some(name) => name
                    .parse::<Syntax>()
                    .map_err(|e| HarnessError::Scenario(e.to_string()))?,
                None => {
                    registry
                        .system_of_agent(&s.agent)
                        .ok_or_else(|| {
                            HarnessError::Scenario(format!(
                                "agent {} belongs to no system",
                                s.agent
                            ))
                        })?
                        .syntax
                }
            };
            let message = RawMessage::new(syntax, read(&base.join(&s.message))?);
            let gamma = match &s.gamma {
                Some(g) => parse_observations(&read(&base.join(g))?, &registry.notation)
                    .map_err(|e| HarnessError::Scenario(format!("{g}: {e}")))?,
                None => Observations::new(),
            };
            steps.push(ScenarioStep {
                agent: Symbol::new(&s.agent),
                message,
                gamma,
            });
        }
        Ok(Scenario {
            transport: file.transport,
            check: file.check,
            refuse_unsatisfactory: file.refuse_unsatisfactory,
            offline: file.offline.iter().map(Symbol::new).collect(),
            steps,
        })
    }
}

fn read(path: &Path) -> Result<String, HarnessError> {
    std::fs::read_to_string(path)
        .map_err(|e| HarnessError::Scenario(format!("{}: {e}", path.display())))
}
