//! Systems taking part in a deployment, loaded from one TOML file.
//!
//! ```toml
//! common = "common.ont"            # optional, bundled layer otherwise
//!
//! [notation]
//! FIPA-Query-Ref = "Fqr"
//!
//! [[system]]
//! id = "MedicalFIPAAgents"
//! syntax = "fipa-acl"
//! ontology = ["medical.ont"]
//! effects = ["medical.effects"]
//! profiles = { fipa-acl = "medical-fipa.toml" }
//! agents = { ConditionsChecker = "cc@medical" }
//! ```
//!
//! Paths are relative to the file.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::abox::ABox;
use crate::codec::{Syntax, TranslatorProfile};
use crate::commitments::{sigma, ActEffects, CommitmentError};
use crate::constraints::{generate, ConstraintSet};
use crate::ec::EffectAxiom;
use crate::notation::Notation;
use crate::ontology::{Layer, Ontology, OntologyError};
use crate::symbol::Symbol;

#[derive(Debug, thiserror::Error)]
pub enum RegistryError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: {message}")]
    Config { path: String, message: String },
    #[error("{path}: {source}")]
    Ontology { path: String, source: OntologyError },
    #[error("{path}: {source}")]
    Effects {
        path: String,
        source: CommitmentError,
    },
    #[error("system {0} is declared twice")]
    DuplicateSystem(Symbol),
    #[error("system {system} has no translator profile for {syntax}")]
    MissingProfile { system: Symbol, syntax: Syntax },
    #[error("{path}: application axioms belong to {found}, expected {expected}")]
    ForeignLayer {
        path: String,
        found: Symbol,
        expected: Symbol,
    },
    #[error("unknown system {0}")]
    UnknownSystem(Symbol),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RegistryFile {
    common: Option<PathBuf>,
    #[serde(default)]
    notation: BTreeMap<String, String>,
    #[serde(default, rename = "system")]
    systems: Vec<SystemFile>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemFile {
    id: String,
    syntax: String,
    #[serde(default)]
    ontology: Vec<PathBuf>,
    #[serde(default)]
    effects: Vec<PathBuf>,
    #[serde(default)]
    profiles: BTreeMap<String, PathBuf>,
    #[serde(default)]
    agents: BTreeMap<String, String>,
}

/// One information system: its ontology (shared common layer plus its own
/// layers), translators, act effects and agents.
#[derive(Debug, Clone)]
pub struct System {
    pub id: Symbol,
    /// Syntax its agents read and write.
    pub syntax: Syntax,
    pub ontology: Ontology,
    pub psi: ConstraintSet,
    pub effects: ActEffects,
    pub profiles: BTreeMap<Syntax, TranslatorProfile>,
    /// Agent name to address.
    pub agents: BTreeMap<Symbol, String>,
}

impl System {
    /// Adds the shipped act effects to `effects`; a profile for `syntax`
    /// must be present.
    pub fn new(
        id: impl Into<Symbol>,
        syntax: Syntax,
        ontology: Ontology,
        profiles: BTreeMap<Syntax, TranslatorProfile>,
        effects: ActEffects,
    ) -> Result<Self, RegistryError> {
        let id = id.into();
        if !profiles.contains_key(&syntax) {
            return Err(RegistryError::MissingProfile { system: id, syntax });
        }
        let mut all = ActEffects::shipped();
        all.extend(&effects);
        Ok(System {
            psi: generate(&ontology),
            id,
            syntax,
            ontology,
            effects: all,
            profiles,
            agents: BTreeMap::new(),
        })
    }

    pub fn with_agent(mut self, name: impl Into<Symbol>, address: impl Into<String>) -> Self {
        self.agents.insert(name.into(), address.into());
        self
    }

    pub fn sigma(&self) -> Vec<EffectAxiom> {
        sigma(&self.effects)
    }

    /// Classes this system speaks: those its own layers define and those its
    /// translators emit.
    pub fn vocabulary(&self) -> BTreeSet<Symbol> {
        let mut v = self
            .ontology
            .defined_in(&[Layer::Application, Layer::Domain, Layer::Action]);
        for p in self.profiles.values() {
            v.extend(p.classes());
        }
        v
    }

    pub fn profile(&self, syntax: Syntax) -> Option<&TranslatorProfile> {
        self.profiles.get(&syntax)
    }

    /// The act class `root` is sent as, read through this system's
    /// translators: the first performative class typing it, else a fallback
    /// class typing it.
    pub fn act_of(&self, abox: &ABox, root: &str) -> Option<Symbol> {
        let ordered = std::iter::once(self.syntax).chain(self.profiles.keys().copied());
        for syntax in ordered {
            let Some(p) = self.profiles.get(&syntax) else {
                continue;
            };
            if let Some(r) = p
                .performatives
                .iter()
                .find(|r| abox.has_type(root, r.class.as_str()))
            {
                return Some(r.class.clone());
            }
        }
        self.profiles
            .values()
            .filter_map(|p| p.fallback.clone())
            .find(|f| abox.has_type(root, f.as_str()))
    }
}

#[derive(Debug, Clone, Default)]
pub struct SystemRegistry {
    systems: BTreeMap<Symbol, System>,
    pub notation: Notation,
}

impl SystemRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_notation(mut self, notation: Notation) -> Self {
        self.notation = notation;
        self
    }

    pub fn insert(&mut self, system: System) -> Result<(), RegistryError> {
        if self.systems.contains_key(&system.id) {
            return Err(RegistryError::DuplicateSystem(system.id));
        }
        self.systems.insert(system.id.clone(), system);
        Ok(())
    }

    pub fn system(&self, id: &str) -> Result<&System, RegistryError> {
        self.systems
            .get(id)
            .ok_or_else(|| RegistryError::UnknownSystem(Symbol::new(id)))
    }

    pub fn systems(&self) -> impl Iterator<Item = &System> {
        self.systems.values()
    }

    /// The system an agent belongs to.
    pub fn system_of_agent(&self, agent: &str) -> Option<&System> {
        self.systems.values().find(|s| s.agents.contains_key(agent))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, RegistryError> {
        let path = path.as_ref();
        let text = read(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_toml(&text, base).map_err(|e| match e {
            RegistryError::Config { path: p, message } if p.is_empty() => RegistryError::Config {
                path: path.display().to_string(),
                message,
            },
            e => e,
        })
    }

    /// Parses a registry; relative paths are resolved against `base`.
    pub fn from_toml(text: &str, base: &Path) -> Result<Self, RegistryError> {
        let file: RegistryFile = toml::from_str(text).map_err(|e| RegistryError::Config {
            path: String::new(),
            message: e.to_string(),
        })?;
        let common = match &file.common {
            Some(p) => load_ontology(&base.join(p))?,
            None => Ontology::seed_common(),
        };
        let mut reg = SystemRegistry {
            systems: BTreeMap::new(),
            notation: Notation::with_aliases(
                file.notation.iter().map(|(k, v)| (k.as_str(), v.as_str())),
            ),
        };
        for s in &file.systems {
            let id = Symbol::new(&s.id);
            let config_err = |message: String| RegistryError::Config {
                path: s.id.clone(),
                message,
            };
            let syntax: Syntax = s.syntax.parse().map_err(|e| config_err(format!("{e}")))?;
            let mut ontology = common.clone();
            for p in &s.ontology {
                let path = base.join(p);
                let layer = load_ontology(&path)?;
                if let Some(found) = layer
                    .axioms()
                    .find_map(|a| a.system.clone().filter(|f| *f != id))
                {
                    return Err(RegistryError::ForeignLayer {
                        path: path.display().to_string(),
                        found,
                        expected: id,
                    });
                }
                ontology.merge(&layer);
            }
            let mut profiles = BTreeMap::new();
            for (name, p) in &s.profiles {
                let syn: Syntax = name.parse().map_err(|e| config_err(format!("{e}")))?;
                let path = base.join(p);
                let profile = TranslatorProfile::from_toml(&read(&path)?).map_err(|e| {
                    RegistryError::Config {
                        path: path.display().to_string(),
                        message: e.to_string(),
                    }
                })?;
                if profile.syntax != syn {
                    return Err(RegistryError::Config {
                        path: path.display().to_string(),
                        message: format!("profile is for {}, listed under {syn}", profile.syntax),
                    });
                }
                profiles.insert(syn, profile);
            }
            let mut effects = ActEffects::new();
            for p in &s.effects {
                let path = base.join(p);
                let more =
                    ActEffects::parse(&read(&path)?).map_err(|source| RegistryError::Effects {
                        path: path.display().to_string(),
                        source,
                    })?;
                effects.extend(&more);
            }
            let mut system = System::new(id, syntax, ontology, profiles, effects)?;
            for (agent, addr) in &s.agents {
                system = system.with_agent(agent.as_str(), addr.as_str());
            }
            reg.insert(system)?;
        }
        Ok(reg)
    }
}

fn read(path: &Path) -> Result<String, RegistryError> {
    std::fs::read_to_string(path).map_err(|e| RegistryError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn load_ontology(path: &Path) -> Result<Ontology, RegistryError> {
    Ontology::parse(&read(path)?).map_err(|source| RegistryError::Ontology {
        path: path.display().to_string(),
        source,
    })
}
