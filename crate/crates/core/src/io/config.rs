use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::chain::ChainSpec;
use crate::error::{Error, Result};
use crate::evolution::{EvolutionConfig, InitialState, Mode};
use crate::ground_state::VacuumOptions;
use crate::honeycomb::HoneycombSpec;
use crate::model::Model;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Chain,
    Honeycomb,
}

/// State analysed by the `observables` command when no state file is given.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateSource {
    Vacuum,
    Psi1,
    Psi2,
}

/// Run configuration as read from TOML, after command-line overrides.
///
/// ```toml
/// model = "chain"
/// L = 10
/// g = 0.5
/// dt = 0.025
/// tmax = 2.0
/// mode = "dynamical"
/// initial = "psi1"
/// out = "runs/chain10"
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelKind,
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    pub length: Option<usize>,
    #[serde(rename = "Lx", default, skip_serializing_if = "Option::is_none")]
    pub lx: Option<usize>,
    #[serde(rename = "Ly", default, skip_serializing_if = "Option::is_none")]
    pub ly: Option<usize>,
    pub g: f64,

    #[serde(default = "defaults::dt")]
    pub dt: f64,
    #[serde(default = "defaults::tmax")]
    pub tmax: f64,
    #[serde(default = "defaults::mode")]
    pub mode: Mode,
    #[serde(default = "defaults::initial")]
    pub initial: InitialState,
    #[serde(default = "defaults::tol")]
    pub sc_tol: f64,
    #[serde(default = "defaults::sc_max_iter")]
    pub sc_max_iter: usize,
    #[serde(default = "defaults::one")]
    pub record_every: usize,
    #[serde(default = "defaults::damping")]
    pub damping: f64,

    #[serde(default = "defaults::tol")]
    pub vacuum_tol: f64,
    #[serde(default = "defaults::vacuum_max_iter")]
    pub vacuum_max_iter: usize,
    #[serde(default = "defaults::damping")]
    pub vacuum_damping: f64,
    /// Reuse a vacuum written by `ground-state` instead of solving again.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vacuum_file: Option<PathBuf>,

    #[serde(default = "defaults::source")]
    pub state: StateSource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state_file: Option<PathBuf>,
    /// Compute stabilizer Renyi entropies in `observables`.
    #[serde(default = "defaults::yes")]
    pub sre: bool,
    /// Qubit subsets for bipartite entropies; default is every prefix cut.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cuts: Option<Vec<Vec<usize>>>,
    /// Write the final evolved state next to the CSV.
    #[serde(default)]
    pub dump_state: bool,

    #[serde(default = "defaults::out")]
    pub out: PathBuf,
}

mod defaults {
    use super::*;

    pub fn dt() -> f64 {
        0.025
    }
    pub fn tmax() -> f64 {
        10.0
    }
    pub fn mode() -> Mode {
        Mode::Dynamical
    }
    pub fn initial() -> InitialState {
        InitialState::Psi1
    }
    pub fn tol() -> f64 {
        1e-10
    }
    pub fn sc_max_iter() -> usize {
        100
    }
    pub fn vacuum_max_iter() -> usize {
        200
    }
    pub fn one() -> usize {
        1
    }
    pub fn damping() -> f64 {
        1.0
    }
    pub fn source() -> StateSource {
        StateSource::Vacuum
    }
    pub fn yes() -> bool {
        true
    }
    pub fn out() -> PathBuf {
        PathBuf::from("out")
    }
}

impl RunConfig {
    pub fn from_table(table: toml::Table) -> Result<Self> {
        let cfg: RunConfig = toml::Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| Error::Format(e.message().to_string()))?;
        cfg.model_spec()?;
        Ok(cfg)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        Self::from_table(parse_table(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn model_spec(&self) -> Result<Model> {
        match self.model {
            ModelKind::Chain => {
                if self.lx.is_some() || self.ly.is_some() {
                    return Err(Error::Invalid("chain models take L, not Lx/Ly".into()));
                }
                let l = self
                    .length
                    .ok_or_else(|| Error::Invalid("chain model needs L".into()))?;
                Ok(Model::Chain(ChainSpec::new(l, self.g)?))
            }
            ModelKind::Honeycomb => {
                if self.length.is_some() {
                    return Err(Error::Invalid("honeycomb models take Lx and Ly, not L".into()));
                }
                match (self.lx, self.ly) {
                    (Some(lx), Some(ly)) => Ok(Model::Honeycomb(HoneycombSpec::new(lx, ly, self.g)?)),
                    _ => Err(Error::Invalid("honeycomb model needs Lx and Ly".into())),
                }
            }
        }
    }

    pub fn evolution(&self) -> EvolutionConfig {
        EvolutionConfig {
            dt: self.dt,
            t_max: self.tmax,
            mode: self.mode,
            sc_tol: self.sc_tol,
            sc_max_iter: self.sc_max_iter,
            record_every: self.record_every,
            damping: self.damping,
            ..Default::default()
        }
    }

    pub fn vacuum_options(&self) -> VacuumOptions {
        VacuumOptions {
            tol: self.vacuum_tol,
            max_iter: self.vacuum_max_iter,
            damping: self.vacuum_damping,
            ..Default::default()
        }
    }
}

pub fn parse_table(text: &str) -> Result<toml::Table> {
    text.parse::<toml::Table>()
        .map_err(|e| Error::Format(e.message().to_string()))
}
