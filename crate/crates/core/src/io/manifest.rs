//! JSON documents written next to every run: the run manifest, the vacuum
//! file and the observables report.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::{EvolutionConfig, InitialState, Mode};
use crate::ground_state::VacuumResult;
use crate::model::Model;
use crate::tadpole::{TadpoleField, TadpoleKind};

use super::config::ModelKind;

pub const SCHEMA_VERSION: &str = "1.0";
const SCHEMA_MAJOR: u64 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelDescriptor {
    #[serde(rename = "type")]
    pub kind: ModelKind,
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    pub length: Option<usize>,
    #[serde(rename = "Lx", default, skip_serializing_if = "Option::is_none")]
    pub lx: Option<usize>,
    #[serde(rename = "Ly", default, skip_serializing_if = "Option::is_none")]
    pub ly: Option<usize>,
    pub g: f64,
}

impl From<&Model> for ModelDescriptor {
    fn from(m: &Model) -> Self {
        match m {
            Model::Chain(s) => ModelDescriptor {
                kind: ModelKind::Chain,
                length: Some(s.length()),
                lx: None,
                ly: None,
                g: s.coupling(),
            },
            Model::Honeycomb(s) => ModelDescriptor {
                kind: ModelKind::Honeycomb,
                length: None,
                lx: Some(s.lx()),
                ly: Some(s.ly()),
                g: s.coupling(),
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Ok,
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema_version: String,
    pub command: String,
    pub model: ModelDescriptor,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evolution: Option<EvolutionConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<InitialState>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    pub code_version: String,
    pub wall_clock_seconds: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vacuum_iterations: Option<usize>,
    /// Self-consistency passes per step -> number of steps.
    #[serde(default)]
    pub step_iteration_histogram: BTreeMap<usize, usize>,
    pub outputs: Vec<PathBuf>,
    pub status: RunStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl RunManifest {
    pub fn new(command: &str, model: &Model) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.into(),
            command: command.into(),
            model: model.into(),
            evolution: None,
            initial: None,
            mode: None,
            code_version: env!("CARGO_PKG_VERSION").into(),
            wall_clock_seconds: 0.0,
            vacuum_iterations: None,
            step_iteration_histogram: BTreeMap::new(),
            outputs: Vec::new(),
            status: RunStatus::Ok,
            error: None,
        }
    }
}

/// Vacuum written by `ground-state`. The field is stored under `u4` for
/// chains and `u6` for honeycombs, ordered by plaquette index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VacuumFile {
    pub schema_version: String,
    pub model: ModelDescriptor,
    pub energy: f64,
    pub energy_density: f64,
    pub iterations: usize,
    pub final_residual: f64,
    pub residual_history: Vec<f64>,
    #[serde(default)]
    pub gap_estimate: Option<f64>,
    pub near_degenerate: bool,
    pub labels: Vec<String>,
    #[serde(flatten)]
    pub field: BTreeMap<String, Vec<f64>>,
    /// State dump of the vacuum, relative to the vacuum file.
    #[serde(default)]
    pub state_file: Option<PathBuf>,
}

pub fn field_key(kind: TadpoleKind) -> String {
    format!("u{}", kind.exponent())
}

impl VacuumFile {
    pub fn new(model: &Model, vac: &VacuumResult, state_file: Option<PathBuf>) -> Self {
        let key = field_key(model.tadpole_kind());
        Self {
            schema_version: SCHEMA_VERSION.into(),
            model: model.into(),
            energy: vac.total_energy,
            energy_density: vac.energy_density,
            iterations: vac.iterations,
            final_residual: vac.final_residual,
            residual_history: vac.residual_history.clone(),
            gap_estimate: vac.gap_estimate,
            near_degenerate: vac.near_degenerate,
            labels: (0..model.n_plaquettes()).map(|p| model.label(p)).collect(),
            field: BTreeMap::from([(key, vac.tadpole.values().to_vec())]),
            state_file,
        }
    }

    pub fn tadpole(&self, kind: TadpoleKind) -> Result<TadpoleField> {
        let key = field_key(kind);
        let values = self
            .field
            .get(&key)
            .ok_or_else(|| Error::Format(format!("vacuum file has no `{key}` field")))?;
        TadpoleField::new(kind, values.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyEntry {
    pub cut: Vec<usize>,
    pub entropy: f64,
}

/// Key-value report of the `observables` command. Entropies are in bits;
/// the `_per_L` densities divide by the qubit count.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObservablesReport {
    pub schema_version: String,
    pub model: ModelDescriptor,
    pub source: String,
    pub n_qubits: usize,
    #[serde(rename = "M1")]
    pub m1: Option<f64>,
    #[serde(rename = "M2")]
    pub m2: Option<f64>,
    #[serde(rename = "M1_per_L")]
    pub m1_per_l: Option<f64>,
    #[serde(rename = "M2_per_L")]
    pub m2_per_l: Option<f64>,
    pub entropies: Vec<EntropyEntry>,
    pub energy_profile: Vec<f64>,
    pub tadpole: Vec<f64>,
    pub tadpole_key: String,
    pub labels: Vec<String>,
}

fn check_version(value: &serde_json::Value) -> Result<()> {
    let v = value
        .get("schema_version")
        .and_then(|v| v.as_str())
        .ok_or_else(|| Error::Format("missing schema_version".into()))?;
    let major = v
        .split('.')
        .next()
        .and_then(|m| m.parse::<u64>().ok())
        .ok_or_else(|| Error::Format(format!("malformed schema_version `{v}`")))?;
    if major != SCHEMA_MAJOR {
        return Err(Error::Format(format!(
            "unsupported schema version {v} (this build reads {SCHEMA_MAJOR}.x)"
        )));
    }
    Ok(())
}

/// Parses a versioned JSON document, rejecting unknown major versions.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    check_version(&value)?;
    serde_json::from_value(value).map_err(|e| Error::Format(e.to_string()))
}

pub fn to_json<T: Serialize>(doc: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(doc).map_err(|e| Error::Format(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn load_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    from_json(&std::fs::read_to_string(path)?)
}

pub fn save_json<T: Serialize>(path: &Path, doc: &T) -> Result<()> {
    std::fs::write(path, to_json(doc)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::ChainSpec;

    fn manifest() -> RunManifest {
        let model = Model::Chain(ChainSpec::new(10, 0.5).unwrap());
        let mut m = RunManifest::new("evolve", &model);
        m.evolution = Some(EvolutionConfig::default());
        m.initial = Some(InitialState::Psi2);
        m.mode = Some(Mode::Vacuum);
        m.wall_clock_seconds = 1.0 / 3.0;
        m.vacuum_iterations = Some(4);
        m.step_iteration_histogram = BTreeMap::from([(3, 10), (4, 70)]);
        m.outputs = vec!["a.csv".into()];
        m
    }

    #[test]
    fn manifest_round_trips() {
        let m = manifest();
        let back: RunManifest = from_json(&to_json(&m).unwrap()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn unknown_major_version_is_rejected() {
        let mut m = manifest();
        m.schema_version = "2.0".into();
        let err = from_json::<RunManifest>(&to_json(&m).unwrap()).unwrap_err();
        assert!(matches!(err, Error::Format(_)));
        m.schema_version = "1.7".into();
        assert!(from_json::<RunManifest>(&to_json(&m).unwrap()).is_ok());
        assert!(from_json::<RunManifest>("{\"command\": \"x\"}").is_err());
    }

    #[test]
    fn vacuum_file_uses_power_specific_key() {
        let text = r#"{"schema_version":"1.0","model":{"type":"chain","L":4,"g":0.5},
            "energy":1.0,"energy_density":0.25,"iterations":3,"final_residual":1e-11,
            "residual_history":[0.1],"gap_estimate":null,"near_degenerate":false,
            "labels":["0","1","2","3"],"u4":[1.1,1.1,1.1,1.1],"state_file":null}"#;
        let v: VacuumFile = from_json(text).unwrap();
        assert_eq!(v.tadpole(TadpoleKind::Chain).unwrap().values(), &[1.1; 4]);
        assert!(v.tadpole(TadpoleKind::Honeycomb).is_err());
        let again: VacuumFile = from_json(&to_json(&v).unwrap()).unwrap();
        assert_eq!(again, v);
    }
}
