//! `ground-state`, `evolve` and `observables` as library calls. Each writes
//! its outputs into `cfg.out` plus a manifest; a failed run still leaves a
//! manifest with `status = "error"` and, for `evolve`, the CSV rows written
//! so far.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::error::{Error, Result};
use crate::evolution::{evolve_observed, prepare_initial_state, InitialState, Mode, TimeSeries};
use crate::ground_state::{self_consistent_vacuum_with, VacuumResult};
use crate::model::{Model, ModelOperators};
use crate::observables::{bipartite_entropy, stabilizer_entropies};
use crate::pauli::StateVector;

use super::config::{RunConfig, StateSource};
use super::manifest::{
    field_key, load_json, save_json, EntropyEntry, ModelDescriptor, ObservablesReport, RunManifest,
    RunStatus, VacuumFile, SCHEMA_VERSION,
};
use super::series::SeriesWriter;
use super::state_dump::{load_state, save_state};

pub const VACUUM_FILE: &str = "vacuum.json";
pub const VACUUM_STATE: &str = "vacuum.state";
pub const REPORT_FILE: &str = "observables.json";

#[derive(Clone, Debug)]
pub struct GroundStateRun {
    pub vacuum: VacuumResult,
    pub vacuum_file: PathBuf,
    pub manifest: RunManifest,
    pub manifest_path: PathBuf,
}

#[derive(Clone, Debug)]
pub struct EvolveRun {
    pub series: TimeSeries,
    pub csv_path: PathBuf,
    pub manifest: RunManifest,
    pub manifest_path: PathBuf,
}

#[derive(Clone, Debug)]
pub struct ObservablesRun {
    pub report: ObservablesReport,
    pub report_path: PathBuf,
    pub manifest: RunManifest,
    pub manifest_path: PathBuf,
}

/// Evolution outputs are named after the run so the three modes of one
/// initial state can share a directory.
pub fn evolve_stem(initial: InitialState, mode: Mode) -> String {
    format!("evolve_{initial}_{mode}")
}

fn finish<T>(
    manifest: &mut RunManifest,
    path: &Path,
    started: Instant,
    outcome: Result<T>,
) -> Result<T> {
    manifest.wall_clock_seconds = started.elapsed().as_secs_f64();
    if let Err(e) = &outcome {
        manifest.status = RunStatus::Error;
        manifest.error = Some(e.to_string());
        manifest.outputs.retain(|p| p.exists());
    }
    manifest.outputs.push(path.to_path_buf());
    save_json(path, manifest)?;
    outcome
}

pub fn run_ground_state(cfg: &RunConfig) -> Result<GroundStateRun> {
    let model = cfg.model_spec()?;
    std::fs::create_dir_all(&cfg.out)?;
    let started = Instant::now();
    let manifest_path = cfg.out.join("ground_state.manifest.json");
    let mut manifest = RunManifest::new("ground-state", &model);
    let vacuum_file = cfg.out.join(VACUUM_FILE);

    let outcome = (|| {
        let ops = ModelOperators::new(model)?;
        let vac = self_consistent_vacuum_with(&ops, &cfg.vacuum_options());
        let vac = vac?;
        save_state(&cfg.out.join(VACUUM_STATE), &vac.state)?;
        save_json(&vacuum_file, &VacuumFile::new(&model, &vac, Some(VACUUM_STATE.into())))?;
        Ok(vac)
    })();
    if let Ok(v) = &outcome {
        manifest.vacuum_iterations = Some(v.iterations);
    }
    manifest.outputs = vec![vacuum_file.clone(), cfg.out.join(VACUUM_STATE)];
    let vacuum = finish(&mut manifest, &manifest_path, started, outcome)?;
    Ok(GroundStateRun {
        vacuum,
        vacuum_file,
        manifest,
        manifest_path,
    })
}

/// Loads a vacuum written by [`run_ground_state`] and checks it belongs to
/// `model`.
pub fn load_vacuum(path: &Path, model: &Model) -> Result<VacuumResult> {
    let file: VacuumFile = load_json(path)?;
    if file.model != ModelDescriptor::from(model) {
        return Err(Error::Invalid(format!(
            "vacuum file {} was computed for a different model",
            path.display()
        )));
    }
    let tadpole = file.tadpole(model.tadpole_kind())?;
    let state_rel = file
        .state_file
        .as_ref()
        .ok_or_else(|| Error::Format("vacuum file does not name a state dump".into()))?;
    let state_path = path.parent().unwrap_or(Path::new(".")).join(state_rel);
    let state = load_state(&state_path)?;
    if state.n_qubits() != model.n_qubits() {
        return Err(Error::Dimension {
            expected: model.n_qubits(),
            got: state.n_qubits(),
        });
    }
    Ok(VacuumResult {
        state,
        tadpole,
        total_energy: file.energy,
        energy_density: file.energy_density,
        iterations: file.iterations,
        final_residual: file.final_residual,
        residual_history: file.residual_history,
        gap_estimate: file.gap_estimate,
        near_degenerate: file.near_degenerate,
    })
}

fn obtain_vacuum(cfg: &RunConfig, ops: &ModelOperators) -> Result<VacuumResult> {
    match &cfg.vacuum_file {
        Some(p) => load_vacuum(p, ops.model()),
        None => self_consistent_vacuum_with(ops, &cfg.vacuum_options()),
    }
}

pub fn run_evolve(cfg: &RunConfig) -> Result<EvolveRun> {
    let model = cfg.model_spec()?;
    let evo = cfg.evolution();
    evo.validate()?;
    std::fs::create_dir_all(&cfg.out)?;
    let started = Instant::now();
    let stem = evolve_stem(cfg.initial, cfg.mode);
    let csv_path = cfg.out.join(format!("{stem}.csv"));
    let manifest_path = cfg.out.join(format!("{stem}.manifest.json"));
    let state_path = cfg.out.join(format!("{stem}.state"));
    let mut manifest = RunManifest::new("evolve", &model);
    manifest.evolution = Some(evo.clone());
    manifest.initial = Some(cfg.initial);
    manifest.mode = Some(cfg.mode);
    manifest.outputs.push(csv_path.clone());
    if cfg.dump_state {
        manifest.outputs.push(state_path.clone());
    }

    let mut vacuum_iterations = None;
    let mut step_iterations = Vec::new();
    let outcome = (|| {
        let ops = ModelOperators::new(model)?;
        let needs_vacuum = cfg.initial == InitialState::Psi2 || cfg.mode == Mode::Vacuum;
        let vacuum = if needs_vacuum {
            let v = obtain_vacuum(cfg, &ops)?;
            vacuum_iterations = Some(v.iterations);
            Some(v)
        } else {
            None
        };
        let psi0 = prepare_initial_state(cfg.initial, &model, vacuum.as_ref())?;
        let mut writer = SeriesWriter::new(BufWriter::new(File::create(&csv_path)?), model.n_plaquettes())?;
        let result = evolve_observed(&psi0, &ops, vacuum.as_ref(), &evo, |rec| {
            step_iterations.push(rec.iterations);
            writer.write(rec)
        });
        let series = result?;
        if let (true, Some(psi)) = (cfg.dump_state, &series.final_state) {
            save_state(&state_path, psi)?;
        }
        Ok(series)
    })();
    manifest.vacuum_iterations = vacuum_iterations;
    if let Ok(series) = &outcome {
        manifest.step_iteration_histogram = series.iteration_histogram();
    } else {
        // only recorded steps are known after a failure
        for k in step_iterations.into_iter().skip(1) {
            *manifest.step_iteration_histogram.entry(k).or_insert(0) += 1;
        }
    }
    let series = finish(&mut manifest, &manifest_path, started, outcome)?;
    Ok(EvolveRun {
        series,
        csv_path,
        manifest,
        manifest_path,
    })
}

fn default_cuts(n: usize) -> Vec<Vec<usize>> {
    (1..n).map(|k| (0..k).collect()).collect()
}

pub fn run_observables(cfg: &RunConfig) -> Result<ObservablesRun> {
    let model = cfg.model_spec()?;
    std::fs::create_dir_all(&cfg.out)?;
    let started = Instant::now();
    let report_path = cfg.out.join(REPORT_FILE);
    let manifest_path = cfg.out.join("observables.manifest.json");
    let mut manifest = RunManifest::new("observables", &model);
    manifest.outputs.push(report_path.clone());

    let mut vacuum_iterations = None;
    let outcome = (|| {
        let ops = ModelOperators::new(model)?;
        let (psi, source): (StateVector, String) = match (&cfg.state_file, cfg.state) {
            (Some(p), _) => (load_state(p)?, format!("file:{}", p.display())),
            (None, StateSource::Psi1) => (prepare_initial_state(InitialState::Psi1, &model, None)?, "psi1".into()),
            (None, src) => {
                let vac = obtain_vacuum(cfg, &ops)?;
                vacuum_iterations = Some(vac.iterations);
                match src {
                    StateSource::Psi2 => (
                        prepare_initial_state(InitialState::Psi2, &model, Some(&vac))?,
                        "psi2".into(),
                    ),
                    _ => (vac.state, "vacuum".into()),
                }
            }
        };
        if psi.n_qubits() != model.n_qubits() {
            return Err(Error::Dimension {
                expected: model.n_qubits(),
                got: psi.n_qubits(),
            });
        }
        let n = model.n_qubits();
        let sre = if cfg.sre {
            Some(stabilizer_entropies(&psi)?)
        } else {
            None
        };
        let cuts = cfg.cuts.clone().unwrap_or_else(|| default_cuts(n));
        let entropies = cuts
            .into_iter()
            .map(|cut| {
                let entropy = bipartite_entropy(&psi, &cut)?;
                Ok(EntropyEntry { cut, entropy })
            })
            .collect::<Result<Vec<_>>>()?;
        let report = ObservablesReport {
            schema_version: SCHEMA_VERSION.into(),
            model: (&model).into(),
            source,
            n_qubits: n,
            m1: sre.map(|s| s.m1),
            m2: sre.map(|s| s.m2),
            m1_per_l: sre.map(|s| s.m1_density()),
            m2_per_l: sre.map(|s| s.m2_density()),
            entropies,
            energy_profile: ops.energy_profile(&psi)?,
            tadpole: ops.tadpole_field(&psi)?.values().to_vec(),
            tadpole_key: field_key(model.tadpole_kind()),
            labels: (0..model.n_plaquettes()).map(|p| model.label(p)).collect(),
        };
        save_json(&report_path, &report)?;
        Ok(report)
    })();
    manifest.vacuum_iterations = vacuum_iterations;
    let report = finish(&mut manifest, &manifest_path, started, outcome)?;
    Ok(ObservablesRun {
        report,
        report_path,
        manifest,
        manifest_path,
    })
}
