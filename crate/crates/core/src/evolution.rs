//! Real-time evolution with per-step self-consistent tadpole improvement.
//!
//! Every step applies the exact exponential of the full (untrotterized)
//! Hamiltonian. In dynamical mode the field that builds `H` is iterated:
//! propagate `psi(t)` under `H(u)`, measure `u'` on the result, and repeat
//! from the same `psi(t)` with `u <- u'` until `max |u' - u| <= sc_tol`.
//! The field is measured at the end of the step; a midpoint rule is not
//! implemented.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ground_state::VacuumResult;
use crate::model::{Model, ModelOperators};
use crate::pauli::{apply, StateVector};
use crate::propagate::{step_propagate, PropagatorOptions};
use crate::tadpole::TadpoleField;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Field re-solved self-consistently at every step.
    Dynamical,
    /// `u = 1` throughout.
    Unimproved,
    /// Field frozen at the interacting-vacuum value.
    Vacuum,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dynamical" => Ok(Mode::Dynamical),
            "unimproved" => Ok(Mode::Unimproved),
            "vacuum" => Ok(Mode::Vacuum),
            other => Err(Error::Invalid(format!("unknown mode `{other}`"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Dynamical => "dynamical",
            Mode::Unimproved => "unimproved",
            Mode::Vacuum => "vacuum",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitialState {
    /// One excited plaquette on the trivial vacuum.
    Psi1,
    /// Normalized plaquette operator applied to the interacting vacuum.
    Psi2,
}

impl FromStr for InitialState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "psi1" => Ok(InitialState::Psi1),
            "psi2" => Ok(InitialState::Psi2),
            other => Err(Error::Invalid(format!("unknown initial state `{other}`"))),
        }
    }
}

impl fmt::Display for InitialState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InitialState::Psi1 => "psi1",
            InitialState::Psi2 => "psi2",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvolutionConfig {
    pub dt: f64,
    pub t_max: f64,
    pub mode: Mode,
    pub sc_tol: f64,
    pub sc_max_iter: usize,
    pub propagator_tol: f64,
    pub krylov_dim: usize,
    pub record_every: usize,
    /// Mixing parameter for the within-step iteration, `(0, 1]`.
    pub damping: f64,
    pub dense_max_qubits: usize,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        Self {
            dt: 0.025,
            t_max: 10.0,
            mode: Mode::Dynamical,
            sc_tol: 1e-10,
            sc_max_iter: 100,
            propagator_tol: 1e-12,
            krylov_dim: 30,
            record_every: 1,
            damping: 1.0,
            dense_max_qubits: 6,
        }
    }
}

impl EvolutionConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::Invalid(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_max >= self.dt) || !self.t_max.is_finite() {
            return Err(Error::Invalid(format!(
                "t_max ({}) must be at least dt ({})",
                self.t_max, self.dt
            )));
        }
        if !(self.sc_tol > 0.0) {
            return Err(Error::Invalid(format!("sc_tol must be positive, got {}", self.sc_tol)));
        }
        if self.sc_max_iter == 0 || self.record_every == 0 || self.krylov_dim == 0 {
            return Err(Error::Invalid(
                "sc_max_iter, record_every and krylov_dim must be positive".into(),
            ));
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(Error::Invalid(format!("damping must lie in (0, 1], got {}", self.damping)));
        }
        Ok(())
    }

    pub fn n_steps(&self) -> usize {
        (self.t_max / self.dt + 1e-9).floor() as usize
    }

    /// Rows written for a complete run: `floor(steps / record_every) + 1`.
    pub fn n_records(&self) -> usize {
        self.n_steps() / self.record_every + 1
    }

    pub fn propagator(&self) -> PropagatorOptions {
        PropagatorOptions {
            tol: self.propagator_tol,
            krylov_dim: self.krylov_dim,
            dense_max_qubits: self.dense_max_qubits,
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepRecord {
    pub step: usize,
    pub t: f64,
    /// Electric energy per plaquette.
    pub energies: Vec<f64>,
    /// Tadpole field measured on the recorded state (`u^4` or `u^6`).
    pub tadpole: Vec<f64>,
    /// Self-consistency passes for the step that produced this state.
    pub iterations: usize,
    /// Final self-consistency residual; `None` when no iteration ran.
    pub residual: Option<f64>,
    pub residual_trace: Vec<f64>,
    /// `<H>` under the Hamiltonian in force for this step.
    pub energy_total: f64,
    pub norm: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TimeSeries {
    pub records: Vec<StepRecord>,
    /// Self-consistency passes for every step, recorded or not.
    pub step_iterations: Vec<usize>,
    pub final_state: Option<StateVector>,
}

impl TimeSeries {
    /// Histogram of per-step iteration counts.
    pub fn iteration_histogram(&self) -> std::collections::BTreeMap<usize, usize> {
        let mut h = std::collections::BTreeMap::new();
        for &k in &self.step_iterations {
            *h.entry(k).or_insert(0) += 1;
        }
        h
    }
}

pub fn prepare_initial_state(
    kind: InitialState,
    model: &Model,
    vacuum: Option<&VacuumResult>,
) -> Result<StateVector> {
    let n = model.n_qubits();
    match kind {
        // plaquette 0 / cell (0,0) is qubit 0
        InitialState::Psi1 => StateVector::basis(n, 1),
        InitialState::Psi2 => {
            let vac = vacuum.ok_or_else(|| {
                Error::Invalid("psi2 needs the interacting vacuum".into())
            })?;
            let image = apply(&model.plaquette_op(0)?, &vac.state)?;
            if image.norm() < 1e-12 {
                return Err(Error::Domain("plaquette image of the vacuum vanishes".into()));
            }
            image.normalized()
        }
    }
}

/// Outcome of one self-consistent step.
#[derive(Clone, Debug)]
pub struct SelfConsistentStep {
    pub state: StateVector,
    pub field: TadpoleField,
    pub iterations: usize,
    pub residuals: Vec<f64>,
}

/// Iterates `psi' = exp(-i H(u) dt) psi`, `u <- measure(psi')` from the same
/// `psi` until the field stops moving.
pub fn self_consistent_step<M>(
    ops: &ModelOperators,
    psi: &StateVector,
    guess: &TadpoleField,
    cfg: &EvolutionConfig,
    measure: M,
) -> Result<SelfConsistentStep>
where
    M: Fn(&StateVector) -> Result<TadpoleField>,
{
    let prop = cfg.propagator();
    let mut field = guess.clone();
    let mut residuals = Vec::new();
    for k in 1..=cfg.sc_max_iter {
        let h = ops.hamiltonian(&field)?;
        let next = step_propagate(&h, psi, cfg.dt, &prop)?;
        let measured = measure(&next)?;
        let r = measured.max_abs_diff(&field);
        residuals.push(r);
        if r <= cfg.sc_tol {
            return Ok(SelfConsistentStep {
                state: next,
                field: measured,
                iterations: k,
                residuals,
            });
        }
        field = field.mix(&measured, cfg.damping);
    }
    Err(Error::NonConvergence {
        what: "per-step tadpole self-consistency",
        iterations: cfg.sc_max_iter,
        best_residual: residuals.iter().copied().fold(f64::INFINITY, f64::min),
        history: residuals,
    })
}

pub fn evolve(
    psi0: &StateVector,
    model: &Model,
    vacuum: Option<&VacuumResult>,
    cfg: &EvolutionConfig,
) -> Result<TimeSeries> {
    let ops = ModelOperators::new(*model)?;
    evolve_observed(psi0, &ops, vacuum, cfg, |_| Ok(()))
}

/// As [`evolve`], handing every record to `on_record` as soon as it exists.
pub fn evolve_observed<F>(
    psi0: &StateVector,
    ops: &ModelOperators,
    vacuum: Option<&VacuumResult>,
    cfg: &EvolutionConfig,
    mut on_record: F,
) -> Result<TimeSeries>
where
    F: FnMut(&StepRecord) -> Result<()>,
{
    cfg.validate()?;
    let model = ops.model();
    if psi0.n_qubits() != model.n_qubits() {
        return Err(Error::Dimension {
            expected: model.n_qubits(),
            got: psi0.n_qubits(),
        });
    }
    let drift = (psi0.norm() - 1.0).abs();
    if drift > crate::propagate::MAX_NORM_DRIFT {
        return Err(Error::NormDrift { drift });
    }
    let fixed_field = match cfg.mode {
        Mode::Dynamical => None,
        Mode::Unimproved => Some(model.unit_field()),
        Mode::Vacuum => Some(
            vacuum
                .ok_or_else(|| Error::Invalid("vacuum mode needs the interacting vacuum".into()))?
                .tadpole
                .clone(),
        ),
    };
    let fixed_h = match &fixed_field {
        Some(f) => Some(ops.hamiltonian(f)?),
        None => None,
    };
    let prop = cfg.propagator();

    let mut psi = psi0.clone();
    let mut field = ops.tadpole_field(&psi)?;
    let mut series = TimeSeries::default();

    let record = |step: usize,
                  psi: &StateVector,
                  measured: &TadpoleField,
                  iterations: usize,
                  trace: Vec<f64>|
     -> Result<StepRecord> {
        let in_force = fixed_field.as_ref().unwrap_or(measured);
        let h = ops.hamiltonian(in_force)?;
        let energy_total = h.expectation(psi)?.re;
        Ok(StepRecord {
            step,
            t: step as f64 * cfg.dt,
            energies: ops.energy_profile(psi)?,
            tadpole: measured.values().to_vec(),
            iterations,
            residual: trace.last().copied(),
            residual_trace: trace,
            energy_total,
            norm: psi.norm(),
        })
    };

    let first = record(0, &psi, &field, 0, Vec::new())?;
    on_record(&first)?;
    series.records.push(first);

    for step in 1..=cfg.n_steps() {
        let (iterations, trace) = match &fixed_h {
            Some(h) => {
                psi = step_propagate(h, &psi, cfg.dt, &prop)?;
                field = ops.tadpole_field(&psi)?;
                (0, Vec::new())
            }
            None => {
                let out = self_consistent_step(ops, &psi, &field, cfg, |s| ops.tadpole_field(s))?;
                psi = out.state;
                field = out.field;
                (out.iterations, out.residuals)
            }
        };
        let drift = (psi.norm() - 1.0).abs();
        if drift > crate::propagate::MAX_NORM_DRIFT {
            return Err(Error::NormDrift { drift });
        }
        series.step_iterations.push(iterations);
        if step % cfg.record_every == 0 {
            let rec = record(step, &psi, &field, iterations, trace)?;
            on_record(&rec)?;
            series.records.push(rec);
        }
    }
    series.final_state = Some(psi);
    Ok(series)
}
