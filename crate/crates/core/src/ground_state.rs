//! Self-consistent interacting vacuum: the ground state of `H(u)` whose
//! measured tadpole field reproduces `u`.

use crate::eigen::{lowest_eigenpair_from, EigenOptions};
use crate::error::{Error, Result};
use crate::model::{Model, ModelOperators};
use crate::pauli::StateVector;
use crate::tadpole::TadpoleField;

/// Consecutive non-decreasing residuals treated as a stalled iteration.
pub const STALL_WINDOW: usize = 5;

#[derive(Clone, Debug)]
pub struct VacuumOptions {
    /// Max-norm change of the tadpole field that ends the iteration.
    pub tol: f64,
    pub max_iter: usize,
    /// Mixing `theta` in `u <- theta * u_measured + (1 - theta) * u`.
    pub damping: f64,
    pub eigen: EigenOptions,
}

impl Default for VacuumOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 200,
            damping: 1.0,
            eigen: EigenOptions::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct VacuumResult {
    pub state: StateVector,
    /// Field used to build the Hamiltonian whose ground state is `state`.
    pub tadpole: TadpoleField,
    pub total_energy: f64,
    /// `total_energy / plaquette count`, counting both electric and magnetic
    /// parts including the constant magnetic offsets.
    pub energy_density: f64,
    pub iterations: usize,
    pub final_residual: f64,
    pub residual_history: Vec<f64>,
    pub gap_estimate: Option<f64>,
    pub near_degenerate: bool,
}

pub fn self_consistent_vacuum(model: &Model, opts: &VacuumOptions) -> Result<VacuumResult> {
    let ops = ModelOperators::new(*model)?;
    self_consistent_vacuum_with(&ops, opts)
}

pub fn self_consistent_vacuum_with(ops: &ModelOperators, opts: &VacuumOptions) -> Result<VacuumResult> {
    if !(opts.tol > 0.0) {
        return Err(Error::Invalid(format!("tolerance must be positive, got {}", opts.tol)));
    }
    if !(opts.damping > 0.0 && opts.damping <= 1.0) {
        return Err(Error::Invalid(format!(
            "damping must lie in (0, 1], got {}",
            opts.damping
        )));
    }
    let model = ops.model();
    let mut field = model.unit_field();
    let mut start: Option<StateVector> = None;
    let mut history = Vec::new();
    let mut stalled = 0;

    for iteration in 1..=opts.max_iter {
        let h = ops.hamiltonian(&field)?;
        let pair = lowest_eigenpair_from(&h, &opts.eigen, start.as_ref())?;
        let measured = ops.tadpole_field(&pair.state)?;
        let residual = measured.max_abs_diff(&field);
        if let Some(&prev) = history.last() {
            stalled = if residual >= prev { stalled + 1 } else { 0 };
        }
        history.push(residual);

        if residual <= opts.tol {
            let n = model.n_plaquettes() as f64;
            return Ok(VacuumResult {
                state: pair.state,
                tadpole: field,
                total_energy: pair.energy,
                energy_density: pair.energy / n,
                iterations: iteration,
                final_residual: residual,
                residual_history: history,
                gap_estimate: pair.gap_estimate,
                near_degenerate: pair.near_degenerate,
            });
        }
        if stalled >= STALL_WINDOW {
            return Err(Error::Oscillation { history });
        }
        field = field.mix(&measured, opts.damping);
        start = Some(pair.state);
    }
    Err(Error::NonConvergence {
        what: "self-consistent vacuum",
        iterations: opts.max_iter,
        best_residual: history.iter().copied().fold(f64::INFINITY, f64::min),
        history,
    })
}
