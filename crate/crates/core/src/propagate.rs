//! Single-step propagator `exp(-i H dt) |psi>` for a fixed Hermitian `H`.
//!
//! Small registers use the dense spectral decomposition. Larger ones use a
//! Lanczos (Hermitian Arnoldi) Krylov approximation whose subspace grows
//! until the a-posteriori error estimate drops below the tolerance; when the
//! subspace limit is hit the step is halved recursively.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, reorthogonalize, tridiagonal_eigen};
use crate::pauli::{inner, norm_sqr, Operator, StateVector};

/// Norm drift tolerated (and then removed) after a propagation step.
pub const MAX_NORM_DRIFT: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct PropagatorOptions {
    /// Target error of the propagated vector (2-norm).
    pub tol: f64,
    /// Largest Krylov subspace before sub-stepping kicks in.
    pub krylov_dim: usize,
    /// Registers up to this size use the dense exponential.
    pub dense_max_qubits: usize,
    /// Maximum number of recursive dt halvings.
    pub max_halvings: u32,
}

impl Default for PropagatorOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            krylov_dim: 30,
            dense_max_qubits: 6,
            max_halvings: 10,
        }
    }
}

pub fn step_propagate(
    op: &impl Operator,
    psi: &StateVector,
    dt: f64,
    opts: &PropagatorOptions,
) -> Result<StateVector> {
    if op.n_qubits() != psi.n_qubits() {
        return Err(Error::Dimension {
            expected: op.n_qubits(),
            got: psi.n_qubits(),
        });
    }
    if !dt.is_finite() {
        return Err(Error::Invalid(format!("time step must be finite, got {dt}")));
    }
    if dt == 0.0 {
        return Ok(psi.clone());
    }
    let amps = if op.n_qubits() <= opts.dense_max_qubits {
        dense_expm(op, psi.amplitudes(), dt)?
    } else {
        krylov_substepped(op, psi.amplitudes().to_vec(), dt, opts, 0)?
    };
    let mut out = StateVector::from_amplitudes(psi.n_qubits(), amps)?;
    let drift = (out.norm() - psi.norm()).abs();
    if drift > MAX_NORM_DRIFT {
        return Err(Error::NormDrift { drift });
    }
    if psi.norm() > 0.0 {
        let s = psi.norm() / out.norm();
        out.amplitudes_mut().iter_mut().for_each(|a| *a *= s);
    }
    Ok(out)
}

fn dense_expm(op: &impl Operator, v: &[C64], dt: f64) -> Result<Vec<C64>> {
    let (vals, vecs) = hermitian_eigen(op.dense_matrix()?);
    let dim = v.len();
    let mut out = vec![C64::default(); dim];
    for (k, lambda) in vals.iter().enumerate() {
        let col = vecs.column(k);
        let c: C64 = col.iter().zip(v).map(|(a, b)| a.conj() * b).sum();
        let c = c * C64::from_polar(1.0, -lambda * dt);
        out.iter_mut().zip(col.iter()).for_each(|(o, a)| *o += a * c);
    }
    Ok(out)
}

fn krylov_substepped(
    op: &impl Operator,
    v: Vec<C64>,
    dt: f64,
    opts: &PropagatorOptions,
    level: u32,
) -> Result<Vec<C64>> {
    match krylov_expm(op, &v, dt, opts) {
        Ok(out) => Ok(out),
        Err(err_estimate) => {
            if level >= opts.max_halvings {
                return Err(Error::NonConvergence {
                    what: "Krylov propagator",
                    iterations: opts.krylov_dim,
                    best_residual: err_estimate,
                    history: vec![err_estimate],
                });
            }
            let half = krylov_substepped(op, v, dt / 2.0, opts, level + 1)?;
            krylov_substepped(op, half, dt / 2.0, opts, level + 1)
        }
    }
}

/// `Err` carries the last error estimate when the subspace limit is reached.
fn krylov_expm(
    op: &impl Operator,
    v: &[C64],
    dt: f64,
    opts: &PropagatorOptions,
) -> std::result::Result<Vec<C64>, f64> {
    let dim = v.len();
    let beta0 = norm_sqr(v).sqrt();
    if beta0 == 0.0 {
        return Ok(v.to_vec());
    }
    let m = opts.krylov_dim.clamp(1, dim);
    let mut q0 = v.to_vec();
    crate::linalg::scale(&mut q0, 1.0 / beta0);
    let mut basis = vec![q0];
    let mut alpha = Vec::with_capacity(m);
    let mut beta = Vec::with_capacity(m);
    let mut w = vec![C64::default(); dim];

    loop {
        let j = basis.len() - 1;
        op.apply_into(&basis[j], &mut w);
        alpha.push(inner(&basis[j], &w).re);
        reorthogonalize(&mut w, &basis);
        let b = norm_sqr(&w).sqrt();

        let coeffs = small_expm_e1(&alpha, &beta, dt);
        let estimate = beta0 * b * coeffs[j].norm();
        let breakdown = b <= 1e-14 * alpha.iter().fold(1.0f64, |s, a| s.max(a.abs()));
        if estimate <= opts.tol || breakdown {
            let mut out = vec![C64::default(); dim];
            for (q, c) in basis.iter().zip(&coeffs) {
                let c = c * beta0;
                out.iter_mut().zip(q).for_each(|(o, x)| *o += x * c);
            }
            return Ok(out);
        }
        if basis.len() == m {
            return Err(estimate);
        }
        beta.push(b);
        let mut next = std::mem::replace(&mut w, vec![C64::default(); dim]);
        crate::linalg::scale(&mut next, 1.0 / b);
        basis.push(next);
    }
}

/// `exp(-i T dt) e_1` for the Lanczos tridiagonal `T`.
fn small_expm_e1(alpha: &[f64], beta: &[f64], dt: f64) -> Vec<C64> {
    let (vals, vecs) = tridiagonal_eigen(alpha, &beta[..alpha.len() - 1]);
    let k = alpha.len();
    (0..k)
        .map(|r| {
            (0..k)
                .map(|c| C64::from_polar(vecs[(r, c)] * vecs[(0, c)], -vals[c] * dt))
                .sum()
        })
        .collect()
}
