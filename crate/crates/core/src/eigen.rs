//! Lowest eigenpair of a Hermitian operator: dense diagonalization for small
//! registers, restarted Lanczos with full reorthogonalization otherwise.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, pseudo_random_vector, reorthogonalize, tridiagonal_eigen};
use crate::pauli::{inner, norm_sqr, Operator, StateVector};

/// Gaps below this raise the near-degeneracy flag.
pub const NEAR_DEGENERATE_GAP: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct EigenOptions {
    /// Registers up to this size are diagonalized densely.
    pub dense_max_qubits: usize,
    /// Lanczos vectors kept per restart cycle.
    pub krylov_dim: usize,
    /// Convergence: `||H psi - E psi|| <= tol * max(1, |spectral scale|)`.
    pub tol: f64,
    pub max_restarts: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            dense_max_qubits: 8,
            krylov_dim: 30,
            tol: 1e-12,
            max_restarts: 500,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Eigenpair {
    pub energy: f64,
    pub state: StateVector,
    pub residual: f64,
    /// `E1 - E0` (exact on the dense path, a Ritz estimate otherwise).
    pub gap_estimate: Option<f64>,
    pub near_degenerate: bool,
    pub matvecs: usize,
}

pub fn lowest_eigenpair(op: &impl Operator, opts: &EigenOptions) -> Result<Eigenpair> {
    lowest_eigenpair_from(op, opts, None)
}

/// As [`lowest_eigenpair`], seeding Lanczos with `start` when given.
pub fn lowest_eigenpair_from(
    op: &impl Operator,
    opts: &EigenOptions,
    start: Option<&StateVector>,
) -> Result<Eigenpair> {
    let n = op.n_qubits();
    if let Some(s) = start {
        if s.n_qubits() != n {
            return Err(Error::Dimension {
                expected: n,
                got: s.n_qubits(),
            });
        }
    }
    let mut pair = if n <= opts.dense_max_qubits {
        dense_lowest(op)?
    } else {
        lanczos_lowest(op, opts, start)?
    };
    fix_phase(pair.state.amplitudes_mut());
    Ok(pair)
}

/// Rotates the global phase so the largest-magnitude amplitude is real positive.
pub fn fix_phase(amps: &mut [C64]) {
    let mut best = 0;
    let mut best_mag = -1.0;
    for (k, a) in amps.iter().enumerate() {
        // ties within rounding go to the lowest index
        let m = a.norm_sqr();
        if m > best_mag * (1.0 + 1e-12) {
            best = k;
            best_mag = m;
        }
    }
    if best_mag > 0.0 {
        let phase = amps[best].conj() / amps[best].norm();
        amps.iter_mut().for_each(|a| *a *= phase);
    }
}

fn dense_lowest(op: &impl Operator) -> Result<Eigenpair> {
    let m = op.dense_matrix()?;
    let (vals, vecs) = hermitian_eigen(m);
    let state: Vec<C64> = vecs.column(0).iter().copied().collect();
    let state = StateVector::from_amplitudes(op.n_qubits(), state)?.normalized()?;
    let gap = (vals.len() > 1).then(|| vals[1] - vals[0]);
    let residual = residual_norm(op, state.amplitudes(), vals[0]);
    Ok(Eigenpair {
        energy: vals[0],
        state,
        residual,
        gap_estimate: gap,
        near_degenerate: gap.is_some_and(|g| g < NEAR_DEGENERATE_GAP),
        matvecs: 0,
    })
}

fn residual_norm(op: &impl Operator, v: &[C64], energy: f64) -> f64 {
    let mut hv = vec![C64::default(); v.len()];
    op.apply_into(v, &mut hv);
    hv.iter_mut().zip(v).for_each(|(h, x)| *h -= x * energy);
    norm_sqr(&hv).sqrt()
}

fn lanczos_lowest(
    op: &impl Operator,
    opts: &EigenOptions,
    start: Option<&StateVector>,
) -> Result<Eigenpair> {
    let dim = op.dim();
    let m = opts.krylov_dim.clamp(2, dim);
    let mut v: Vec<C64> = match start {
        Some(s) => s.amplitudes().to_vec(),
        None => pseudo_random_vector(dim),
    };
    let nrm = norm_sqr(&v).sqrt();
    if !(nrm > 0.0) {
        return Err(Error::Domain("zero start vector".into()));
    }
    crate::linalg::scale(&mut v, 1.0 / nrm);

    let mut matvecs = 0;
    let mut history = Vec::new();
    let mut best = f64::INFINITY;
    let mut scale: f64 = 1.0;

    for _cycle in 0..opts.max_restarts {
        let mut basis: Vec<Vec<C64>> = vec![v];
        let mut alpha = Vec::with_capacity(m);
        let mut beta = Vec::with_capacity(m);
        let mut w = vec![C64::default(); dim];
        loop {
            let j = basis.len() - 1;
            op.apply_into(&basis[j], &mut w);
            matvecs += 1;
            let a = inner(&basis[j], &w).re;
            alpha.push(a);
            reorthogonalize(&mut w, &basis);
            let b = norm_sqr(&w).sqrt();
            if basis.len() == m || b <= 1e-14 * scale {
                break;
            }
            beta.push(b);
            let mut next = std::mem::replace(&mut w, vec![C64::default(); dim]);
            crate::linalg::scale(&mut next, 1.0 / b);
            basis.push(next);
        }

        let (theta, s) = tridiagonal_eigen(&alpha, &beta);
        scale = scale.max(theta[0].abs()).max(theta[theta.len() - 1].abs());

        let mut y = vec![C64::default(); dim];
        for (k, q) in basis.iter().enumerate() {
            let c = s[(k, 0)];
            y.iter_mut().zip(q).for_each(|(a, b)| *a += b * c);
        }
        drop(basis);
        let ny = norm_sqr(&y).sqrt();
        crate::linalg::scale(&mut y, 1.0 / ny);

        let residual = residual_norm(op, &y, theta[0]);
        matvecs += 1;
        history.push(residual);
        best = best.min(residual);
        if residual <= opts.tol * scale {
            let gap = (theta.len() > 1).then(|| theta[1] - theta[0]);
            let state = StateVector::from_amplitudes(op.n_qubits(), y)?;
            return Ok(Eigenpair {
                energy: theta[0],
                state,
                residual,
                gap_estimate: gap,
                near_degenerate: gap.is_some_and(|g| g < NEAR_DEGENERATE_GAP),
                matvecs,
            });
        }
        v = y;
    }
    Err(Error::NonConvergence {
        what: "Lanczos eigensolver",
        iterations: opts.max_restarts,
        best_residual: best,
        history,
    })
}
