//! Static observables: electric-energy and tadpole profiles, bipartite
//! entanglement entropy and stabilizer Renyi entropies.
//!
//! All entropies are in bits.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{Model, ModelOperators};
use crate::pauli::{walsh_hadamard, StateVector};
use crate::tadpole::TadpoleField;

/// Largest register accepted by [`stabilizer_renyi`].
pub const MAX_SRE_QUBITS: usize = 12;

#[derive(Clone, Debug, PartialEq)]
pub struct EnergyProfile {
    /// Electric energy per plaquette, ordered by plaquette index.
    pub values: Vec<f64>,
    pub t: Option<f64>,
}

pub fn electric_energy_profile(psi: &StateVector, model: &Model) -> Result<EnergyProfile> {
    let ops = ModelOperators::new(*model)?;
    Ok(EnergyProfile {
        values: ops.energy_profile(psi)?,
        t: None,
    })
}

pub fn tadpole_profile(psi: &StateVector, model: &Model) -> Result<TadpoleField> {
    ModelOperators::new(*model)?.tadpole_field(psi)
}

/// Von Neumann entropy (bits) of the reduced state on `cut`.
pub fn bipartite_entropy(psi: &StateVector, cut: &[usize]) -> Result<f64> {
    let n = psi.n_qubits();
    let mut mask = 0usize;
    for &q in cut {
        if q >= n {
            return Err(Error::Index { index: q, limit: n });
        }
        mask |= 1 << q;
    }
    let k = mask.count_ones() as usize;
    if k == 0 || k == n {
        return Err(Error::Invalid(format!(
            "cut must be a nonempty proper subset of the {n} qubits"
        )));
    }
    let rest: Vec<usize> = (0..n).filter(|q| mask >> q & 1 == 0).collect();
    let inside: Vec<usize> = (0..n).filter(|q| mask >> q & 1 == 1).collect();
    let spread = |bits: &[usize], idx: usize| -> usize {
        bits.iter().enumerate().fold(0, |acc, (pos, &q)| acc | ((idx >> pos & 1) << q))
    };
    let rows = 1usize << k;
    let cols = 1usize << (n - k);
    let amps = psi.amplitudes();
    let m = DMatrix::<C64>::from_fn(rows, cols, |r, c| amps[spread(&inside, r) | spread(&rest, c)]);
    let svd = m.svd(false, false);
    let total: f64 = svd.singular_values.iter().map(|s| s * s).sum();
    Ok(svd
        .singular_values
        .iter()
        .map(|s| s * s / total)
        .filter(|p| *p > 1e-300)
        .map(|p| -p * p.log2())
        .sum())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenyiIndex {
    One,
    Two,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StabilizerEntropies {
    pub m1: f64,
    pub m2: f64,
    pub n_qubits: usize,
}

impl StabilizerEntropies {
    pub fn m1_density(&self) -> f64 {
        self.m1 / self.n_qubits as f64
    }

    pub fn m2_density(&self) -> f64 {
        self.m2 / self.n_qubits as f64
    }

    pub fn get(&self, alpha: RenyiIndex) -> f64 {
        match alpha {
            RenyiIndex::One => self.m1,
            RenyiIndex::Two => self.m2,
        }
    }
}

/// `M_alpha` (bits) together with its per-qubit density.
pub fn stabilizer_renyi(psi: &StateVector, alpha: RenyiIndex) -> Result<(f64, f64)> {
    let s = stabilizer_entropies(psi)?;
    let v = s.get(alpha);
    Ok((v, v / s.n_qubits as f64))
}

/// Both stabilizer Renyi entropies from one sweep over all `4^n` Pauli
/// strings, with `Xi_P = <psi|P|psi>^2 / 2^n`,
/// `M_1 = -sum Xi log2 Xi - n` and `M_2 = -log2 sum Xi^2 - n`.
///
/// For each X mask the expectations of all Z masks come out of one
/// Walsh-Hadamard transform of `conj(psi[b ^ x]) psi[b]`.
pub fn stabilizer_entropies(psi: &StateVector) -> Result<StabilizerEntropies> {
    let n = psi.n_qubits();
    if n > MAX_SRE_QUBITS {
        return Err(Error::TooLarge {
            what: "stabilizer Renyi entropy (cost 4^n n)",
            n_qubits: n,
            limit: MAX_SRE_QUBITS,
        });
    }
    let dim = psi.dim();
    let amps = psi.amplitudes();
    let inv_dim = 1.0 / dim as f64;
    // (sum Xi, sum -Xi log2 Xi, sum Xi^2) per X mask, summed in mask order
    let partials: Vec<(f64, f64, f64)> = (0..dim)
        .into_par_iter()
        .map(|x| {
            let mut f: Vec<C64> = (0..dim).map(|b| amps[b ^ x].conj() * amps[b]).collect();
            walsh_hadamard(&mut f);
            let mut acc = (0.0, 0.0, 0.0);
            for v in &f {
                let xi = v.norm_sqr() * inv_dim;
                if xi > 0.0 {
                    acc.0 += xi;
                    acc.1 -= xi * xi.log2();
                    acc.2 += xi * xi;
                }
            }
            acc
        })
        .collect();
    let (mut sum, mut shannon, mut purity) = (0.0, 0.0, 0.0);
    for (a, b, c) in partials {
        sum += a;
        shannon += b;
        purity += c;
    }
    let norm = psi.norm();
    if (sum - norm.powi(4)).abs() > 1e-10 {
        return Err(Error::Consistency(format!(
            "Pauli distribution sums to {sum}, expected 1"
        )));
    }
    Ok(StabilizerEntropies {
        m1: shannon - n as f64,
        m2: -purity.log2() - n as f64,
        n_qubits: n,
    })
}
