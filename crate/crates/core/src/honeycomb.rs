//! The `j_max = 1/2` SU(2) honeycomb lattice in 2+1D.
//!
//! Cell `(i, j)` with `0 <= i < Lx`, `0 <= j < Ly` maps onto qubit
//! `i + j * Lx`. Cells outside the active region are frozen: their spins sit
//! in `|0>`, so a `Z` on them is `+1`, `L0` is `1` and `L1` is `0`.
//!
//! For rendering, `(i, j)` are axial coordinates: cell centres sit at
//! `x = i + j / 2`, `y = j * sqrt(3) / 2` in units of the centre spacing.
//! The spin Hamiltonian does not depend on that choice.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::pauli::{projector, Level, PauliSum, StateVector};
use crate::tadpole::{TadpoleField, TadpoleKind};

/// Axial offsets of the six ring neighbours, in cyclic order.
pub const RING_OFFSETS: [(isize, isize); 6] = [(1, -1), (1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1)];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HoneycombSpec {
    lx: usize,
    ly: usize,
    coupling: f64,
}

impl HoneycombSpec {
    pub fn new(lx: usize, ly: usize, coupling: f64) -> Result<Self> {
        if lx == 0 || ly == 0 {
            return Err(Error::Invalid(format!(
                "honeycomb needs at least one cell per direction, got {lx}x{ly}"
            )));
        }
        if lx * ly > crate::pauli::MAX_STATE_QUBITS {
            return Err(Error::TooLarge {
                what: "honeycomb lattice",
                n_qubits: lx * ly,
                limit: crate::pauli::MAX_STATE_QUBITS,
            });
        }
        if !(coupling > 0.0) || !coupling.is_finite() {
            return Err(Error::Invalid(format!(
                "coupling must be positive, got {coupling}"
            )));
        }
        Ok(Self { lx, ly, coupling })
    }

    pub fn lx(&self) -> usize {
        self.lx
    }

    pub fn ly(&self) -> usize {
        self.ly
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn n_cells(&self) -> usize {
        self.lx * self.ly
    }

    /// Qubit of an in-grid cell, `None` for frozen coordinates.
    pub fn qubit(&self, i: isize, j: isize) -> Option<usize> {
        if i >= 0 && j >= 0 && (i as usize) < self.lx && (j as usize) < self.ly {
            Some(i as usize + j as usize * self.lx)
        } else {
            None
        }
    }

    pub fn cell(&self, qubit: usize) -> (usize, usize) {
        (qubit % self.lx, qubit / self.lx)
    }

    fn check(&self, i: usize, j: usize) -> Result<usize> {
        if i >= self.lx {
            return Err(Error::Index {
                index: i,
                limit: self.lx,
            });
        }
        if j >= self.ly {
            return Err(Error::Index {
                index: j,
                limit: self.ly,
            });
        }
        Ok(i + j * self.lx)
    }

    fn n(&self) -> usize {
        self.n_cells()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Neighbor {
    Interior { i: usize, j: usize, qubit: usize },
    Frozen { i: isize, j: isize },
}

impl Neighbor {
    pub fn qubit(&self) -> Option<usize> {
        match self {
            Neighbor::Interior { qubit, .. } => Some(*qubit),
            Neighbor::Frozen { .. } => None,
        }
    }

    pub fn is_frozen(&self) -> bool {
        matches!(self, Neighbor::Frozen { .. })
    }
}

/// The six cells around a plaquette, in cyclic order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NeighborRing(pub [Neighbor; 6]);

impl NeighborRing {
    pub fn iter(&self) -> impl Iterator<Item = &Neighbor> {
        self.0.iter()
    }

    /// Cyclically adjacent pairs `(K, K+1)`.
    pub fn pairs(&self) -> impl Iterator<Item = (&Neighbor, &Neighbor)> {
        (0..6).map(move |k| (&self.0[k], &self.0[(k + 1) % 6]))
    }
}

pub fn neighbors(spec: &HoneycombSpec, i: usize, j: usize) -> Result<NeighborRing> {
    spec.check(i, j)?;
    let ring = RING_OFFSETS.map(|(di, dj)| {
        let (ni, nj) = (i as isize + di, j as isize + dj);
        match spec.qubit(ni, nj) {
            Some(qubit) => Neighbor::Interior {
                i: ni as usize,
                j: nj as usize,
                qubit,
            },
            None => Neighbor::Frozen { i: ni, j: nj },
        }
    });
    Ok(NeighborRing(ring))
}

fn z_or_one(spec: &HoneycombSpec, site: &Neighbor) -> PauliSum {
    match site.qubit() {
        Some(q) => PauliSum::z(spec.n(), q).expect("in-grid qubit"),
        None => PauliSum::identity(spec.n()).expect("valid register"),
    }
}

fn lambda(spec: &HoneycombSpec, site: Option<usize>, which: Level) -> PauliSum {
    match (site, which) {
        (Some(q), _) => projector(q, which, spec.n()).expect("in-grid qubit"),
        (None, Level::Zero) => PauliSum::identity(spec.n()).expect("valid register"),
        (None, Level::One) => PauliSum::zero(spec.n()).expect("valid register"),
    }
}

/// `X_(i,j) prod_K [(1/2 - 1/(2 sqrt2)) Z_K Z_{K+1} + 1/2 + 1/(2 sqrt2)]`.
pub fn hex_plaquette_op(spec: &HoneycombSpec, i: usize, j: usize) -> Result<PauliSum> {
    let q = spec.check(i, j)?;
    let ring = neighbors(spec, i, j)?;
    let s = 0.5 / std::f64::consts::SQRT_2;
    let n = spec.n();
    let mut out = PauliSum::x(n, q)?;
    for (a, b) in ring.pairs() {
        let zz = z_or_one(spec, a).multiply(&z_or_one(spec, b))?;
        let factor = zz
            .scale_real(0.5 - s)
            .add(&PauliSum::scalar(n, C64::new(0.5 + s, 0.0))?)?;
        out = out.multiply(&factor)?;
    }
    Ok(out)
}

/// Magnetic prefactor `2 / (3 sqrt3 g^2)`.
pub fn magnetic_prefactor(spec: &HoneycombSpec) -> f64 {
    2.0 / (3.0 * 3f64.sqrt() * spec.coupling * spec.coupling)
}

/// `2/(3 sqrt3 g^2) sum_(i,j) [4 - (hex + hex^dagger) / u^6_(i,j)]`.
pub fn hex_magnetic_hamiltonian(spec: &HoneycombSpec, field: &TadpoleField) -> Result<PauliSum> {
    if field.kind() != TadpoleKind::Honeycomb || field.len() != spec.n() {
        return Err(Error::Invalid(format!(
            "expected {} u^6 entries, got {} {:?} entries",
            spec.n(),
            field.len(),
            field.kind()
        )));
    }
    let plaquettes = (0..spec.n())
        .map(|q| {
            let (i, j) = spec.cell(q);
            hex_plaquette_op(spec, i, j)
        })
        .collect::<Result<Vec<_>>>()?;
    crate::chain::magnetic_from(&plaquettes, magnetic_prefactor(spec), field)
}

/// `3 sqrt3 g^2 / 4 sum L1_(i,j) (3 - L1_(i+1,j-1) - L1_(i+1,j) - L1_(i,j+1))`.
pub fn hex_electric_hamiltonian(spec: &HoneycombSpec) -> PauliSum {
    let n = spec.n();
    let g2 = spec.coupling * spec.coupling;
    let mut out = PauliSum::zero(n).expect("valid register");
    for q in 0..n {
        let (i, j) = spec.cell(q);
        let (i, j) = (i as isize, j as isize);
        let mut bracket = PauliSum::scalar(n, C64::new(3.0, 0.0)).expect("valid register");
        for (di, dj) in [(1, -1), (1, 0), (0, 1)] {
            bracket = bracket
                .sub(&lambda(spec, spec.qubit(i + di, j + dj), Level::One))
                .expect("same register");
        }
        let term = lambda(spec, Some(q), Level::One)
            .multiply(&bracket)
            .expect("same register");
        out = out.add(&term).expect("same register");
    }
    out.scale_real(3.0 * 3f64.sqrt() * g2 / 4.0)
}

/// `3 sqrt3 g^2 / 8 [L1_(i,j) sum_K L0_K + L0_(i,j) sum_K L1_K]`.
pub fn hex_electric_energy_op(spec: &HoneycombSpec, i: usize, j: usize) -> Result<PauliSum> {
    let q = spec.check(i, j)?;
    let ring = neighbors(spec, i, j)?;
    let n = spec.n();
    let mut sum0 = PauliSum::zero(n)?;
    let mut sum1 = PauliSum::zero(n)?;
    for k in ring.iter() {
        sum0 = sum0.add(&lambda(spec, k.qubit(), Level::Zero))?;
        sum1 = sum1.add(&lambda(spec, k.qubit(), Level::One))?;
    }
    let own1 = lambda(spec, Some(q), Level::One);
    let own0 = lambda(spec, Some(q), Level::Zero);
    let g2 = spec.coupling * spec.coupling;
    Ok(own1
        .multiply(&sum0)?
        .add(&own0.multiply(&sum1)?)?
        .scale_real(3.0 * 3f64.sqrt() * g2 / 8.0))
}

pub fn hamiltonian(spec: &HoneycombSpec, field: &TadpoleField) -> Result<PauliSum> {
    hex_electric_hamiltonian(spec).add(&hex_magnetic_hamiltonian(spec, field)?)
}

/// `u^6 = 1 + <hex + hex^dagger> / 4` for cell `(i, j)`.
pub fn hex_tadpole_factor(psi: &StateVector, spec: &HoneycombSpec, i: usize, j: usize) -> Result<f64> {
    let op = hex_plaquette_op(spec, i, j)?;
    let plaq = crate::pauli::expectation_real(&op, psi)?;
    crate::tadpole::factor_from_expectation(2.0 * plaq, crate::chain::N_COLORS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::expectation_real;

    fn spec(lx: usize, ly: usize) -> HoneycombSpec {
        HoneycombSpec::new(lx, ly, 0.5).unwrap()
    }

    #[test]
    fn interior_cell_has_six_live_neighbours() {
        let ring = neighbors(&spec(7, 3), 3, 1).unwrap();
        assert!(ring.iter().all(|n| !n.is_frozen()));
        let coords: Vec<_> = ring
            .iter()
            .map(|n| match n {
                Neighbor::Interior { i, j, .. } => (*i, *j),
                Neighbor::Frozen { .. } => unreachable!(),
            })
            .collect();
        assert_eq!(coords, vec![(4, 0), (4, 1), (3, 2), (2, 2), (2, 1), (3, 0)]);
    }

    #[test]
    fn corner_cell_ring() {
        let ring = neighbors(&spec(7, 3), 0, 0).unwrap();
        let live: Vec<_> = ring.iter().filter_map(Neighbor::qubit).collect();
        assert_eq!(live, vec![1, 7]);
        let frozen: Vec<_> = ring
            .iter()
            .filter_map(|n| match n {
                Neighbor::Frozen { i, j } => Some((*i, *j)),
                _ => None,
            })
            .collect();
        assert_eq!(frozen, vec![(1, -1), (-1, 1), (-1, 0), (0, -1)]);
    }

    #[test]
    fn isolated_cell_is_fully_frozen() {
        let s = spec(1, 1);
        assert!(neighbors(&s, 0, 0).unwrap().iter().all(Neighbor::is_frozen));
        let p = hex_plaquette_op(&s, 0, 0).unwrap();
        assert_eq!(p, PauliSum::x(1, 0).unwrap());
        let zero = StateVector::basis(1, 0).unwrap();
        assert_eq!(expectation_real(&p, &zero).unwrap(), 0.0);
    }

    #[test]
    fn out_of_grid_cells_are_rejected() {
        let s = spec(2, 2);
        assert!(neighbors(&s, 2, 0).is_err());
        assert!(hex_plaquette_op(&s, 0, 2).is_err());
        assert!(hex_electric_energy_op(&s, 5, 5).is_err());
        assert!(HoneycombSpec::new(0, 2, 0.5).is_err());
    }

    #[test]
    fn hex_operators_are_hermitian() {
        let s = spec(3, 2);
        for q in 0..6 {
            let (i, j) = s.cell(q);
            assert!(hex_plaquette_op(&s, i, j).unwrap().is_hermitian(1e-15));
            assert!(hex_electric_energy_op(&s, i, j).unwrap().is_hermitian(1e-15));
        }
        assert!(hex_electric_hamiltonian(&s).is_hermitian(1e-15));
    }

    #[test]
    fn trivial_vacuum_magnetic_energy() {
        let s = spec(7, 3);
        let h = hex_magnetic_hamiltonian(&s, &TadpoleField::ones(TadpoleKind::Honeycomb, 21)).unwrap();
        // identity coefficient alone carries the all-|0> expectation
        let id = h.coefficient(crate::pauli::PauliString::IDENTITY).re;
        let expect = 2.0 / (3.0 * 3f64.sqrt() * 0.25) * 4.0 * 21.0;
        assert!((id - expect).abs() < 1e-11);
        assert!(h
            .terms()
            .all(|(p, _)| p.support() == 0 || p.x_mask() != 0));
    }

    #[test]
    fn psi1_electric_energies() {
        let s = spec(3, 2);
        let psi = StateVector::basis(6, 1).unwrap();
        let pre = 3.0 * 3f64.sqrt() * 0.25;
        let h = hex_electric_hamiltonian(&s);
        assert!((expectation_real(&h, &psi).unwrap() - pre / 4.0 * 3.0).abs() < 1e-14);
        let e00 = expectation_real(&hex_electric_energy_op(&s, 0, 0).unwrap(), &psi).unwrap();
        assert!((e00 - pre / 8.0 * 6.0).abs() < 1e-14);
        let e10 = expectation_real(&hex_electric_energy_op(&s, 1, 0).unwrap(), &psi).unwrap();
        assert!((e10 - pre / 8.0).abs() < 1e-14);
        let e20 = expectation_real(&hex_electric_energy_op(&s, 2, 0).unwrap(), &psi).unwrap();
        assert_eq!(e20, 0.0);
    }

    #[test]
    fn single_excited_cell() {
        let s = spec(1, 1);
        let one = StateVector::basis(1, 1).unwrap();
        let got = expectation_real(&hex_electric_hamiltonian(&s), &one).unwrap();
        assert!((got - 3.0 * 3f64.sqrt() * 0.25 / 4.0 * 3.0).abs() < 1e-14);
    }

    #[test]
    fn basis_states_have_unit_tadpole_factor() {
        let s = spec(2, 2);
        for b in 0..16 {
            let psi = StateVector::basis(4, b).unwrap();
            for q in 0..4 {
                let (i, j) = s.cell(q);
                assert_eq!(hex_tadpole_factor(&psi, &s, i, j).unwrap(), 1.0);
            }
        }
    }
}
