//! The `j_max = 1/2` SU(2) plaquette chain with periodic boundaries.
//!
//! Each plaquette maps onto one qubit (its upper rail link); qubit `i` is
//! plaquette `i`. Rung links are fixed by adjacent rail qubits, so they
//! only enter through projector products on neighbouring sites.
//!
//! The per-plaquette electric energy counts each shared rung in both
//! adjacent plaquettes, so summing it over the chain does not reproduce
//! [`electric_hamiltonian`].

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::pauli::{projector, Level, PauliSum, StateVector};
use crate::tadpole::{TadpoleField, TadpoleKind};

/// Number of colours; fixed for SU(2).
pub const N_COLORS: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChainSpec {
    length: usize,
    coupling: f64,
}

impl ChainSpec {
    pub fn new(length: usize, coupling: f64) -> Result<Self> {
        if length < 3 {
            return Err(Error::Invalid(format!(
                "chain length must be at least 3, got {length}"
            )));
        }
        if length > crate::pauli::MAX_STATE_QUBITS {
            return Err(Error::TooLarge {
                what: "plaquette chain",
                n_qubits: length,
                limit: crate::pauli::MAX_STATE_QUBITS,
            });
        }
        if !(coupling > 0.0) || !coupling.is_finite() {
            return Err(Error::Invalid(format!(
                "coupling must be positive, got {coupling}"
            )));
        }
        Ok(Self { length, coupling })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    fn check(&self, i: usize) -> Result<()> {
        if i >= self.length {
            return Err(Error::Index {
                index: i,
                limit: self.length,
            });
        }
        Ok(())
    }

    fn left(&self, i: usize) -> usize {
        (i + self.length - 1) % self.length
    }

    fn right(&self, i: usize) -> usize {
        (i + 1) % self.length
    }

    fn lambda(&self, site: usize, which: Level) -> PauliSum {
        projector(site % self.length, which, self.length).expect("site reduced mod L")
    }

    fn mul(a: &PauliSum, b: &PauliSum) -> PauliSum {
        a.multiply(b).expect("same register")
    }

    fn add(a: &PauliSum, b: &PauliSum) -> PauliSum {
        a.add(b).expect("same register")
    }

    /// Controlled plaquette operator with coefficients `(c00, c10, c01, c11)`
    /// for control levels of the (left, right) neighbours.
    fn controlled_x(&self, i: usize, coeffs: [f64; 4]) -> PauliSum {
        let x = PauliSum::x(self.length, i).expect("checked index");
        let (l, r) = (self.left(i), self.right(i));
        let combos = [
            (Level::Zero, Level::Zero),
            (Level::One, Level::Zero),
            (Level::Zero, Level::One),
            (Level::One, Level::One),
        ];
        let mut out = PauliSum::zero(self.length).expect("valid register");
        for ((cl, cr), w) in combos.into_iter().zip(coeffs) {
            let term = Self::mul(
                &Self::mul(&self.lambda(l, cl), &x),
                &self.lambda(r, cr),
            );
            out = Self::add(&out, &term.scale_real(w));
        }
        out
    }
}

/// `L0 X L0 + 1/2 L1 X L0 + 1/2 L0 X L1 + 1/4 L1 X L1` on plaquette `i`,
/// controlled by its two neighbours. Hermitian.
pub fn plaquette_op(spec: &ChainSpec, i: usize) -> Result<PauliSum> {
    spec.check(i)?;
    Ok(spec.controlled_x(i, [1.0, 0.5, 0.5, 0.25]))
}

/// Plaquette operator in the alternating-sign convention; unitarily
/// equivalent to [`plaquette_op`] via [`basis_change_unitary`] for even `L`.
pub fn alt_plaquette_op(spec: &ChainSpec, i: usize) -> Result<PauliSum> {
    require_even(spec)?;
    spec.check(i)?;
    Ok(spec.controlled_x(i, [1.0, -0.5, -0.5, 0.25]))
}

fn require_even(spec: &ChainSpec) -> Result<()> {
    if spec.length % 2 != 0 {
        return Err(Error::Invalid(format!(
            "alternating-sign convention needs an even chain length, got {}",
            spec.length
        )));
    }
    Ok(())
}

/// `U = prod_k exp(-i pi/4 (-1)^k Z_k Z_{k+1})` kept as its commuting factors.
#[derive(Clone, Debug)]
pub struct BasisChange {
    factors: Vec<PauliSum>,
}

impl BasisChange {
    pub fn factors(&self) -> &[PauliSum] {
        &self.factors
    }

    /// The full product as a single Pauli sum (at most `2^(L-1)` terms).
    pub fn to_pauli_sum(&self) -> Result<PauliSum> {
        let n = self.factors[0].n_qubits();
        self.factors
            .iter()
            .try_fold(PauliSum::identity(n)?, |acc, f| acc.multiply(f))
    }
}

pub fn basis_change_unitary(spec: &ChainSpec) -> Result<BasisChange> {
    require_even(spec)?;
    let l = spec.length;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let factors = (0..l)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let zz = PauliSum::z(l, k)?.multiply(&PauliSum::z(l, (k + 1) % l)?)?;
            // exp(-i theta A) = cos(theta) I - i sin(theta) A for A^2 = I
            PauliSum::scalar(l, C64::new(h, 0.0))?.add(&zz.scale(C64::new(0.0, -h * sign)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BasisChange { factors })
}

fn check_field(field: &TadpoleField, expected: usize, kind: TadpoleKind) -> Result<()> {
    if field.kind() != kind {
        return Err(Error::Invalid(format!(
            "tadpole field holds {:?} values, expected {:?}",
            field.kind(),
            kind
        )));
    }
    if field.len() != expected {
        return Err(Error::Invalid(format!(
            "tadpole field has {} entries, expected {expected}",
            field.len()
        )));
    }
    if let Some(bad) = field.values().iter().find(|v| !(**v > 0.0)) {
        return Err(Error::Domain(format!(
            "tadpole factors must be positive, got {bad}"
        )));
    }
    Ok(())
}

pub(crate) fn magnetic_from(
    plaquettes: &[PauliSum],
    prefactor: f64,
    field: &TadpoleField,
) -> Result<PauliSum> {
    let n = plaquettes[0].n_qubits();
    let mut out = PauliSum::scalar(n, C64::new(4.0 * prefactor * plaquettes.len() as f64, 0.0))?;
    for (p, u) in plaquettes.iter().zip(field.values()) {
        // box + box^dagger = 2 box for these Hermitian plaquettes
        out = out.add(&p.scale_real(-2.0 * prefactor / u))?;
    }
    Ok(out)
}

/// Magnetic prefactor `1 / (2 g^2)` in lattice units.
pub fn magnetic_prefactor(spec: &ChainSpec) -> f64 {
    1.0 / (2.0 * spec.coupling * spec.coupling)
}

/// `1/(2g^2) sum_i [4 - (box_i + box_i^dagger) / u_i^4]`.
pub fn magnetic_hamiltonian(spec: &ChainSpec, field: &TadpoleField) -> Result<PauliSum> {
    check_field(field, spec.length, TadpoleKind::Chain)?;
    let plaquettes = (0..spec.length)
        .map(|i| plaquette_op(spec, i))
        .collect::<Result<Vec<_>>>()?;
    magnetic_from(&plaquettes, magnetic_prefactor(spec), field)
}

fn electric_prefactor(spec: &ChainSpec) -> f64 {
    3.0 * spec.coupling * spec.coupling / 8.0
}

/// `2 L1_i + L1_i L0_{i+1} + L0_i L1_{i+1}`: link `i` plus its right rung.
fn link_and_rung(spec: &ChainSpec, i: usize) -> PauliSum {
    let (l1, l0) = (spec.lambda(i, Level::One), spec.lambda(i, Level::Zero));
    let r = spec.right(i);
    let (r1, r0) = (spec.lambda(r, Level::One), spec.lambda(r, Level::Zero));
    let rung = ChainSpec::add(&ChainSpec::mul(&l1, &r0), &ChainSpec::mul(&l0, &r1));
    ChainSpec::add(&l1.scale_real(2.0), &rung)
}

/// `3g^2/8 sum_i [2 L1_i + L1_i L0_{i+1} + L0_i L1_{i+1}]`.
pub fn electric_hamiltonian(spec: &ChainSpec) -> PauliSum {
    let mut out = PauliSum::zero(spec.length).expect("valid register");
    for i in 0..spec.length {
        out = ChainSpec::add(&out, &link_and_rung(spec, i));
    }
    out.scale_real(electric_prefactor(spec))
}

/// Electric energy attributed to plaquette `i`: its own link and both rungs.
pub fn plaquette_electric_energy_op(spec: &ChainSpec, i: usize) -> Result<PauliSum> {
    spec.check(i)?;
    let l = spec.left(i);
    let left_rung = ChainSpec::add(
        &ChainSpec::mul(&spec.lambda(l, Level::One), &spec.lambda(i, Level::Zero)),
        &ChainSpec::mul(&spec.lambda(l, Level::Zero), &spec.lambda(i, Level::One)),
    );
    Ok(ChainSpec::add(&link_and_rung(spec, i), &left_rung).scale_real(electric_prefactor(spec)))
}

/// Total Hamiltonian `H_E + H_B(u)`.
pub fn hamiltonian(spec: &ChainSpec, field: &TadpoleField) -> Result<PauliSum> {
    electric_hamiltonian(spec).add(&magnetic_hamiltonian(spec, field)?)
}

/// Chain Hamiltonian in the alternating-sign convention.
pub fn alt_hamiltonian(spec: &ChainSpec, field: &TadpoleField) -> Result<PauliSum> {
    check_field(field, spec.length, TadpoleKind::Chain)?;
    let plaquettes = (0..spec.length)
        .map(|i| alt_plaquette_op(spec, i))
        .collect::<Result<Vec<_>>>()?;
    electric_hamiltonian(spec).add(&magnetic_from(&plaquettes, magnetic_prefactor(spec), field)?)
}

/// `u^4 = 1 + <box + box^dagger> / (2 N_c)` for plaquette `i`.
pub fn chain_tadpole_factor(psi: &StateVector, spec: &ChainSpec, i: usize) -> Result<f64> {
    let op = plaquette_op(spec, i)?;
    let plaq = crate::pauli::expectation_real(&op, psi)?;
    crate::tadpole::factor_from_expectation(2.0 * plaq, N_COLORS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{apply, expectation_real, to_dense};

    fn spec(l: usize) -> ChainSpec {
        ChainSpec::new(l, 0.5).unwrap()
    }

    fn psi1(l: usize) -> StateVector {
        StateVector::basis(l, 1).unwrap()
    }

    #[test]
    fn rejects_short_chains_and_bad_coupling() {
        assert!(ChainSpec::new(2, 0.5).is_err());
        assert!(ChainSpec::new(3, 0.0).is_err());
        assert!(ChainSpec::new(3, f64::NAN).is_err());
        assert!(plaquette_op(&spec(3), 3).is_err());
    }

    #[test]
    fn plaquette_action_on_basis_states() {
        let s = spec(3);
        let p = plaquette_op(&s, 1).unwrap();
        let out = apply(&p, &StateVector::basis(3, 0b000).unwrap()).unwrap();
        assert_eq!(out, StateVector::basis(3, 0b010).unwrap());
        let out = apply(&p, &StateVector::basis(3, 0b101).unwrap()).unwrap();
        let mut expected = StateVector::basis(3, 0b111).unwrap();
        expected.amplitudes_mut()[0b111] = C64::new(0.25, 0.0);
        assert_eq!(out, expected);
    }

    #[test]
    fn plaquettes_are_hermitian() {
        let s = spec(4);
        for i in 0..4 {
            let p = plaquette_op(&s, i).unwrap();
            assert!(p.is_hermitian(0.0));
            let d = to_dense(&p).unwrap();
            assert_eq!(d, d.adjoint());
        }
    }

    #[test]
    fn magnetic_energy_of_trivial_vacuum() {
        let s = ChainSpec::new(10, 0.5).unwrap();
        let h = magnetic_hamiltonian(&s, &TadpoleField::ones(TadpoleKind::Chain, 10)).unwrap();
        let e = expectation_real(&h, &StateVector::basis(10, 0).unwrap()).unwrap();
        assert!((e - 80.0).abs() < 1e-12);
    }

    #[test]
    fn doubling_field_halves_plaquette_terms() {
        let s = spec(4);
        let h1 = magnetic_hamiltonian(&s, &TadpoleField::ones(TadpoleKind::Chain, 4)).unwrap();
        let two = TadpoleField::new(TadpoleKind::Chain, vec![2.0; 4]).unwrap();
        let h2 = magnetic_hamiltonian(&s, &two).unwrap();
        for (p, c) in h1.terms() {
            let expect = if p.support() == 0 { c } else { c * 0.5 };
            assert!((h2.coefficient(p) - expect).norm() < 1e-15);
        }
    }

    #[test]
    fn magnetic_rejects_wrong_field() {
        let s = spec(4);
        assert!(magnetic_hamiltonian(&s, &TadpoleField::ones(TadpoleKind::Chain, 3)).is_err());
        assert!(magnetic_hamiltonian(&s, &TadpoleField::ones(TadpoleKind::Honeycomb, 4)).is_err());
    }

    #[test]
    fn electric_energy_closed_forms() {
        let s = ChainSpec::new(10, 0.5).unwrap();
        let h = electric_hamiltonian(&s);
        let vac = StateVector::basis(10, 0).unwrap();
        assert_eq!(expectation_real(&h, &vac).unwrap(), 0.0);
        let e1 = expectation_real(&h, &psi1(10)).unwrap();
        assert!((e1 - 0.375).abs() < 1e-14, "{e1}");
        let full = StateVector::basis(10, (1 << 10) - 1).unwrap();
        let expect = 3.0 * 0.25 / 8.0 * 20.0;
        assert!((expectation_real(&h, &full).unwrap() - expect).abs() < 1e-13);
    }

    #[test]
    fn plaquette_electric_energy_profile_of_psi1() {
        let s = ChainSpec::new(10, 0.5).unwrap();
        let expected = [0.375, 0.09375, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.09375];
        for (i, want) in expected.iter().enumerate() {
            let op = plaquette_electric_energy_op(&s, i).unwrap();
            let got = expectation_real(&op, &psi1(10)).unwrap();
            assert!((got - want).abs() < 1e-15, "plaquette {i}: {got}");
        }
    }

    #[test]
    fn basis_states_have_unit_tadpole_factor() {
        let s = spec(5);
        for b in [0usize, 1, 0b10110, 31] {
            let psi = StateVector::basis(5, b).unwrap();
            for i in 0..5 {
                assert_eq!(chain_tadpole_factor(&psi, &s, i).unwrap(), 1.0);
            }
        }
    }

    #[test]
    fn alternating_convention_needs_even_length() {
        assert!(alt_plaquette_op(&spec(5), 0).is_err());
        assert!(basis_change_unitary(&spec(5)).is_err());
        assert!(alt_plaquette_op(&spec(4), 0).is_ok());
    }

    #[test]
    fn alt_and_standard_share_diagonals() {
        let s = spec(4);
        let f = TadpoleField::ones(TadpoleKind::Chain, 4);
        let a = to_dense(&hamiltonian(&s, &f).unwrap()).unwrap();
        let b = to_dense(&alt_hamiltonian(&s, &f).unwrap()).unwrap();
        for k in 0..16 {
            assert_eq!(a[(k, k)], b[(k, k)]);
        }
    }
}
