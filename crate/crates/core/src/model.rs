//! Model-agnostic view over the chain and honeycomb lattices, plus a
//! compiled operator bundle used by the solvers.

use num_complex::Complex64 as C64;

use crate::chain::{self, ChainSpec};
use crate::error::{Error, Result};
use crate::honeycomb::{self, HoneycombSpec};
use crate::pauli::{CompiledOperator, PauliSum, StateVector};
use crate::tadpole::{self, TadpoleField, TadpoleKind};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Model {
    Chain(ChainSpec),
    Honeycomb(HoneycombSpec),
}

impl From<ChainSpec> for Model {
    fn from(s: ChainSpec) -> Self {
        Model::Chain(s)
    }
}

impl From<HoneycombSpec> for Model {
    fn from(s: HoneycombSpec) -> Self {
        Model::Honeycomb(s)
    }
}

impl Model {
    pub fn n_qubits(&self) -> usize {
        self.n_plaquettes()
    }

    pub fn n_plaquettes(&self) -> usize {
        match self {
            Model::Chain(s) => s.length(),
            Model::Honeycomb(s) => s.n_cells(),
        }
    }

    pub fn coupling(&self) -> f64 {
        match self {
            Model::Chain(s) => s.coupling(),
            Model::Honeycomb(s) => s.coupling(),
        }
    }

    pub fn tadpole_kind(&self) -> TadpoleKind {
        match self {
            Model::Chain(_) => TadpoleKind::Chain,
            Model::Honeycomb(_) => TadpoleKind::Honeycomb,
        }
    }

    pub fn unit_field(&self) -> TadpoleField {
        TadpoleField::ones(self.tadpole_kind(), self.n_plaquettes())
    }

    pub fn magnetic_prefactor(&self) -> f64 {
        match self {
            Model::Chain(s) => chain::magnetic_prefactor(s),
            Model::Honeycomb(s) => honeycomb::magnetic_prefactor(s),
        }
    }

    /// Plaquette operator by linear index (qubit index).
    pub fn plaquette_op(&self, p: usize) -> Result<PauliSum> {
        match self {
            Model::Chain(s) => chain::plaquette_op(s, p),
            Model::Honeycomb(s) => {
                self.check(p)?;
                let (i, j) = s.cell(p);
                honeycomb::hex_plaquette_op(s, i, j)
            }
        }
    }

    pub fn electric_energy_op(&self, p: usize) -> Result<PauliSum> {
        match self {
            Model::Chain(s) => chain::plaquette_electric_energy_op(s, p),
            Model::Honeycomb(s) => {
                self.check(p)?;
                let (i, j) = s.cell(p);
                honeycomb::hex_electric_energy_op(s, i, j)
            }
        }
    }

    pub fn electric_hamiltonian(&self) -> PauliSum {
        match self {
            Model::Chain(s) => chain::electric_hamiltonian(s),
            Model::Honeycomb(s) => honeycomb::hex_electric_hamiltonian(s),
        }
    }

    pub fn magnetic_hamiltonian(&self, field: &TadpoleField) -> Result<PauliSum> {
        match self {
            Model::Chain(s) => chain::magnetic_hamiltonian(s, field),
            Model::Honeycomb(s) => honeycomb::hex_magnetic_hamiltonian(s, field),
        }
    }

    pub fn hamiltonian(&self, field: &TadpoleField) -> Result<PauliSum> {
        self.electric_hamiltonian()
            .add(&self.magnetic_hamiltonian(field)?)
    }

    /// Human-readable plaquette label: `3` for chains, `(3,1)` for honeycombs.
    pub fn label(&self, p: usize) -> String {
        match self {
            Model::Chain(_) => p.to_string(),
            Model::Honeycomb(s) => {
                let (i, j) = s.cell(p);
                format!("({i},{j})")
            }
        }
    }

    fn check(&self, p: usize) -> Result<()> {
        if p >= self.n_plaquettes() {
            return Err(Error::Index {
                index: p,
                limit: self.n_plaquettes(),
            });
        }
        Ok(())
    }
}

/// Compiled diagonal part, plaquettes and energy observables of a model.
///
/// `H(u) = D + sum_p (-2 kappa / u_p) box_p` where `D` holds the electric
/// Hamiltonian and the `4 kappa` offsets.
#[derive(Clone, Debug)]
pub struct ModelOperators {
    model: Model,
    diagonal: CompiledOperator,
    plaquettes: Vec<CompiledOperator>,
    energies: Vec<CompiledOperator>,
}

impl ModelOperators {
    pub fn new(model: Model) -> Result<Self> {
        let n = model.n_qubits();
        let kappa = model.magnetic_prefactor();
        let mut diag = model.electric_hamiltonian();
        diag.push(
            C64::new(4.0 * kappa * model.n_plaquettes() as f64, 0.0),
            crate::pauli::PauliString::IDENTITY,
        )?;
        let diagonal = CompiledOperator::new(&diag)?;
        let plaquettes = (0..n)
            .map(|p| CompiledOperator::new(&model.plaquette_op(p)?))
            .collect::<Result<Vec<_>>>()?;
        let energies = (0..n)
            .map(|p| CompiledOperator::new(&model.electric_energy_op(p)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            model,
            diagonal,
            plaquettes,
            energies,
        })
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn plaquette(&self, p: usize) -> &CompiledOperator {
        &self.plaquettes[p]
    }

    pub fn hamiltonian(&self, field: &TadpoleField) -> Result<CompiledOperator> {
        if field.kind() != self.model.tadpole_kind() || field.len() != self.plaquettes.len() {
            return Err(Error::Invalid(format!(
                "tadpole field ({:?}, {} entries) does not match the model",
                field.kind(),
                field.len()
            )));
        }
        let kappa = self.model.magnetic_prefactor();
        let parts = std::iter::once((C64::new(1.0, 0.0), &self.diagonal)).chain(
            self.plaquettes
                .iter()
                .zip(field.values())
                .map(move |(op, u)| (C64::new(-2.0 * kappa / u, 0.0), op)),
        );
        CompiledOperator::combine(self.model.n_qubits(), parts)
    }

    /// `<box_p>` for every plaquette.
    pub fn plaquette_expectations(&self, psi: &StateVector) -> Result<Vec<f64>> {
        self.plaquettes.iter().map(|op| real_part(op, psi)).collect()
    }

    /// Measured tadpole field `u^k_p = 1 + <box_p + box_p^dagger> / 4`.
    pub fn tadpole_field(&self, psi: &StateVector) -> Result<TadpoleField> {
        let values = self
            .plaquette_expectations(psi)?
            .into_iter()
            .map(|b| tadpole::factor_from_expectation(2.0 * b, chain::N_COLORS))
            .collect::<Result<Vec<_>>>()?;
        TadpoleField::new(self.model.tadpole_kind(), values)
    }

    pub fn energy_profile(&self, psi: &StateVector) -> Result<Vec<f64>> {
        self.energies.iter().map(|op| real_part(op, psi)).collect()
    }
}

fn real_part(op: &CompiledOperator, psi: &StateVector) -> Result<f64> {
    let v = op.expectation(psi)?;
    if v.im.abs() > 1e-10 * v.re.abs().max(1.0) {
        return Err(Error::Consistency(format!(
            "imaginary part {:.3e} in a Hermitian expectation",
            v.im
        )));
    }
    Ok(v.re)
}
